"""How the per-level x schedule affects collection sizes in k-Path.

Run: python demos/kpath_schedule.py
"""
import random
from fractions import Fraction

from repfam import oracle
from repfam.errors import RepfamError
from repfam.generators import random_graph
from repfam.kpath import k_path, x_schedule

k = 6
print("schedule for k=6:", [str(x_schedule(i, k)) for i in range(3, k + 2)])

g = random_graph(random.Random(11), 14, 0.3, 9)
ref = oracle.brute_kpath(g, k)
print("dfs enumeration:", ref)
for label, x in (("schedule", None), ("x = 1/2", Fraction(1, 2)), ("x = 1/4", Fraction(1, 4))):
    stats = {}
    res = k_path(g, k, x_override=x, stats=stats)
    print(f"{label:9s} -> {res}  family sizes per level {stats['family_sizes']}")

# extreme x makes the collections explode; the builder refuses rather than exhausting memory
try:
    k_path(g, k, x_override=Fraction(1, 8))
except RepfamError as exc:
    print("x = 1/8   ->", type(exc).__name__, exc)

"""Shrink a family of edge pairs in K5 to a small representative subfamily.

Run: python demos/repset_walkthrough.py
"""
import random
from itertools import combinations
from math import comb

from repfam import oracle
from repfam.matroid import GraphSpec, graphic_matroid
from repfam.repset import WeightedFamily, compute_repset_linear
from repfam.sepcol import compute_repset_uniform

rng = random.Random(7)
k5 = GraphSpec(5, [(u, v, 1) for u, v in combinations(range(5), 2)])
m = graphic_matroid(k5)
edges = [(u, v) for u, v, _ in k5.edges]

# every acyclic pair of edges, with a random weight
fam = WeightedFamily(10)
for a, b in combinations(range(10), 2):
    fam.append((1 << a) | (1 << b), rng.randint(1, 20))
print(f"{len(fam)} two-edge forests in K5")

q = 2
kept = compute_repset_linear(m, fam, q).family(fam)
print(f"graphic matroid, q={q}: kept {len(kept)} (bound C(4,2) = {comb(4, 2)})")
for s, w in kept:
    print("   ", [edges[i] for i in range(10) if s >> i & 1], "weight", w)
rep = oracle.verify_representative(oracle.forest_independence(edges), fam, kept, q)
print("brute-force check:", "ok" if rep.ok else rep.first_violation)

# the same family under plain disjointness
uni = compute_repset_uniform(fam, q, seed=1)
kept_u = uni.family(fam)
print(f"uniform matroid, q={q}: kept {len(kept_u)} using a collection of {uni.meta.get('collection_size')}")
print("brute-force check:", "ok" if oracle.verify_representative("uniform", fam, kept_u, q).ok else "FAILED")

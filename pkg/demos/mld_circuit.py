"""Lightest multilinear monomial of a small circuit, with and without a matroid.

Run: python demos/mld_circuit.py
"""
from repfam import oracle
from repfam.matroid import GraphSpec, graphic_matroid
from repfam.mld import parse_circuit, solve_kwmld, solve_kwmmld

TEXT = """
var x1 weight=1
var x2 weight=1
var x3 weight=1
var x4 weight=6
add a x1 x2
add b x1 x3
add c x3 x4
mul ab a b
mul out ab c
output out
"""
c = parse_circuit(TEXT)
print("expansion:", oracle.expand_circuit(c))
for k in (2, 3):
    print(f"k={k}:", solve_kwmld(c, k), " brute force:", oracle.brute_mld(c, k))

# variables as edges of a graph: x1=12, x2=23, x3=13, x4=34; x1 x2 x3 is a triangle
g = GraphSpec(4, [(0, 1, 1), (1, 2, 1), (0, 2, 1), (2, 3, 1)])
print("k=3, witness must be a forest:", solve_kwmmld(c, graphic_matroid(g), 3))

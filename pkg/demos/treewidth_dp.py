"""Steiner Tree and Feedback Vertex Set on a random partial 3-tree.

Run: python demos/treewidth_dp.py
"""
import random

from repfam import oracle
from repfam.generators import random_partial_ktree
from repfam.matroid import GraphSpec
from repfam.twdp import DPStats, RawDecomposition, feedback_vertex_set, make_nice, steiner_tree

rng = random.Random(3)
g, bags, tree = random_partial_ktree(rng, 12, 3)
g = GraphSpec(g.n, g.edges, terminals=(0, 5, 9, 11), vertex_weights=[rng.randint(1, 9) for _ in range(12)])
ntd = make_nice(RawDecomposition(dict(enumerate(map(frozenset, bags))), tree), g)
print(f"{g.n} vertices, {len(g.edges)} edges, nice decomposition with {len(ntd.nodes)} nodes, width {ntd.width}")

for shrink in ("product", "naive"):
    st = DPStats()
    w, chosen = steiner_tree(g, ntd, shrink=shrink, stats=st)
    print(f"steiner [{shrink:7s}] weight {w:3d}  edges {[g.edges[i][:2] for i in chosen]}  "
          f"largest table {st.max_family}, size-bound violations {st.invariant_violations}")
print("brute force steiner:", oracle.brute_steiner(g)[0])

st = DPStats()
w, removed = feedback_vertex_set(g, ntd, stats=st)
print(f"fvs weight {w}, remove {removed}; brute force {oracle.brute_fvs(g)[0]}")

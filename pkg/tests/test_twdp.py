import random
from itertools import combinations

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from repfam import oracle
from repfam.errors import InvalidDecomposition, NoSolution
from repfam.generators import random_graph, random_partial_ktree
from repfam.matroid import GraphSpec
from repfam.repset import WeightedFamily
from repfam.twdp import (DPStats, RawDecomposition, check_nice, complete_graph_matroid,
                         feedback_vertex_set, format_graph, format_td, greedy_decomposition,
                         make_nice, parse_graph, parse_td, shrink_family, steiner_tree,
                         validate_decomposition)

TRIANGLE = GraphSpec(3, [(0, 1, 5), (1, 2, 1), (0, 2, 1)], terminals=(0, 1))


def instance(seed, n_max=12, tw=3, terms=4):
    rng = random.Random(seed)
    n = rng.randint(2, n_max)
    g, bags, edges = random_partial_ktree(rng, n, rng.randint(1, tw))
    t = rng.sample(range(n), rng.randint(1, min(n, terms)))
    g = GraphSpec(g.n, g.edges, t, [rng.randint(1, 6) for _ in range(n)])
    return g, RawDecomposition({i: frozenset(b) for i, b in enumerate(bags)}, edges)


def test_single_edge_nice_shape():
    g = GraphSpec(2, [(0, 1, 1)])
    ntd = make_nice(RawDecomposition({0: frozenset({0, 1})}, []), g)
    kinds, t = [], ntd.root
    while True:
        nd = ntd.nodes[t]
        kinds.append(nd.kind)
        if not nd.children:
            break
        t = nd.children[0]
    assert kinds == ["forget", "forget", "introduce", "introduce", "base"]


def test_path_width_one():
    g = GraphSpec(4, [(0, 1, 1), (1, 2, 1), (2, 3, 1)])
    td = RawDecomposition({0: frozenset({0, 1}), 1: frozenset({1, 2}), 2: frozenset({2, 3})},
                          [(0, 1), (1, 2)])
    assert make_nice(td, g).width == 1


def test_greedy_decomposition_random_graph():
    g = random_graph(random.Random(10), 10, 0.35)
    td = greedy_decomposition(g)
    validate_decomposition(td, g)
    ntd = make_nice(td, g)
    check_nice(ntd, g)
    assert ntd.width == td.width


@pytest.mark.parametrize("bags, edges, needle", [
    ({0: {0, 1}}, [], "vertex coverage"),
    ({0: {0, 1}, 1: {2}}, [(0, 1)], "edge coverage"),
    ({0: {0, 1}, 1: {1, 2}, 2: {0, 2}}, [(0, 1), (1, 2)], "connectivity"),
    ({0: {0, 1, 2}, 1: {1, 2}, 2: {0, 2}}, [(0, 1), (1, 2), (2, 0)], "not a tree"),
])
def test_invalid_decompositions(bags, edges, needle):
    g = GraphSpec(3, [(0, 1, 1), (1, 2, 1), (0, 2, 1)])
    with pytest.raises(InvalidDecomposition, match=needle):
        make_nice(RawDecomposition({k: frozenset(v) for k, v in bags.items()}, edges), g)


def test_forest_decomposition_is_linked():
    g = GraphSpec(4, [(0, 1, 1), (2, 3, 1)])
    td = RawDecomposition({0: frozenset({0, 1}), 1: frozenset({2, 3})}, [])
    check_nice(make_nice(td, g), g)


def test_steiner_single_terminal():
    assert steiner_tree(GraphSpec(3, [(0, 1, 4)], (2,))) == (0, [])


def test_steiner_triangle():
    w, edges = steiner_tree(TRIANGLE)
    assert w == 2 and sorted(edges) == [1, 2]
    assert oracle.brute_steiner(TRIANGLE)[0] == 2


def test_steiner_disconnected_terminals():
    with pytest.raises(NoSolution):
        steiner_tree(GraphSpec(4, [(0, 1, 1), (2, 3, 1)], (0, 3)))


def test_steiner_tree_input():
    g = GraphSpec(5, [(0, 1, 2), (1, 2, 3), (1, 3, 4), (3, 4, 1)], (0, 2, 4))
    assert steiner_tree(g)[0] == 2 + 3 + 4 + 1


def test_fvs_forest_and_triangle():
    forest = GraphSpec(5, [(0, 1, 1), (1, 2, 1), (3, 4, 1)])
    assert feedback_vertex_set(forest) == (0, [])
    w, vs = feedback_vertex_set(GraphSpec(3, [(0, 1, 1), (1, 2, 1), (0, 2, 1)]))
    assert w == 1 and len(vs) == 1


def test_fvs_self_loop_and_parallel_edges():
    g = GraphSpec(3, [(0, 0, 1), (1, 2, 1), (1, 2, 1)], vertex_weights=(5, 2, 3))
    assert feedback_vertex_set(g) == (7, [0, 1])


def test_shrink_singletons():
    z = frozenset({4})
    out = shrink_family(z, {1: 5, 2: 3, 4: 9}, lambda e: 0, "min")
    assert out == {2: 3}


def test_shrink_all_forests_of_k3():
    m = complete_graph_matroid(3)
    rng = random.Random(3)
    forests = [s for s in range(8) if m.independent(s)]
    entries = {f: rng.randint(0, 9) for f in forests}
    for mode in ("min", "max"):
        kept = shrink_family(frozenset({0, 1, 2}), entries, lambda e: e, mode)
        for d in range(3):
            cls = [f for f in forests if bin(f).count("1") == d]
            orig = WeightedFamily(3, cls, [entries[f] for f in cls])
            ks = [f for f in kept if bin(f).count("1") == d]
            cand = WeightedFamily(3, ks, [entries[f] for f in ks])
            assert oracle.verify_representative(m, orig, cand, 2 - d, mode).ok


def test_shrink_minimal_family_unchanged():
    z = frozenset({0, 1, 2})
    entries = {0: 4, 0b001: 1, 0b010: 2}  # each single edge is the only fit for the other
    assert shrink_family(z, entries, lambda e: e, "min") == entries


def test_graph_and_td_round_trip():
    g, td = instance(7)
    g2 = parse_graph(format_graph(g))
    assert g2 == g
    td2 = parse_td(format_td(td, g.n))
    assert sorted(map(sorted, td2.bags.values())) == sorted(map(sorted, td.bags.values()))
    validate_decomposition(td2, g)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 100_000))
def test_steiner_matches_brute_force(seed):
    g, td = instance(seed)
    ntd = make_nice(td, g)
    stats = DPStats()
    w, edges = steiner_tree(g, ntd, stats=stats)
    assert w == oracle.brute_steiner(g)[0]
    assert stats.invariant_violations == 0
    h = nx.MultiGraph()
    h.add_nodes_from(g.terminals)
    h.add_edges_from(g.edges[i][:2] for i in edges)
    assert nx.is_connected(h) and nx.is_tree(h) if edges else len(g.terminals) == 1
    assert sum(g.edges[i][2] for i in edges) == w


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 100_000))
def test_fvs_matches_brute_force(seed):
    g, td = instance(seed)
    stats = DPStats()
    w, removed = feedback_vertex_set(g, make_nice(td, g), stats=stats)
    assert w == oracle.brute_fvs(g)[0]
    assert stats.invariant_violations == 0
    keep = set(range(g.n)) - set(removed)
    assert oracle.is_forest(g.n, [(u, v) for u, v, _ in g.edges if u in keep and v in keep])


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 100_000))
def test_naive_and_product_shrinking_agree(seed):
    g, td = instance(seed, n_max=10)
    ntd = make_nice(td, g)
    assert steiner_tree(g, ntd, "naive")[0] == steiner_tree(g, ntd, "product")[0]
    assert feedback_vertex_set(g, ntd, "naive")[0] == feedback_vertex_set(g, ntd, "product")[0]

"""Random instance generators used by the tests and the demo scripts."""
from __future__ import annotations

import random

from .matroid import GraphSpec
from .mld import Circuit, Gate


def random_circuit(rng: random.Random, n_vars: int, n_gates: int, max_weight: int = 9,
                   const_prob: float = 0.1) -> Circuit:
    """Random DAG over ``n_vars`` variables with ``n_gates`` binary add/mul gates."""
    gates: dict[str, Gate] = {}
    variables = tuple(f"x{i + 1}" for i in range(n_vars))
    for v in variables:
        gates[v] = Gate("var")
    names = list(variables)
    if rng.random() < const_prob * 3:
        gates["c0"] = Gate("const", (), rng.randint(1, 3))
        names.append("c0")
    for i in range(n_gates):
        kind = "mul" if rng.random() < 0.5 else "add"
        recent = names[-6:]
        a = rng.choice(recent if rng.random() < 0.6 else names)
        b = rng.choice(names)
        name = f"g{i + 1}"
        gates[name] = Gate(kind, (a, b))
        names.append(name)
    weights = tuple(rng.randint(0, max_weight) for _ in variables)
    return Circuit(gates, variables, weights, names[-1])


def random_partial_ktree(rng: random.Random, n: int, k: int, keep: float = 0.6,
                         max_weight: int = 20) -> tuple[GraphSpec, list[set[int]], list[tuple[int, int]]]:
    """Connected graph of treewidth <= k with a matching tree decomposition.

    Builds a k-tree (each new vertex attached to an existing k-clique), keeps
    a spanning tree of it plus a random share of the other edges.  Returns
    (graph, bags, decomposition edges) with 0-based bag ids.
    """
    k = max(1, min(k, n - 1)) if n > 1 else 0
    first = list(range(min(n, k + 1)))
    bags: list[set[int]] = [set(first)]
    tree_edges: list[tuple[int, int]] = []
    cliques: list[tuple[tuple[int, ...], int]] = []  # (k-clique, bag containing it)
    all_edges = [(u, v) for i, u in enumerate(first) for v in first[i + 1:]]
    if len(first) > k:
        for drop in first:
            cliques.append((tuple(x for x in first if x != drop), 0))
    parent = {v: first[0] for v in first[1:]}
    for v in range(len(first), n):
        clique, bag = rng.choice(cliques)
        bags.append(set(clique) | {v})
        tree_edges.append((bag, len(bags) - 1))
        for u in clique:
            all_edges.append((u, v))
        parent[v] = rng.choice(clique)
        for drop in clique:
            cliques.append((tuple(sorted((set(clique) - {drop}) | {v})), len(bags) - 1))
    spanning = {tuple(sorted((v, p))) for v, p in parent.items()}
    edges = []
    for u, v in all_edges:
        e = tuple(sorted((u, v)))
        if e in spanning or rng.random() < keep:
            edges.append((e[0], e[1], rng.randint(0, max_weight)))
    return GraphSpec(n, edges), bags, tree_edges


def random_graph(rng: random.Random, n: int, p: float, max_vertex_weight: int = 1) -> GraphSpec:
    edges = [(u, v, 1) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    weights = [rng.randint(1, max_vertex_weight) for _ in range(n)]
    return GraphSpec(n, edges, vertex_weights=weights)

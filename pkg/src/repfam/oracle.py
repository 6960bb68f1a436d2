"""Brute-force reference checks.

Nothing here imports the algorithmic modules; every answer comes from direct
enumeration of a definition.  Inputs are duck-typed (matroid matrices,
graph edge lists, circuit gate tables) for the same reason.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from itertools import combinations
from typing import Any, Callable

from .errors import BudgetExceeded

DEFAULT_BUDGET = 20_000_000


def budget(default: int = DEFAULT_BUDGET) -> int:
    env = os.environ.get("REPFAM_BUDGET")
    return int(env) if env else default


@dataclass
class OracleReport:
    checked_count: int
    first_violation: tuple | None = None

    @property
    def ok(self) -> bool:
        return self.first_violation is None


def _bits(mask: int) -> list[int]:
    return [i for i in range(mask.bit_length()) if mask >> i & 1]


def _rank_mod(vectors: list[list[int]], p: int) -> int:
    rows = [list(v) for v in vectors]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = None
        for i in range(rank, len(rows)):
            if rows[i][c] % p:
                piv = i
                break
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][c], p - 2, p)
        for i in range(len(rows)):
            if i != rank and rows[i][c] % p:
                f = rows[i][c] * inv
                rows[i] = [(a - f * b) % p for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def matrix_independence(matroid) -> Callable[[int], bool]:
    """Independence test read straight off a matroid's matrix columns."""
    mat = matroid.matrix
    p = mat.modulus
    col = {lab: [mat.entries[r * mat.cols + j] for r in range(mat.rows)]
           for j, lab in enumerate(matroid.ground)}

    def independent(mask: int) -> bool:
        labels = _bits(mask)
        if any(lab not in col for lab in labels):
            return False
        return _rank_mod([col[lab] for lab in labels], p) == len(labels)

    return independent


def forest_independence(edges) -> Callable[[int], bool]:
    """Edge set (bitmask over ``edges`` indices) is acyclic."""
    def independent(mask: int) -> bool:
        parent: dict[int, int] = {}

        def find(a):
            while parent.get(a, a) != a:
                a = parent[a]
            return a

        for e in _bits(mask):
            u, v = edges[e][0], edges[e][1]
            ru, rv = find(u), find(v)
            if ru == rv:
                return False
            parent[ru] = rv
        return True

    return independent


def verify_representative(matroid: Any, original, candidate, q: int, mode: str = "min",
                          ground: list[int] | None = None, max_work: int | None = None) -> OracleReport:
    """Check the representative-family definition for every Y with |Y| <= q.

    ``matroid`` is None or "uniform" (disjointness only), an int r (any set of
    size <= r independent), a callable on bitmasks, or an object with
    ``matrix`` and ``ground``.
    """
    if matroid is None or matroid == "uniform":
        indep = lambda s: True
    elif isinstance(matroid, int):
        indep = lambda s, r=matroid: bin(s).count("1") <= r
    elif callable(matroid):
        indep = matroid
    else:
        indep = matrix_independence(matroid)
        if ground is None:
            ground = list(matroid.ground)
    if ground is None:
        ground = list(range(original.n))
    memo: dict[int, bool] = {}

    def ok(x: int, y: int) -> bool:
        if x & y:
            return False
        u = x | y
        if u not in memo:
            memo[u] = indep(u)
        return memo[u]

    ys = [sum(1 << e for e in c) for r in range(q + 1) for c in combinations(ground, r)]
    limit = budget() if max_work is None else max_work
    if len(ys) * (len(original.sets) + len(candidate.sets)) > limit:
        raise BudgetExceeded("representativity check exceeds the enumeration budget")
    sign = 1 if mode == "min" else -1
    orig = sorted(zip(original.sets, original.weights), key=lambda t: sign * t[1])
    cand = sorted(zip(candidate.sets, candidate.weights), key=lambda t: sign * t[1])
    checked = 0
    for y in ys:
        best_c = next((w for x, w in cand if ok(x, y)), None)
        for x, w in orig:
            if best_c is not None and sign * w >= sign * best_c:
                break
            checked += 1
            if ok(x, y):
                why = "no candidate fits" if best_c is None else f"best candidate weight {best_c}"
                return OracleReport(checked, (_bits(y), _bits(x), f"{why}, original weight {w}"))
    return OracleReport(checked + len(ys))


def verify_separating(c, max_work: int | None = None) -> OracleReport:
    """Conditions 1-3 of a separating collection plus anti-monotonicity of chi.

    Anti-monotonicity (chi(A) inside chi(A - a)) gives chi(A1 u ... u Ar)
    inside chi(A1) n ... n chi(Ar), which lifts the r = 1 case of condition 3
    to every partition of A.
    """
    n, p, q = c.n, c.p, c.q
    qe = max(0, min(q, n - p))
    sets = list(c.sets)
    small_a = [sum(1 << e for e in s) for r in range(min(p, n) + 1) for s in combinations(range(n), r)]
    small_b = [sum(1 << e for e in s) for r in range(min(q, n) + 1) for s in combinations(range(n), r)]
    work = (len(small_a) + len(small_b)) * max(len(sets), 1)
    if work > (budget() if max_work is None else max_work):
        raise BudgetExceeded("separating-collection check exceeds the enumeration budget")
    checked = 0
    chi = {}
    for a in small_a:
        chi[a] = set(int(i) for i in c.chi(a))
        for i in chi[a]:
            checked += 1
            if sets[i] & a != a:
                return OracleReport(checked, (_bits(a), i, "chi member misses part of A"))
        for e in _bits(a):
            sub = a ^ (1 << e)
            if not chi[a] <= chi[sub]:
                return OracleReport(checked, (_bits(a), e, "chi not anti-monotone"))
    chi_p = {}
    for b in small_b:
        chi_p[b] = set(int(i) for i in c.chi_prime(b))
        for i in chi_p[b]:
            checked += 1
            if sets[i] & b:
                return OracleReport(checked, (_bits(b), i, "chi_prime member meets B"))
    if p > n:
        return OracleReport(checked)
    for a in small_a:
        if bin(a).count("1") != p:
            continue
        for b in small_b:
            if bin(b).count("1") != qe or a & b:
                continue
            checked += 1
            if not chi[a] & chi_p[b]:
                return OracleReport(checked, (_bits(a), _bits(b), "no separating member"))
    return OracleReport(checked)


def verify_hash_family(functions, n: int, k: int) -> OracleReport:
    checked = 0
    for s in combinations(range(n), k):
        checked += 1
        if not any(len({f[v] for v in s}) == k for f in functions):
            return OracleReport(checked, (list(s), None, "no injective function"))
    return OracleReport(checked)


# ---------------------------------------------------------------- graph problems

def _components(n: int, edges) -> int:
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    comps = n
    for u, v in edges:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
            comps -= 1
    return comps


def is_forest(n: int, edges) -> bool:
    return _components(n, edges) == n - len(edges)


def brute_steiner(g, max_subsets: int | None = None) -> tuple[int, list[int]] | None:
    """Cheapest T-spanning tree: best minimum spanning tree over vertex sets containing T."""
    terms = sorted(set(g.terminals))
    if len(terms) <= 1:
        return 0, []
    others = [v for v in range(g.n) if v not in terms]
    if 2 ** len(others) > (budget() if max_subsets is None else max_subsets):
        raise BudgetExceeded("too many vertex subsets")
    order = sorted(range(len(g.edges)), key=lambda e: (g.edges[e][2], e))
    best = None
    for r in range(len(others) + 1):
        for extra in combinations(others, r):
            vs = set(terms) | set(extra)
            parent = {v: v for v in vs}

            def find(a):
                while parent[a] != a:
                    a = parent[a]
                return a

            tree, w = [], 0
            for e in order:
                u, v, we = g.edges[e]
                if u in vs and v in vs:
                    ru, rv = find(u), find(v)
                    if ru != rv:
                        parent[ru] = rv
                        tree.append(e)
                        w += we
            if len(tree) == len(vs) - 1 and (best is None or w < best[0]):
                best = (w, sorted(tree))
    return best


def brute_fvs(g, max_subsets: int | None = None) -> tuple[int, list[int]]:
    """Minimum-weight vertex set whose removal leaves a forest."""
    if 2 ** g.n > (budget() if max_subsets is None else max_subsets):
        raise BudgetExceeded("too many vertex subsets")
    wt = [1 if g.vertex_weights is None else g.vertex_weights[v] for v in range(g.n)]
    best = None
    for mask in range(1 << g.n):
        removed = [v for v in range(g.n) if mask >> v & 1]
        w = sum(wt[v] for v in removed)
        if best is not None and w >= best[0]:
            continue
        keep = [(u, v) for u, v, _ in g.edges if not (mask >> u & 1 or mask >> v & 1)]
        if is_forest(g.n, keep):
            best = (w, removed)
    return best


def brute_kpath(g, k: int, max_paths: int | None = None) -> tuple[int, list[int]] | None:
    """Minimum vertex-weight simple path on exactly k vertices, by DFS."""
    wt = [1 if g.vertex_weights is None else g.vertex_weights[v] for v in range(g.n)]
    adj = [set() for _ in range(g.n)]
    for u, v, _ in g.edges:
        if u != v:
            adj[u].add(v)
            adj[v].add(u)
    limit = budget() if max_paths is None else max_paths
    best = None
    visited = 0

    def dfs(path, w):
        nonlocal best, visited
        visited += 1
        if visited > limit:
            raise BudgetExceeded("path enumeration exceeds budget")
        if len(path) == k:
            if best is None or w < best[0]:
                best = (w, list(path))
            return
        for u in sorted(adj[path[-1]]):
            if u not in path:
                path.append(u)
                dfs(path, w + wt[u])
                path.pop()

    if k >= 1:
        for v in range(g.n):
            dfs([v], wt[v])
    return best


# ---------------------------------------------------------------- circuits

def expand_circuit(c, max_degree: int | None = None, max_terms: int = 1_000_000) -> dict[tuple, int]:
    """Polynomial of the circuit output as {exponent tuple: coefficient}.

    Monomials of total degree above ``max_degree`` are dropped; with positive
    coefficients they can never come back down.
    """
    nv = len(c.variables)
    index = {name: i for i, name in enumerate(c.variables)}
    memo: dict[str, dict[tuple, int]] = {}

    def poly(name: str, stack=()):
        if name in memo:
            return memo[name]
        g = c.gates[name]
        if g.kind == "var":
            e = [0] * nv
            e[index[name]] = 1
            out = {tuple(e): 1}
        elif g.kind == "const":
            out = {(0,) * nv: g.value}
        else:
            parts = [poly(i) for i in g.inputs]
            out = parts[0]
            for nxt in parts[1:]:
                acc: dict[tuple, int] = {}
                if g.kind == "add":
                    for src in (out, nxt):
                        for mono, co in src.items():
                            acc[mono] = acc.get(mono, 0) + co
                else:
                    for m1, c1 in out.items():
                        for m2, c2 in nxt.items():
                            mono = tuple(a + b for a, b in zip(m1, m2))
                            if max_degree is not None and sum(mono) > max_degree:
                                continue
                            acc[mono] = acc.get(mono, 0) + c1 * c2
                if len(acc) > max_terms:
                    raise BudgetExceeded("polynomial expansion exceeds the term budget")
                out = acc
        memo[name] = out
        return out

    return poly(c.output)


def brute_mld(c, k: int, independent: Callable[[int], bool] | None = None
              ) -> tuple[int, list[str]] | None:
    """Lightest degree-k multilinear monomial (optionally independent as a variable set)."""
    wts = list(c.weights)
    best = None
    for mono, co in expand_circuit(c, max_degree=k).items():
        if co == 0 or sum(mono) != k or any(e > 1 for e in mono):
            continue
        mask = sum(1 << i for i, e in enumerate(mono) if e)
        if independent is not None and not independent(mask):
            continue
        w = sum(wts[i] for i, e in enumerate(mono) if e)
        names = sorted(c.variables[i] for i, e in enumerate(mono) if e)
        if best is None or (w, names) < best:
            best = (w, names)
    return best

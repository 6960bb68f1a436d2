"""k-Path by dynamic programming over path lengths.

A source s joined to every vertex turns "simple path on k vertices" into
"path from s on k + 1 vertices".  Level i keeps, per end vertex v, the vertex
sets of s-v paths on exactly i vertices, shrunk to a (k + 1 - i)-representative
family with a separating collection whose parameter x_i follows a per-level
schedule.  Any x in (0, 1) gives correct answers; x only changes the
collection size.
"""
from __future__ import annotations

from fractions import Fraction

from .errors import InputError, KTooLarge
from .matroid import GraphSpec
from .repset import WeightedFamily, add_weights, better
from .sepcol import DEFAULT_DEPTH, compute_repset_uniform

MAX_K = 7
X_LOW, X_HIGH = Fraction(1, 8), Fraction(7, 8)


def raw_x(i: int, k: int) -> Fraction | None:
    """Unclamped schedule value i / (2(k+1-i) - i); None where the denominator is not positive."""
    if not 2 <= i <= k + 1:
        raise InputError(f"level i = {i} outside [2, {k + 1}]")
    den = 2 * (k + 1 - i) - i
    if den <= 0:
        return None
    return Fraction(i, den)


def x_schedule(i: int, k: int) -> Fraction:
    """Schedule value clamped to [1/8, 7/8]; undefined values map to 7/8."""
    x = raw_x(i, k)
    if x is None:
        return X_HIGH
    return min(max(x, X_LOW), X_HIGH)


def k_path(g: GraphSpec, k: int, weighted: bool = True, seed: int = 0, depth: int = DEFAULT_DEPTH,
           x_override=None, stats: dict | None = None) -> tuple[list[int], int] | None:
    """Minimum vertex-weight simple path on exactly k vertices, or None.

    With ``weighted=False`` every vertex counts 0 and any k-path is returned.
    ``x_override`` replaces the whole schedule by one constant.
    """
    if k < 1:
        raise InputError("k must be at least 1")
    if k > MAX_K:
        raise KTooLarge(f"k = {k} above the supported ceiling {MAX_K}")
    n = g.n
    if k > n:
        return None
    s = n
    wt = [g.weight_of_vertex(v) if weighted else 0 for v in range(n)]
    adj = [set() for _ in range(n)]
    for u, v, _ in g.edges:
        if u != v:
            adj[u].add(v)
            adj[v].add(u)
    # level -> v -> (sets, weights, back-pointers (u, index at previous level))
    levels: list[dict[int, WeightedFamily]] = [{}, {}]
    levels.append({v: WeightedFamily(n + 1, [(1 << s) | (1 << v)], [wt[v]], [None]) for v in range(n)})
    sizes, xs = [], []
    for i in range(3, k + 2):
        x = Fraction(x_override) if x_override is not None else x_schedule(i, k)
        xs.append(str(x))
        prev = levels[i - 1]
        cur: dict[int, WeightedFamily] = {}
        for v in range(n):
            best: dict[int, tuple[int, tuple[int, int]]] = {}
            bit = 1 << v
            for u in sorted(adj[v]):
                fam = prev.get(u)
                if fam is None:
                    continue
                for j, (a, w) in enumerate(fam):
                    if a & bit:
                        continue
                    nw = add_weights(w, wt[v])
                    old = best.get(a | bit)
                    if old is None or better(nw, old[0], "min"):
                        best[a | bit] = (nw, (u, j))
            if not best:
                continue
            sets = sorted(best)
            fam = WeightedFamily(n + 1, sets, [best[a][0] for a in sets], [best[a][1] for a in sets])
            res = compute_repset_uniform(fam, k + 1 - i, "min", x=x, seed=seed, depth=depth)
            cur[v] = res.family(fam)
        levels.append(cur)
        sizes.append(sum(len(f) for f in cur.values()))
        if not cur:
            break
    if stats is not None:
        stats.update({"family_sizes": sizes, "x_values": xs})
    final = levels[k + 1] if len(levels) > k + 1 else {}
    choice = None
    for v, fam in sorted(final.items()):
        for j, (a, w) in enumerate(fam):
            if choice is None or w < choice[0]:
                choice = (w, v, j)
    if choice is None:
        return None
    w, v, j = choice
    path = []
    level = k + 1
    while True:
        path.append(v)
        tag = levels[level][v].tags[j]
        if tag is None:
            break
        v, j = tag
        level -= 1
    return path, w

"""Representative families for products L1 . L2 = {A | B : A in L1, B in L2, disjoint}.

Uniform matroids use two separating collections: an (n, p, q) collection F
and an (n, p1, p2) collection H.  A pair (A, B) is emitted for F only when
some H contains A and avoids B, which also certifies A and B are disjoint.

Linear matroids use slices: L1 . {S} is computed inside the contraction M/S,
and the union over S in L2 is trimmed once more in M.

Returned families carry tags ``(i, j)``: the indices of the left and right
factors that produced each union.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Callable

import numpy as np

from .errors import ClassTooLarge, InputError, RankTooSmall
from .matroid import LinearMatroid, contract
from .repset import (WeightedFamily, add_weights, better, check_mode, compute_repset_linear,
                     sort_key, truncate, union_families)
from .sepcol import DEFAULT_DEPTH, build_collection, compute_repset_uniform, family_size

GRID = tuple(Fraction(i, 8) for i in range(1, 8))


@dataclass
class ProductSpec:
    left: WeightedFamily
    right: WeightedFamily
    k: int
    mode: str = "min"

    def __post_init__(self):
        check_mode(self.mode)
        if self.left.n != self.right.n:
            raise InputError("factors live on different ground sets")
        if self.q < 0:
            raise InputError(f"p1 + p2 = {self.p1 + self.p2} exceeds k = {self.k}")

    @property
    def n(self) -> int:
        return self.left.n

    @property
    def p1(self) -> int:
        return self.left.uniform_size() or 0

    @property
    def p2(self) -> int:
        return self.right.uniform_size() or 0

    @property
    def q(self) -> int:
        return self.k - self.p1 - self.p2


def _empty(n: int) -> WeightedFamily:
    return WeightedFamily(n, [], [], [])


def naive_product(left: WeightedFamily, right: WeightedFamily, mode: str = "min",
                  independent: Callable[[int], bool] | None = None) -> WeightedFamily:
    """Materialize every disjoint (and optionally independent) union."""
    best: dict[int, tuple[int, tuple[int, int]]] = {}
    for i, (a, wa) in enumerate(left):
        for j, (b, wb) in enumerate(right):
            if a & b:
                continue
            u = a | b
            if independent is not None and not independent(u):
                continue
            w = add_weights(wa, wb)
            cur = best.get(u)
            if cur is None or better(w, cur[0], mode):
                best[u] = (w, (i, j))
    sets = sorted(best)
    return WeightedFamily(left.n, sets, [best[u][0] for u in sets], [best[u][1] for u in sets])


# ---------------------------------------------------------------- uniform

def product_repset_uniform(spec: ProductSpec, x1=None, x2=None, seed: int = 0,
                           depth: int = DEFAULT_DEPTH, stats: dict | None = None) -> WeightedFamily:
    """One best cyclic pair (A, B) per member F of an (n, p, q) collection."""
    left, right, mode = spec.left, spec.right, spec.mode
    n = spec.n
    if not len(left) or not len(right):
        return _empty(n)
    p1, p2, q = spec.p1, spec.p2, spec.q
    if x1 is None or x2 is None:
        x1, x2 = choose_x(spec)
    fc = build_collection(n, p1 + p2, q, Fraction(x1), seed, depth)
    hc = build_collection(n, p1, p2, Fraction(x2), seed, depth)
    if stats is not None:
        stats.update({"x1": str(x1), "x2": str(x2), "F_size": len(fc), "H_size": len(hc)})
    if not len(fc) or not len(hc):
        return _empty(n)

    key = sort_key(mode)
    a_order = sorted(range(len(left)), key=lambda i: key((left.sets[i], left.weights[i])))
    sign = 1 if mode == "min" else -1
    # neighbourhoods in the 4-partite graph
    na: dict[int, list[int]] = {}
    for rank, i in enumerate(a_order):
        for f in fc.chi(left.sets[i]).tolist():
            na.setdefault(f, []).append(rank)
    nb: dict[int, list[int]] = {}
    for j in range(len(right)):
        for f in fc.chi(right.sets[j]).tolist():
            nb.setdefault(f, []).append(j)
    h_of_a = [hc.chi(left.sets[i]) for i in a_order]
    h_of_b = [hc.chi_prime(right.sets[j]) for j in range(len(right))]

    best: dict[int, tuple[int, tuple[int, int]]] = {}
    unset = len(a_order)
    for f, ranks in na.items():
        bs = nb.get(f)
        if not bs:
            continue
        # pass 1: best A per H (ranks are already best-first)
        owner = np.full(len(hc), unset, dtype=np.int64)
        for r in ranks:
            hs = h_of_a[r]
            cur = owner[hs]
            owner[hs] = np.minimum(cur, r)
        # pass 2: best B over marked H
        choice = None
        for j in bs:
            cand = owner[h_of_b[j]]
            if not len(cand):
                continue
            r = int(cand.min())
            if r == unset:
                continue
            i = a_order[r]
            a, b = left.sets[i], right.sets[j]
            assert not a & b, "cyclic pair must be disjoint"
            w = add_weights(left.weights[i], right.weights[j])
            item = (sign * w, a | b, (i, j), w)
            if choice is None or item[:2] < choice[:2]:
                choice = item
        if choice is not None:
            _, u, tag, w = choice
            cur = best.get(u)
            if cur is None or better(w, cur[0], mode):
                best[u] = (w, tag)
    sets = sorted(best)
    return WeightedFamily(n, sets, [best[u][0] for u in sets], [best[u][1] for u in sets])


def choose_x(spec: ProductSpec) -> tuple[Fraction, Fraction]:
    """Grid search over {i/8}^2 minimizing the expected 4-partite edge count."""
    n, p1, p2, q = spec.n, spec.p1, spec.p2, spec.q
    l1, l2 = len(spec.left), len(spec.right)
    best = None
    for x1 in GRID:
        sf = family_size(n, p1 + p2, q, x1)
        for x2 in GRID:
            sh = family_size(n, p1, p2, x2)
            per_f = (l1 * float(x1) ** p1 * sh * float(x2) ** p1
                     + l2 * float(x1) ** p2 * sh * (1 - float(x2)) ** p2)
            cost = sf + sh + sf * per_f
            if best is None or cost < best[0]:
                best = (cost, x1, x2)
    return best[1], best[2]


def trim_product_uniform(spec: ProductSpec, x1=None, x2=None, seed: int = 0,
                         depth: int = DEFAULT_DEPTH, stats: dict | None = None) -> WeightedFamily:
    """product_repset_uniform followed by one more uniform representative pass."""
    prod = product_repset_uniform(spec, x1, x2, seed, depth, stats)
    if not len(prod):
        return prod
    res = compute_repset_uniform(prod, spec.q, spec.mode, seed=seed, depth=depth)
    out = res.family(prod)
    if stats is not None:
        stats["trimmed_size"] = len(out)
        stats["size_scale"] = comb(spec.k, spec.p1 + spec.p2)
    return out


# ---------------------------------------------------------------- linear

def _at_rank(m: LinearMatroid, k: int, seed: int) -> LinearMatroid:
    if m.rank_k < k:
        raise RankTooSmall(f"matroid rank {m.rank_k} below k = {k}")
    return truncate(m, k, seed) if m.rank_k > k else m


def slice_repset(m: LinearMatroid, fam: WeightedFamily, s: int, mode: str = "min",
                 k: int | None = None, s_weight: int = 0, seed: int = 0,
                 stats: dict | None = None) -> WeightedFamily:
    """Representative of fam . {s} with q = k - p1 - |s|, computed in M/s.

    Tags are indices into ``fam``; weights are w(X) + s_weight.
    """
    check_mode(mode)
    k = m.rank_k if k is None else k
    m = _at_rank(m, k, seed)
    p2 = s.bit_count()
    ms = contract(m, s)
    idx = []
    dropped = 0
    for i, x in enumerate(fam.sets):
        if x & s or not ms.independent(x):
            dropped += 1
            continue
        idx.append(i)
    if stats is not None:
        stats["filtered"] = stats.get("filtered", 0) + dropped
    if not idx:
        return _empty(fam.n)
    sub = WeightedFamily(fam.n, [fam.sets[i] for i in idx],
                         [add_weights(fam.weights[i], s_weight) for i in idx], idx)
    p1 = sub.uniform_size()
    q = k - p1 - p2
    if q < 0:
        raise InputError("p1 + p2 exceeds k")
    res = compute_repset_linear(ms, sub, q, mode, seed)
    kept = res.family(sub)
    return WeightedFamily(fam.n, [x | s for x in kept.sets], kept.weights, kept.tags)


def product_repset_linear(m: LinearMatroid, spec: ProductSpec, seed: int = 0,
                          stats: dict | None = None) -> WeightedFamily:
    """Union of slices over every S in the right factor, then one final trim."""
    k = spec.k
    if not len(spec.left) or not len(spec.right):
        return _empty(spec.n)
    m = _at_rank(m, k, seed)
    parts = []
    for j, (s, ws) in enumerate(spec.right):
        if not m.independent(s):
            continue
        sl = slice_repset(m, spec.left, s, spec.mode, k, ws, seed, stats)
        sl.tags = [(i, j) for i in sl.tags]
        parts.append(sl)
    if not parts:
        return _empty(spec.n)
    merged = union_families(parts, spec.mode)
    if not len(merged):
        return merged
    res = compute_repset_linear(m, merged, spec.q, spec.mode, seed)
    return res.family(merged)


def _classes(fam: WeightedFamily) -> dict[int, list[int]]:
    out: dict[int, list[int]] = {}
    for i, s in enumerate(fam.sets):
        out.setdefault(s.bit_count(), []).append(i)
    return out


def product_repset_all_sizes(m: LinearMatroid, left: WeightedFamily, right: WeightedFamily, k: int,
                             mode: str = "min", c: int = 1, seed: int = 0
                             ) -> dict[tuple[int, int], WeightedFamily]:
    """Table (i, j) -> (k-i-j)-representative of left_i . right_j for i + j <= k.

    Tags index the original (mixed-size) families.
    """
    table: dict[tuple[int, int], WeightedFamily] = {}
    lc, rc = _classes(left), _classes(right)
    for fam_c in (lc, rc):
        for p, ix in fam_c.items():
            if len(ix) > comb(k + c, p):
                raise ClassTooLarge(f"class of {p}-sets has {len(ix)} > C({k + c},{p}) members")
    if not lc or not rc:
        return table
    m = _at_rank(m, k, seed)
    for i, li in sorted(lc.items()):
        for j, rj in sorted(rc.items()):
            if i + j > k:
                continue
            spec = ProductSpec(left.select(li), right.select(rj), k, mode)
            out = product_repset_linear(m, spec, seed)
            out.tags = [(li[a], rj[b]) for a, b in out.tags]
            table[(i, j)] = out
    return table

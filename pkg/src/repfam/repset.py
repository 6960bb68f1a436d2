"""Weighted q-representative families over linear matroids.

The core routine maps each p-set to the vector of its p x p minors in a
rank-(p+q) representation and keeps sets greedily, best weight first, as long
as their minor vectors stay linearly independent.  Any dropped set is a
combination of kept sets that are at least as good, and a nonzero Laplace
pairing with some extension Y forces one of those kept sets to pair nonzero
with Y as well.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Any, Iterable, Sequence

from . import ffmat
from ._rng import stream
from .errors import (GroundMismatch, InputError, RankTooSmall, SetNotIndependent,
                     TruncationFailed)
from .ffmat import BasisWorkspace, FieldMatrix
from .matroid import LinearMatroid, elements_of

WEIGHT_MAX = 2**63 - 1
TRUNCATION_FIELD = 2**61 - 1
MODES = ("min", "max")


def add_weights(*ws: int) -> int:
    """Sum of weights, refusing to leave the signed 64-bit range."""
    total = sum(ws)
    if total > WEIGHT_MAX:
        raise OverflowError("weight sum exceeds 64 bits")
    return total


def check_mode(mode: str) -> None:
    if mode not in MODES:
        raise InputError(f"mode must be 'min' or 'max', got {mode!r}")


def sort_key(mode: str):
    """Order entries best-first: by weight, then by the set's bitmask."""
    if mode == "min":
        return lambda item: (item[1], item[0])
    return lambda item: (-item[1], item[0])


def better(a: int, b: int, mode: str) -> bool:
    return a < b if mode == "min" else a > b


@dataclass
class WeightedFamily:
    """Sets (int bitmasks) over a ground of size n with non-negative weights.

    ``tags`` is an optional per-set annotation (back-pointers, provenance) that
    rides along through every filter.
    """

    n: int
    sets: list[int] = field(default_factory=list)
    weights: list[int] = field(default_factory=list)
    tags: list[Any] | None = None

    def __post_init__(self):
        if len(self.sets) != len(self.weights):
            raise InputError("one weight per set required")
        if self.tags is not None and len(self.tags) != len(self.sets):
            raise InputError("one tag per set required")
        limit = 1 << self.n
        for s, w in zip(self.sets, self.weights):
            if s < 0 or s >= limit:
                raise InputError(f"set {s:#x} not inside a ground of size {self.n}")
            if w < 0 or w > WEIGHT_MAX:
                raise InputError(f"weight {w} outside [0, 2**63)")

    @classmethod
    def from_lists(cls, n: int, sets: Iterable[Iterable[int]], weights: Sequence[int] | None = None,
                   tags: Sequence[Any] | None = None) -> "WeightedFamily":
        masks = []
        for s in sets:
            m = 0
            for e in s:
                m |= 1 << e
            masks.append(m)
        ws = list(weights) if weights is not None else [0] * len(masks)
        return cls(n, masks, ws, list(tags) if tags is not None else None)

    def __len__(self) -> int:
        return len(self.sets)

    def __iter__(self):
        return iter(zip(self.sets, self.weights))

    def tag(self, i: int):
        return None if self.tags is None else self.tags[i]

    def append(self, s: int, w: int, tag: Any = None) -> None:
        self.sets.append(s)
        self.weights.append(w)
        if self.tags is not None:
            self.tags.append(tag)
        elif tag is not None:
            self.tags = [None] * (len(self.sets) - 1) + [tag]

    def select(self, indices: Iterable[int]) -> "WeightedFamily":
        idx = list(indices)
        tags = None if self.tags is None else [self.tags[i] for i in idx]
        return WeightedFamily(self.n, [self.sets[i] for i in idx], [self.weights[i] for i in idx], tags)

    def sizes(self) -> set[int]:
        return {s.bit_count() for s in self.sets}

    def uniform_size(self) -> int | None:
        sz = self.sizes()
        if len(sz) > 1:
            raise InputError(f"family mixes set sizes {sorted(sz)}")
        return sz.pop() if sz else None

    def by_size(self) -> dict[int, "WeightedFamily"]:
        groups: dict[int, list[int]] = {}
        for i, s in enumerate(self.sets):
            groups.setdefault(s.bit_count(), []).append(i)
        return {p: self.select(ix) for p, ix in sorted(groups.items())}

    def best(self, mode: str = "min") -> tuple[int, int, Any] | None:
        if not self.sets:
            return None
        key = sort_key(mode)
        i = min(range(len(self.sets)), key=lambda j: key((self.sets[j], self.weights[j])))
        return self.sets[i], self.weights[i], self.tag(i)

    def as_dict(self) -> dict[int, int]:
        return dict(zip(self.sets, self.weights))


@dataclass
class RepresentativeResult:
    kept: list[int]
    mode: str
    q: int
    meta: dict = field(default_factory=dict)

    def family(self, fam: WeightedFamily) -> WeightedFamily:
        return fam.select(self.kept)


def union_families(parts: Sequence[WeightedFamily], mode: str = "min") -> WeightedFamily:
    """Concatenate families, collapsing duplicate sets to their best weight."""
    check_mode(mode)
    if not parts:
        return WeightedFamily(0)
    n = parts[0].n
    if any(f.n != n for f in parts):
        raise GroundMismatch("families live on different ground sets")
    best: dict[int, tuple[int, Any]] = {}
    order: list[int] = []
    has_tags = any(f.tags is not None for f in parts)
    for f in parts:
        for i, (s, w) in enumerate(f):
            cur = best.get(s)
            if cur is None:
                order.append(s)
                best[s] = (w, f.tag(i))
            elif better(w, cur[0], mode):
                best[s] = (w, f.tag(i))
    return WeightedFamily(n, order, [best[s][0] for s in order],
                          [best[s][1] for s in order] if has_tags else None)


# ---------------------------------------------------------------- truncation

def _check_truncation(orig: LinearMatroid, trunc: LinearMatroid, r: int, seed: int,
                      exhaustive_limit: int = 4000, samples: int = 400) -> bool:
    """Every r-set independent in orig must stay independent after projection.

    Dependent sets stay dependent under any linear map, and every independent
    set of size <= r extends to an independent r-set, so r-sets suffice.
    """
    ground = list(orig.ground)
    if comb(len(ground), r) <= exhaustive_limit:
        candidates = combinations(ground, r)
    else:
        rng = stream(seed, "truncate-check", r)
        candidates = (tuple(rng.choice(ground, size=r, replace=False).tolist()) for _ in range(samples))
    for combo in candidates:
        mask = 0
        for e in combo:
            mask |= 1 << e
        if orig.independent(mask) and not trunc.independent(mask):
            return False
    return True


def truncate(m: LinearMatroid, new_rank: int, seed: int = 0, retries: int = 8) -> LinearMatroid:
    """Matroid whose independent sets are those of m with at most ``new_rank`` elements.

    Multiplies the representation by a random new_rank x rank matrix.  Small
    fields make such projections unreliable, so graphic and uniform matroids
    are first rebuilt over GF(2**61 - 1).
    """
    if not 0 <= new_rank <= m.rank_k:
        raise InputError(f"cannot truncate rank {m.rank_k} to {new_rank}")
    if new_rank == m.rank_k:
        return m
    key = ("truncate", new_rank, seed)
    if key in m._cache:
        return m._cache[key]
    base = m
    if m.modulus < 2**31 and m.relift is not None:
        base = m.relift(TRUNCATION_FIELD)
    p = base.modulus
    for attempt in range(retries):
        rng = stream(seed, "truncate", new_rank, attempt)
        proj = [[int(x) % p for x in rng.integers(0, 2**62, size=base.rank_k)] for _ in range(new_rank)]
        mat = FieldMatrix.from_rows(proj, p, cols=base.rank_k).matmul(base.matrix)
        if ffmat.rank(mat) != new_rank:
            continue
        cand = LinearMatroid(base.ground, mat, new_rank)
        if _check_truncation(base, cand, new_rank, seed + attempt):
            m._cache[key] = cand
            return cand
    raise TruncationFailed(f"no valid rank-{new_rank} projection after {retries} attempts")


# ---------------------------------------------------------------- core

def compute_repset_linear(m: LinearMatroid, fam: WeightedFamily, q: int, mode: str = "min",
                          seed: int = 0) -> RepresentativeResult:
    """Indices of a min/max q-representative subfamily of a uniform p-family.

    Holds at most C(p+q, p) sets.  A matroid of rank above p+q is truncated
    first (recorded as ``meta['truncated']``).
    """
    check_mode(mode)
    if q < 0:
        raise InputError("q must be non-negative")
    if not fam.sets:
        return RepresentativeResult([], mode, q, {"truncated": False})
    p = fam.uniform_size()
    if p + q > m.rank_k:
        raise RankTooSmall(f"p + q = {p + q} exceeds rank {m.rank_k}")
    for s in fam.sets:
        if not m.independent(s):
            raise SetNotIndependent(f"set {elements_of(s)} is dependent")
    work = m
    truncated = False
    if m.rank_k > p + q:
        work = truncate(m, p + q, seed)
        truncated = True
    key = sort_key(mode)
    order = sorted(range(len(fam.sets)), key=lambda i: key((fam.sets[i], fam.weights[i])))
    space = BasisWorkspace(comb(p + q, p), work.modulus)
    kept = []
    seen: set[int] = set()
    cap = comb(p + q, p)
    for i in order:
        s = fam.sets[i]
        if s in seen:
            continue
        seen.add(s)
        cols = [work.column_of(e) for e in elements_of(s)]
        if space.insert(ffmat.wedge_of_columns(cols, work.rank_k, work.modulus)):
            kept.append(i)
            if len(kept) == cap:
                break
    return RepresentativeResult(sorted(kept), mode, q, {"truncated": truncated})


def repset_by_size(m: LinearMatroid, fam: WeightedFamily, k: int, mode: str = "min",
                   seed: int = 0) -> WeightedFamily:
    """Shrink each cardinality class p of a mixed family with q = k - p."""
    parts = []
    for p, sub in fam.by_size().items():
        if p > k:
            continue
        res = compute_repset_linear(m, sub, k - p, mode, seed)
        parts.append(res.family(sub))
    if not parts:
        return WeightedFamily(fam.n, [], [], [] if fam.tags is not None else None)
    return union_families(parts, mode)

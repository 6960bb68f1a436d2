"""Generalized separating collections and representative sets in uniform matroids.

A collection is a list of universe subsets F with two query maps: chi(A)
returns members containing A, chi_prime(B) returns members avoiding B.  For
every A of size p and disjoint B of size q some member lies in both answers.
Keeping, for each member F, the best family set inside F yields a
q-representative family under disjointness.

Constructions:

* base: random subsets with inclusion probability x, verified exhaustively
  and redrawn on failure;
* reduce_universe: lift a collection on (p+q)**2 points through a perfect
  hash family;
* split_collection: glue per-interval collections over every consecutive
  partition of the universe.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import ceil, comb, log, log2
from typing import Callable, Iterable, Sequence

import numpy as np

from ._rng import bernoulli_masks, stream
from .errors import InputError, VerificationBudgetExceeded
from .repset import RepresentativeResult, WeightedFamily, check_mode, sort_key

MAX_UNIVERSE = 64
DEFAULT_MAX_PQ = 8
DEFAULT_RETRIES = 24
MAX_SETS = 1_000_000  # per draw; beyond this the (count x n) sampling array gets too large
DEFAULT_DEPTH = 1


def as_fraction(x) -> Fraction:
    fx = Fraction(x).limit_denominator(1 << 32) if isinstance(x, float) else Fraction(x)
    if not 0 < fx < 1:
        raise InputError(f"x must lie strictly between 0 and 1, got {x}")
    return fx


def clamp_x(x: Fraction, lo=Fraction(1, 8), hi=Fraction(7, 8)) -> Fraction:
    return min(max(x, lo), hi)


def default_x(p: int, q: int) -> Fraction:
    if p + q == 0:
        return Fraction(1, 2)
    return clamp_x(Fraction(p, p + q))


def effective_q(n: int, p: int, q: int) -> int:
    """Largest avoided-set size that can actually occur next to a p-set."""
    return max(0, min(q, n - p))


def family_size(n: int, p: int, q: int, x: Fraction) -> int:
    """t = (p^2 + q^2 + 1) ln n / (x^p (1-x)^q), rounded up, at least 1."""
    denom = float(x) ** p * (1 - float(x)) ** q
    return max(1, ceil((p * p + q * q + 1) * log(max(n, 1)) / denom))


def _subset_masks(n: int, k: int) -> np.ndarray:
    if k < 0 or k > n:
        return np.zeros(0, dtype=np.uint64)
    out = np.fromiter((sum(1 << i for i in c) for c in combinations(range(n), k)),
                      dtype=np.uint64, count=comb(n, k))
    return out


@dataclass
class SeparatingCollection:
    """(F, chi, chi_prime) with subset/avoidance scan queries."""

    n: int
    p: int
    q: int
    x: Fraction
    seed: int
    sets: tuple[int, ...]
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.n > MAX_UNIVERSE:
            raise InputError(f"universe size {self.n} exceeds {MAX_UNIVERSE}")
        self._arr = np.array(self.sets, dtype=np.uint64)

    def __len__(self) -> int:
        return len(self.sets)

    def chi(self, a: int) -> np.ndarray:
        """Indices of members containing the set ``a``."""
        am = np.uint64(a)
        return np.nonzero((self._arr & am) == am)[0]

    def chi_prime(self, b: int) -> np.ndarray:
        """Indices of members disjoint from the set ``b``."""
        return np.nonzero((self._arr & np.uint64(b)) == 0)[0]

    def to_json(self) -> str:
        doc = {"n": self.n, "p": self.p, "q": self.q, "x": str(self.x), "seed": self.seed,
               "sets": [format(s, "x") for s in self.sets]}
        return json.dumps(doc)

    @classmethod
    def from_json(cls, text: str) -> "SeparatingCollection":
        doc = json.loads(text)
        try:
            return cls(int(doc["n"]), int(doc["p"]), int(doc["q"]), Fraction(doc["x"]),
                       int(doc["seed"]), tuple(int(s, 16) for s in doc["sets"]))
        except (KeyError, ValueError, TypeError) as exc:
            raise InputError(f"malformed collection document: {exc}") from None


@dataclass
class HashFamily:
    n: int
    k: int
    functions: tuple[tuple[int, ...], ...]

    @property
    def r(self) -> int:
        return max(1, self.k * self.k)

    def injective_on(self, i: int, a: int) -> int | None:
        """Image mask of ``a`` under function i, or None when i collides on a."""
        f = self.functions[i]
        img = 0
        count = 0
        while a:
            low = a & -a
            img |= 1 << f[low.bit_length() - 1]
            count += 1
            a ^= low
        return img if img.bit_count() == count else None


class LiftedCollection(SeparatingCollection):
    """Collection pulled back through a perfect hash family.

    Queries only use hash functions that are injective on the argument.
    """

    def __init__(self, inner: SeparatingCollection, hf: HashFamily, sets, lift_index, meta):
        self.inner = inner
        self.hash_family = hf
        self._lift = lift_index  # (function, inner member) -> member index
        super().__init__(hf.n, inner.p, inner.q, inner.x, inner.seed, tuple(sets), meta)

    def _query(self, a: int, inner_query) -> np.ndarray:
        hits: set[int] = set()
        for i in range(len(self.hash_family.functions)):
            img = self.hash_family.injective_on(i, a)
            if img is None:
                continue
            row = self._lift[i]
            hits.update(row[j] for j in inner_query(img).tolist())
        return np.array(sorted(hits), dtype=np.int64)

    def chi(self, a: int) -> np.ndarray:
        return self._query(a, self.inner.chi)

    def chi_prime(self, b: int) -> np.ndarray:
        return self._query(b, self.inner.chi_prime)


# ---------------------------------------------------------------- verification

def fast_verify(sets: np.ndarray, n: int, p: int, q: int, chunk: int = 256) -> tuple[bool, int]:
    """Subset-semantics check that each (A, B) pair has a separating member.

    Returns (ok, max number of members containing a p-set).
    """
    qe = effective_q(n, p, q)
    if p > n:
        return True, 0
    all_b = _subset_masks(n, qe)
    max_deg = 0
    for a in _subset_masks(n, p).tolist():
        am = np.uint64(a)
        sub = sets[(sets & am) == am]
        max_deg = max(max_deg, len(sub))
        todo = all_b[(all_b & am) == 0]
        for start in range(0, len(sub), chunk):
            if not len(todo):
                break
            block = sub[start:start + chunk]
            hit = ((block[:, None] & todo[None, :]) == 0).any(axis=0)
            todo = todo[~hit]
        if len(todo):
            return False, max_deg
    return True, max_deg


def _avoid_degree(sets: np.ndarray, n: int, q: int, limit: int = 2_000_000) -> int | None:
    qe = max(0, min(q, n))
    if comb(n, qe) * max(len(sets), 1) > limit:
        return None
    bs = _subset_masks(n, qe)
    if not len(bs) or not len(sets):
        return 0
    return int(((sets[:, None] & bs[None, :]) == 0).sum(axis=0).max())


# ---------------------------------------------------------------- constructions

def build_base_collection(n: int, p: int, q: int, x, seed: int = 0, retries: int = DEFAULT_RETRIES,
                          max_pq: int = DEFAULT_MAX_PQ) -> SeparatingCollection:
    """Random collection with inclusion probability x, verified exhaustively.

    A failed draw is replaced by a fresh one; every fourth failure also grows
    the family by another t sets.
    """
    x = as_fraction(x)
    if n > MAX_UNIVERSE or p + q > max_pq:
        raise InputError(f"(n={n}, p+q={p + q}) beyond the verification ceiling")
    if p < 0 or q < 0:
        raise InputError("p and q must be non-negative")
    full = (1 << n) - 1
    if effective_q(n, p, q) == 0:
        return SeparatingCollection(n, p, q, x, seed, (full,),
                                    {"stage": "base", "t": 1, "attempts": 0, "max_chi": 1})
    t = family_size(n, p, q, x)
    if t > MAX_SETS:
        raise VerificationBudgetExceeded(f"({n},{p},{q}) at x={x} needs {t} sets, above {MAX_SETS}")
    for attempt in range(retries):
        count = t * (1 + attempt // 4)
        if count > MAX_SETS:
            break
        arr = bernoulli_masks(stream(seed, "base", n, p, q, str(x), attempt), count, n, x)
        ok, max_chi = fast_verify(arr, n, p, q)
        if ok:
            sets = tuple(dict.fromkeys(arr.tolist()))
            meta = {"stage": "base", "t": count, "attempts": attempt + 1, "max_chi": max_chi,
                    "max_chi_prime": _avoid_degree(arr, n, q)}
            return SeparatingCollection(n, p, q, x, seed, sets, meta)
    raise VerificationBudgetExceeded(f"no valid ({n},{p},{q}) collection after {attempt + 1} draws")


def build_hash_family(n: int, k: int, seed: int = 0, max_functions: int = 400,
                      max_n: int = 20, max_k: int = 6) -> HashFamily:
    """Maps range(n) -> range(k*k) such that every k-subset is injective under one of them."""
    r = max(1, k * k)
    if n <= r:
        return HashFamily(n, k, (tuple(range(n)),))
    if n > max_n or k > max_k:
        raise InputError(f"perfect hash verification beyond ceiling (n={n}, k={k})")
    todo = np.array(list(combinations(range(n), k)), dtype=np.int64)
    rng = stream(seed, "hash", n, k)
    functions = []
    while len(todo):
        if len(functions) >= max_functions:
            raise VerificationBudgetExceeded(f"{k}-perfect family on {n} points not found")
        f = rng.integers(0, r, size=n)
        img = np.sort(f[todo], axis=1)
        injective = (np.diff(img, axis=1) != 0).all(axis=1)
        if injective.any():
            functions.append(tuple(int(v) for v in f))
            todo = todo[~injective]
    return HashFamily(n, k, tuple(functions))


def reduce_universe(inner: SeparatingCollection, hf: HashFamily) -> SeparatingCollection:
    """Lift a collection on range(k*k) to range(hf.n) through preimages."""
    if any(v >= inner.n for f in hf.functions for v in f):
        raise InputError("hash values fall outside the inner universe")
    sets: dict[int, int] = {}
    lift = []
    for f in hf.functions:
        pre = [0] * inner.n
        for u, fu in enumerate(f):
            pre[fu] |= 1 << u
        row = []
        for s in inner.sets:
            m = 0
            while s:
                low = s & -s
                m |= pre[low.bit_length() - 1]
                s ^= low
            row.append(sets.setdefault(m, len(sets)))
        lift.append(row)
    meta = {"stage": "reduce", "hash_functions": len(hf.functions), "inner": inner.meta,
            "inner_size": len(inner)}
    return LiftedCollection(inner, hf, list(sets), lift, meta)


def split_parameters(p: int, q: int, s: int | None = None) -> tuple[int, int, int]:
    """(s, t, q_tilde) for splitting; s defaults to floor(log2(p+q)^2), at least 1."""
    if s is None:
        s = int(log2(p + q) ** 2) if p + q > 1 else 1
    s = max(1, s)
    t = max(1, ceil((p + q) / s))
    return s, t, s * t - p


def _compositions(n: int, t: int):
    """Consecutive partitions of range(n) into t (possibly empty) intervals, as bounds."""
    for cuts in combinations(range(n + t - 1), t - 1):
        bounds, prev = [], 0
        for i, c in enumerate(cuts):
            pos = c - i
            bounds.append((prev, pos))
            prev = pos
        bounds.append((prev, n))
        yield bounds


def _tuples(total: int, parts: int, cap: int):
    if parts == 1:
        if total <= cap:
            yield (total,)
        return
    for first in range(min(total, cap) + 1):
        for rest in _tuples(total - first, parts - 1, cap):
            yield (first,) + rest


def split_collection(n: int, p: int, q: int, inner: Callable[[int, int], SeparatingCollection],
                     s: int | None = None) -> SeparatingCollection:
    """Glue per-interval collections over all consecutive partitions of range(n).

    ``inner(p_hat, q_hat)`` must return a collection on range(n).  Queries on
    the result use subset/avoidance scans, which contain the glued witnesses.
    """
    s, t, q_tilde = split_parameters(p, q, s)
    if t == 1:
        base = inner(p, s - p)
        meta = {"stage": "split", "s": s, "t": 1, "q_tilde": q_tilde, "inner": base.meta}
        return SeparatingCollection(n, p, q, base.x, base.seed, base.sets, meta)
    subs = {ph: inner(ph, s - ph) for ph in range(min(s, p) + 1)}
    out: dict[int, None] = {}
    for bounds in _compositions(n, t):
        interval = [((1 << hi) - 1) ^ ((1 << lo) - 1) for lo, hi in bounds]
        restricted: dict[tuple[int, int], list[int]] = {}
        for ps in _tuples(p, t, s):
            combos = [0]
            for part, ph in enumerate(ps):
                key = (part, ph)
                if key not in restricted:
                    restricted[key] = list(dict.fromkeys(f & interval[part] for f in subs[ph].sets))
                combos = [c | r for c in combos for r in restricted[key]]
            out.update(dict.fromkeys(combos))
    any_inner = subs[0]
    meta = {"stage": "split", "s": s, "t": t, "q_tilde": q_tilde,
            "inner_sizes": {ph: len(c) for ph, c in subs.items()}}
    return SeparatingCollection(n, p, q, any_inner.x, any_inner.seed, tuple(out), meta)


@lru_cache(maxsize=512)
def build_collection(n: int, p: int, q: int, x, seed: int = 0, depth: int = DEFAULT_DEPTH,
                     s: int | None = None) -> SeparatingCollection:
    """Construction pipeline; depth 0 = base, 1 = + universe reduction,
    2 = splitting over depth-1 pieces, 3 = universe reduction of depth 2.

    Stages whose preconditions make them a no-op (universe already no larger
    than (p+q)**2) are skipped and reported in ``meta['stages']``.
    """
    x = as_fraction(x)
    if not 0 <= depth <= 3:
        raise InputError("pipeline depth must be 0..3")
    full = (1 << n) - 1
    if p > n:
        return SeparatingCollection(n, p, q, x, seed, (), {"stages": ["empty"]})
    if p == 0:
        return SeparatingCollection(n, p, q, x, seed, (0,), {"stages": ["trivial"]})
    if effective_q(n, p, q) == 0:
        return SeparatingCollection(n, p, q, x, seed, (full,), {"stages": ["trivial"]})
    k = p + q
    small = k * k
    if depth == 0:
        c = build_base_collection(n, p, q, x, seed)
        c.meta["stages"] = ["base"]
        return c
    if depth == 2:
        c = split_collection(n, p, q, lambda ph, qh: build_collection(n, ph, qh, x, seed, 1), s)
        c.meta["stages"] = ["split"]
        return c
    if small >= n:
        c = build_collection(n, p, q, x, seed, depth - 1, s)
        return replace(c, meta={**c.meta, "skipped": c.meta.get("skipped", []) + ["reduce"]})
    inner = build_collection(small, p, q, x, seed, depth - 1, s)
    hf = build_hash_family(n, k, seed)
    c = reduce_universe(inner, hf)
    c.meta["stages"] = ["reduce"] + inner.meta.get("stages", [])
    return c


# ---------------------------------------------------------------- representative sets

def compute_repset_uniform(fam: WeightedFamily, q: int, mode: str = "min", x=None, seed: int = 0,
                           depth: int = DEFAULT_DEPTH, collection: SeparatingCollection | None = None
                           ) -> RepresentativeResult:
    """q-representative subfamily under disjointness (uniform matroid U_{n,p+q}).

    For each collection member F keep the best set contained in F.
    """
    check_mode(mode)
    if not fam.sets:
        return RepresentativeResult([], mode, q, {"collection_size": 0})
    p = fam.uniform_size()
    n = fam.n
    if x is None:
        x = default_x(p, effective_q(n, p, q))
    x = as_fraction(x)
    c = collection if collection is not None else build_collection(n, p, q, x, seed, depth)
    key = sort_key(mode)
    order = sorted(range(len(fam.sets)), key=lambda i: key((fam.sets[i], fam.weights[i])))
    owner = np.full(len(c), -1, dtype=np.int64)
    free = len(c)
    seen: set[int] = set()
    for i in order:
        a = fam.sets[i]
        if a in seen:
            continue
        seen.add(a)
        idx = c.chi(a)
        idx = idx[owner[idx] < 0]
        if len(idx):
            owner[idx] = i
            free -= len(idx)
            if not free:
                break
    kept = sorted(set(owner[owner >= 0].tolist()))
    return RepresentativeResult(kept, mode, q, {"collection_size": len(c), "x": str(x)})

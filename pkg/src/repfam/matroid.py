"""Linear matroids: generic, graphic and uniform representations, plus contraction.

Element sets are passed around as int bitmasks over element *labels*, which
are non-negative ints.  Contraction keeps labels, so a family built over a
matroid can be queried against any of its contractions without re-indexing.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from . import ffmat
from .errors import DependentContractionSet, InputError, ModulusTooSmall, SelfLoop
from .ffmat import FieldMatrix


def mask_of(elements: Iterable[int]) -> int:
    m = 0
    for e in elements:
        m |= 1 << e
    return m


def elements_of(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


@dataclass(frozen=True)
class GraphSpec:
    """Undirected weighted graph on vertices 0..n-1."""

    n: int
    edges: tuple[tuple[int, int, int], ...] = ()
    terminals: tuple[int, ...] = ()
    vertex_weights: tuple[int, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple((int(u), int(v), int(w)) for u, v, w in self.edges))
        object.__setattr__(self, "terminals", tuple(sorted(set(self.terminals))))
        for u, v, w in self.edges:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise InputError(f"edge ({u},{v}) out of range for n={self.n}")
            if w < 0:
                raise InputError("edge weights must be non-negative")
        for t in self.terminals:
            if not 0 <= t < self.n:
                raise InputError(f"terminal {t} out of range")
        if self.vertex_weights is not None:
            vw = tuple(int(x) for x in self.vertex_weights)
            if len(vw) != self.n or any(x < 0 for x in vw):
                raise InputError("vertex weights must be n non-negative integers")
            object.__setattr__(self, "vertex_weights", vw)

    def weight_of_vertex(self, v: int) -> int:
        return 1 if self.vertex_weights is None else self.vertex_weights[v]

    def adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v, _ in self.edges:
            if u != v:
                adj[u].append(v)
                adj[v].append(u)
        return adj


@dataclass(frozen=True)
class LinearMatroid:
    """Matroid represented by the columns of a full-row-rank matrix.

    ``relift`` optionally rebuilds the same matroid over another prime field;
    it is set by the graphic and uniform factories and lets truncation move to
    a large field where random projections are reliable.
    """

    ground: tuple[int, ...]
    matrix: FieldMatrix
    rank_k: int
    relift: Callable[[int], "LinearMatroid"] | None = field(default=None, compare=False, repr=False)
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        if self.matrix.cols != len(self.ground):
            raise InputError("one matrix column per ground element required")
        index = {lab: i for i, lab in enumerate(self.ground)}
        if len(index) != len(self.ground) or any(lab < 0 for lab in self.ground):
            raise InputError("ground labels must be distinct non-negative ints")
        cols = [tuple(self.matrix.column(j)) for j in range(self.matrix.cols)]
        object.__setattr__(self, "_index", index)
        object.__setattr__(self, "_cols", cols)
        if self.matrix.modulus == 2:
            object.__setattr__(self, "_packed", ffmat._pack(cols))

    @classmethod
    def from_matrix(cls, matrix: FieldMatrix, ground: Sequence[int] | None = None,
                    relift: Callable[[int], "LinearMatroid"] | None = None) -> "LinearMatroid":
        """Reduce ``matrix`` to a row basis and wrap it."""
        reduced = ffmat.row_basis(matrix)
        if ground is None:
            ground = range(matrix.cols)
        return cls(tuple(ground), reduced, reduced.rows, relift)

    @property
    def modulus(self) -> int:
        return self.matrix.modulus

    @property
    def ground_mask(self) -> int:
        return mask_of(self.ground)

    def column_of(self, label: int) -> tuple[int, ...]:
        return self._cols[self._index[label]]

    def columns_of(self, mask: int) -> list[int]:
        """Column indices for the labels in ``mask``; KeyError if a label is foreign."""
        return [self._index[e] for e in elements_of(mask)]

    def independent(self, mask: int) -> bool:
        try:
            idx = self.columns_of(mask)
        except KeyError:
            return False
        if len(idx) > self.rank_k:
            return False
        if self.matrix.modulus == 2:
            return ffmat.packed_rank(self._packed[i] for i in idx) == len(idx)
        return ffmat.vectors_rank([self._cols[i] for i in idx], self.matrix.modulus) == len(idx)

    def rank_of(self, mask: int) -> int:
        idx = self.columns_of(mask)
        if self.matrix.modulus == 2:
            return ffmat.packed_rank(self._packed[i] for i in idx)
        return ffmat.vectors_rank([self._cols[i] for i in idx], self.matrix.modulus)


def graphic_matroid(g: GraphSpec, field_modulus: int = 2) -> LinearMatroid:
    """Cycle matroid of g: edge i has label i; forests are the independent sets."""
    ffmat.check_modulus(field_modulus)
    rows = [[0] * len(g.edges) for _ in range(g.n)]
    for j, (u, v, _) in enumerate(g.edges):
        if u == v:
            raise SelfLoop(f"edge {j} is a self-loop at vertex {u}")
        rows[u][j] = 1
        rows[v][j] = field_modulus - 1
    mat = FieldMatrix.from_rows(rows, field_modulus, cols=len(g.edges))
    return LinearMatroid.from_matrix(mat, relift=lambda p: graphic_matroid(g, p))


def uniform_matroid(n: int, k: int, field_modulus: int | None = None) -> LinearMatroid:
    """U_{n,k} as a k x n Vandermonde matrix at the points 1..n."""
    if field_modulus is None:
        field_modulus = ffmat.next_prime(max(n, 2))
    ffmat.check_modulus(field_modulus)
    if field_modulus <= n:
        raise ModulusTooSmall(f"need a prime > {n}, got {field_modulus}")
    if not 0 <= k <= n:
        raise InputError("uniform matroid needs 0 <= k <= n")
    rows = [[pow(a, i, field_modulus) for a in range(1, n + 1)] for i in range(k)]
    mat = FieldMatrix.from_rows(rows, field_modulus, cols=n)
    return LinearMatroid(tuple(range(n)), mat, k, lambda p: uniform_matroid(n, k, p))


def contract(m: LinearMatroid, s: int) -> LinearMatroid:
    """M/S for an independent label set ``s`` (bitmask); labels are preserved."""
    try:
        pivots = m.columns_of(s)
    except KeyError as exc:
        raise InputError(f"label {exc} not in ground set") from None
    try:
        reduced = ffmat.row_reduce_with_pivots(m.matrix, pivots)
    except ffmat.SingularPivot:
        raise DependentContractionSet("contraction set is dependent") from None
    keep_cols = [j for j in range(m.matrix.cols) if j not in set(pivots)]
    keep_rows = range(len(pivots), reduced.rows)
    sub = reduced.submatrix(keep_rows, keep_cols)
    ground = tuple(m.ground[j] for j in keep_cols)
    return LinearMatroid(ground, sub, m.rank_k - len(pivots))

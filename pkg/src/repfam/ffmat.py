"""Dense linear algebra over prime fields.

Matrices are small (desk scale) and entries are Python ints, so any prime up
to 2**61 - 1 works without overflow concerns.  GF(2) gets a bit-packed path
where each row or column is a single int.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from .errors import DimensionMismatch, InputError, SingularPivot

MAX_MODULUS = 2**61 - 1


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for p in small:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    # deterministic Miller-Rabin for n < 3.3e24
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def next_prime(n: int) -> int:
    """Smallest prime strictly greater than n."""
    c = max(n + 1, 2)
    while not is_prime(c):
        c += 1
    return c


def check_modulus(modulus: int) -> None:
    if modulus > MAX_MODULUS or not is_prime(modulus):
        raise InputError(f"modulus must be a prime <= 2**61-1, got {modulus}")


@dataclass(frozen=True)
class FieldElement:
    value: int
    modulus: int

    def __post_init__(self):
        object.__setattr__(self, "value", self.value % self.modulus)

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.modulus != self.modulus:
                raise InputError("field elements from different fields")
            return other.value
        return int(other)

    def __add__(self, other):
        return FieldElement(self.value + self._coerce(other), self.modulus)

    def __sub__(self, other):
        return FieldElement(self.value - self._coerce(other), self.modulus)

    def __mul__(self, other):
        return FieldElement(self.value * self._coerce(other), self.modulus)

    def __neg__(self):
        return FieldElement(-self.value, self.modulus)

    def inverse(self) -> "FieldElement":
        if self.value == 0:
            raise ZeroDivisionError("zero has no inverse")
        return FieldElement(pow(self.value, -1, self.modulus), self.modulus)

    def __truediv__(self, other):
        return self * FieldElement(self._coerce(other), self.modulus).inverse()

    __radd__ = __add__
    __rmul__ = __mul__


@dataclass(frozen=True)
class FieldMatrix:
    """Row-major dense matrix over GF(modulus)."""

    rows: int
    cols: int
    entries: tuple
    modulus: int

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise DimensionMismatch(
                f"{len(self.entries)} entries for a {self.rows}x{self.cols} matrix")
        check_modulus(self.modulus)

    @classmethod
    def from_rows(cls, data: Sequence[Sequence[int]], modulus: int, cols: int | None = None) -> "FieldMatrix":
        data = [list(r) for r in data]
        if cols is None:
            cols = len(data[0]) if data else 0
        if any(len(r) != cols for r in data):
            raise DimensionMismatch("ragged rows")
        flat = tuple(int(v) % modulus for r in data for v in r)
        return cls(len(data), cols, flat, modulus)

    @classmethod
    def identity(cls, n: int, modulus: int) -> "FieldMatrix":
        return cls.from_rows([[int(i == j) for j in range(n)] for i in range(n)], modulus, cols=n)

    def get(self, i: int, j: int) -> int:
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> list[int]:
        return list(self.entries[i * self.cols:(i + 1) * self.cols])

    def column(self, j: int) -> list[int]:
        return [self.entries[i * self.cols + j] for i in range(self.rows)]

    def to_rows(self) -> list[list[int]]:
        return [self.row(i) for i in range(self.rows)]

    def transpose(self) -> "FieldMatrix":
        return FieldMatrix.from_rows([self.column(j) for j in range(self.cols)], self.modulus, cols=self.rows)

    def submatrix(self, rows: Iterable[int], cols: Iterable[int]) -> "FieldMatrix":
        rows, cols = list(rows), list(cols)
        return FieldMatrix.from_rows([[self.get(i, j) for j in cols] for i in rows], self.modulus, cols=len(cols))

    def matmul(self, other: "FieldMatrix") -> "FieldMatrix":
        if self.cols != other.rows or self.modulus != other.modulus:
            raise DimensionMismatch("incompatible product")
        p = self.modulus
        ocols = [other.column(j) for j in range(other.cols)]
        out = []
        for i in range(self.rows):
            r = self.row(i)
            out.append([sum(a * b for a, b in zip(r, c)) % p for c in ocols])
        return FieldMatrix.from_rows(out, p, cols=other.cols)


# ---------------------------------------------------------------- elimination

def _pack(vectors: Iterable[Sequence[int]]) -> list[int]:
    packed = []
    for v in vectors:
        word = 0
        for i, x in enumerate(v):
            if x & 1:
                word |= 1 << i
        packed.append(word)
    return packed


def packed_rank(words: Iterable[int]) -> int:
    """Rank over GF(2) of vectors given as int bitmasks."""
    basis: dict[int, int] = {}
    for w in words:
        while w:
            top = w.bit_length() - 1
            if top in basis:
                w ^= basis[top]
            else:
                basis[top] = w
                break
    return len(basis)


def vectors_rank(vectors: Sequence[Sequence[int]], modulus: int) -> int:
    """Rank of a list of equal-length vectors over GF(modulus)."""
    if modulus == 2:
        return packed_rank(_pack(vectors))
    rows = [[x % modulus for x in v] for v in vectors]
    if not rows:
        return 0
    ncols = len(rows[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][c], -1, modulus)
        pr = [x * inv % modulus for x in rows[r]]
        rows[r] = pr
        for i in range(r + 1, len(rows)):
            f = rows[i][c]
            if f:
                rows[i] = [(a - f * b) % modulus for a, b in zip(rows[i], pr)]
        r += 1
        if r == len(rows):
            break
    return r


def rank(m: FieldMatrix) -> int:
    """Row rank of m by Gaussian elimination; m is not modified."""
    return vectors_rank(m.to_rows(), m.modulus)


def determinant(rows: Sequence[Sequence[int]], modulus: int) -> int:
    """Determinant of a square matrix over GF(modulus)."""
    a = [[x % modulus for x in r] for r in rows]
    n = len(a)
    det = 1
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c]), None)
        if piv is None:
            return 0
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        det = det * a[c][c] % modulus
        inv = pow(a[c][c], -1, modulus)
        for i in range(c + 1, n):
            f = a[i][c] * inv % modulus
            if f:
                a[i] = [(x - f * y) % modulus for x, y in zip(a[i], a[c])]
    return det % modulus


def row_reduce_with_pivots(m: FieldMatrix, pivot_cols: Sequence[int]) -> FieldMatrix:
    """Row-equivalent matrix whose pivot columns form an identity block on top.

    Column ``pivot_cols[i]`` becomes the unit vector e_i.  Raises SingularPivot
    when the pivot columns are linearly dependent.
    """
    p = m.modulus
    a = m.to_rows()
    for r, c in enumerate(pivot_cols):
        piv = next((i for i in range(r, m.rows) if a[i][c]), None)
        if piv is None:
            raise SingularPivot(f"pivot column {c} is dependent on earlier pivots")
        a[r], a[piv] = a[piv], a[r]
        inv = pow(a[r][c], -1, p)
        a[r] = [x * inv % p for x in a[r]]
        for i in range(m.rows):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[r])]
    return FieldMatrix.from_rows(a, p, cols=m.cols)


def row_basis(m: FieldMatrix) -> FieldMatrix:
    """Matrix made of a basis of the row space of m (reduced echelon form)."""
    p = m.modulus
    a = m.to_rows()
    r = 0
    for c in range(m.cols):
        piv = next((i for i in range(r, len(a)) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = pow(a[r][c], -1, p)
        a[r] = [x * inv % p for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[r])]
        r += 1
        if r == len(a):
            break
    return FieldMatrix.from_rows(a[:r], p, cols=m.cols)


# ---------------------------------------------------------------- wedge vectors

def colex_subsets(n: int, p: int) -> list[tuple[int, ...]]:
    """All p-subsets of range(n) in colexicographic order."""
    return sorted(combinations(range(n), p), key=lambda s: s[::-1])


_COLEX_CACHE: dict[tuple[int, int], list[tuple[int, ...]]] = {}


def _colex(n: int, p: int) -> list[tuple[int, ...]]:
    key = (n, p)
    if key not in _COLEX_CACHE:
        _COLEX_CACHE[key] = colex_subsets(n, p)
    return _COLEX_CACHE[key]


def wedge_vector(m: FieldMatrix, col_set: Sequence[int]) -> list[int]:
    """The p x p minors of the columns ``col_set``, one per p-row-subset in colex order."""
    cols = [m.column(j) for j in col_set]
    return wedge_of_columns(cols, m.rows, m.modulus)


def wedge_of_columns(cols: Sequence[Sequence[int]], nrows: int, modulus: int) -> list[int]:
    p = len(cols)
    if p > nrows:
        raise DimensionMismatch(f"{p} columns but only {nrows} rows")
    out = []
    for rows in _colex(nrows, p):
        out.append(determinant([[c[r] for c in cols] for r in rows], modulus))
    return out


def laplace_pairing(m: FieldMatrix, s_cols: Sequence[int], y_cols: Sequence[int]) -> int:
    """det(m[:, s_cols + y_cols]) via the generalized Laplace expansion.

    Requires len(s_cols) + len(y_cols) == m.rows.  Sums over p-row-subsets R the
    signed product of the minor of S on R and the minor of Y on the complement.
    """
    n, p = m.rows, len(s_cols)
    if p + len(y_cols) != n:
        raise DimensionMismatch("column counts must add up to the row count")
    ws = wedge_vector(m, s_cols)
    wy = wedge_vector(m, y_cols)
    index_y = {rows: i for i, rows in enumerate(_colex(n, n - p))}
    base = p * (p - 1) // 2
    total = 0
    for i, rows in enumerate(_colex(n, p)):
        comp = tuple(r for r in range(n) if r not in rows)
        sign = -1 if (sum(rows) - base) % 2 else 1
        total += sign * ws[i] * wy[index_y[comp]]
    return total % m.modulus


# ---------------------------------------------------------------- greedy basis

class BasisWorkspace:
    """Incremental linear-independence filter for vectors of fixed dimension."""

    def __init__(self, dim: int, modulus: int):
        self.dim = dim
        self.modulus = modulus
        self._pivots: dict[int, list[int] | int] = {}

    def __len__(self) -> int:
        return len(self._pivots)

    def insert(self, v: Sequence[int]) -> bool:
        if len(v) != self.dim:
            raise DimensionMismatch(f"expected dimension {self.dim}, got {len(v)}")
        if self.modulus == 2:
            return self._insert_packed(_pack([v])[0])
        p = self.modulus
        w = [x % p for x in v]
        for c in range(self.dim):
            if not w[c]:
                continue
            row = self._pivots.get(c)
            if row is None:
                inv = pow(w[c], -1, p)
                self._pivots[c] = [x * inv % p for x in w]
                return True
            f = w[c]
            w = [(a - f * b) % p for a, b in zip(w, row)]
        return False

    def _insert_packed(self, w: int) -> bool:
        while w:
            low = (w & -w).bit_length() - 1
            row = self._pivots.get(low)
            if row is None:
                self._pivots[low] = w
                return True
            w ^= row
        return False


def incremental_basis_insert(state: BasisWorkspace, v: Sequence[int]) -> bool:
    """Absorb v into ``state`` iff it is independent of what was accepted so far."""
    return state.insert(v)

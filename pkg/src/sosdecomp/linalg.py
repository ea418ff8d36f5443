"""Exact dense linear algebra over ``QQ``, ``QQI`` and ``GF(p)``.

Over the rationals every routine works fraction-free: rows are scaled to
integers and eliminated with one-step (Bareiss) division, so intermediate
entries stay minors of the input.  Over the other fields ordinary
Gauss-Jordan elimination is used.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Sequence

import numpy as np

from .algebra import QQ, Field, PrimeField, RationalField

__all__ = [
    "Matrix",
    "rank_nullspace",
    "rank",
    "determinant",
    "solve",
    "cayley_orthogonal",
    "rank_mod_p",
    "pivot_columns",
    "inverse",
]


class Matrix:
    """Immutable dense matrix with entries in one exact field."""

    __slots__ = ("rows", "cols", "field", "_data")

    def __init__(self, data: Sequence[Sequence], field: Field = QQ, cols: int | None = None):
        conv = field.convert
        rows = [tuple(conv(x) for x in r) for r in data]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise ValueError("ragged matrix")
        self.rows = len(rows)
        self.cols = cols
        self.field = field
        self._data = tuple(rows)

    @classmethod
    def _raw(cls, data, field, cols):
        m = object.__new__(cls)
        m._data = tuple(tuple(r) for r in data)
        m.rows = len(m._data)
        m.cols = cols
        m.field = field
        return m

    @classmethod
    def identity(cls, n: int, field: Field = QQ) -> Matrix:
        z, o = field.zero, field.one
        return cls._raw([[o if i == j else z for j in range(n)] for i in range(n)], field, n)

    @classmethod
    def zeros(cls, rows: int, cols: int, field: Field = QQ) -> Matrix:
        return cls._raw([[field.zero] * cols for _ in range(rows)], field, cols)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def tolist(self) -> list[list]:
        return [list(r) for r in self._data]

    def row(self, i: int) -> tuple:
        return self._data[i]

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self._data)

    def __getitem__(self, ij):
        i, j = ij
        return self._data[i][j]

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.shape == other.shape
            and self.field == other.field
            and self._data == other._data
        )

    def __hash__(self):
        return hash((self.shape, self._data))

    def __repr__(self):
        body = "; ".join(", ".join(self.field.to_str(x) for x in r) for r in self._data)
        return f"Matrix[{self.rows}x{self.cols}]({body})"

    def transpose(self) -> Matrix:
        return Matrix._raw(list(zip(*self._data)) if self.rows else [], self.field, self.rows)

    T = property(transpose)

    def _same(self, other: Matrix):
        if self.field != other.field:
            raise ValueError(f"field mismatch: {self.field} vs {other.field}")

    def __add__(self, other: Matrix) -> Matrix:
        self._same(other)
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        add = self.field.add
        return Matrix._raw(
            [[add(a, b) for a, b in zip(r, s)] for r, s in zip(self._data, other._data)],
            self.field,
            self.cols,
        )

    def __neg__(self) -> Matrix:
        neg = self.field.neg
        return Matrix._raw([[neg(a) for a in r] for r in self._data], self.field, self.cols)

    def __sub__(self, other: Matrix) -> Matrix:
        return self + (-other)

    def __matmul__(self, other: Matrix) -> Matrix:
        self._same(other)
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        F = self.field
        add, mul = F.add, F.mul
        cols = other.transpose()._data if other.rows else [()] * other.cols
        out = []
        for r in self._data:
            row = []
            for c in cols:
                s = F.zero
                for a, b in zip(r, c):
                    if a and b:
                        s = add(s, mul(a, b))
                row.append(s)
            out.append(row)
        return Matrix._raw(out, F, other.cols)

    def apply(self, vec: Sequence) -> list:
        """Matrix-vector product."""
        if len(vec) != self.cols:
            raise ValueError("vector length mismatch")
        F = self.field
        out = []
        for r in self._data:
            s = F.zero
            for a, b in zip(r, vec):
                if a and b:
                    s = F.add(s, F.mul(a, b))
            out.append(s)
        return out

    def scale(self, c) -> Matrix:
        F = self.field
        c = F.convert(c)
        return Matrix._raw([[F.mul(a, c) for a in r] for r in self._data], F, self.cols)

    def is_symmetric(self) -> bool:
        return self.rows == self.cols and all(
            self._data[i][j] == self._data[j][i] for i in range(self.rows) for j in range(i)
        )

    def is_skew_symmetric(self) -> bool:
        neg = self.field.neg
        return self.rows == self.cols and all(
            self._data[i][j] == neg(self._data[j][i])
            for i in range(self.rows)
            for j in range(i + 1)
        )

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> Matrix:
        return Matrix._raw([[self._data[i][j] for j in cols] for i in rows], self.field, len(cols))

    def change_field(self, field: Field) -> Matrix:
        return Matrix(self._data, field, self.cols)

    def rank(self) -> int:
        return rank_nullspace(self)[0]

    def nullspace(self) -> list[list]:
        return rank_nullspace(self)[1]

    def det(self):
        return determinant(self)


# ---------------------------------------------------------------------------
# Elimination kernels
# ---------------------------------------------------------------------------


def _integer_rows(M: Matrix) -> list[list[int]]:
    rows = []
    for r in M._data:
        den = lcm(*(x.denominator for x in r)) if r else 1
        rows.append([int(x * den) for x in r])
    return rows


def _fraction_free_rref(a: list[list[int]], ncols: int):
    """Fraction-free Gauss-Jordan on an integer matrix (in place).

    Returns ``(pivot_cols, divisor)``: after the call every pivot row ``i``
    holds ``divisor`` in column ``pivot_cols[i]`` and every other row holds 0
    there.  Pivots are chosen with the smallest magnitude in their column.
    """
    nrows = len(a)
    prev = 1
    r = 0
    pivots: list[int] = []
    for c in range(ncols):
        if r == nrows:
            break
        best = None
        for i in range(r, nrows):
            v = a[i][c]
            if v and (best is None or abs(v) < abs(a[best][c])):
                best = i
        if best is None:
            continue
        a[r], a[best] = a[best], a[r]
        prow = a[r]
        piv = prow[c]
        for i in range(nrows):
            if i == r:
                continue
            row = a[i]
            f = row[c]
            if f:
                a[i] = [(piv * x - f * y) // prev for x, y in zip(row, prow)]
            elif piv != prev:
                a[i] = [piv * x // prev for x in row]
        pivots.append(c)
        prev = piv
        r += 1
    # rows below the rank are zero; rows above were scaled consistently
    return pivots, prev


def _field_rref(a: list[list], ncols: int, F: Field):
    """Gauss-Jordan over a general field (in place); pivots normalized to 1."""
    nrows = len(a)
    r = 0
    pivots: list[int] = []
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if not F.is_zero(a[i][c])), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = F.inv(a[r][c])
        prow = [F.mul(x, inv) for x in a[r]]
        a[r] = prow
        for i in range(nrows):
            if i != r and not F.is_zero(a[i][c]):
                f = a[i][c]
                a[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(a[i], prow)]
        pivots.append(c)
        r += 1
    return pivots


def _normalize(vec: list, F: Field) -> list:
    lead = next(x for x in vec if not F.is_zero(x))
    inv = F.inv(lead)
    return [F.mul(x, inv) for x in vec]


def rank_nullspace(M: Matrix) -> tuple[int, list[list]]:
    """Rank and a nullspace basis of ``M``.

    Each basis vector is scaled so its first nonzero entry is 1.
    """
    F = M.field
    n = M.cols
    if isinstance(F, RationalField):
        a = _integer_rows(M)
        pivots, D = _fraction_free_rref(a, n)
        basis = []
        pivset = set(pivots)
        for f in range(n):
            if f in pivset:
                continue
            v = [Fraction(0)] * n
            v[f] = Fraction(D)
            for i, pc in enumerate(pivots):
                v[pc] = Fraction(-a[i][f])
            basis.append(_normalize(v, F))
        return len(pivots), basis
    a = [list(r) for r in M._data]
    pivots = _field_rref(a, n, F)
    basis = []
    pivset = set(pivots)
    for f in range(n):
        if f in pivset:
            continue
        v = [F.zero] * n
        v[f] = F.one
        for i, pc in enumerate(pivots):
            v[pc] = F.neg(a[i][f])
        basis.append(_normalize(v, F))
    return len(pivots), basis


def pivot_columns(M: Matrix) -> list[int]:
    """Indices of a maximal set of linearly independent columns (the first ones)."""
    F = M.field
    if isinstance(F, RationalField):
        return _bareiss_echelon(_integer_rows(M), M.cols)
    a = [list(r) for r in M._data]
    return _field_rref(a, M.cols, F)


def rank(M: Matrix) -> int:
    if isinstance(M.field, PrimeField):
        return rank_mod_p([list(r) for r in M._data], M.field.p)
    if isinstance(M.field, RationalField):
        a = _integer_rows(M)
        return len(_bareiss_echelon(a, M.cols))
    return rank_nullspace(M)[0]


def _bareiss_echelon(a: list[list[int]], ncols: int) -> list[int]:
    """Fraction-free forward elimination (in place); returns pivot columns."""
    nrows = len(a)
    prev = 1
    r = 0
    pivots = []
    for c in range(ncols):
        if r == nrows:
            break
        best = None
        for i in range(r, nrows):
            v = a[i][c]
            if v and (best is None or abs(v) < abs(a[best][c])):
                best = i
        if best is None:
            continue
        a[r], a[best] = a[best], a[r]
        prow = a[r]
        piv = prow[c]
        for i in range(r + 1, nrows):
            row = a[i]
            f = row[c]
            a[i] = [(piv * x - f * y) // prev for x, y in zip(row, prow)]
        pivots.append(c)
        prev = piv
        r += 1
    return pivots


def rank_mod_p(rows: Sequence[Sequence[int]], p: int) -> int:
    """Rank of an integer matrix reduced modulo the prime ``p``."""
    if not rows or not rows[0]:
        return 0
    if p < 2**31:
        a = np.array(rows, dtype=object)
        a = np.array(a % p, dtype=np.int64)
        nrows, ncols = a.shape
        r = 0
        for c in range(ncols):
            if r == nrows:
                break
            nz = np.nonzero(a[r:, c])[0]
            if nz.size == 0:
                continue
            piv = r + int(nz[0])
            if piv != r:
                a[[r, piv]] = a[[piv, r]]
            inv = pow(int(a[r, c]), -1, p)
            a[r] = a[r] * inv % p
            below = a[r + 1:, c].copy()
            mask = below != 0
            if mask.any():
                idx = np.nonzero(mask)[0] + r + 1
                a[idx] = (a[idx] - np.outer(below[mask], a[r]) % p) % p
            r += 1
        return r
    a = [[x % p for x in row] for row in rows]
    F = PrimeField(p)
    return len(_field_rref(a, len(a[0]), F))


def determinant(M: Matrix):
    """Exact determinant (Bareiss over the rationals)."""
    if M.rows != M.cols:
        raise ValueError(f"determinant of non-square {M.shape} matrix")
    F = M.field
    n = M.rows
    if n == 0:
        return F.one
    if isinstance(F, RationalField):
        dens = [lcm(*(x.denominator for x in r)) for r in M._data]
        a = [[int(x * d) for x in r] for r, d in zip(M._data, dens)]
        sign = 1
        prev = 1
        for c in range(n):
            if a[c][c] == 0:
                swap = next((i for i in range(c + 1, n) if a[i][c]), None)
                if swap is None:
                    return Fraction(0)
                a[c], a[swap] = a[swap], a[c]
                sign = -sign
            piv = a[c][c]
            for i in range(c + 1, n):
                row = a[i]
                f = row[c]
                a[i] = [
                    0 if j <= c else (piv * row[j] - f * a[c][j]) // prev for j in range(n)
                ]
            prev = piv
        total_den = 1
        for d in dens:
            total_den *= d
        return Fraction(sign * a[n - 1][n - 1], total_den)
    a = [list(r) for r in M._data]
    det = F.one
    for c in range(n):
        p = next((i for i in range(c, n) if not F.is_zero(a[i][c])), None)
        if p is None:
            return F.zero
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = F.neg(det)
        piv = a[c][c]
        det = F.mul(det, piv)
        inv = F.inv(piv)
        for i in range(c + 1, n):
            f = a[i][c]
            if not F.is_zero(f):
                f = F.mul(f, inv)
                a[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(a[i], a[c])]
    return det


def solve(M: Matrix, rhs: Sequence) -> list:
    """One solution of ``M x = rhs``; raises ``ValueError`` when inconsistent."""
    if len(rhs) != M.rows:
        raise ValueError("right-hand side length mismatch")
    F = M.field
    aug = [list(r) + [F.convert(b)] for r, b in zip(M._data, rhs)]
    pivots = _field_rref(aug, M.cols + 1, F)
    if pivots and pivots[-1] == M.cols:
        raise ValueError("inconsistent linear system")
    x = [F.zero] * M.cols
    for i, pc in enumerate(pivots):
        x[pc] = aug[i][M.cols]
    return x


def inverse(M: Matrix) -> Matrix:
    if M.rows != M.cols:
        raise ValueError("inverse of non-square matrix")
    F = M.field
    n = M.rows
    aug = [list(r) + [F.one if i == j else F.zero for j in range(n)] for i, r in enumerate(M._data)]
    pivots = _field_rref(aug, n, F)
    if len(pivots) < n:
        raise ZeroDivisionError("matrix is singular")
    return Matrix._raw([r[n:] for r in aug], F, n)


def cayley_orthogonal(S: Matrix, flip_sign: bool = False) -> Matrix:
    """Exact orthogonal matrix ``(I - S)(I + S)^{-1}`` from a skew-symmetric ``S``.

    The result has determinant 1; with ``flip_sign`` its first row is negated
    to land in the other component of O(k).
    """
    if S.rows != S.cols:
        raise ValueError("Cayley transform needs a square matrix")
    if not S.is_skew_symmetric():
        raise ValueError("Cayley transform needs a skew-symmetric matrix")
    eye = Matrix.identity(S.rows, S.field)
    Q = (eye - S) @ inverse(eye + S)
    if flip_sign and Q.rows:
        F = S.field
        data = Q.tolist()
        data[0] = [F.neg(x) for x in data[0]]
        Q = Matrix._raw(data, F, Q.cols)
    return Q

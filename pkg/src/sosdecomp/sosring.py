"""Sum-of-squares domain model.

Conventions
-----------
* ``V`` has basis ``x0..xn``; ``U = Sym^d V`` has the monomial basis
  ``w_1..w_N`` ordered descending-lexicographically on exponent vectors, so
  ``w_1 = x0^d`` and ``w_N = xn^d``.
* A decomposition ``f = f_1^2 + ... + f_k^2`` is stored as the ``k x N``
  matrix ``A`` whose row ``i`` holds the coefficients of ``f_i``; then
  ``f = x A^t A x^t`` where ``x`` is the row vector of basis monomials.
* Unknown matrices are flattened row-major: entry ``(i, j)`` of ``A`` is
  variable ``i*N + j``.  Symmetric unknowns ``W`` use the upper triangle in
  row-major order ``(0,0), (0,1), ..., (0,N-1), (1,1), ...``.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Sequence

from .algebra import QQ, Field, MVPoly, coefficient_vector, from_coefficient_vector, parse_poly
from .linalg import Matrix, rank
from .prng import SplitMix64

INSTANCE_SCHEMA_VERSION = 1

__all__ = [
    "SymBasis",
    "SosInstance",
    "GramMatrix",
    "CSpace",
    "sym_dim",
    "sym_basis",
    "expand_gram",
    "c_space",
    "catalecticant",
    "random_instance",
    "instance_from_rows",
    "sos_variety_system",
    "gram_fiber_system",
    "cone_system",
    "veronese_substitute",
    "symmetric_index",
    "powers_instance",
    "rank_minors",
    "gram_linear_equations",
]


def sym_dim(n: int, d: int) -> int:
    """``dim Sym^d V = C(n+d, d)`` for ``dim V = n+1``."""
    if n < 0 or d < 0:
        raise ValueError("n and d must be non-negative")
    return comb(n + d, d)


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


@lru_cache(maxsize=None)
def _monomials(nvars: int, degree: int) -> tuple:
    return tuple(_compositions(degree, nvars))


@dataclass(frozen=True)
class SymBasis:
    n: int
    d: int
    monomials: tuple

    @property
    def N(self) -> int:
        return len(self.monomials)

    def __len__(self):
        return len(self.monomials)

    def __iter__(self):
        return iter(self.monomials)

    def __getitem__(self, j):
        return self.monomials[j]

    def poly(self, j: int, field: Field = QQ) -> MVPoly:
        return MVPoly.monomial(self.monomials[j], field)


def sym_basis(n: int, d: int) -> SymBasis:
    """Monomials of degree ``d`` in ``n+1`` variables, descending lex."""
    return SymBasis(n, d, _monomials(n + 1, d))


@lru_cache(maxsize=None)
def _product_table(n: int, d: int) -> dict:
    """Map each degree-2d monomial to the ordered pairs ``(a, b)`` with w_a w_b = it."""
    basis = _monomials(n + 1, d)
    table: dict[tuple, list] = {}
    for a, ma in enumerate(basis):
        for b, mb in enumerate(basis):
            m = tuple(x + y for x, y in zip(ma, mb))
            table.setdefault(m, []).append((a, b))
    return table


def symmetric_index(N: int) -> dict[tuple[int, int], int]:
    """Variable index of ``W[a][b]`` (either order) in the upper-triangle layout."""
    idx = {}
    t = 0
    for a in range(N):
        for b in range(a, N):
            idx[(a, b)] = idx[(b, a)] = t
            t += 1
    return idx


# ---------------------------------------------------------------------------
# Gram matrices and the C-space
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GramMatrix:
    W: Matrix
    basis: SymBasis

    def __post_init__(self):
        if self.W.shape != (len(self.basis), len(self.basis)):
            raise ValueError("Gram matrix size does not match the basis")
        if not self.W.is_symmetric():
            raise ValueError("Gram matrix must be symmetric")

    @property
    def poly(self) -> MVPoly:
        return expand_gram(self.W, self.basis)

    @classmethod
    def from_factor(cls, A: Matrix, basis: SymBasis) -> GramMatrix:
        return cls(A.T @ A, basis)


def expand_gram(W: Matrix, basis: SymBasis) -> MVPoly:
    """``x W x^t = sum_{a,b} W_ab w_a w_b`` as a polynomial of degree ``2d``."""
    N = len(basis)
    if W.shape != (N, N):
        raise ValueError(f"Gram matrix has shape {W.shape}, basis has {N} monomials")
    if not W.is_symmetric():
        raise ValueError("Gram matrix must be symmetric")
    F = W.field
    terms: dict = {}
    for m, pairs in _product_table(basis.n, basis.d).items():
        s = F.zero
        for a, b in pairs:
            s = F.add(s, W[a, b])
        if not F.is_zero(s):
            terms[m] = s
    return MVPoly._raw(basis.n + 1, F, terms)


def veronese_substitute(q: MVPoly, basis: SymBasis) -> MVPoly:
    """Replace ``w_j`` by its monomial in a polynomial on ``U`` (``N`` variables)."""
    if q.nvars != len(basis):
        raise ValueError("polynomial variable count must equal the basis size")
    F = q.field
    nv = basis.n + 1
    out: dict = {}
    for m, c in q._terms.items():
        e = [0] * nv
        for j, power in enumerate(m):
            if power:
                for i, x in enumerate(basis.monomials[j]):
                    e[i] += power * x
        e = tuple(e)
        s = F.add(out[e], c) if e in out else c
        if F.is_zero(s):
            out.pop(e, None)
        else:
            out[e] = s
    return MVPoly._raw(nv, F, out)


def quadric_to_matrix(q: MVPoly, field: Field = QQ) -> Matrix:
    """Symmetric matrix ``W`` with ``w W w^t = q`` for a quadratic form ``q``."""
    N = q.nvars
    data = [[field.zero] * N for _ in range(N)]
    for m, c in q._terms.items():
        idx = [j for j, e in enumerate(m) for _ in range(e)]
        if len(idx) != 2:
            raise ValueError("not a quadratic form")
        a, b = idx
        if a == b:
            data[a][a] = field.convert(c)
        else:
            half = field.div(field.convert(c), field.convert(2))
            data[a][b] = data[b][a] = half
    return Matrix(data, field)


@dataclass(frozen=True)
class CSpace:
    n: int
    d: int
    basis: tuple

    def __len__(self):
        return len(self.basis)

    def matrices(self, field: Field = QQ) -> list[Matrix]:
        return [quadric_to_matrix(q, field) for q in self.basis]


def c_space(n: int, d: int) -> CSpace:
    """Basis of the quadrics on ``U`` that vanish on the Veronese variety.

    The span of all binomials ``w_a w_b - w_c w_e`` with equal products in
    ``V`` splits by that product: the unordered pairs ``p_0, ..., p_r`` over
    one monomial of degree ``2d`` contribute the ``r`` independent binomials
    ``p_0 - p_j``, and different products share no quadratic monomial.  The
    union is therefore a basis without any elimination.
    """
    if n < 0 or d < 1:
        raise ValueError("need n >= 0 and d >= 1")
    N = sym_dim(n, d)
    out = []
    for pairs in _product_table(n, d).values():
        unordered = sorted({tuple(sorted(p)) for p in pairs})
        a, b = unordered[0]
        for c, e in unordered[1:]:
            out.append(_binomial(N, a, b, c, e))
    return CSpace(n, d, tuple(out))


def _binomial(N: int, a: int, b: int, c: int, e: int) -> MVPoly:
    m1 = [0] * N
    m1[a] += 1
    m1[b] += 1
    m2 = [0] * N
    m2[c] += 1
    m2[e] += 1
    return MVPoly(N, QQ, [(tuple(m1), 1), (tuple(m2), -1)])


# ---------------------------------------------------------------------------
# Catalecticants
# ---------------------------------------------------------------------------


def catalecticant(f: MVPoly, m: int) -> Matrix:
    """Matrix of ``d^alpha -> d^alpha f`` from order-``m`` operators to ``Sym^{deg f - m}``.

    Rows follow the descending-lex monomials of degree ``m`` (the operators
    ``d^alpha``), columns the descending-lex monomials of degree
    ``deg f - m``.  Derivatives are raw, with their falling-factorial factors.
    """
    if f.is_zero() or not f.is_homogeneous():
        raise ValueError("catalecticant needs a nonzero homogeneous polynomial")
    D = f.degree()
    if not 0 < m < D:
        raise ValueError(f"need 0 < m < {D}, got m={m}")
    nv = f.nvars
    rows_m = _monomials(nv, m)
    cols_m = _monomials(nv, D - m)
    col_index = {c: j for j, c in enumerate(cols_m)}
    F = f.field
    data = [[F.zero] * len(cols_m) for _ in rows_m]
    for i, alpha in enumerate(rows_m):
        for beta, c in f._terms.items():
            if all(b >= a for a, b in zip(alpha, beta)):
                factor = 1
                for a, b in zip(alpha, beta):
                    factor *= factorial(b) // factorial(b - a)
                rest = tuple(b - a for a, b in zip(alpha, beta))
                j = col_index[rest]
                data[i][j] = F.add(data[i][j], F.mul(c, F.convert(factor)))
    return Matrix(data, F, cols=len(cols_m))


# ---------------------------------------------------------------------------
# Instances
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SosInstance:
    """A decomposition ``f = sum f_i^2`` given by its ``k x N`` coefficient matrix."""

    n: int
    d: int
    k: int
    A: Matrix
    seed: int | None = None
    bound: int | None = None

    def __post_init__(self):
        N = sym_dim(self.n, self.d)
        if self.A.shape != (self.k, N):
            raise ValueError(f"A has shape {self.A.shape}, expected {(self.k, N)}")

    @property
    def basis(self) -> SymBasis:
        return sym_basis(self.n, self.d)

    @property
    def N(self) -> int:
        return sym_dim(self.n, self.d)

    @property
    def rows(self) -> list[MVPoly]:
        b = self.basis.monomials
        return [from_coefficient_vector(list(self.A.row(i)), b, self.A.field) for i in range(self.k)]

    @property
    def f(self) -> MVPoly:
        return expand_gram(self.A.T @ self.A, self.basis)

    @property
    def gram(self) -> GramMatrix:
        return GramMatrix.from_factor(self.A, self.basis)

    def transformed(self, O: Matrix) -> SosInstance:
        """The decomposition with coefficient matrix ``O A``."""
        return SosInstance(self.n, self.d, self.k, O @ self.A, self.seed, self.bound)

    def to_json(self) -> str:
        F = self.A.field
        doc = {
            "version": INSTANCE_SCHEMA_VERSION,
            "n": self.n,
            "d": self.d,
            "k": self.k,
            "seed": self.seed,
            "bound": self.bound,
            "field": F.name,
            "A": [[F.to_str(x) for x in row] for row in self.A.tolist()],
            "f": self.f.to_str(),
        }
        return json.dumps(doc, indent=2)

    @classmethod
    def from_json(cls, text: str) -> SosInstance:
        doc = json.loads(text)
        if doc.get("version") != INSTANCE_SCHEMA_VERSION:
            raise ValueError(f"unsupported instance schema version {doc.get('version')!r}")
        if doc.get("field", "QQ") != "QQ":
            raise ValueError("only rational instances are serialized")
        A = Matrix([[Fraction(x) for x in row] for row in doc["A"]], QQ)
        inst = cls(doc["n"], doc["d"], doc["k"], A, doc.get("seed"), doc.get("bound"))
        if "f" in doc:
            stored = parse_poly(doc["f"], nvars=inst.n + 1, field=QQ)
            if stored != inst.f:
                raise ValueError("stored f does not match x A^t A x^t")
        return inst


def instance_from_rows(rows: Sequence[MVPoly], n: int, d: int) -> SosInstance:
    """Instance whose decomposition is the given list of degree-``d`` forms."""
    basis = sym_basis(n, d)
    F = rows[0].field
    A = Matrix([coefficient_vector(r, basis.monomials) for r in rows], F, cols=len(basis))
    return SosInstance(n, d, len(rows), A)


def powers_instance(n: int, d: int, k: int) -> SosInstance:
    """The decomposition ``(x1^d, ..., xk^d)`` (requires ``k <= n``)."""
    if not 1 <= k <= n:
        raise ValueError("powers instance needs 1 <= k <= n")
    rows = []
    for i in range(1, k + 1):
        e = [0] * (n + 1)
        e[i] = d
        rows.append(MVPoly.monomial(e, QQ))
    return instance_from_rows(rows, n, d)


def random_instance(n: int, d: int, k: int, seed: int, bound: int = 10, attempts: int = 100) -> SosInstance:
    """Random integer decomposition with linearly independent rows.

    Entries are drawn uniformly from ``[-bound, bound]`` by the SplitMix64
    stream started at ``seed``; rank-deficient draws are discarded and the
    stream continues.
    """
    if k < 1 or bound < 1:
        raise ValueError("need k >= 1 and bound >= 1")
    N = sym_dim(n, d)
    if k > N:
        raise ValueError(f"k={k} rows cannot be independent in dimension N={N}")
    rng = SplitMix64(seed)
    for _ in range(attempts):
        data = [[rng.integer(-bound, bound) for _ in range(N)] for _ in range(k)]
        A = Matrix(data, QQ)
        if rank(A) == k:
            return SosInstance(n, d, k, A, seed, bound)
    raise RuntimeError(f"no full-rank draw in {attempts} attempts")


# ---------------------------------------------------------------------------
# Polynomial systems
# ---------------------------------------------------------------------------


def _check_form(f: MVPoly, n: int, d: int):
    if f.nvars != n + 1:
        raise ValueError(f"f has {f.nvars} variables, expected {n + 1}")
    if not f.is_zero() and (not f.is_homogeneous() or f.degree() != 2 * d):
        raise ValueError(f"f must be homogeneous of degree {2 * d}")


def sos_variety_system(f: MVPoly, n: int, d: int, k: int) -> list[MVPoly]:
    """Equations of SOS_k(f) in the ``k*N`` entries of ``A``.

    One quadric per monomial of ``Sym^{2d} V`` (descending lex): its
    coefficient in ``x A^t A x^t - f``.
    """
    _check_form(f, n, d)
    N = sym_dim(n, d)
    nv = k * N
    F = f.field
    table = _product_table(n, d)
    system = []
    for mono in _monomials(n + 1, 2 * d):
        terms: dict = {}
        for a, b in table[mono]:
            for i in range(k):
                e = [0] * nv
                e[i * N + a] += 1
                e[i * N + b] += 1
                e = tuple(e)
                terms[e] = F.add(terms[e], F.one) if e in terms else F.one
        c = f.coefficient(mono)
        if not F.is_zero(c):
            terms[(0,) * nv] = F.neg(c)
        system.append(MVPoly(nv, F, terms.items()))
    return system


def _symmetric_minor(idx: dict, nv: int, I: Sequence[int], J: Sequence[int], F: Field) -> MVPoly:
    terms: dict = {}
    r = len(I)
    for perm in itertools.permutations(range(r)):
        inversions = sum(1 for x in range(r) for y in range(x + 1, r) if perm[x] > perm[y])
        sign = -1 if inversions % 2 else 1
        e = [0] * nv
        for a in range(r):
            e[idx[(I[a], J[perm[a]])]] += 1
        e = tuple(e)
        terms[e] = terms.get(e, 0) + sign
    return MVPoly(nv, F, [(m, c) for m, c in terms.items() if c])


def rank_minors(N: int, k: int, F: Field = QQ) -> list[MVPoly]:
    """All ``(k+1)``-minors of a symmetric ``N x N`` variable matrix, once per {I, J} pair."""
    idx = symmetric_index(N)
    nv = N * (N + 1) // 2
    subsets = list(itertools.combinations(range(N), k + 1)) if k < N else []
    minors = []
    for x, I in enumerate(subsets):
        for J in subsets[x:]:
            m = _symmetric_minor(idx, nv, I, J, F)
            if not m.is_zero():
                minors.append(m)
    return minors


def gram_linear_equations(f: MVPoly, n: int, d: int) -> list[MVPoly]:
    """Linear equations ``poly(W) = f`` in the upper-triangle entries of ``W``."""
    _check_form(f, n, d)
    N = sym_dim(n, d)
    idx = symmetric_index(N)
    nv = N * (N + 1) // 2
    F = f.field
    table = _product_table(n, d)
    eqs = []
    for mono in _monomials(n + 1, 2 * d):
        terms: dict = {}
        for a, b in table[mono]:
            e = [0] * nv
            e[idx[(a, b)]] = 1
            e = tuple(e)
            terms[e] = F.add(terms[e], F.one) if e in terms else F.one
        c = f.coefficient(mono)
        if not F.is_zero(c):
            terms[(0,) * nv] = F.neg(c)
        eqs.append(MVPoly(nv, F, terms.items()))
    return eqs


def gram_fiber_system(f: MVPoly, n: int, d: int, k: int) -> list[MVPoly]:
    """Rank-``<= k`` Gram matrices of ``f``: linear equations plus ``(k+1)``-minors."""
    N = sym_dim(n, d)
    return gram_linear_equations(f, n, d) + rank_minors(N, k, f.field)


def cone_system(n: int, d: int, k: int) -> list[MVPoly]:
    """Homogeneous equations of (rank <= k symmetric matrices) ∩ C."""
    return gram_fiber_system(MVPoly.zero(n + 1, QQ), n, d, k)


def gram_to_vector(W: Matrix) -> list:
    """Upper-triangle entries of a symmetric matrix in the unknown layout."""
    N = W.rows
    return [W[a, b] for a in range(N) for b in range(a, N)]


def vector_to_gram(vec: Sequence, N: int, field: Field = QQ) -> Matrix:
    idx = symmetric_index(N)
    return Matrix([[vec[idx[(a, b)]] for b in range(N)] for a in range(N)], field)

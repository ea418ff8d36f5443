"""Tangent spaces of SOS_k(f) and syzygies of the decomposition vector.

The differential of ``A -> x A^t A x^t`` at a decomposition sends
``V -> x (A^t V + V^t A) x^t = 2 * sum_i f_i g_i`` where ``g_i`` is row ``i``
of ``V``.  Its kernel contains the Koszul syzygies (``g_i = f_j``,
``g_j = -f_i``); the question is whether it contains anything else.

Nullities are exact over the rationals.  The fast path combines two bounds:
the Koszul tuples give ``nullity >= C(k, 2)`` (checked exactly), and a rank
computed modulo a prime can only undercount the rational rank, so
``nullity <= kN - rank_p``.  When the bounds meet the rational nullity is
pinned; otherwise the full fraction-free elimination over ``QQ`` decides.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from math import comb, lcm

from .algebra import QQ, MVPoly, coefficient_vector
from .linalg import Matrix, rank_mod_p, rank_nullspace
from .sosring import SosInstance, _monomials

DEFAULT_PRIME = 2**31 - 1


class DependentRowsError(ValueError):
    """The decomposition has linearly dependent summands."""


@dataclass(frozen=True)
class SyzygyTuple:
    g: tuple

    def vector(self, basis) -> list:
        out = []
        for gi in self.g:
            out.extend(coefficient_vector(gi, basis))
        return out


def jacobian_matrix(inst: SosInstance) -> Matrix:
    """Matrix of ``V -> coefficients of x(A^t V + V^t A)x^t``.

    Rows follow the descending-lex monomials of degree ``2d``; column
    ``i*N + j`` is entry ``(i, j)`` of ``V`` and holds the coefficients of
    ``2 f_i w_j``.
    """
    n, d, k, N = inst.n, inst.d, inst.k, inst.N
    F = inst.A.field
    rows_mono = _monomials(n + 1, 2 * d)
    row_index = {m: r for r, m in enumerate(rows_mono)}
    basis = inst.basis.monomials
    two = F.convert(2)
    data = [[F.zero] * (k * N) for _ in rows_mono]
    for i in range(k):
        Arow = inst.A.row(i)
        for j, wj in enumerate(basis):
            col = i * N + j
            for a, wa in enumerate(basis):
                c = Arow[a]
                if F.is_zero(c):
                    continue
                m = tuple(x + y for x, y in zip(wa, wj))
                r = row_index[m]
                data[r][col] = F.add(data[r][col], F.mul(two, c))
    return Matrix(data, F, cols=k * N)


def koszul_basis(inst: SosInstance) -> list[SyzygyTuple]:
    """The ``C(k, 2)`` Koszul syzygies of ``(f_1, ..., f_k)``, verified exactly."""
    if rank_nullspace(inst.A)[0] < inst.k:
        raise DependentRowsError("rows of A are linearly dependent")
    fs = inst.rows
    k = inst.k
    zero = MVPoly.zero(inst.n + 1, inst.A.field)
    out = []
    for i in range(k):
        for j in range(i + 1, k):
            g = [zero] * k
            g[i] = fs[j]
            g[j] = -fs[i]
            total = zero
            for fi, gi in zip(fs, g):
                total = total + fi * gi
            if not total.is_zero():
                raise ArithmeticError("Koszul relation failed to vanish")
            out.append(SyzygyTuple(tuple(g)))
    vecs = [t.vector(inst.basis.monomials) for t in out]
    if vecs and rank_nullspace(Matrix(vecs, inst.A.field))[0] != len(vecs):
        raise ArithmeticError("Koszul tuples are dependent")
    return out


def _integer_matrix(M: Matrix) -> list[list[int]] | None:
    rows = []
    for r in M._data:
        den = lcm(*(x.denominator for x in r)) if r else 1
        rows.append([int(x * den) for x in r])
    return rows


@dataclass
class TangentReport:
    n: int
    d: int
    k: int
    seed: int | None
    nullity: int
    expected: int
    generic: bool
    method: str
    extra_vector: list | None = field(default=None)

    def to_dict(self) -> dict:
        out = asdict(self)
        if self.extra_vector is not None:
            out["extra_vector"] = [str(x) for x in self.extra_vector]
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _koszul_vectors(inst: SosInstance) -> list[list]:
    return [t.vector(inst.basis.monomials) for t in koszul_basis(inst)]


def analyze_tangent(inst: SosInstance, prime: int = DEFAULT_PRIME) -> TangentReport:
    """Exact nullity of the Jacobian with a genericity verdict."""
    J = jacobian_matrix(inst)
    kN = J.cols
    expected = comb(inst.k, 2)
    try:
        kos = _koszul_vectors(inst)
    except DependentRowsError:
        kos = None
    if kos is not None and isinstance(J.field, type(QQ)):
        # Koszul vectors lie in the kernel: exact lower bound
        for v in kos:
            if any(J.apply(v)):
                raise ArithmeticError("Koszul vector outside the Jacobian kernel")
        ints = _integer_matrix(J)
        upper = kN - rank_mod_p(ints, prime)
        if upper == expected:
            return TangentReport(inst.n, inst.d, inst.k, inst.seed, expected, expected, True, "modular-certificate")
    r, null = rank_nullspace(J)
    nullity = kN - r
    generic = nullity == expected and kos is not None
    extra = None
    if not generic:
        extra = _vector_outside_span(null, kos or [], J.field)
    return TangentReport(inst.n, inst.d, inst.k, inst.seed, nullity, expected, generic, "exact-elimination", extra)


def _vector_outside_span(candidates: list[list], span: list[list], F) -> list | None:
    base = rank_nullspace(Matrix(span, F))[0] if span else 0
    for v in candidates:
        if rank_nullspace(Matrix(span + [v], F))[0] > base:
            return v
    return None


def tangent_nullity(inst: SosInstance) -> int:
    return analyze_tangent(inst).nullity


def only_koszul(inst: SosInstance) -> bool:
    """True iff the Koszul syzygies span the whole Jacobian kernel."""
    return analyze_tangent(inst).generic


def image_dimension(inst: SosInstance) -> int:
    """Rank of the differential: ``kN - nullity``."""
    return inst.k * inst.N - tangent_nullity(inst)

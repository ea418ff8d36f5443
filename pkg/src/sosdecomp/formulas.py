"""Closed-form degree and dimension formulas.

Everything here is exact integer (or exact rational) arithmetic, so the
values double as oracles for the Groebner-basis and rank computations.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from math import comb

from .algebra import QQ
from .linalg import Matrix, determinant

# Published O(k) table entries that disagree with the determinant formula
# (both differ from twice the published SO(k) entry); kept only for reporting.
PRINTED_DEG_O = {6: 9356, 7: 233232}


@dataclass(frozen=True)
class FormulaReport:
    name: str
    parameters: dict
    value: int
    note: str = ""

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    def csv_row(self) -> list:
        params = ";".join(f"{k}={v}" for k, v in sorted(self.parameters.items()))
        return [self.name, params, self.value, self.note]


def orthogonal_degree_matrix(k: int) -> Matrix:
    """The binomial matrix ``(C(2k-2i-2j, k-2i))`` for ``1 <= i, j <= k//2``."""
    m = k // 2
    return Matrix(
        [[comb(2 * k - 2 * i - 2 * j, k - 2 * i) for j in range(1, m + 1)] for i in range(1, m + 1)],
        QQ,
        cols=m,
    )


def deg_orthogonal(k: int) -> int:
    """Degree of the complex orthogonal group O(k) in the space of k x k matrices."""
    if k < 1:
        raise ValueError("k must be at least 1")
    det = determinant(orthogonal_degree_matrix(k))
    value = 2**k * det
    if value.denominator != 1:
        raise ArithmeticError("non-integral orthogonal group degree")
    return int(value)


def deg_special_orthogonal(k: int) -> int:
    if k < 2:
        raise ValueError("SO(k) degree is tabulated for k >= 2")
    total = deg_orthogonal(k)
    if total % 2:
        raise ArithmeticError("deg O(k) is odd; cannot split into two components")
    return total // 2


def secant_veronese2_degree(N: int, j: int) -> int:
    """Degree of the j-th secant variety of the quadratic Veronese of P^{N-1}.

    Equivalently, the degree of the variety of symmetric N x N matrices of
    rank at most j.  The product is formed as one exact rational and then
    checked to be an integer.
    """
    if not 1 <= j <= N:
        raise ValueError(f"need 1 <= j <= N, got N={N}, j={j}")
    prod = Fraction(1)
    for i in range(N - j):
        prod *= Fraction(comb(N + i, N - j - i), comb(2 * i + 1, i))
    if prod.denominator != 1:
        raise ArithmeticError(f"Segre product is not integral for N={N}, j={j}: {prod}")
    return int(prod)


def deg_sos(N: int, k: int) -> int:
    """Degree of SOS_1 (2^{N-1}) or SOS_2 in P(Sym^{2d} V), with ``N = dim Sym^d V``."""
    if k == 1:
        if N < 2:
            raise ValueError("deg SOS_1 needs N >= 2")
        return 2 ** (N - 1)
    if k == 2:
        if N < 3:
            raise ValueError("deg SOS_2 needs N >= 3")
        prod = Fraction(1)
        for i in range(N - 2):
            prod *= Fraction(comb(N + i, N - 2 - i), comb(2 * i + 1, i))
        if prod.denominator != 1:
            raise ArithmeticError(f"non-integral SOS_2 degree for N={N}")
        return int(prod)
    raise ValueError("closed-form degree known only for k in {1, 2}")


def dim_sos_upper(n: int, d: int, k: int) -> int:
    """Upper bound ``k*C(n+d, n) - C(k, 2)`` on dim SOS_k (sharp for k <= n)."""
    if k < 1:
        raise ValueError("k must be at least 1")
    return k * comb(n + d, n) - comb(k, 2)


@dataclass(frozen=True)
class LemmaGap:
    n: int
    d: int
    k: int
    dim_quotient: int
    codim_c: int

    @property
    def holds(self) -> bool:
        return self.dim_quotient < self.codim_c

    @property
    def gap(self) -> int:
        return self.codim_c - self.dim_quotient


def lemma_gap(n: int, d: int, k: int) -> LemmaGap:
    """Compare dim of rank-<=k symmetric N x N matrices with codim of C.

    ``dim S/I_k = (2N + 1 - k) k / 2`` and ``codim C = C(n+2d, 2d)``.
    """
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    if d < 1:
        raise ValueError("d must be at least 1")
    N = comb(n + d, d)
    twice = (2 * N + 1 - k) * k
    assert twice % 2 == 0
    return LemmaGap(n, d, k, twice // 2, comb(n + 2 * d, 2 * d))


@dataclass
class FormulaTable:
    """Rows of the orthogonal-group table plus the SOS_1/SOS_2 degrees."""

    orthogonal: list[dict] = field(default_factory=list)
    sos: list[dict] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)


def formula_table(kmax: int = 9, Nmax: int = 6) -> FormulaTable:
    table = FormulaTable()
    for k in range(2, kmax + 1):
        row = {"k": k, "deg_O": deg_orthogonal(k), "deg_SO": deg_special_orthogonal(k)}
        if k in PRINTED_DEG_O:
            printed = PRINTED_DEG_O[k]
            row["printed_deg_O"] = printed
            table.notes.append(
                f"k={k}: determinant formula gives {row['deg_O']} = 2*{row['deg_SO']}; "
                f"the published table prints {printed}"
            )
        table.orthogonal.append(row)
    for N in range(3, Nmax + 1):
        table.sos.append(
            {
                "N": N,
                "deg_SOS1": deg_sos(N, 1),
                "deg_SOS2": deg_sos(N, 2),
                "segre_1": secant_veronese2_degree(N, 1),
                "segre_2": secant_veronese2_degree(N, 2),
            }
        )
    return table


def table_csv(rows: list[dict]) -> str:
    if not rows:
        return ""
    keys = list(rows[0])
    for r in rows[1:]:
        keys += [k for k in r if k not in keys]
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow(r)
    return buf.getvalue()

"""Two-square decompositions and the two components of SOS_2(f).

For ``f = g^2 + h^2`` write ``f = (g + ih)(g - ih)``.  Every other pair
``(g', h')`` with the same sum of squares (in ``n+1 >= 3`` variables, with
``g + ih`` and ``g - ih`` coprime) arises from a scalar ``lam != 0`` in one
of two ways:

* plus:  ``g' + ih' = lam (g + ih)`` and ``g' - ih' = lam^-1 (g - ih)``
* minus: ``g' + ih' = lam (g - ih)`` and ``g' - ih' = lam^-1 (g + ih)``

With ``a = (lam + 1/lam)/2`` and ``b = (lam - 1/lam)/2`` the plus component
acts on ``(g, h)`` by ``[[a, ib], [-ib, a]]``, a special orthogonal matrix;
the minus component precomposes it with ``diag(1, -1)``.  Scalars are
Gaussian rationals so every identity is checked exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

from .algebra import QQI, GaussianRational, MVPoly
from .linalg import Matrix

Component = Literal["plus", "minus"]
COMPONENTS = ("plus", "minus")

__all__ = [
    "Sos2Orbit",
    "DegenerateOrbitError",
    "transform_matrix",
    "orbit_element",
    "classify",
    "factor_pair",
]

_I = GaussianRational(0, 1)


class DegenerateOrbitError(ValueError):
    """A factor ``g + ih`` or ``g - ih`` vanishes, so no unique parameter exists."""


def _scalar(lam) -> GaussianRational:
    lam = QQI.convert(lam)
    if not lam:
        raise ValueError("lambda must be nonzero")
    return lam


def _check_component(component: str):
    if component not in COMPONENTS:
        raise ValueError(f"component must be 'plus' or 'minus', got {component!r}")


def transform_matrix(lam, component: Component = "plus") -> Matrix:
    """The 2x2 orthogonal matrix attached to ``lam`` on the given component."""
    _check_component(component)
    lam = _scalar(lam)
    inv = lam.inverse()
    a = (lam + inv) / 2
    b = (lam - inv) / 2
    ib = _I * b
    if component == "plus":
        rows = [[a, ib], [-ib, a]]
    else:
        rows = [[a, -ib], [-ib, -a]]
    return Matrix(rows, QQI)


def _as_gaussian(p: MVPoly) -> MVPoly:
    return p if p.field == QQI else p.change_field(QQI)


def _check_pair(g: MVPoly, h: MVPoly):
    if g.nvars != h.nvars:
        raise ValueError("g and h must have the same number of variables")
    dg, dh = g.degree(), h.degree()
    if dg >= 0 and dh >= 0 and dg != dh:
        raise ValueError("g and h must have the same degree")


@dataclass(frozen=True)
class Sos2Orbit:
    """A pair ``(g, h)`` together with a point ``(component, lam)`` of its orbit."""

    g: MVPoly
    h: MVPoly
    component: Component
    lam: GaussianRational

    def __post_init__(self):
        _check_component(self.component)
        _check_pair(self.g, self.h)
        object.__setattr__(self, "lam", _scalar(self.lam))
        object.__setattr__(self, "g", _as_gaussian(self.g))
        object.__setattr__(self, "h", _as_gaussian(self.h))

    @property
    def matrix(self) -> Matrix:
        return transform_matrix(self.lam, self.component)

    def image(self) -> tuple[MVPoly, MVPoly]:
        return orbit_element(self.g, self.h, self.lam, self.component)

    def verify(self) -> bool:
        g2, h2 = self.image()
        return g2 * g2 + h2 * h2 == self.g * self.g + self.h * self.h


def orbit_element(g: MVPoly, h: MVPoly, lam, component: Component = "plus") -> tuple[MVPoly, MVPoly]:
    """Apply ``transform_matrix(lam, component)`` to ``(g, h)``.

    Forms in fewer than three variables are rejected: binary forms split
    into linear factors and the orbit description no longer covers every
    decomposition.
    """
    _check_pair(g, h)
    if g.nvars < 3:
        raise ValueError("need at least three variables (n >= 2)")
    M = transform_matrix(lam, component)
    g, h = _as_gaussian(g), _as_gaussian(h)
    g2 = g.scale(M[0, 0]) + h.scale(M[0, 1])
    h2 = g.scale(M[1, 0]) + h.scale(M[1, 1])
    if g2 * g2 + h2 * h2 != g * g + h * h:
        raise ArithmeticError("orbit element changed the sum of squares")
    return g2, h2


def factor_pair(g: MVPoly, h: MVPoly) -> tuple[MVPoly, MVPoly]:
    """``(g + ih, g - ih)``, whose product is ``g^2 + h^2``."""
    _check_pair(g, h)
    g, h = _as_gaussian(g), _as_gaussian(h)
    ih = h.scale(_I)
    p, q = g + ih, g - ih
    if p * q != g * g + h * h:
        raise ArithmeticError("factorization check failed")
    return p, q


def _ratio(num: MVPoly, den: MVPoly):
    """The scalar ``c`` with ``num = c * den``, or None."""
    if den.is_zero():
        return None
    m, c_den = next(iter(den.as_dict().items()))
    c = num.coefficient(m) / c_den
    if not c:
        return None
    return c if num == den.scale(c) else None


def classify(g: MVPoly, h: MVPoly, g2: MVPoly, h2: MVPoly) -> tuple[Component, GaussianRational] | None:
    """Locate ``(g2, h2)`` in the orbit of ``(g, h)``.

    Returns ``(component, lam)``, or None if the sums of squares differ or
    no Gaussian-rational parameter relates the pairs.  When both components
    match (``g`` and ``h`` proportional) the plus component is reported.
    """
    _check_pair(g, h)
    _check_pair(g2, h2)
    if g.nvars != g2.nvars:
        raise ValueError("pairs live in different rings")
    p, q = factor_pair(g, h)
    p2, q2 = factor_pair(g2, h2)
    if p * q != p2 * q2:
        return None
    if p2.is_zero() or q2.is_zero() or p.is_zero() or q.is_zero():
        raise DegenerateOrbitError("a factor g + ih or g - ih vanishes")
    for component, (a, b) in (("plus", (p, q)), ("minus", (q, p))):
        lam = _ratio(p2, a)
        if lam is None:
            continue
        if q2 == b.scale(lam.inverse()):
            return component, lam
    return None

"""Exact coefficient fields and multivariate polynomials.

Three coefficient fields are supported:

* ``QQ``  -- rationals, elements are :class:`fractions.Fraction`;
* ``QQI`` -- Gaussian rationals ``a + b*i``, elements are :class:`GaussianRational`;
* ``GF(p)`` -- a prime field, elements are plain ``int`` residues in ``[0, p)``.

Polynomials (:class:`MVPoly`) are immutable and keep a canonical dictionary
``{exponent tuple: coefficient}`` with no zero coefficients.  Term lists are
produced on demand, sorted descending under a :class:`MonomialOrder`.

The text grammar used for input/output looks like ``3*x0^2*x1 - 1/2*x1^3``,
with ``i`` denoting the imaginary unit.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from sympy.ntheory import isprime

__all__ = [
    "GaussianRational",
    "Field",
    "RationalField",
    "GaussianField",
    "PrimeField",
    "QQ",
    "QQI",
    "GF",
    "MonomialOrder",
    "GREVLEX",
    "GRLEX",
    "LEX",
    "MVPoly",
    "parse_poly",
    "coefficient_vector",
    "from_coefficient_vector",
    "evaluate",
    "poly_arith",
    "FieldMismatchError",
]


class FieldMismatchError(ValueError):
    """Operands live in different rings (field or variable count)."""


class GaussianRational:
    """A Gaussian rational ``re + im*i`` with exact rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @classmethod
    def _coerce(cls, other):
        if isinstance(other, GaussianRational):
            return other
        if isinstance(other, (int, Fraction)):
            return cls(other, 0)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def conjugate(self) -> GaussianRational:
        return GaussianRational(self.re, -self.im)

    def norm(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def inverse(self) -> GaussianRational:
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero Gaussian rational")
        return GaussianRational(self.re / n, -self.im / n)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = GaussianRational(1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"

    def __str__(self):
        return _format_gaussian(self)


I = GaussianRational(0, 1)


def _format_fraction(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def _format_gaussian(z: GaussianRational) -> str:
    if z.im == 0:
        return _format_fraction(z.re)
    if z.im == 1:
        im = "i"
    elif z.im == -1:
        im = "-i"
    else:
        im = f"{_format_fraction(z.im)}*i"
    if z.re == 0:
        return im
    sign = "-" if im.startswith("-") else "+"
    return f"{_format_fraction(z.re)}{sign}{im.lstrip('-')}"


# ---------------------------------------------------------------------------
# Fields
# ---------------------------------------------------------------------------


class Field:
    """Common interface of the three coefficient fields."""

    name: str = "?"
    characteristic: int = 0

    def convert(self, x):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def is_zero(self, a) -> bool:
        return not a

    @property
    def zero(self):
        return self.convert(0)

    @property
    def one(self):
        return self.convert(1)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e: int):
        if e < 0:
            return self.pow(self.inv(a), -e)
        result = self.one
        while e:
            if e & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            e >>= 1
        return result

    def to_str(self, a) -> str:
        return str(a)

    def needs_parens(self, a) -> bool:
        return False

    def __repr__(self):
        return self.name


class RationalField(Field):
    name = "QQ"

    def convert(self, x):
        if isinstance(x, GaussianRational):
            if x.im:
                raise ValueError(f"{x} is not rational")
            return x.re
        if isinstance(x, str):
            return Fraction(x)
        return Fraction(x)

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero")
        return 1 / a

    def to_str(self, a) -> str:
        return _format_fraction(a)

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")


class GaussianField(Field):
    name = "QQI"

    def convert(self, x):
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, str):
            return GaussianRational(Fraction(x))
        return GaussianRational(x)

    def inv(self, a):
        return a.inverse()

    def to_str(self, a) -> str:
        return _format_gaussian(a)

    def needs_parens(self, a) -> bool:
        return bool(a.re) and bool(a.im)

    def __eq__(self, other):
        return isinstance(other, GaussianField)

    def __hash__(self):
        return hash("QQI")


class PrimeField(Field):
    """The field of residues modulo an odd prime ``p < 2**62``."""

    def __init__(self, p: int):
        p = int(p)
        if p <= 2 or p >= 2**62 or not isprime(p):
            raise ValueError(f"modulus must be an odd prime below 2^62, got {p}")
        self.p = p
        self.characteristic = p
        self.name = f"GF({p})"

    def convert(self, x):
        p = self.p
        if isinstance(x, int):
            return x % p
        if isinstance(x, str):
            x = Fraction(x)
        if isinstance(x, GaussianRational):
            if x.im:
                raise ValueError("imaginary unit has no image in GF(p) here")
            x = x.re
        x = Fraction(x)
        if x.denominator % p == 0:
            raise ZeroDivisionError(f"denominator of {x} vanishes mod {p}")
        return x.numerator * pow(x.denominator, -1, p) % p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return a * b % self.p

    def neg(self, a):
        return -a % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.p)

    def pow(self, a, e: int):
        return pow(a, e, self.p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))


QQ = RationalField()
QQI = GaussianField()


@lru_cache(maxsize=None)
def GF(p: int) -> PrimeField:
    return PrimeField(p)


# ---------------------------------------------------------------------------
# Monomial orders
# ---------------------------------------------------------------------------


def _grevlex_key(e):
    return (sum(e), tuple(-x for x in reversed(e)))


class MonomialOrder:
    """A monomial order on exponent tuples.

    ``kind`` is one of ``"grevlex"``, ``"grlex"``, ``"lex"`` or ``"elim"``.
    The elimination order compares the first ``split`` variables by grevlex
    and breaks ties with grevlex on the remaining ones, so any polynomial
    whose leading monomial avoids the first block lies in the subring of the
    remaining variables.
    """

    __slots__ = ("kind", "split")

    def __init__(self, kind: str = "grevlex", split: int | None = None):
        if kind not in ("grevlex", "grlex", "lex", "elim"):
            raise ValueError(f"unknown monomial order {kind!r}")
        if kind == "elim" and (split is None or split < 0):
            raise ValueError("elimination order needs a non-negative split index")
        self.kind = kind
        self.split = split if kind == "elim" else None

    def key(self, e: Sequence[int]):
        kind = self.kind
        if kind == "grevlex":
            return _grevlex_key(e)
        if kind == "grlex":
            return (sum(e), tuple(e))
        if kind == "lex":
            return tuple(e)
        s = self.split
        return (_grevlex_key(e[:s]), _grevlex_key(e[s:]))

    def compare(self, a: Sequence[int], b: Sequence[int]) -> int:
        ka, kb = self.key(a), self.key(b)
        return (ka > kb) - (ka < kb)

    def __eq__(self, other):
        return (
            isinstance(other, MonomialOrder)
            and other.kind == self.kind
            and other.split == self.split
        )

    def __hash__(self):
        return hash((self.kind, self.split))

    def __repr__(self):
        if self.kind == "elim":
            return f"MonomialOrder('elim', split={self.split})"
        return f"MonomialOrder({self.kind!r})"


GREVLEX = MonomialOrder("grevlex")
GRLEX = MonomialOrder("grlex")
LEX = MonomialOrder("lex")


# ---------------------------------------------------------------------------
# Polynomials
# ---------------------------------------------------------------------------


class MVPoly:
    """Immutable multivariate polynomial over one of the exact fields."""

    __slots__ = ("nvars", "field", "_terms", "_hash")

    def __init__(self, nvars: int, field: Field = QQ, terms: Mapping | Iterable = ()):
        self.nvars = nvars
        self.field = field
        items = terms.items() if isinstance(terms, Mapping) else terms
        clean: dict[tuple, object] = {}
        conv = field.convert
        for exps, c in items:
            exps = tuple(exps)
            if len(exps) != nvars:
                raise ValueError(f"exponent {exps} does not have {nvars} entries")
            if any(x < 0 for x in exps):
                raise ValueError(f"negative exponent in {exps}")
            c = conv(c)
            if exps in clean:
                c = field.add(clean[exps], c)
            if field.is_zero(c):
                clean.pop(exps, None)
            else:
                clean[exps] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, nvars, field, terms: dict) -> MVPoly:
        # terms must already be canonical
        p = object.__new__(cls)
        p.nvars = nvars
        p.field = field
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def zero(cls, nvars: int, field: Field = QQ) -> MVPoly:
        return cls._raw(nvars, field, {})

    @classmethod
    def constant(cls, c, nvars: int, field: Field = QQ) -> MVPoly:
        return cls(nvars, field, [((0,) * nvars, c)])

    @classmethod
    def var(cls, i: int, nvars: int, field: Field = QQ) -> MVPoly:
        if not 0 <= i < nvars:
            raise IndexError(f"variable index {i} out of range for {nvars} variables")
        e = [0] * nvars
        e[i] = 1
        return cls._raw(nvars, field, {tuple(e): field.one})

    @classmethod
    def monomial(cls, exps: Sequence[int], field: Field = QQ, coeff=1) -> MVPoly:
        return cls(len(exps), field, [(tuple(exps), coeff)])

    # -- inspection ---------------------------------------------------------

    def as_dict(self) -> dict:
        return dict(self._terms)

    def terms(self, order: MonomialOrder = GREVLEX) -> list[tuple[tuple, object]]:
        """Terms ``(exponents, coefficient)`` sorted strictly descending."""
        key = order.key
        return sorted(self._terms.items(), key=lambda t: key(t[0]), reverse=True)

    def monomials(self, order: MonomialOrder = GREVLEX) -> list[tuple]:
        return [m for m, _ in self.terms(order)]

    def coefficient(self, exps: Sequence[int]):
        return self._terms.get(tuple(exps), self.field.zero)

    def leading_term(self, order: MonomialOrder = GREVLEX):
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        key = order.key
        m = max(self._terms, key=key)
        return m, self._terms[m]

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    def degree(self) -> int:
        """Total degree; ``-1`` for the zero polynomial."""
        return max((sum(e) for e in self._terms), default=-1)

    def is_homogeneous(self) -> bool:
        degs = {sum(e) for e in self._terms}
        return len(degs) <= 1

    def variables(self) -> set[int]:
        used = set()
        for e in self._terms:
            used.update(i for i, x in enumerate(e) if x)
        return used

    def is_constant(self) -> bool:
        return all(not any(e) for e in self._terms)

    # -- arithmetic ---------------------------------------------------------

    def _check(self, other: MVPoly):
        if other.nvars != self.nvars:
            raise FieldMismatchError(
                f"variable count mismatch: {self.nvars} vs {other.nvars}"
            )
        if other.field != self.field:
            raise FieldMismatchError(f"field mismatch: {self.field} vs {other.field}")

    def _lift(self, other) -> MVPoly:
        if isinstance(other, MVPoly):
            self._check(other)
            return other
        return MVPoly.constant(other, self.nvars, self.field)

    def __add__(self, other):
        other = self._lift(other)
        F = self.field
        out = dict(self._terms)
        for m, c in other._terms.items():
            if m in out:
                s = F.add(out[m], c)
                if F.is_zero(s):
                    del out[m]
                else:
                    out[m] = s
            else:
                out[m] = c
        return MVPoly._raw(self.nvars, F, out)

    __radd__ = __add__

    def __neg__(self):
        F = self.field
        return MVPoly._raw(self.nvars, F, {m: F.neg(c) for m, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, MVPoly):
            return self.scale(other)
        self._check(other)
        F = self.field
        out: dict = {}
        add, mul, is_zero = F.add, F.mul, F.is_zero
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                c = mul(c1, c2)
                if m in out:
                    s = add(out[m], c)
                    if is_zero(s):
                        del out[m]
                    else:
                        out[m] = s
                elif not is_zero(c):
                    out[m] = c
        return MVPoly._raw(self.nvars, F, out)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, c) -> MVPoly:
        F = self.field
        c = F.convert(c)
        if F.is_zero(c):
            return MVPoly.zero(self.nvars, F)
        return MVPoly._raw(self.nvars, F, {m: F.mul(v, c) for m, v in self._terms.items()})

    def __truediv__(self, c):
        return self.scale(self.field.inv(self.field.convert(c)))

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power of a polynomial")
        result = MVPoly.constant(1, self.nvars, self.field)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def mul_monomial(self, exps: Sequence[int], c=1) -> MVPoly:
        F = self.field
        c = F.convert(c)
        if F.is_zero(c):
            return MVPoly.zero(self.nvars, F)
        return MVPoly._raw(
            self.nvars,
            F,
            {tuple(a + b for a, b in zip(m, exps)): F.mul(v, c) for m, v in self._terms.items()},
        )

    def diff(self, i: int) -> MVPoly:
        F = self.field
        out = {}
        for m, c in self._terms.items():
            if m[i]:
                e = list(m)
                e[i] -= 1
                v = F.mul(c, F.convert(m[i]))
                if not F.is_zero(v):
                    out[tuple(e)] = v
        return MVPoly._raw(self.nvars, F, out)

    def monic(self, order: MonomialOrder = GREVLEX) -> MVPoly:
        if not self._terms:
            return self
        _, lc = self.leading_term(order)
        return self.scale(self.field.inv(lc))

    def evaluate(self, point: Sequence):
        return evaluate(self, point)

    def compose(self, images: Sequence[MVPoly]) -> MVPoly:
        """Substitute ``images[j]`` for variable ``j``."""
        if len(images) != self.nvars:
            raise ValueError(f"need {self.nvars} images, got {len(images)}")
        if not images:
            return self
        target = images[0]
        powers: dict[tuple[int, int], MVPoly] = {}

        def power(j, e):
            if (j, e) not in powers:
                powers[(j, e)] = images[j] ** e
            return powers[(j, e)]

        acc = MVPoly.zero(target.nvars, target.field)
        for m, c in self._terms.items():
            t = MVPoly.constant(target.field.convert(c), target.nvars, target.field)
            for j, e in enumerate(m):
                if e:
                    t = t * power(j, e)
            acc = acc + t
        return acc

    def change_field(self, field: Field) -> MVPoly:
        """Map coefficients into another field (e.g. QQ -> GF(p) or QQ -> QQI)."""
        return MVPoly(self.nvars, field, [(m, field.convert(c)) for m, c in self._terms.items()])

    def extend(self, nvars: int, offset: int = 0) -> MVPoly:
        """Embed into a ring with ``nvars`` variables, shifting indices by ``offset``."""
        if offset + self.nvars > nvars:
            raise ValueError("target ring too small")
        pad_after = nvars - offset - self.nvars
        return MVPoly._raw(
            nvars,
            self.field,
            {(0,) * offset + m + (0,) * pad_after: c for m, c in self._terms.items()},
        )

    # -- comparison / display -----------------------------------------------

    def __eq__(self, other):
        if isinstance(other, MVPoly):
            return (
                self.nvars == other.nvars
                and self.field == other.field
                and self._terms == other._terms
            )
        if not self._terms:
            return other == 0
        if self.is_constant():
            return self._terms[(0,) * self.nvars] == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, self.field, frozenset(self._terms.items())))
        return self._hash

    def to_str(self, order: MonomialOrder = GREVLEX, names: Sequence[str] | None = None) -> str:
        if not self._terms:
            return "0"
        F = self.field
        names = names or [f"x{i}" for i in range(self.nvars)]
        parts = []
        for m, c in self.terms(order):
            mono = "*".join(
                names[i] if e == 1 else f"{names[i]}^{e}" for i, e in enumerate(m) if e
            )
            neg = _is_negative(F, c)
            mag = F.neg(c) if neg else c
            s = F.to_str(mag)
            if F.needs_parens(mag):
                s = f"({s})"
            if mono:
                body = mono if s == "1" else f"{s}*{mono}"
            else:
                body = s
            parts.append(("-" if neg else "+", body))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"MVPoly({self.to_str()!r}, nvars={self.nvars}, field={self.field})"


def _is_negative(F: Field, c) -> bool:
    if isinstance(F, RationalField):
        return c < 0
    if isinstance(F, GaussianField):
        return (c.re < 0) or (c.re == 0 and c.im < 0)
    return False


# ---------------------------------------------------------------------------
# Plain-function operations
# ---------------------------------------------------------------------------


def poly_arith(a: MVPoly, b, op: str) -> MVPoly:
    """Dispatch ``add``/``sub``/``mul``/``scale`` on two operands."""
    if op == "add":
        return a + a._lift(b)
    if op == "sub":
        return a - a._lift(b)
    if op == "mul":
        if not isinstance(b, MVPoly):
            raise TypeError("mul expects a polynomial; use op='scale' for scalars")
        return a * b
    if op == "scale":
        return a.scale(b)
    raise ValueError(f"unknown operation {op!r}")


def evaluate(p: MVPoly, point: Sequence):
    """Exact value of ``p`` at ``point`` (converted into the field of ``p``)."""
    if len(point) != p.nvars:
        raise ValueError(f"point has {len(point)} coordinates, polynomial has {p.nvars} variables")
    F = p.field
    pt = [F.convert(x) for x in point]
    total = F.zero
    for m, c in p._terms.items():
        t = c
        for x, e in zip(pt, m):
            if e:
                t = F.mul(t, F.pow(x, e))
        total = F.add(total, t)
    return total


def coefficient_vector(p: MVPoly, basis: Sequence[Sequence[int]]) -> list:
    """Coordinates of ``p`` in an ordered monomial basis."""
    index = {tuple(m): j for j, m in enumerate(basis)}
    vec = [p.field.zero] * len(index)
    for m, c in p._terms.items():
        if m not in index:
            raise KeyError(f"monomial {m} of the polynomial is not in the basis")
        vec[index[m]] = c
    return vec


def from_coefficient_vector(vec: Sequence, basis: Sequence[Sequence[int]], field: Field = QQ) -> MVPoly:
    if len(vec) != len(basis):
        raise ValueError("vector and basis lengths differ")
    if not basis:
        raise ValueError("empty basis")
    return MVPoly(len(basis[0]), field, zip(basis, vec))


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|x(\d+)|(i)(?![A-Za-z0-9_])|([-+*/^()]))")


class _Parser:
    def __init__(self, text: str, nvars: int, field: Field):
        self.tokens = self._tokenize(text)
        self.pos = 0
        self.nvars = nvars
        self.field = field

    @staticmethod
    def _tokenize(text: str):
        tokens = []
        pos = 0
        text = text.rstrip()
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m:
                raise ValueError(f"cannot parse polynomial near {text[pos:pos + 10]!r}")
            num, var, unit, op = m.groups()
            if num is not None:
                tokens.append(("num", int(num)))
            elif var is not None:
                tokens.append(("var", int(var)))
            elif unit is not None:
                tokens.append(("i", None))
            else:
                tokens.append(("op", op))
            pos = m.end()
        return tokens

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None)

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def expect(self, op):
        tok = self.take()
        if tok != ("op", op):
            raise ValueError(f"expected {op!r}, got {tok[1]!r}")

    def parse(self) -> MVPoly:
        if not self.tokens:
            raise ValueError("empty polynomial text")
        p = self.expr()
        if self.pos != len(self.tokens):
            raise ValueError(f"unexpected token {self.peek()[1]!r}")
        return p

    def expr(self) -> MVPoly:
        p = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            _, op = self.take()
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self) -> MVPoly:
        p = self.factor()
        while self.peek() in (("op", "*"), ("op", "/")):
            _, op = self.take()
            q = self.factor()
            if op == "*":
                p = p * q
            else:
                if not q.is_constant() or q.is_zero():
                    raise ValueError("division only by nonzero constants")
                p = p / q.coefficient((0,) * self.nvars)
        return p

    def factor(self) -> MVPoly:
        if self.peek() in (("op", "-"), ("op", "+")):
            _, op = self.take()
            p = self.factor()
            return -p if op == "-" else p
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            kind, val = self.take()
            if kind != "num":
                raise ValueError("exponent must be a non-negative integer")
            base = base**val
        return base

    def atom(self) -> MVPoly:
        kind, val = self.take()
        F, n = self.field, self.nvars
        if kind == "num":
            return MVPoly.constant(val, n, F)
        if kind == "var":
            if val >= n:
                raise ValueError(f"variable x{val} out of range for {n} variables")
            return MVPoly.var(val, n, F)
        if kind == "i":
            return MVPoly.constant(I, n, F)
        if (kind, val) == ("op", "("):
            p = self.expr()
            self.expect(")")
            return p
        raise ValueError(f"unexpected token {val!r}")


def parse_poly(text: str, nvars: int | None = None, field: Field | None = None) -> MVPoly:
    """Parse the text grammar, e.g. ``"3*x0^2*x1 - 1/2*x1^3"``.

    ``nvars`` defaults to one more than the largest variable index used;
    ``field`` defaults to ``QQI`` when the unit ``i`` occurs and ``QQ`` otherwise.
    """
    tokens = _Parser._tokenize(text)
    if nvars is None:
        nvars = 1 + max((v for k, v in tokens if k == "var"), default=-1)
        nvars = max(nvars, 1)
    if field is None:
        field = QQI if any(k == "i" for k, _ in tokens) else QQ
    if isinstance(field, RationalField) and any(k == "i" for k, _ in tokens):
        raise ValueError("imaginary unit requires the Gaussian field")
    return _Parser(text, nvars, field).parse()

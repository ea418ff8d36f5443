"""Buchberger's algorithm over prime fields (and, for small inputs, QQ).

Monomials are packed into Python integers so that comparison under the
active monomial order is integer comparison and monomial multiplication is
integer addition.  Each order is a lexicographic comparison of integer
"digit" vectors that depend linearly on the exponents (for grevlex:
``(deg, -e[n-1], ..., -e[0])``); the digits are stored in base ``2**16``
with signed digit values, which keeps the encoding additive and order
preserving as long as every digit stays below ``2**15`` in magnitude.

Divisibility uses a second packing of the plain exponents with one guard
bit per field: ``u | v`` iff ``(pack(v) - pack(u)) & GUARD == 0``.

Pair handling follows Gebauer-Moeller (product and chain criteria) with the
normal selection strategy (smallest lcm first).
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .algebra import GREVLEX, QQ, Field, MonomialOrder, MVPoly, PrimeField, RationalField, GF
from .prng import SplitMix64

__all__ = [
    "Budget",
    "BudgetExceeded",
    "NotZeroDimensional",
    "UnstableDegree",
    "Ideal",
    "GroebnerBasis",
    "buchberger",
    "staircase_dimension",
    "sliced_degree",
    "stable_sliced_degree",
    "solution_count",
    "cone_is_origin",
    "cone_dimension",
    "eliminate",
    "DegreeResult",
]

_E = 16
_B = 1 << _E
_HALF = _B >> 1


class BudgetExceeded(RuntimeError):
    """A Groebner computation hit one of its configured resource caps."""


class NotZeroDimensional(ValueError):
    """The (sliced) system still has positive-dimensional components."""


class UnstableDegree(RuntimeError):
    """Two independent (seed, prime) runs disagreed."""


@dataclass(frozen=True)
class Budget:
    """Resource caps; ``None`` means unlimited."""

    max_pairs: int | None = None
    max_degree: int | None = None
    max_seconds: float | None = None


UNLIMITED = Budget()


# ---------------------------------------------------------------------------
# Monomial packing
# ---------------------------------------------------------------------------


class _Packing:
    def __init__(self, nvars: int, order: MonomialOrder):
        self.n = nvars
        self.order = order
        kind = order.kind
        n = nvars
        # rows of the weight matrix, most significant first; each row is a
        # list of (variable, coefficient)
        if kind == "grevlex":
            rows = [[(i, 1) for i in range(n)]] + [[(i, -1)] for i in reversed(range(n))]
        elif kind == "grlex":
            rows = [[(i, 1) for i in range(n)]] + [[(i, 1)] for i in range(n)]
        elif kind == "lex":
            rows = [[(i, 1)] for i in range(n)]
        else:
            s = order.split
            rows = [[(i, 1) for i in range(s)]] + [[(i, -1)] for i in reversed(range(s))]
            rows += [[(i, 1) for i in range(s, n)]] + [[(i, -1)] for i in reversed(range(s, n))]
        self.rows = rows
        self.ndig = len(rows)
        # shift of variable i's unit contribution to the order key
        self.unit = [0] * n
        for r, row in enumerate(rows):
            pos = self.ndig - 1 - r
            for i, c in row:
                self.unit[i] += c << (_E * pos)
        self.guard = sum(1 << (_E * i + _E - 1) for i in range(n))
        self._decode: dict[int, int] = {}
        self._exps: dict[int, tuple] = {}

    def encode(self, exps: Sequence[int]) -> int:
        if any(e >= _HALF for e in exps) or sum(exps) >= _HALF:
            raise BudgetExceeded("exponent too large for the monomial packing")
        return sum(e * u for e, u in zip(exps, self.unit))

    def exps(self, key: int) -> tuple:
        e = self._exps.get(key)
        if e is None:
            e = self._digits_to_exps(self._signed_digits(key))
            self._exps[key] = e
        return e

    def div_pack(self, key: int) -> int:
        v = self._decode.get(key)
        if v is None:
            v = 0
            for i, x in enumerate(self.exps(key)):
                v |= x << (_E * i)
            self._decode[key] = v
        return v

    def _signed_digits(self, key: int) -> list[int]:
        digits = []
        v = key
        for _ in range(self.ndig):
            d = ((v + _HALF) & (_B - 1)) - _HALF
            digits.append(d)
            v = (v - d) >> _E
        digits.reverse()
        return digits

    def _digits_to_exps(self, digits: list[int]) -> tuple:
        e = [0] * self.n
        for row, d in zip(self.rows, digits):
            if len(row) == 1:
                i, c = row[0]
                e[i] = d * c
        return tuple(e)


# ---------------------------------------------------------------------------
# Internal polynomial representation: dict {key: coeff}
# ---------------------------------------------------------------------------


class _Ring:
    def __init__(self, nvars: int, order: MonomialOrder, field_: Field):
        if isinstance(field_, PrimeField):
            self.p = field_.p
        elif isinstance(field_, RationalField):
            self.p = 0
        else:
            raise TypeError(f"Groebner bases need GF(p) or QQ coefficients, got {field_}")
        self.field = field_
        self.nvars = nvars
        self.order = order
        self.pack = _Packing(nvars, order)

    def from_poly(self, f: MVPoly) -> dict:
        enc = self.pack.encode
        if self.p:
            return {enc(m): int(c) for m, c in f._terms.items()}
        return {enc(m): Fraction(c) for m, c in f._terms.items()}

    def to_poly(self, f: dict) -> MVPoly:
        ex = self.pack.exps
        return MVPoly._raw(self.nvars, self.field, {ex(k): c for k, c in f.items()})

    def monic(self, f: dict) -> dict:
        lead = max(f)
        c = f[lead]
        if self.p:
            p = self.p
            inv = pow(c, -1, p)
            return {k: v * inv % p for k, v in f.items()}
        return {k: v / c for k, v in f.items()}


class _Elem:
    """A monic basis element: leading key plus the tail as parallel lists."""

    __slots__ = ("lead", "dpack", "exps", "tail_keys", "tail_coeffs", "poly", "degree")

    def __init__(self, ring: _Ring, f: dict):
        lead = max(f)
        self.lead = lead
        self.poly = f
        pack = ring.pack
        self.dpack = pack.div_pack(lead)
        self.exps = pack.exps(lead)
        tail = [(k, v) for k, v in f.items() if k != lead]
        self.tail_keys = [k for k, _ in tail]
        self.tail_coeffs = [v for _, v in tail]
        self.degree = max(sum(pack.exps(k)) for k in f)


def _normal_form(ring: _Ring, f: dict, reducers: list[_Elem], full: bool = True) -> dict:
    """Reduce ``f`` (consumed) modulo monic ``reducers``."""
    pack = ring.pack
    guard = pack.guard
    div_pack = pack.div_pack
    p = ring.p
    rem: dict = {}
    red = [(g.dpack, g.lead, g.tail_keys, g.tail_coeffs) for g in reducers]
    while f:
        m = max(f)
        c = f.pop(m)
        dm = div_pack(m)
        for gd, gl, tk, tc in red:
            if not (dm - gd) & guard:
                q = m - gl
                get = f.get
                if p:
                    for k, v in zip(tk, tc):
                        kk = k + q
                        nv = (get(kk, 0) - c * v) % p
                        if nv:
                            f[kk] = nv
                        else:
                            f.pop(kk, None)
                else:
                    for k, v in zip(tk, tc):
                        kk = k + q
                        nv = get(kk, 0) - c * v
                        if nv:
                            f[kk] = nv
                        else:
                            f.pop(kk, None)
                break
        else:
            rem[m] = c
            if not full:
                rem.update(f)
                return rem
    return rem


def _lcm_exps(a: tuple, b: tuple) -> tuple:
    return tuple(x if x > y else y for x, y in zip(a, b))


def _divides(a: tuple, b: tuple) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _coprime(a: tuple, b: tuple) -> bool:
    return all(not (x and y) for x, y in zip(a, b))


# ---------------------------------------------------------------------------
# Public types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Ideal:
    generators: tuple
    order: MonomialOrder = GREVLEX

    def __init__(self, generators: Sequence[MVPoly], order: MonomialOrder = GREVLEX):
        gens = tuple(g for g in generators if not g.is_zero())
        if gens:
            n, F = gens[0].nvars, gens[0].field
            for g in gens:
                if g.nvars != n or g.field != F:
                    raise ValueError("generators must share variable count and field")
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "order", order)

    @property
    def nvars(self) -> int:
        return self.generators[0].nvars if self.generators else 0

    @property
    def field(self) -> Field:
        return self.generators[0].field if self.generators else QQ


@dataclass
class GroebnerStats:
    pairs_processed: int = 0
    zero_reductions: int = 0
    max_degree: int = 0
    seconds: float = 0.0


@dataclass
class GroebnerBasis:
    """A reduced Groebner basis (monic, sorted by leading monomial ascending)."""

    basis: list
    order: MonomialOrder
    nvars: int
    field: Field
    stats: GroebnerStats = field(default_factory=GroebnerStats)

    @property
    def leading_monomials(self) -> list[tuple]:
        return [g.leading_term(self.order)[0] for g in self.basis]

    def is_unit(self) -> bool:
        return any(g.is_constant() for g in self.basis)

    def reduce(self, f: MVPoly) -> MVPoly:
        """Normal form of ``f`` modulo the basis."""
        ring = _Ring(self.nvars, self.order, self.field)
        elems = [_Elem(ring, ring.from_poly(g)) for g in self.basis]
        return ring.to_poly(_normal_form(ring, ring.from_poly(f), elems))

    def contains(self, f: MVPoly) -> bool:
        return self.reduce(f).is_zero()

    def dimension(self) -> int:
        return staircase_dimension(self)

    def standard_monomials(self, limit: int | None = None) -> list[tuple]:
        """Monomials outside the leading-term ideal (zero-dimensional case only)."""
        return _standard_monomials(self.leading_monomials, self.nvars, limit)

    def count(self) -> int:
        """Number of standard monomials (solutions counted with multiplicity)."""
        if self.is_unit():
            return 0
        if staircase_dimension(self) > 0:
            raise NotZeroDimensional("ideal is positive-dimensional")
        return len(self.standard_monomials())

    def point(self) -> list | None:
        """The unique solution when the basis is ``{x_i - c_i}``; otherwise ``None``."""
        if len(self.basis) != self.nvars:
            return None
        sol = [None] * self.nvars
        for g in self.basis:
            if g.degree() != 1 or len(g) > 2:
                return None
            (m, _), *rest = g.terms(self.order)
            i = m.index(1)
            sol[i] = self.field.neg(rest[0][1]) if rest else self.field.zero
        return sol if all(s is not None for s in sol) else None

    def __len__(self):
        return len(self.basis)

    def __iter__(self):
        return iter(self.basis)


def _standard_monomials(leads: list[tuple], n: int, limit: int | None) -> list[tuple]:
    bounds = [None] * n
    for m in leads:
        nz = [i for i, e in enumerate(m) if e]
        if len(nz) == 1:
            i = nz[0]
            bounds[i] = m[i] if bounds[i] is None else min(bounds[i], m[i])
        elif not nz:
            return []
    if any(b is None for b in bounds):
        raise NotZeroDimensional("no pure power for some variable; quotient is infinite")
    out = []
    cur = [0] * n

    def rec(i):
        if i == n:
            t = tuple(cur)
            if not any(_divides(m, t) for m in leads):
                out.append(t)
                if limit is not None and len(out) > limit:
                    raise BudgetExceeded("standard monomial enumeration limit")
            return
        for e in range(bounds[i]):
            cur[i] = e
            # prune: a prefix already divisible by a lead stays divisible
            t = tuple(cur[: i + 1]) + (0,) * (n - i - 1)
            if any(_divides(m, t) for m in leads):
                break
            rec(i + 1)
        cur[i] = 0

    rec(0)
    return out


# ---------------------------------------------------------------------------
# Buchberger
# ---------------------------------------------------------------------------


def _run_buchberger(ring: _Ring, gens: list[dict], budget: Budget, stats: GroebnerStats):
    pack = ring.pack
    polys: list[_Elem] = []
    active: list[int] = []
    pairs: dict[tuple[int, int], int] = {}
    pair_lcm: dict[tuple[int, int], tuple] = {}
    start = time.perf_counter()

    def check_budget(deg):
        if budget.max_degree is not None and deg > budget.max_degree:
            raise BudgetExceeded(f"degree {deg} exceeds budget {budget.max_degree}")
        if budget.max_seconds is not None and time.perf_counter() - start > budget.max_seconds:
            raise BudgetExceeded(f"time budget of {budget.max_seconds}s exceeded")

    def add(h: dict):
        e = _Elem(ring, h)
        hidx = len(polys)
        polys.append(e)
        stats.max_degree = max(stats.max_degree, e.degree)
        check_budget(e.degree)
        he = e.exps
        lcms = {g: _lcm_exps(polys[g].exps, he) for g in active}
        # chain criterion on the new pairs; among equal lcms one survives
        pending = list(active)
        keep: list[int] = []
        while pending:
            g1 = pending.pop(0)
            l1 = lcms[g1]
            if _coprime(polys[g1].exps, he) or not any(
                _divides(lcms[g2], l1) for g2 in itertools.chain(pending, keep)
            ):
                keep.append(g1)
        # product criterion
        new_pairs = [g for g in keep if not _coprime(polys[g].exps, he)]
        # prune old pairs whose lcm is divisible by the new lead
        for pr in list(pairs):
            l = pair_lcm[pr]
            if _divides(he, l):
                a, b = pr
                if _lcm_exps(polys[a].exps, he) != l and _lcm_exps(polys[b].exps, he) != l:
                    del pairs[pr]
                    del pair_lcm[pr]
        for g in new_pairs:
            l = lcms[g]
            pairs[(g, hidx)] = pack.encode(l)
            pair_lcm[(g, hidx)] = l
        active[:] = [g for g in active if not _divides(he, polys[g].exps)]
        active.append(hidx)
        active.sort(key=lambda i: polys[i].lead)

    for f in gens:
        reducers = [polys[i] for i in active]
        r = _normal_form(ring, dict(f), reducers)
        if r:
            add(ring.monic(r))

    while pairs:
        pr = min(pairs, key=pairs.__getitem__)
        del pairs[pr]
        del pair_lcm[pr]
        stats.pairs_processed += 1
        if budget.max_pairs is not None and stats.pairs_processed > budget.max_pairs:
            raise BudgetExceeded(f"pair budget of {budget.max_pairs} exceeded")
        check_budget(0)
        a, b = polys[pr[0]], polys[pr[1]]
        l = _lcm_exps(a.exps, b.exps)
        lk = pack.encode(l)
        qa, qb = lk - a.lead, lk - b.lead
        s = {}
        p = ring.p
        for k, v in zip(a.tail_keys, a.tail_coeffs):
            s[k + qa] = v
        for k, v in zip(b.tail_keys, b.tail_coeffs):
            kk = k + qb
            nv = s.get(kk, 0) - v
            if p:
                nv %= p
            if nv:
                s[kk] = nv
            else:
                s.pop(kk, None)
        reducers = [polys[i] for i in active]
        r = _normal_form(ring, s, reducers)
        if r:
            add(ring.monic(r))
        else:
            stats.zero_reductions += 1

    # interreduce the minimal basis
    basis = [polys[i] for i in active]
    reduced = []
    for idx, g in enumerate(basis):
        others = basis[:idx] + basis[idx + 1:]
        tail = {k: v for k, v in zip(g.tail_keys, g.tail_coeffs)}
        tail_nf = _normal_form(ring, tail, others)
        tail_nf[g.lead] = 1 if ring.p else Fraction(1)
        reduced.append(tail_nf)
    reduced.sort(key=max)
    stats.seconds = time.perf_counter() - start
    return reduced


def buchberger(ideal: Ideal, budget: Budget | None = None) -> GroebnerBasis:
    """Reduced Groebner basis of ``ideal`` under ``ideal.order``."""
    budget = budget or UNLIMITED
    if not ideal.generators:
        return GroebnerBasis([], ideal.order, ideal.nvars, ideal.field)
    ring = _Ring(ideal.nvars, ideal.order, ideal.field)
    stats = GroebnerStats()
    gens = [ring.from_poly(g) for g in ideal.generators]
    # cheapest generators first
    gens.sort(key=lambda f: (max(f), len(f)))
    reduced = _run_buchberger(ring, gens, budget, stats)
    return GroebnerBasis([ring.to_poly(g) for g in reduced], ideal.order, ideal.nvars, ideal.field, stats)


def s_polynomial(f: MVPoly, g: MVPoly, order: MonomialOrder = GREVLEX) -> MVPoly:
    (mf, cf), (mg, cg) = f.leading_term(order), g.leading_term(order)
    l = _lcm_exps(mf, mg)
    F = f.field
    a = f.mul_monomial(tuple(x - y for x, y in zip(l, mf)), F.inv(cf))
    b = g.mul_monomial(tuple(x - y for x, y in zip(l, mg)), F.inv(cg))
    return a - b


def satisfies_buchberger_criterion(G: GroebnerBasis) -> bool:
    """Every S-polynomial of basis pairs reduces to zero (exhaustive check)."""
    for f, g in itertools.combinations(G.basis, 2):
        if not G.reduce(s_polynomial(f, g, G.order)).is_zero():
            return False
    return True


def is_reduced(G: GroebnerBasis) -> bool:
    leads = G.leading_monomials
    for g, lm in zip(G.basis, leads):
        if g.leading_term(G.order)[1] != G.field.one:
            return False
        for m in g.monomials():
            for other in leads:
                if other is not lm and _divides(other, m):
                    return False
    return True


# ---------------------------------------------------------------------------
# Dimension and counting
# ---------------------------------------------------------------------------


def staircase_dimension(G: GroebnerBasis) -> int:
    """Krull dimension of the quotient; ``-1`` for the unit ideal.

    The dimension is the size of a largest set of variables containing the
    support of no leading monomial, i.e. ``n`` minus a minimum hitting set
    of the leading-monomial supports.
    """
    if G.is_unit():
        return -1
    n = G.nvars
    supports = sorted({sum(1 << i for i, e in enumerate(m) if e) for m in G.leading_monomials}, key=lambda s: bin(s).count("1"))
    # drop supports containing another support
    minimal = []
    for s in supports:
        if not any((t & s) == t for t in minimal):
            minimal.append(s)
    best = [n]

    def hit(chosen: int, size: int, remaining: list[int]):
        if size >= best[0]:
            return
        rest = [s for s in remaining if not s & chosen]
        if not rest:
            best[0] = size
            return
        s = min(rest, key=lambda t: bin(t).count("1"))
        bits = s
        while bits:
            b = bits & -bits
            hit(chosen | b, size + 1, rest)
            bits ^= b

    hit(0, 0, minimal)
    return n - best[0]


def _to_prime_field(system: Sequence[MVPoly], prime: int) -> list[MVPoly]:
    F = GF(prime)
    out = []
    for f in system:
        if isinstance(f.field, PrimeField):
            if f.field.p != prime:
                raise ValueError("system already lives in a different prime field")
            out.append(f)
        else:
            out.append(f.change_field(F))
    return out


def random_affine_forms(nvars: int, count: int, seed: int, prime: int) -> list[MVPoly]:
    """``count`` affine-linear forms with seeded random coefficients mod ``prime``."""
    rng = SplitMix64(seed)
    F = GF(prime)
    forms = []
    for _ in range(count):
        terms = []
        for i in range(nvars):
            e = [0] * nvars
            e[i] = 1
            terms.append((tuple(e), rng.below(prime)))
        terms.append(((0,) * nvars, rng.below(prime)))
        forms.append(MVPoly(nvars, F, terms))
    return forms


def solution_count(system: Sequence[MVPoly], prime: int, budget: Budget | None = None) -> int:
    """Number of solutions (with multiplicity) of a zero-dimensional system mod ``prime``."""
    polys = _to_prime_field(system, prime)
    G = buchberger(Ideal(polys), budget)
    if G.is_unit():
        return 0
    if staircase_dimension(G) != 0:
        raise NotZeroDimensional(f"system has dimension {staircase_dimension(G)}")
    return len(G.standard_monomials())


def sliced_degree(
    system: Sequence[MVPoly],
    expected_dim: int,
    seed: int,
    prime: int,
    budget: Budget | None = None,
) -> int:
    """Degree of the affine variety of ``system`` via a generic linear slice."""
    if expected_dim < 0:
        raise ValueError("expected_dim must be non-negative")
    polys = _to_prime_field(system, prime)
    n = polys[0].nvars
    polys = polys + random_affine_forms(n, expected_dim, seed, prime)
    G = buchberger(Ideal(polys), budget)
    if G.is_unit():
        return 0
    dim = staircase_dimension(G)
    if dim != 0:
        raise NotZeroDimensional(
            f"sliced system has dimension {dim}; expected_dim={expected_dim} is too small or the slice is special"
        )
    return len(G.standard_monomials())


@dataclass
class DegreeResult:
    count: int | None
    runs: list[dict]
    status: str


def stable_sliced_degree(
    system: Sequence[MVPoly],
    expected_dim: int,
    seeds: Sequence[int],
    primes: Sequence[int],
    budget: Budget | None = None,
) -> DegreeResult:
    """Run :func:`sliced_degree` for each ``(seed, prime)`` and demand agreement.

    Raises :class:`UnstableDegree` on disagreement.
    """
    runs = []
    for seed, prime in zip(seeds, primes):
        t0 = time.perf_counter()
        c = sliced_degree(system, expected_dim, seed, prime, budget)
        runs.append({"seed": seed, "prime": prime, "count": c, "seconds": time.perf_counter() - t0})
    counts = {r["count"] for r in runs}
    if len(counts) != 1:
        raise UnstableDegree(f"slice counts disagree across runs: {runs}")
    return DegreeResult(runs[0]["count"], runs, "ok")


def cone_is_origin(system: Sequence[MVPoly], prime: int = 2**31 - 1, budget: Budget | None = None) -> bool:
    """True iff the homogeneous ``system`` vanishes only at the origin."""
    if not all(f.is_homogeneous() for f in system):
        raise ValueError("cone_is_origin needs homogeneous polynomials")
    polys = _to_prime_field(system, prime)
    G = buchberger(Ideal(polys), budget)
    # a homogeneous ideal has dimension 0 exactly when its zero set is {0}
    return staircase_dimension(G) <= 0


def cone_dimension(system: Sequence[MVPoly], prime: int = 2**31 - 1, budget: Budget | None = None) -> int:
    polys = _to_prime_field(system, prime)
    return staircase_dimension(buchberger(Ideal(polys), budget))


def eliminate(ideal: Ideal, keep: Sequence[int], budget: Budget | None = None) -> Ideal:
    """Generators of the elimination ideal ``I ∩ k[x_keep]``.

    Variables are permuted so the eliminated block comes first, a Groebner
    basis is computed under the block order, and the elements free of the
    eliminated variables are mapped back.  The result lives in the original
    ring (eliminated variables simply do not occur).
    """
    n = ideal.nvars
    keep = sorted(set(keep))
    drop = [i for i in range(n) if i not in keep]
    perm = drop + keep  # new position j holds old variable perm[j]

    def to_new(f: MVPoly) -> MVPoly:
        return MVPoly._raw(n, f.field, {tuple(m[perm[j]] for j in range(n)): c for m, c in f._terms.items()})

    inv = [0] * n
    for j, old in enumerate(perm):
        inv[old] = j

    def to_old(f: MVPoly) -> MVPoly:
        return MVPoly._raw(n, f.field, {tuple(m[inv[i]] for i in range(n)): c for m, c in f._terms.items()})

    order = MonomialOrder("elim", split=len(drop))
    G = buchberger(Ideal([to_new(g) for g in ideal.generators], order), budget)
    s = len(drop)
    kept = [g for g in G.basis if all(not any(m[:s]) for m in g.as_dict())]
    return Ideal([to_old(g) for g in kept], GREVLEX)

import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from sosdecomp.algebra import (
    GF,
    GREVLEX,
    GRLEX,
    LEX,
    QQ,
    QQI,
    FieldMismatchError,
    GaussianRational,
    MonomialOrder,
    MVPoly,
    coefficient_vector,
    evaluate,
    from_coefficient_vector,
    parse_poly,
    poly_arith,
)

from conftest import F7, FIELDS, polys, scalars

x0, x1, x2 = (MVPoly.var(i, 3) for i in range(3))
I = GaussianRational(0, 1)


# --- scalars ---------------------------------------------------------------


def test_gaussian_unit_squares_to_minus_one():
    assert I * I == -1
    assert (1 + I) * (1 - I) == 2
    assert (3 + 4 * I).norm() == 25


def test_gaussian_inverse_and_division():
    z = GaussianRational(Fraction(1, 2), -3)
    assert z * z.inverse() == 1
    assert (z / z) == 1
    with pytest.raises(ZeroDivisionError):
        GaussianRational(0, 0).inverse()


def test_gaussian_real_equals_rational():
    assert GaussianRational(Fraction(3, 4), 0) == Fraction(3, 4)
    assert QQI.convert(Fraction(3, 4)) == Fraction(3, 4)
    assert hash(GaussianRational(2, 0)) == hash(GaussianRational(2, 0))


def test_rationals_are_reduced():
    assert QQ.convert(Fraction(6, -4)) == Fraction(-3, 2)
    assert QQ.convert(0) == Fraction(0, 1)


def test_prime_field_validation():
    assert GF(5).convert(7) == 2
    assert GF(5).convert(-1) == 4
    with pytest.raises(ValueError):
        GF(9)
    with pytest.raises(ValueError):
        GF(2)
    with pytest.raises(ValueError):
        GF((1 << 62) + 135)  # past the 2^62 cap


def test_prime_field_inverse():
    F = GF(101)
    for a in range(1, 101):
        assert F.mul(a, F.inv(a)) == 1


# --- poly_arith examples ---------------------------------------------------


def test_difference_of_squares():
    assert (x0 + x1) * (x0 - x1) == x0**2 - x1**2
    assert poly_arith(x0 + x1, x0 - x1, "mul") == x0**2 - x1**2


def test_additive_identity():
    p = parse_poly("3*x0^2*x1 - 1/2*x1^3", 3)
    assert p + MVPoly.zero(3) == p
    assert poly_arith(p, MVPoly.zero(3), "add") == p


def test_mod5_product():
    F = GF(5)
    a = MVPoly.var(0, 1, F).scale(2)
    b = MVPoly.var(0, 1, F).scale(3)
    assert a * b == MVPoly.var(0, 1, F) ** 2


def test_scale_and_sub():
    p = x0 + 2 * x1
    assert poly_arith(p, Fraction(1, 2), "scale") == parse_poly("1/2*x0 + x1", 3)
    assert poly_arith(p, p, "sub").is_zero()


def test_mismatch_errors():
    with pytest.raises(ValueError):
        MVPoly.var(0, 2) + MVPoly.var(0, 3)
    with pytest.raises(FieldMismatchError):
        MVPoly.var(0, 2, QQ) + MVPoly.var(0, 2, F7)


def test_canonical_form_has_no_zeros():
    p = MVPoly(2, QQ, [((1, 0), 1), ((1, 0), -1), ((0, 1), 0)])
    assert p.is_zero()
    assert p.degree() == -1
    assert len(p) == 0


# --- evaluate / coefficient vectors ---------------------------------------


def test_evaluate_examples():
    circle = parse_poly("x0^2 + x1^2", 2)
    assert evaluate(circle, [1, 0]) == 1
    assert evaluate(circle, [Fraction(3, 5), Fraction(4, 5)]) == 1
    assert evaluate(MVPoly.zero(2), [5, 7]) == 0
    with pytest.raises(ValueError):
        evaluate(circle, [1])


def test_coefficient_vector_examples():
    basis = [(2, 0), (1, 1), (0, 2)]
    p = parse_poly("x0^2 + 2*x0*x1", 2)
    assert coefficient_vector(p, basis) == [1, 2, 0]
    assert coefficient_vector(MVPoly.zero(2), basis) == [0, 0, 0]
    assert from_coefficient_vector([1, 2, 0], basis) == p
    with pytest.raises(KeyError):
        coefficient_vector(parse_poly("x0", 2), basis)


# --- parser ---------------------------------------------------------------


def test_parser_grammar():
    p = parse_poly(" 3 * x0^2*x1 -1/2*x1 ^3 ", 2)
    assert p.coefficient((2, 1)) == 3
    assert p.coefficient((0, 3)) == Fraction(-1, 2)
    assert parse_poly("(x0 + x1)^2", 2) == parse_poly("x0^2 + 2*x0*x1 + x1^2", 2)
    assert parse_poly("x0 + i*x1").field == QQI
    with pytest.raises(ValueError):
        parse_poly("x0 + i", 1, QQ)
    with pytest.raises(ValueError):
        parse_poly("x0 +* x1", 2)


@given(polys(QQ))
def test_print_parse_roundtrip_rational(p):
    assert parse_poly(p.to_str(), p.nvars, QQ) == p


@given(polys(QQI))
def test_print_parse_roundtrip_gaussian(p):
    assert parse_poly(p.to_str(), p.nvars, QQI) == p


# --- ring axioms ----------------------------------------------------------


@pytest.mark.parametrize("name", sorted(FIELDS))
def test_ring_axioms_200_triples(name):
    F = FIELDS[name]
    rng = random.Random(20240601)

    def rand_poly():
        terms = []
        for _ in range(rng.randint(0, 4)):
            e = tuple(rng.randint(0, 2) for _ in range(3))
            if F == QQ:
                c = Fraction(rng.randint(-5, 5), rng.randint(1, 3))
            elif F == QQI:
                c = GaussianRational(rng.randint(-3, 3), rng.randint(-3, 3))
            else:
                c = rng.randrange(F.p)
            terms.append((e, c))
        return MVPoly(3, F, terms)

    for _ in range(200):
        a, b, c = rand_poly(), rand_poly(), rand_poly()
        assert (a + b) + c == a + (b + c)
        assert a + b == b + a
        assert a * (b + c) == a * b + a * c
        assert (a * b) * c == a * (b * c)
        assert a - a == MVPoly.zero(3, F)
        # canonicalization is idempotent
        assert MVPoly(3, F, (a * b).as_dict()) == a * b


@given(st.sampled_from(sorted(FIELDS)).flatmap(lambda n: st.tuples(polys(FIELDS[n]), polys(FIELDS[n]), st.just(n))))
def test_evaluate_is_a_homomorphism(args):
    a, b, name = args
    F = FIELDS[name]
    point = [F.convert(v) for v in (2, Fraction(1, 3) if F != F7 else 3, 5)]
    ea, eb = evaluate(a, point), evaluate(b, point)
    assert evaluate(a * b, point) == F.mul(ea, eb)
    assert evaluate(a + b, point) == F.add(ea, eb)


@given(polys(QQ), polys(QQ))
def test_derivative_product_rule(a, b):
    for i in range(3):
        assert (a * b).diff(i) == a.diff(i) * b + a * b.diff(i)


def test_compose_substitution():
    p = parse_poly("x0^2 - x1", 2)
    q = p.compose([parse_poly("x0 + x1", 2), parse_poly("x0*x1", 2)])
    assert q == parse_poly("x0^2 + x0*x1 + x1^2", 2)


# --- monomial orders ------------------------------------------------------

ORDERS = [GREVLEX, GRLEX, LEX, MonomialOrder("elim", 2)]


@pytest.mark.parametrize("order", ORDERS, ids=repr)
def test_order_multiplicative_1000_triples(order):
    rng = random.Random(7)
    for _ in range(1000):
        u, v, w = (tuple(rng.randint(0, 4) for _ in range(4)) for _ in range(3))
        c = order.compare(u, v)
        uw = tuple(a + b for a, b in zip(u, w))
        vw = tuple(a + b for a, b in zip(v, w))
        assert order.compare(uw, vw) == c
        assert order.compare(v, u) == -c
        # 1 is minimal
        assert order.compare((0,) * 4, u) <= 0


@pytest.mark.parametrize("order", ORDERS, ids=repr)
def test_order_total_and_transitive(order):
    rng = random.Random(11)
    mons = sorted({tuple(rng.randint(0, 3) for _ in range(4)) for _ in range(60)}, key=order.key)
    for a, b in zip(mons, mons[1:]):
        assert order.compare(a, b) < 0


def test_order_examples():
    # x0*x2 vs x1^2 separates grevlex from grlex
    assert GREVLEX.compare((1, 0, 1), (0, 2, 0)) < 0
    assert GRLEX.compare((1, 0, 1), (0, 2, 0)) > 0
    assert LEX.compare((1, 0, 0), (0, 5, 5)) > 0


def test_leading_term_and_terms_sorted():
    p = parse_poly("x1^2 + x0*x2 + x0", 3)
    assert p.leading_term(GREVLEX)[0] == (0, 2, 0)
    assert p.leading_term(LEX)[0] == (1, 0, 1)
    mons = p.monomials(GREVLEX)
    assert all(GREVLEX.compare(a, b) > 0 for a, b in zip(mons, mons[1:]))


@given(scalars(QQI).filter(bool))
def test_gaussian_field_inverse(z):
    assert QQI.mul(z, QQI.inv(z)) == 1

import random
from math import comb

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from sosdecomp.algebra import GF, GREVLEX, LEX, QQ, MVPoly, parse_poly
from sosdecomp.formulas import deg_orthogonal
from sosdecomp.groebner import (
    Budget,
    BudgetExceeded,
    Ideal,
    NotZeroDimensional,
    UnstableDegree,
    buchberger,
    cone_is_origin,
    eliminate,
    is_reduced,
    s_polynomial,
    satisfies_buchberger_criterion,
    sliced_degree,
    solution_count,
    stable_sliced_degree,
    staircase_dimension,
)
from sosdecomp import groebner as gb_module
from sosdecomp.sosring import _monomials, _product_table, cone_system, gram_fiber_system, random_instance, sos_variety_system

P = 2**31 - 1
F = GF(32003)


def polys(texts, nvars, field=QQ):
    return [parse_poly(t, nvars, field) for t in texts]


# --- buchberger --------------------------------------------------------------


def test_univariate_gcd():
    G = buchberger(Ideal(polys(["x0^2 - 1", "x0 - 1"], 1)))
    assert G.basis == polys(["x0 - 1"], 1)


def test_circle_and_line():
    G = buchberger(Ideal(polys(["x0^2 + x1^2 - 1", "x0 - x1"], 2)))
    assert len(G.standard_monomials()) == 2
    assert staircase_dimension(G) == 0


def test_idempotent():
    G = buchberger(Ideal(polys(["x0^2 + x1*x2 - 1", "x1^2 - x0*x2", "x2^3 - x0"], 3)))
    H = buchberger(Ideal(G.basis))
    assert H.basis == G.basis


def test_membership():
    gens = polys(["x0^2 - x1", "x1^2 - x2"], 3)
    G = buchberger(Ideal(gens))
    assert G.contains(gens[0] * parse_poly("x2 + 5", 3) + gens[1] * parse_poly("x0", 3))
    assert not G.contains(parse_poly("x0", 3))


def test_unit_ideal():
    G = buchberger(Ideal(polys(["x0*x1 - 1", "x0"], 2)))
    assert G.is_unit()
    assert staircase_dimension(G) == -1


def test_reads_unique_point():
    G = buchberger(Ideal(polys(["x0 + x1 - 3", "x0 - x1 - 1"], 2)))
    assert G.point() == [2, 1]


def to_sympy(ps, nvars):
    xs = sympy.symbols(f"x0:{nvars}")
    env = {str(x): x for x in xs}
    return [sympy.sympify(p.to_str().replace("^", "**"), locals=env) for p in ps], xs


def random_system(rng, nvars, count, deg):
    out = []
    for _ in range(count):
        terms = []
        for _ in range(rng.randint(2, 4)):
            e = [0] * nvars
            for _ in range(rng.randint(1, deg)):
                e[rng.randrange(nvars)] += 1
            terms.append((tuple(e), rng.randint(-5, 5)))
        terms.append(((0,) * nvars, rng.randint(-3, 3)))
        p = MVPoly(nvars, QQ, terms)
        if not p.is_zero():
            out.append(p)
    return out


@pytest.mark.parametrize("seed", range(12))
@pytest.mark.parametrize("order", ["grevlex", "lex"])
def test_matches_sympy_over_rationals(seed, order):
    rng = random.Random(seed)
    system = random_system(rng, 3, 3, 2)
    mo = GREVLEX if order == "grevlex" else LEX
    G = buchberger(Ideal(system, mo))
    exprs, xs = to_sympy(system, 3)
    ref = sympy.groebner(exprs, *xs, order=order)
    ours, _ = to_sympy(G.basis, 3)

    def monic(es):
        return {sympy.Poly(e, *xs, domain="QQ").monic().as_expr() for e in es}

    assert monic(ours) == monic(ref.exprs)


@pytest.mark.parametrize("seed", range(8))
def test_matches_sympy_mod_p(seed):
    rng = random.Random(100 + seed)
    system = [p.change_field(F) for p in random_system(rng, 3, 3, 3)]
    G = buchberger(Ideal(system))
    exprs, xs = to_sympy([p.change_field(F) for p in system], 3)
    ref = sympy.groebner(exprs, *xs, order="grevlex", modulus=32003)
    assert len(G.basis) == len(ref.exprs)
    ours = sympy.groebner(to_sympy(G.basis, 3)[0], *xs, order="grevlex", modulus=32003)
    assert ours.exprs == ref.exprs


@settings(max_examples=40)
@given(st.integers(0, 10**6))
def test_s_pair_criterion_and_reducedness(seed):
    rng = random.Random(seed)
    system = [p.change_field(F) for p in random_system(rng, 3, rng.randint(1, 4), 3)]
    if not system:
        return
    G = buchberger(Ideal(system))
    assert satisfies_buchberger_criterion(G)
    assert is_reduced(G)
    for g in system:
        assert G.contains(g)


def test_s_polynomial_cancels_leads():
    f, g = polys(["x0^2*x1 - 1", "x0*x1^2 - x0"], 2)
    s = s_polynomial(f, g)
    assert s == parse_poly("x0^2 - x1", 2)


def test_budget_is_explicit():
    system = sos_variety_system(random_instance(3, 1, 3, 1).f, 3, 1, 3)
    with pytest.raises(BudgetExceeded):
        buchberger(Ideal([p.change_field(F) for p in system]), Budget(max_pairs=5))
    with pytest.raises(BudgetExceeded):
        buchberger(Ideal([p.change_field(F) for p in system]), Budget(max_degree=2))


# --- dimension --------------------------------------------------------------------


def test_staircase_examples():
    assert staircase_dimension(buchberger(Ideal(polys(["x0*x1"], 2)))) == 1
    assert staircase_dimension(buchberger(Ideal(polys(["x0*x1", "x2"], 4)))) == 2
    assert staircase_dimension(buchberger(Ideal(polys(["x0^2 - x1^3"], 2)))) == 1


def test_sos2_fiber_dimension():
    f = random_instance(2, 1, 2, 3).f
    system = [p.change_field(GF(P)) for p in sos_variety_system(f, 2, 1, 2)]
    assert staircase_dimension(buchberger(Ideal(system))) == comb(2, 2)


# --- slicing and counting ------------------------------------------------------------


def test_sliced_conic():
    assert sliced_degree(polys(["x0^2 + x1^2 - 1"], 2), 1, 1, P) == 2


def test_sliced_twisted_cubic():
    # affine cone over the twisted cubic: degree 3, dimension 2
    cubic = polys(["x0*x2 - x1^2", "x1*x3 - x2^2", "x0*x3 - x1*x2"], 4)
    assert sliced_degree(cubic, 2, 5, P) == 3


@pytest.mark.parametrize("n,d,k", [(2, 1, 2), (3, 1, 2), (2, 2, 2)])
def test_sliced_degree_equals_deg_o(n, d, k):
    f = random_instance(n, d, k, 11).f
    system = sos_variety_system(f, n, d, k)
    res = stable_sliced_degree(system, comb(k, 2), [1, 2], [P, 1000003])
    assert res.count == deg_orthogonal(k)
    assert res.count % deg_orthogonal(k) == 0


def test_sliced_degree_too_small_dimension():
    with pytest.raises(NotZeroDimensional):
        sliced_degree(polys(["x0^2 + x1^2 + x2^2 - 1"], 3), 1, 1, P)


def test_unstable_is_reported(monkeypatch):
    counts = iter([4, 5])
    monkeypatch.setattr(gb_module, "sliced_degree", lambda *a, **k: next(counts))
    with pytest.raises(UnstableDegree):
        stable_sliced_degree([], 1, [1, 2], [P, 1000003])


def test_solution_count_examples():
    assert solution_count(polys(["x0^2 - 1"], 1), P) == 2
    assert solution_count(polys(["x0^2 + 1", "x0 - x0"], 1), P) == 2
    with pytest.raises(NotZeroDimensional):
        solution_count(polys(["x0*x1"], 2), P)


def test_gram_fiber_single_point_and_product_structure():
    f = random_instance(2, 2, 2, 1).f
    count = solution_count(gram_fiber_system(f, 2, 2, 2), P)
    assert count == 1
    degree = sliced_degree(sos_variety_system(f, 2, 2, 2), 1, 1, P)
    assert count * deg_orthogonal(2) == degree


# --- cones --------------------------------------------------------------------------------


def test_cone_examples():
    assert cone_is_origin(polys(["x0", "x1"], 2))
    assert not cone_is_origin(polys(["x0*x1"], 2))
    with pytest.raises(ValueError):
        cone_is_origin(polys(["x0 - 1"], 1))


@pytest.mark.parametrize("k,empty", [(1, True), (2, True), (3, False)])
def test_rank_cones_meet_c(k, empty):
    assert cone_is_origin(cone_system(2, 2, k)) is empty


# --- elimination ---------------------------------------------------------------------------


def test_eliminate_parabola():
    E = eliminate(Ideal(polys(["x1 - x0^2"], 2)), [1])
    assert E.generators == ()


def test_eliminate_veronese_conic():
    # (a, b) -> (a^2, ab, b^2); variables w1, w2, w3, a, b
    gens = polys(["x0 - x3^2", "x1 - x3*x4", "x2 - x4^2"], 5)
    E = eliminate(Ideal(gens), [0, 1, 2])
    assert [g.monic() for g in E.generators] == [parse_poly("x1^2 - x0*x2", 5)]


def test_deg_sos1_by_elimination():
    # image of a -> coefficients of (a0 x0 + a1 x1 + a2 x2)^2; w-variables first
    nv = 9
    a = [MVPoly.var(6 + i, nv) for i in range(3)]
    gens = []
    for j, m in enumerate(_monomials(3, 2)):
        c = MVPoly.zero(nv)
        for p, q in _product_table(2, 1)[m]:
            c = c + a[p] * a[q]
        gens.append(MVPoly.var(j, nv) - c)
    E = eliminate(Ideal(gens), range(6))
    image = [MVPoly(6, QQ, {e[:6]: c for e, c in g.as_dict().items()}) for g in E.generators]
    assert sliced_degree(image, 3, 1, P) == 4 == 2 ** (3 - 1)

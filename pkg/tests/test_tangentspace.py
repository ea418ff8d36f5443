import json
import random
from math import comb

import pytest

from sosdecomp.algebra import QQ, MVPoly, coefficient_vector, parse_poly
from sosdecomp.formulas import dim_sos_upper
from sosdecomp.linalg import Matrix, cayley_orthogonal, rank_nullspace
from sosdecomp.sosring import _monomials, instance_from_rows, powers_instance, random_instance
from sosdecomp.tangentspace import (
    DependentRowsError,
    analyze_tangent,
    image_dimension,
    jacobian_matrix,
    koszul_basis,
    only_koszul,
    tangent_nullity,
)


def expand_differential(inst, V: Matrix) -> list:
    """Coefficients of x(A^t V + V^t A)x^t, computed by polynomial expansion."""
    basis = inst.basis.monomials
    total = MVPoly.zero(inst.n + 1)
    for fi, row in zip(inst.rows, V.tolist()):
        gi = MVPoly(inst.n + 1, QQ, zip(basis, row))
        total = total + 2 * fi * gi
    return coefficient_vector(total, _monomials(inst.n + 1, 2 * inst.d))


def test_jacobian_shape():
    inst = random_instance(2, 2, 3, 1)
    J = jacobian_matrix(inst)
    assert J.shape == (comb(2 + 4, 4), 3 * 6)


def test_jacobian_single_square():
    inst = instance_from_rows([parse_poly("x0^2", 2)], 1, 2)
    J = jacobian_matrix(inst)
    # d/dV of (x0^2)^2 at V = e_j is 2 x0^2 w_j: a scaled identity block on the x0^2 multiples
    rows = _monomials(2, 4)
    expected = [[0] * 3 for _ in rows]
    for j, w in enumerate(inst.basis.monomials):
        expected[rows.index((w[0] + 2, w[1]))][j] = 2
    assert J == Matrix(expected)


@pytest.mark.parametrize("seed", range(5))
def test_jacobian_matches_expansion_50_directions(seed):
    inst = random_instance(2, 2, 2, seed)
    J = jacobian_matrix(inst)
    rng = random.Random(seed)
    for _ in range(10):
        V = Matrix([[rng.randint(-4, 4) for _ in range(inst.N)] for _ in range(inst.k)])
        vec = [x for row in V.tolist() for x in row]
        assert J.apply(vec) == expand_differential(inst, V)


def test_skew_direction_maps_to_zero():
    inst = random_instance(3, 1, 3, 2)
    S = Matrix([[0, 2, -1], [-2, 0, 3], [1, -3, 0]])
    V = S @ inst.A
    vec = [x for row in V.tolist() for x in row]
    assert all(x == 0 for x in jacobian_matrix(inst).apply(vec))


def test_koszul_examples():
    inst = random_instance(2, 1, 2, 4)
    (t,) = koszul_basis(inst)
    f1, f2 = inst.rows
    assert t.g == (f2, -f1)
    inst3 = random_instance(3, 1, 3, 4)
    tuples = koszul_basis(inst3)
    assert len(tuples) == 3
    vecs = [t.vector(inst3.basis.monomials) for t in tuples]
    assert rank_nullspace(Matrix(vecs))[0] == 3


def test_koszul_rejects_dependent_rows():
    f = parse_poly("x0*x1", 3)
    with pytest.raises(DependentRowsError):
        koszul_basis(instance_from_rows([f, f], 2, 2))


@pytest.mark.parametrize("n,d,k", [(2, 1, 2), (3, 2, 3), (4, 1, 4), (2, 3, 2)])
def test_koszul_in_kernel(n, d, k):
    for seed in range(5):
        inst = random_instance(n, d, k, seed)
        J = jacobian_matrix(inst)
        for t in koszul_basis(inst):
            assert all(x == 0 for x in J.apply(t.vector(inst.basis.monomials)))


def test_nullity_examples():
    assert tangent_nullity(random_instance(3, 2, 1, 1)) == 0
    assert tangent_nullity(random_instance(3, 2, 3, 1)) == 3


@pytest.mark.parametrize("n,d,k", [(n, d, k) for n in range(1, 5) for d in range(1, 4) for k in range(1, n + 1)])
def test_powers_instance_only_koszul(n, d, k):
    inst = powers_instance(n, d, k)
    assert tangent_nullity(inst) == comb(k, 2)
    assert only_koszul(inst)


def test_degenerate_instance_is_flagged():
    f1 = parse_poly("x0*x1", 3)
    inst = instance_from_rows([f1, f1, parse_poly("x2^2", 3)], 2, 2)
    rep = analyze_tangent(inst)
    assert not rep.generic
    assert rep.nullity > comb(3, 2)
    assert rep.extra_vector is not None
    J = jacobian_matrix(inst)
    assert all(x == 0 for x in J.apply(rep.extra_vector))
    assert not only_koszul(inst)


def test_modular_certificate_agrees_with_exact_rank():
    for seed in range(6):
        inst = random_instance(3, 2, 2, seed)
        rep = analyze_tangent(inst)
        r, _ = rank_nullspace(jacobian_matrix(inst))
        assert rep.nullity == inst.k * inst.N - r


def test_image_dimension_examples():
    assert image_dimension(random_instance(2, 1, 2, 1)) == 5 == dim_sos_upper(2, 1, 2)
    assert image_dimension(random_instance(3, 1, 3, 1)) == 9
    for n, d in [(1, 1), (2, 2), (3, 1)]:
        inst = random_instance(n, d, 1, 2)
        assert image_dimension(inst) == inst.N


def test_rank_nullity_on_reports():
    for seed in range(5):
        inst = random_instance(3, 1, 2, seed)
        assert image_dimension(inst) + tangent_nullity(inst) == inst.k * inst.N


@pytest.mark.parametrize("flip", [False, True])
def test_nullity_constant_on_orbit(flip):
    inst = random_instance(3, 1, 3, 8)
    O = cayley_orthogonal(Matrix([[0, 1, 2], [-1, 0, -3], [-2, 3, 0]]), flip)
    assert tangent_nullity(inst.transformed(O)) == tangent_nullity(inst)


def test_report_json():
    rep = analyze_tangent(random_instance(2, 1, 2, 3))
    doc = json.loads(rep.to_json())
    assert doc["nullity"] == 1 and doc["expected"] == 1 and doc["generic"] is True
    assert doc["seed"] == 3

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gpsthin.bending import (
    assemble_bent_generators,
    bending_matrix,
    build_unitary_setup,
    certify_bending_in_su,
    certify_centralizer,
    certify_unit,
    diagonal_bending_matrix,
    find_bending_unit,
    fundamental_unit_quadratic,
    unit_conditions,
)
from gpsthin.errors import DegreeOne, MemberNotUnitary, NotAStabilizer, SignConditionFailed
from gpsthin.forms import DiagonalForm, block_embed, sample_isometries
from gpsthin.gps import GpsParameters, build_gps_instance, transport_isometry
from gpsthin.linalg import TowerMatrix
from gpsthin.numfield import adjoin_sqrt, is_algebraic_integer


def test_unit_sqrt2(Q2):
    unit = find_bending_unit(Q2, 50)
    assert unit.u == Q2.element([3, 2])
    assert fundamental_unit_quadratic(Q2, 50) in (Q2.element([1, 1]), Q2.element([-1, 1]),
                                                  Q2.element([1, -1]), Q2.element([-1, -1]))


def test_unit_golden(Q5):
    unit = find_bending_unit(Q5, 50)
    assert unit_conditions(unit.u)[0]
    # θ² = θ + 1 has norm -1, so the first admissible unit is its square 1 + θ
    assert unit.u == Q5.element([1, 1])


def test_unit_brute_force(Q2):
    # shell order finds -1-√2 first: |σ0| ≈ 2.414, |σ1| ≈ 0.414, norm -1
    u = find_bending_unit(Q2, 5, tier="brute_force").u
    assert u == Q2.element([-1, -1])
    assert unit_conditions(Q2.element([1, 1]))[0]


def test_unit_degree_one(Q):
    with pytest.raises(DegreeOne):
        find_bending_unit(Q, 10)


def test_unit_rejections(Q2):
    for bad in ([2, 0], [-2, 0], [0, 1], [2, 1], [1, 0]):
        with pytest.raises(SignConditionFailed):
            certify_unit(Q2.element(bad))
    # 2 + √2 has the right signs but norm 2, so 1/u is not integral
    ok, _, witness = unit_conditions(Q2.element([2, 1]))
    assert not ok and witness["u_integral"] and not witness["u_inverse_integral"]


def test_setup_canonical(canonical_setup):
    st_ = canonical_setup
    L, M = st_.L, st_.M
    assert st_.u == L.element([3, 2])
    assert M.radicand == L.element([13, 12])
    assert all(c.passed for c in st_.checks)
    v = st_.root
    assert v * st_.involution(v) == 1
    assert v ** -3 * st_.involution(v) ** -3 == 1
    # u^-3 = 99 - 70√2
    assert st_.u ** -3 == L.element([99, -70])


def test_bending_matrix_canonical(canonical_setup):
    c = bending_matrix(canonical_setup, 3)
    assert c.det() == 1
    checks = certify_bending_in_su(canonical_setup, c)
    assert all(ch.passed for ch in checks)
    assert is_algebraic_integer(c[0, 0]) and is_algebraic_integer(c[0, 0].inverse())


def test_degenerate_parameter_gives_identity(canonical_setup):
    M = canonical_setup.M
    assert diagonal_bending_matrix(M.one, 3) == TowerMatrix.identity(4, M)


def test_non_unit_fails_integrality(canonical_setup, canonical):
    M = canonical_setup.M
    c = diagonal_bending_matrix(M.element(2), 3)
    checks = {ch.name: ch for ch in certify_bending_in_su(canonical_setup, c)}
    assert not checks["bending.c_integral"].passed
    assert checks["bending.c_integral"].witness["entry"] == [1, 1]
    assert checks["bending.c_integral"].witness["value"] == M.element(Fraction(1, 8))
    assert not checks["bending.c_preserves_hermitian_form"].passed


def test_identity_is_special_unitary(canonical_setup):
    I = TowerMatrix.identity(4, canonical_setup.M)
    assert all(ch.passed for ch in certify_bending_in_su(canonical_setup, I))


def test_centralizer(canonical, canonical_setup, Q):
    c = bending_matrix(canonical_setup, 3)
    ws = [block_embed(g) for g in sample_isometries(canonical.J1.restricted(), 1, 3)]
    assert certify_centralizer(c, canonical.J1, ws).passed
    assert certify_centralizer(c, canonical.J1, []).passed
    off = next(g for g in sample_isometries(canonical.J1, 2, None) if not g[1, 0].is_zero())
    with pytest.raises(NotAStabilizer):
        certify_centralizer(c, canonical.J1, [off])


def test_bent_assembly(canonical, canonical_setup, Q):
    c = bending_matrix(canonical_setup, 3)
    bent = assemble_bent_generators([], TowerMatrix.identity(4, Q), c, canonical_setup)
    assert bent.bent == [c]
    hat = sample_isometries(canonical.J1, 1, 2)
    s = transport_isometry(canonical, sample_isometries(canonical.J2, 1, 2)[1])
    bent = assemble_bent_generators(hat, s, c, canonical_setup)
    assert len(bent.bent) == 3 and bent.checks[0].passed
    half = TowerMatrix.diag([2, Fraction(1, 2), 1, 1], Q)
    with pytest.raises(MemberNotUnitary):
        assemble_bent_generators([], half, c, canonical_setup)


@settings(max_examples=20, deadline=None)
@given(st.integers(-4, 4), st.integers(-4, 4))
def test_one_parameter_law(canonical_setup, a, b):
    v = canonical_setup.root
    ca = diagonal_bending_matrix(v ** a, 3)
    cb = diagonal_bending_matrix(v ** b, 3)
    assert ca @ cb == diagonal_bending_matrix(v ** (a + b), 3)


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_bending_any_dimension(Q, n):
    inst = build_gps_instance(GpsParameters.make(Q, 1, 2, [1] * (n - 1), 1))
    setup = build_unitary_setup(inst, find_bending_unit(inst.L, 50))
    c = bending_matrix(setup, n)
    assert c.nrows == n + 1
    assert all(ch.passed for ch in certify_bending_in_su(setup, c))

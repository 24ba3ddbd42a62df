import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from polarbrauer.uea import (
    PBW,
    SolveUnderdetermined,
    UeaMatrix,
    casimir,
    central_scalar,
    centre_surjectivity_check,
    char_identity,
    closure,
    commutator,
    e_matrix,
    gelfand,
    harmonic_irrep,
    i3_matches_closure,
    identity_on,
    is_central,
    jacobi_ok,
    pushed_closure,
    rep_matrix,
    sl2_irrep,
    sl2_lie,
    so3_irrep,
    so4_irrep,
    so_lie,
    verma_pair_trace,
    z_image,
    z_separation,
)

SL2 = sl2_lie()
Y, T, X = (PBW.gen(SL2, i) for i in range(3))


def test_sl2_brackets():
    assert commutator(X, Y) == T
    assert commutator(T, X) == 2 * X
    assert commutator(T, Y) == -2 * Y
    assert str(X * Y) == "Y*X + T"
    word = X * T * Y * Y
    assert str(word) == "Y^2*T*X - 6*Y^2*X + 2*Y*T^2 - 10*Y*T + 8*Y"
    y, t, x = sl2_irrep(SL2, 4)
    assert (rep_matrix(SL2, [y, t, x], word) == x.dot(t).dot(y).dot(y)).all()


def test_jacobi():
    assert jacobi_ok(SL2) and jacobi_ok(so_lie(4))


def test_sl2_casimir():
    c = casimir(SL2)
    assert c == -4 * Y * X - T * T - 2 * T
    assert is_central(c)
    e = e_matrix(SL2)
    assert (e.power(2) + e.scale_left(PBW.scalar(SL2, -2)) + UeaMatrix.scalar(SL2, 2, c)).is_zero()
    assert closure(e.power(2)) == 2 * c


def test_sl2_derived_identity():
    ci = char_identity(SL2)
    assert ci.coeffs == [{0: -2}, {1: 1}]
    assert all(identity_on(ci, sl2_irrep(SL2, lam)) for lam in range(5))


@pytest.mark.parametrize("lam", [Fraction(1, 2), 0, 1, Fraction(-7, 3)])
def test_verma_traces(lam):
    assert verma_pair_trace(lam) == 2


def test_so3_identity():
    so3 = so_lie(3)
    ci = char_identity(so3)
    # (E + 1)(E^2 + E - C) = 0
    assert ci.coeffs == [{0: 2}, {0: 1, 1: -1}, {1: -1}]
    assert ci.report.passed
    assert all(identity_on(ci, so3_irrep(so3, lam)) for lam in range(3))


def test_so4_needs_more_than_casimir():
    with pytest.raises(SolveUnderdetermined):
        char_identity(so_lie(4))


@pytest.mark.parametrize("m", [3, 4])
def test_gelfand_invariants(m):
    lie = so_lie(m)
    assert z_image(lie, 2) == gelfand(2, lie)
    assert z_image(lie, 3) == -gelfand(3, lie)
    assert i3_matches_closure(m)


def test_so3_casimir_is_half_i2():
    so3 = so_lie(3)
    assert 2 * casimir(so3) == gelfand(2, so3)


def test_centre_ranks():
    assert centre_surjectivity_check(3).passed
    assert centre_surjectivity_check(5).passed


@pytest.mark.parametrize("ell", [1, 2, 3, 4])
def test_pushed_closure(ell):
    assert z_image(SL2, ell) == pushed_closure(SL2, ell)


def _random_pbw(rng, lie, terms=3, deg=2):
    out = PBW(lie)
    for _ in range(terms):
        term = PBW.scalar(lie, rng.randint(-3, 3))
        for _ in range(rng.randint(0, deg)):
            term = term * PBW.gen(lie, rng.randrange(lie.dim))
        out = out + term
    return out


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_pbw_associative(seed):
    rng = random.Random(seed)
    a, b, c = (_random_pbw(rng, SL2) for _ in range(3))
    assert (a * b) * c == a * (b * c)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6))
def test_casimir_commutes(seed):
    so3 = so_lie(3)
    z = _random_pbw(random.Random(seed), so3)
    assert commutator(casimir(so3), z).is_zero()


def test_so4_irrep_is_representation():
    from polarbrauer.superlin import mat_equal

    lie = so_lie(4)
    mats = so4_irrep(lie, 2, 1)
    assert mats[0].shape == (15, 15)
    for i in range(lie.dim):
        for j in range(lie.dim):
            lhs = mats[i].dot(mats[j]) - mats[j].dot(mats[i])
            rhs = sum((mats[k] * c for k, c in lie.bracket(i, j).items()), mats[0] * 0)
            assert mat_equal(lhs, rhs)


def test_z_values_agree_across_constructions():
    lie = so_lie(4)
    z2, z4 = z_image(lie, 2), z_image(lie, 4)
    for a, k in ((1, 2), (2, 4)):
        via_product = so4_irrep(lie, a, a)
        via_harmonic = harmonic_irrep(lie, k)
        for z in (z2, z4):
            assert central_scalar(lie, via_product, z) == central_scalar(lie, via_harmonic, z)
    assert central_scalar(lie, harmonic_irrep(lie, 1), z2) == 2 * (4 - 1)


def test_z_monomials_separate():
    rank4, values4 = z_separation(4)
    assert rank4 == 6
    assert values4 == [(0, 0), (8, 24), (16, 144), (24, 168), (32, 480), (48, 1200)]
    rank5, values5 = z_separation(5)
    assert rank5 == 6
    assert values5[1] == (8, 56)


@pytest.mark.parametrize("lie", [SL2, so_lie(3), so_lie(4), so_lie(5)], ids=["sl2", "so3", "so4", "so5"])
def test_casimir_commutes_with_basis(lie):
    c = casimir(lie)
    assert all(commutator(c, PBW.gen(lie, i)).is_zero() for i in range(lie.dim))


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10**6))
def test_pbw_associative_so5(seed):
    rng = random.Random(seed)
    so5 = so_lie(5)
    a, b, c = (PBW.gen(so5, rng.randrange(so5.dim)) for _ in range(3))
    d = PBW.gen(so5, rng.randrange(so5.dim)) * PBW.gen(so5, rng.randrange(so5.dim))
    assert ((a * b) * c) * d == a * (b * (c * d))

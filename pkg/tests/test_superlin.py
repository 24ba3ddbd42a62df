import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from polarbrauer.brauer import BrauerElem, compose, generator, identity, random_diagram
from polarbrauer.errors import CutoffExceeded
from polarbrauer.polar import parse_morphism
from polarbrauer.superlin import (
    EmptySpace,
    Evaluator,
    TEST_FAMILY,
    TruncVerma,
    adjoint_rep,
    brauer_matrix,
    cap_cup,
    e_matrix_v,
    exact_inverse,
    eye,
    functor_eval,
    hom_dim_weightzero,
    is_zero_mat,
    mat_equal,
    natural_rep,
    osp_build,
    osp_dimension,
    rank_exact,
    solve_coords,
    tau,
    tempered_casimir,
    verify_osp_suite,
    zeros,
)


def test_exact_helpers():
    a = np.array([[2, 1], [1, 1]], dtype=object)
    assert mat_equal(a.dot(exact_inverse(a)), eye(2))
    assert rank_exact([[1, 2, 3], [2, 4, 6], [0, 1, 0]]) == 2
    assert solve_coords([np.array([1, 0]), np.array([1, 1])], np.array([3, 5])) == [-2, 5]
    assert solve_coords([np.array([1, 1])], np.array([1, 0])) is None


def test_empty_space():
    with pytest.raises(EmptySpace):
        osp_build(0, 0)


@pytest.mark.parametrize("m,n", TEST_FAMILY)
def test_dimensions(m, n):
    osp = osp_build(m, n)
    assert len(osp.basis) == osp_dimension(m, n)
    assert osp.sdim == m - 2 * n
    assert adjoint_rep(osp).dim == osp_dimension(m, n)


@pytest.mark.parametrize("m,n", TEST_FAMILY)
def test_form_and_flip(m, n):
    osp = osp_build(m, n)
    t = tau(osp.space)
    cap, cup = cap_cup(osp)
    assert mat_equal(t.dot(t), eye(osp.dim_v**2))
    assert cap.dot(cup)[0, 0] == osp.sdim
    v = natural_rep(osp)
    assert mat_equal(tempered_casimir(v, v), t - e_matrix_v(osp))
    assert mat_equal(v.casimir(), eye(osp.dim_v) * (osp.sdim - 1))


@pytest.mark.parametrize("m,n", [(3, 0), (0, 1), (2, 1)])
def test_closures_on_natural_pole(m, n):
    osp = osp_build(m, n)
    ev = Evaluator(osp, natural_rep(osp))
    assert ev.z_scalar(1) == 0
    assert ev.z_scalar(2) == 2 * (osp.sdim - 1)


@pytest.mark.parametrize("lam", [Fraction(1, 2), Fraction(3), Fraction(-1, 3)])
def test_verma_closure(lam):
    module = TruncVerma(lam, 8)
    ev = Evaluator(module.osp, module)
    x = zeros(module.dim, 1)
    x[0, 0] = 1
    y = ev.cap(ev.connector(ev.connector(ev.cup(x, 1))), 1)
    assert y[0, 0] == module.z2_value() == -2 * lam * (lam + 2)
    assert module.casimir()[0, 0] == -lam * (lam + 2)


def test_verma_cutoff():
    module = TruncVerma(Fraction(1, 2), 2)
    ev = Evaluator(module.osp, module)
    with pytest.raises(CutoffExceeded):
        ev.apply_elem(list(parse_morphism("D@1 * D@1 * D@1").terms.items()), ev.basis_batch(1), 1)


def test_brauer_images():
    osp = osp_build(2, 1)
    s = generator("S", 1, 2)
    assert mat_equal(brauer_matrix(compose(s, s), osp), eye(16))
    loop = compose(generator("CAP", 1, 2), generator("CUP", 1, 2))
    assert brauer_matrix(loop, osp)[0, 0] == 0
    assert mat_equal(functor_eval(identity(2), None, osp).mat, eye(16))


def test_weight_zero():
    assert [hom_dim_weightzero(n) for n in range(6)] == [math.comb(2 * n, n) for n in range(6)]


def test_suite_small():
    rep = verify_osp_suite([(3, 0), (0, 1)], pairs=10)
    assert rep.passed, [c.label for c in rep.checks if not c.ok]


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([(3, 0), (0, 1), (2, 1)]))
def test_functor_on_random_pairs(seed, mn):
    rng = random.Random(seed)
    osp = osp_build(*mn)
    r, s, u = rng.randint(0, 3), rng.choice([1, 3]), rng.randint(0, 3)
    s = s if (r + s) % 2 == 0 else s - 1
    u = u if (s + u) % 2 == 0 else u - 1 if u else 1
    a = BrauerElem.of(random_diagram(s, u, rng))
    b = BrauerElem.of(random_diagram(r, s, rng))
    assert mat_equal(brauer_matrix(compose(a, b), osp), brauer_matrix(a, osp).dot(brauer_matrix(b, osp)))


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(TEST_FAMILY), st.integers(0, 10**6))
def test_connector_commutes_with_action(mn, seed):
    from polarbrauer.superlin import connector_matrix, diagonal_action

    osp = osp_build(*mn)
    a, b = random.Random(seed).choice(osp.basis_pairs)
    v = natural_rep(osp)
    h, dg = connector_matrix(v), diagonal_action(v, a, b)
    assert is_zero_mat(h.dot(dg) - dg.dot(h))

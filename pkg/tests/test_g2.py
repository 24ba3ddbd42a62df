import functools
import itertools
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from polarbrauer.g2 import (
    C_SQ,
    DIM,
    KAPPA_SQ,
    Epsilon3,
    act3,
    bent_transpose,
    cap_cup,
    g2_subalgebra,
    kernel_dim,
    norm_contraction,
    so7_basis,
    swap,
    triangle_raw,
    upsilon_raw,
    vee_first,
)

ONE = np.identity(DIM * DIM, dtype=object)
I7 = np.identity(DIM, dtype=object)


@functools.cache
def _g2():
    data = g2_subalgebra()
    return data, data.tempered()


@pytest.fixture(scope="module")
def data():
    return _g2()[0]


@pytest.fixture(scope="module")
def maps():
    up, down = upsilon_raw(Epsilon3.standard())
    return up, down, up.dot(down) * C_SQ


def test_scales():
    assert KAPPA_SQ == Fraction(-1, 2)
    assert C_SQ == -1


def test_three_form():
    eps = Epsilon3.standard()
    assert eps.is_antisymmetric()
    assert eps.support() == {(0, 1, 2), (0, 3, 4), (0, 5, 6), (1, 3, 5), (1, 4, 6), (2, 3, 6), (2, 4, 5)}
    assert (norm_contraction(eps) == I7 * 3).all()


def test_subalgebra(data):
    assert data.dim == 14
    assert len(so7_basis()) == 21
    assert data.scale == 6
    assert (data.casimir_v() == I7 * 12).all()
    assert all(not act3(x, data.eps.tensor).any() for x in data.basis)


def test_tempered_spectrum(data):
    h = data.tempered()
    assert {v: kernel_dim(h - ONE * v) for v in (-12, -6, 0, 2)} == {-12: 1, -6: 7, 0: 14, 2: 27}


def test_projector(data, maps):
    up, down, k = maps
    p = k * Fraction(1, 6)
    tau, e = swap(), cap_cup()
    assert (down.dot(up) * C_SQ == I7 * 6).all()
    assert (p.dot(p) == p).all()
    assert (tau.dot(p) == -p).all()
    assert not e.dot(p).any()
    assert (data.tempered() == ONE + tau - 2 * e - 6 * p).all()


def test_vee_identity(maps):
    p = maps[2] * Fraction(1, 6)
    tau, e = swap(), cap_cup()
    assert (6 * vee_first(p) + 6 * p == 2 * ONE - e - tau).all()
    assert not (6 * vee_first(p) + 6 * p == ONE + e - 2 * tau).all()


def test_reduction_and_closures(maps):
    up, down, k = maps
    tau, e = swap(), cap_cup()
    assert not (k - tau.dot(bent_transpose(k)) + 2 * tau - e - ONE).any()
    ptrace = np.einsum("ajbj->ab", k.reshape(DIM, DIM, DIM, DIM))
    assert (ptrace == (DIM - 1) * I7).all()
    assert not (triangle_raw(up, down) * C_SQ + 3 * up).any()


def test_transposes_are_involutions(maps):
    k = maps[2]
    m = k + swap()
    assert (bent_transpose(bent_transpose(m)) == m).all()
    assert (vee_first(vee_first(m)) == m).all()


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10**6))
def test_equivariance_random_element(seed):
    data, _ = _g2()
    rng = random.Random(seed)
    x = sum((b * rng.randint(-3, 3) for b in data.basis), np.zeros((DIM, DIM), dtype=object))
    up, _ = upsilon_raw(data.eps)
    diag = np.kron(x, I7) + np.kron(I7, x)
    assert not (diag.dot(up) - up.dot(x)).any()


def test_tempered_commutes_with_action():
    data, h = _g2()
    x = sum((b * (i + 1) for i, b in enumerate(data.basis)), np.zeros((DIM, DIM), dtype=object))
    diag = np.kron(x, I7) + np.kron(I7, x)
    assert not (diag.dot(h) - h.dot(diag)).any()


@settings(max_examples=20, deadline=None)
@given(st.permutations(range(3)))
def test_antisymmetry_any_slot_order(perm):
    e = Epsilon3.standard().tensor
    sign = 1
    for i, j in itertools.combinations(range(3), 2):
        if perm[i] > perm[j]:
            sign = -sign
    assert (np.transpose(e, perm) == sign * e).all()

import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from polarbrauer.errors import DivisionByZero
from polarbrauer.polar import PolarElem, parse_morphism, random_elem
from polarbrauer.ptl import (
    OddBoundary,
    UnsupportedParameter,
    apply_gen,
    compose_ptl,
    image_rank,
    project_ptl,
    ptl_rank,
    ptl_z,
    simple_tl_dim,
    standard_basis,
    standard_bent,
    tlb_quadratic,
    tlb_specialize,
    witness_image,
)
from polarbrauer.polar import z_closure
from polarbrauer.scalars import DELTA, Frac, Poly
from polarbrauer.superlin import Evaluator, TruncVerma, mat_equal, natural_rep, osp_build

Z2 = Poly.var("z2")


def test_crossing_projects():
    p = project_ptl(parse_morphism("S1@2"))
    want = project_ptl(parse_morphism("E1@2")).terms
    e_key, = want
    id_key, = project_ptl(PolarElem.identity(2)).terms
    assert p.terms == {e_key: Frac(Poly.const(2), DELTA), id_key: Frac(Poly.const(-1))}


def test_connector_quadratic():
    p = project_ptl(parse_morphism("D@1 * D@1"))
    d_key, = project_ptl(parse_morphism("D@1")).terms
    id_key, = project_ptl(PolarElem.identity(1)).terms
    assert p.terms == {d_key: Frac(1 - DELTA * Fraction(1, 2)), id_key: Frac(Z2, DELTA)}


def test_theta_vanishes():
    assert project_ptl(parse_morphism("S1@2 + ID@2 - 2/1 * ID@2 + ID@2")).terms == project_ptl(parse_morphism("S1@2")).terms
    theta = project_ptl(parse_morphism("S1@2 + ID@2")) - project_ptl(parse_morphism("E1@2"))
    assert len(theta.terms) == 1  # only (2/delta - 1) E survives
    assert project_ptl(parse_morphism("S1@2 * E1@2 - E1@2")).is_zero()


def test_closure_agrees():
    assert Frac(z_closure(3)) == ptl_z(3)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_ranks(n):
    for r in range(2 * n + 1):
        assert ptl_rank(r, 2 * n - r) == math.comb(2 * n, n)


def test_rank_examples():
    assert ptl_rank(0, 8) == 70
    assert ptl_rank(2, 2) == 6
    with pytest.raises(OddBoundary):
        standard_basis(1, 2)


def test_connector_counts():
    basis = standard_basis(0, 6)
    for t in range(4):
        assert sum(1 for b in basis if b.t == t) == simple_tl_dim(6, t)


@pytest.mark.parametrize("r,s", [(0, 2), (1, 1), (0, 4), (2, 2), (3, 1)])
def test_independent_images(r, s):
    assert image_rank(r, s) == math.comb((r + s), (r + s) // 2)


def test_tlb():
    lam = Poly.var("lambda")
    assert not tlb_quadratic(-2, lam)
    assert not tlb_quadratic(-2, 0)
    assert not tlb_quadratic(-2, Fraction(1, 2))
    with pytest.raises(DivisionByZero):
        tlb_specialize(parse_morphism("D@1"), 0, 1)
    with pytest.raises(UnsupportedParameter):
        tlb_specialize(parse_morphism("D@1"), 2, 1)


@pytest.mark.parametrize("t", [1, 2, 3])
def test_witness(t):
    img = witness_image(t)
    assert img[t] == (-2) ** t
    assert sum(1 for v in img if v) == 1


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_projection_is_functorial(seed):
    rng = random.Random(seed)
    a = random_elem(rng.randint(0, 2), rng, 5, 4, connectors=True)
    b = random_elem(a.s, rng, 5, 4, connectors=True)
    assert compose_ptl(project_ptl(b), project_ptl(a)) == project_ptl(b @ a)


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from(["natural", Fraction(1, 2), Fraction(3)]))
def test_projection_sound_for_sp2(seed, which):
    rng = random.Random(seed)
    osp = osp_build(0, 1)
    module = natural_rep(osp) if which == "natural" else TruncVerma(which, 12, osp)
    ev = Evaluator(osp, module)
    w = random_elem(rng.randint(0, 3), rng, 6, 5, connectors=True)
    p = project_ptl(w)
    x = ev.basis_batch(w.r, levels=3 if ev.verma else None)
    assert mat_equal(ev.apply_elem(list(w.terms.items()), x, w.s), ev.apply_elem(p.word_terms()[0], x, w.s))


@settings(max_examples=50, deadline=None)
@given(st.sampled_from([2, 4, 6]), st.integers(0, 10**6))
def test_connectors_never_increase(n, seed):
    rng = random.Random(seed)
    m, flags = rng.choice(standard_bent(n))
    k = rng.randint(1, n - 1)
    g = rng.choice([("CAP", k, n), ("CUP", rng.randint(1, n + 1), n + 2), ("E", k, n), ("S", k, n), ("D", 0, n)])
    out = apply_gen(g, {(m, flags): Frac(1)})
    bound = len(flags) + (g[0] == "D")
    assert all(len(f) <= bound for _, f in out)

import random

import pytest
from hypothesis import given, settings, strategies as st

from polarbrauer.brauer import (
    BrauerDiagram,
    BrauerElem,
    compose,
    diagram_word,
    enhanced_coupon_check,
    enumerate_basis,
    generator,
    identity,
    random_diagram,
    tensor,
    theta,
    verify_brauer_suite,
    verify_four_term_H,
    word_to_elem,
)
from polarbrauer.errors import RankMismatch
from polarbrauer.scalars import DELTA


def test_small_relations():
    e, s = generator("E", 1, 2), generator("S", 1, 2)
    one = identity(2)
    assert compose(e, e) == e.scale(DELTA)
    assert compose(s, s) == one
    h = generator("H", 1, 2)
    assert h == s - e
    assert compose(h, h) == one - e.scale(2 - DELTA)
    assert tensor(identity(1), identity(1)) == one
    assert tensor(e, identity(1)) == generator("E", 1, 3)


def test_cap_shape():
    cap = generator("CAP", 1, 2)
    d, = cap.terms
    assert (d.bot, d.top) == (2, 0)


def test_theta():
    th = theta()
    assert compose(th, th) == th.scale(2)
    assert compose(identity(2) - generator("S", 1, 2), th).is_zero()
    assert compose(generator("E", 1, 2), th).is_zero()


@pytest.mark.parametrize("r,s,n", [(2, 0, 1), (3, 3, 15), (0, 0, 1), (4, 2, 15), (1, 0, 0)])
def test_basis_counts(r, s, n):
    assert len(enumerate_basis(r, s)) == n


def test_compose_rank_mismatch():
    with pytest.raises(RankMismatch):
        compose(identity(2), identity(3))


@pytest.mark.parametrize("r", [3, 4])
def test_four_term(r):
    assert verify_four_term_H(r).passed


def test_suite():
    rep = verify_brauer_suite()
    assert rep.passed, rep.summary()


def test_coupon():
    rep = enhanced_coupon_check(3)
    assert rep.passed, rep.summary()


@st.composite
def shapes(draw):
    r = draw(st.integers(0, 4))
    s = draw(st.integers(0, 4).filter(lambda s: (r + s) % 2 == 0))
    return r, s


@settings(max_examples=60)
@given(shapes(), st.integers(0, 10**6))
def test_word_reproduces_diagram(shape, seed):
    d = random_diagram(*shape, random.Random(seed))
    assert word_to_elem(diagram_word(d), d.bot) == BrauerElem.of(d)


@settings(max_examples=40)
@given(st.integers(0, 10**6))
def test_associativity(seed):
    rng = random.Random(seed)
    r0 = rng.randint(0, 3)
    ranks = [r0] + [r0 % 2 + 2 * rng.randint(0, 2) for _ in range(3)]
    x, y, w = (BrauerElem.of(random_diagram(ranks[i], ranks[i + 1], rng)) for i in range(3))
    assert compose(w, compose(y, x)) == compose(compose(w, y), x)


def test_not_a_matching():
    with pytest.raises(ValueError):
        BrauerDiagram(1, 1, (0, 1))

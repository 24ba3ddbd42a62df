import random

import pytest
from hypothesis import given, settings, strategies as st

from polarbrauer.brauer import BrauerDiagram
from polarbrauer.errors import BudgetExceeded, ParseError, RankMismatch
from polarbrauer.polar import (
    DottedDiagram,
    PolarElem,
    from_affine,
    hh,
    ht,
    normalize,
    oracle_equal,
    parse_morphism,
    random_elem,
    relation_battery,
    to_affine,
    z_closure,
)
from polarbrauer.scalars import DELTA, parse_poly
from polarbrauer.superlin import natural_rep, osp_build

# engine output, confirmed by pushing forward to U(so_3), U(so_4) and U(sl_2)
Z5 = parse_poly("1/4*delta^3*z2 - 5/4*delta^2*z2 + 2*delta*z2 - 3/2*delta*z4 + 1/2*z2^2 - z2 + 2*z4")


def test_closures():
    assert z_closure(1) == 0
    assert z_closure(2) == parse_poly("z2")
    assert z_closure(3) == parse_poly("-1/2*delta*z2 + z2")
    assert z_closure(4) == parse_poly("z4")
    assert z_closure(5) == Z5


def test_odd_closures_use_even_z():
    for ell in (3, 5, 7):
        names = z_closure(ell).variables() - {"delta"}
        assert all(int(n[1:]) % 2 == 0 for n in names)


def test_parse_examples():
    a = parse_morphism("D@2 * D@2")
    (w,) = a.terms
    assert len(w) == 2 and (a.r, a.s) == (2, 2)
    b = parse_morphism("E1@2 * (D@2)^2 * E1@2")
    assert b == parse_morphism("E1@2 * D@2 * D@2 * E1@2")
    with pytest.raises(RankMismatch) as exc:
        parse_morphism("CAP1@2 * S1@3")
    assert exc.value.ranks == (2, 3)


@pytest.mark.parametrize("text", ["", "D@1 *", "S3@3", "D1@1", "E@2", "1/delta * D@1", "D@1 ) ", "(D@1"])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_morphism(text)


def test_parse_mixed_terms():
    with pytest.raises(RankMismatch):
        parse_morphism("D@1 + CAP1@2")


def test_scalar_normal_forms():
    assert normalize(parse_morphism("CAP1@2 * CUP1@2")).to_elem() == PolarElem.identity(0).scale(DELTA)
    assert normalize(parse_morphism("CAP1@2 * D@2 * CUP1@2")).is_zero()
    assert normalize(parse_morphism("E1@2 * D@2 * E1@2")).is_zero()


def test_dots_are_basis():
    dd = DottedDiagram.make(BrauerDiagram.from_pairs(1, 1, [(1, 2)]), {0: 2})
    nf = normalize(dd.elem())
    assert list(nf.terms) == [dd]


def test_transpose():
    assert normalize(ht(1)) == normalize(-hh(1, 1))
    h = hh(1, 1)
    assert normalize(ht(2) - h @ h - h.scale(DELTA - 2)).is_zero()


def test_affine_roundtrip():
    a = parse_morphism("D@2 * S1@2 * D@2 + 3*E1@2")
    assert from_affine(to_affine(a)) == a
    y = normalize(parse_morphism("Y@1"))
    assert y == normalize(parse_morphism("D@1 + (1-delta)/2 * ID@1"))


def test_budget():
    with pytest.raises(BudgetExceeded) as exc:
        normalize(parse_morphism("(D@3 * S1@3 * S2@3)^4"), budget=5)
    assert exc.value.partial is not None


def test_budget_ignores_warm_cache():
    w = parse_morphism("S1@3 * S2@3 * S1@3 * D@3 * S1@3")
    normalize(w)
    with pytest.raises(BudgetExceeded):
        normalize(w, budget=1)


def test_battery_small():
    for label, elem in relation_battery(3):
        assert normalize(elem).is_zero(), label


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_text_roundtrip(seed):
    rng = random.Random(seed)
    a = random_elem(rng.randint(0, 3), rng, 6, 5, connectors=True)
    b = random_elem(a.r, rng, 4, 5)
    if b.s == a.s:
        a = a + b.scale(parse_poly("delta - 2"))
    assert parse_morphism(a.text()) == a


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_normalize_idempotent(seed):
    rng = random.Random(seed)
    nf = normalize(random_elem(rng.randint(0, 3), rng, 6, 5, connectors=True))
    assert normalize(nf.to_elem()) == nf


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([(3, 0), (0, 1), (2, 1)]))
def test_normal_form_matches_functor(seed, mn):
    rng = random.Random(seed)
    w = random_elem(rng.randint(0, 3), rng, 6, 5, connectors=True)
    osp = osp_build(*mn)
    assert oracle_equal(w, normalize(w).to_elem(), osp, natural_rep(osp), rng)


def _closed(rng):
    """Random element of End(m): a random word from rank 0 capped back down to rank 0."""
    w = random_elem(0, rng, 10, 4, connectors=True)
    (word,) = w.terms
    caps = tuple(("CAP", 1, k) for k in range(w.s, 0, -2))
    return PolarElem.word(word + caps, 0)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([2, 3, 4]))
def test_z_central_in_normal_form(seed, ell):
    rng = random.Random(seed)
    a = random_elem(rng.randint(0, 3), rng, 6, 4, connectors=True)
    left = PolarElem.word((("Z", ell, a.s),), a.s) @ a
    right = a @ PolarElem.word((("Z", ell, a.r),), a.r)
    assert normalize(left) == normalize(right)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_pole_endomorphisms_commute(seed):
    rng = random.Random(seed)
    a, b = _closed(rng), _closed(rng)
    assert normalize(a @ b) == normalize(b @ a)

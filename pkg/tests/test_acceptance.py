"""Acceptance criteria 1 to 12, checked with exact arithmetic under wall-clock limits."""

import math
import random
import time
from fractions import Fraction

import pytest

from polarbrauer.brauer import (
    BrauerElem,
    compose,
    enhanced_coupon_check,
    enumerate_basis,
    generator,
    identity,
    random_diagram,
    verify_four_term_H,
)
from polarbrauer.g2 import verify_g2_suite
from polarbrauer.polar import POLAR_FAMILY, verify_polar_suite, verify_soundness
from polarbrauer.ptl import image_rank, ptl_rank, tlb_quadratic, witness_holds
from polarbrauer.scalars import DELTA, Poly
from polarbrauer.superlin import hom_dim_weightzero, verify_osp_suite
from polarbrauer.uea import (
    PBW,
    UeaMatrix,
    casimir,
    centre_surjectivity_check,
    char_identity,
    closure,
    e_matrix,
    gelfand,
    i3_matches_closure,
    identity_on,
    is_central,
    pbw_rank,
    sl2_lie,
    so3_irrep,
    so_lie,
)


def _double_factorial(n):
    return math.prod(range(n, 0, -2))


@pytest.fixture
def verdict(capsys):
    """Print one PASS/FAIL line, then assert the result and the time limit."""

    def emit(number, title, checks, elapsed, limit):
        failed = [label for label, ok in checks if not ok]
        ok = not failed and elapsed < limit
        with capsys.disabled():
            status = "PASS" if ok else "FAIL"
            extra = f"; failed: {failed}" if failed else ""
            print(f"\n{status} criterion {number}: {title} [{elapsed:.1f}s < {limit}s]{extra}")
        assert not failed, failed
        assert elapsed < limit, f"took {elapsed:.1f}s, limit {limit}s"

    return emit


def _timed(fn):
    start = time.perf_counter()
    checks = fn()
    return checks, time.perf_counter() - start


def test_criterion_01_brauer_core(verdict):
    def run():
        checks = []
        for n in range(0, 11, 2):
            for r in range(n + 1):
                checks.append((f"|Hom({r},{n - r})|", len(enumerate_basis(r, n - r)) == _double_factorial(n - 1)))
        rng = random.Random(2024)
        ok = True
        for _ in range(100):
            r, s, t, u = (rng.randint(0, 4) for _ in range(4))
            s += (r + s) % 2
            t += (s + t) % 2
            u += (t + u) % 2
            a, b, c = (BrauerElem.of(random_diagram(x, y, rng)) for x, y in ((t, u), (s, t), (r, s)))
            ok &= compose(a, compose(b, c)) == compose(compose(a, b), c)
        checks.append(("associativity on 100 triples", ok))
        h, one = generator("H", 1, 2), identity(2)
        cubic = compose(compose(h - one, h + one), h - one.scale(1 - DELTA))
        checks.append(("(H-1)(H+1)(H-(1-delta)) = 0", cubic.is_zero()))
        return checks

    checks, elapsed = _timed(run)
    verdict(1, "Brauer counts, associativity, cubic", checks, elapsed, 5)


def test_criterion_02_four_term(verdict):
    checks, elapsed = _timed(lambda: [(c.label, c.ok) for r in (3, 4) for c in verify_four_term_H(r).checks])
    assert len(checks) == 2 * (1 + 4)
    verdict(2, "four-term relations in B3 and B4", checks, elapsed, 5)


def test_criterion_03_polar_battery(verdict):
    def run():
        rep = verify_polar_suite(max_r=4, family=POLAR_FAMILY, oracle=True)
        return [(c.label, c.ok) for c in rep.checks]

    checks, elapsed = _timed(run)
    labels = [label for label, _ in checks]
    assert "Z1 = 0" in labels and "2 Z3 = (2 - delta) Z2" in labels
    for r in (2, 3, 4):
        kinds = (1, 2, 5, 6, 7, 8) if r == 2 else range(1, 9)
        assert all(any(label.startswith(f"JM-{k} r={r}") for label in labels) for k in kinds)
    verdict(3, "polar battery by normalization and by functor", checks, elapsed, 120)


def test_criterion_04_soundness(verdict):
    def run():
        rep = verify_soundness(200, max_len=8, max_r=4, family=POLAR_FAMILY)
        return [(c.label, c.ok) for c in rep.checks]

    checks, elapsed = _timed(run)
    verdict(4, "normal form soundness on 200 words", checks, elapsed, 300)


def test_criterion_05_ptl_ranks(verdict):
    def run():
        checks = []
        for n in range(1, 5):
            ranks = [ptl_rank(r, 2 * n - r) for r in range(2 * n + 1)]
            checks.append((f"ptl ranks N={n}", ranks == [math.comb(2 * n, n)] * (2 * n + 1)))
        for n in (1, 2):
            for r in range(2 * n + 1):
                checks.append((f"independent images ({r},{2 * n - r})", image_rank(r, 2 * n - r, Fraction(1, 2)) == math.comb(2 * n, n)))
        return checks

    checks, elapsed = _timed(run)
    verdict(5, "polar TL ranks 2, 6, 20, 70 and independence", checks, elapsed, 60)


def test_criterion_06_osp_functor(verdict):
    def run():
        rep = verify_osp_suite(pairs=100)
        return [(c.label, c.ok) for c in rep.checks]

    checks, elapsed = _timed(run)
    labels = [label for label, _ in checks]
    for tag in ("(3|0)", "(5|0)", "(0|2)", "(0|4)", "(2|2)"):
        assert f"{tag} cubic (H-1)(H+1)(H-(1-sdim)) = 0" in labels
        assert f"{tag} functoriality on 100 random pairs" in labels
    verdict(6, "osp functor relations and functoriality", checks, elapsed, 60)


def test_criterion_07_sp2_identity(verdict):
    def run():
        sl2 = sl2_lie()
        c, e = casimir(sl2), e_matrix(sl2)
        lhs = e.power(2) + e.scale_left(PBW.scalar(sl2, -2)) + UeaMatrix.scalar(sl2, 2, c)
        return [("E^2 - 2E + C = 0", lhs.is_zero()), ("str(E^2) = 2C", closure(e.power(2)) == 2 * c)]

    checks, elapsed = _timed(run)
    verdict(7, "sp2 characteristic identity", checks, elapsed, 5)


def test_criterion_08_so3_identity(verdict):
    def run():
        so3 = so_lie(3)
        ci = char_identity(so3)
        checks = [(c.label, c.ok) for c in ci.report.checks]
        checks.append(("degree 3", len(ci.q) == 3))
        checks += [(f"on L_{lam}", identity_on(ci, so3_irrep(so3, lam))) for lam in range(3)]
        return checks

    checks, elapsed = _timed(run)
    verdict(8, "so3 characteristic identity", checks, elapsed, 30)


def test_criterion_09_centre(verdict):
    def run():
        checks = [(f"I(2) central in so{m}", is_central(gelfand(2, so_lie(m)))) for m in (3, 4)]
        checks += [(f"I(3) from z_closure(3) in so{m}", i3_matches_closure(m)) for m in (3, 4)]
        so5 = so_lie(5)
        i2, i4 = gelfand(2, so5), gelfand(4, so5)
        checks.append(("{1, I(2), I(2)^2, I(4)} independent in so5", pbw_rank([PBW.scalar(so5, 1), i2, i2 * i2, i4]) == 4))
        checks += [(c.label, c.ok) for c in centre_surjectivity_check(5).checks]
        return checks

    checks, elapsed = _timed(run)
    verdict(9, "Gelfand invariants and centre", checks, elapsed, 60)


def test_criterion_10_g2(verdict):
    def run():
        return [(c.label, c.ok) for c in verify_g2_suite().checks]

    checks, elapsed = _timed(run)
    labels = [label for label, _ in checks]
    for want in ("dim G2 = 14", "Casimir spectrum on V x V is {0, 12, 24, 28}", "tempered spectrum {-12, -6, 0, 2}",
                 "Upsilon-hat Upsilon = 6 I", "contraction of C3 x C3 = 3 cup(1)", "spectral relation H = 1 + tau - 2e - 6P",
                 "quartic H(H-2)(H+6)(H+12) = 0", "reduction K - X K^T + 2X - E - I = 0"):
        assert want in labels
    verdict(10, "G2 suite", checks, elapsed, 120)


def test_criterion_11_tlb(verdict):
    def run():
        lam = Poly.var("lambda")
        checks = [("TLB quadratic at delta = -2, lambda symbolic", not tlb_quadratic(-2, lam))]
        checks += [(f"TLB quadratic at lambda = {x}", not tlb_quadratic(-2, x)) for x in (0, Fraction(1, 2), 3)]
        checks += [(f"weight zero N={n}", hom_dim_weightzero(n) == math.comb(2 * n, n)) for n in range(1, 7)]
        checks += [(f"witness t={t}", witness_holds(t, Fraction(1, 2))) for t in (1, 2, 3)]
        return checks

    checks, elapsed = _timed(run)
    verdict(11, "type B specialization, weight counts, witness", checks, elapsed, 30)


def test_criterion_12_coupon(verdict):
    def run():
        return [(c.label, c.ok) for c in enhanced_coupon_check(3).checks]

    checks, elapsed = _timed(run)
    verdict(12, "enhanced coupon m = 3", checks, elapsed, 5)


def test_all_twelve_present():
    names = [n for n in globals() if n.startswith("test_criterion_")]
    assert sorted(int(n.split("_")[2]) for n in names) == list(range(1, 13))

"""Polar Temperley-Lieb quotient and the type B specialization.

Modulo Theta = X + I - (2/delta) E a crossing is (2/delta) E - I and the
connector satisfies D^2 = -((delta-2)/2) D + (z2/delta).  Every morphism
r -> s is bent into Hom(0, r + s) exactly as in the polar engine.  There a
standard diagram is a planar cup diagram in which each outermost cup may
carry one connector, attached to its left leg; connectors on cups further
right sit lower on the pole.  These are counted by sum over Dyck paths of
2^(number of returns) = C(2N, N).

A bent state is ``(m, flags)``: a planar partner tuple and the frozenset of
left ends of the outermost cups that carry a connector.  Coefficients are
``Frac`` in delta and z2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from ._engine import cap_matching, insert_cup, nested_cups, remove_cup
from .brauer import BrauerDiagram
from .errors import DivisionByZero
from .polar import PolarElem, extend_word, from_affine, hh_word, _label, _position
from .report import Report
from .scalars import DELTA, Frac, Poly, frac_text, specialize

Z2 = Poly.var("z2")


class OddBoundary(ValueError):
    pass


class UnsupportedParameter(ValueError):
    pass


def _f(x) -> Frac:
    return x if isinstance(x, Frac) else Frac(x)


ONE = Frac(1)
TWO_OVER_DELTA = Frac(Poly.const(2), DELTA)
QUAD_LINEAR = Frac(-(DELTA - 2) * Fraction(1, 2))  # D^2 = QUAD_LINEAR D + QUAD_CONST
QUAD_CONST = Frac(Z2, DELTA)


def _acc1(target: dict, key, coeff) -> None:
    old = target.get(key)
    new = coeff if old is None else old + coeff
    if new.is_zero():
        target.pop(key, None)
    else:
        target[key] = new


def _acc(target: dict, source: dict, coeff) -> None:
    for k, v in source.items():
        _acc1(target, k, v * coeff)


# ---------------------------------------------------------------- planar shapes


def is_planar(m: tuple) -> bool:
    stack = []
    for i, p in enumerate(m):
        if p > i:
            stack.append(i)
        elif not stack or stack.pop() != p:
            return False
    return True


def outer_cups(m: tuple) -> list:
    """Left ends of the cups not enclosed by any other cup."""
    out, i = [], 0
    while i < len(m):
        out.append(i)
        i = m[i] + 1
    return out


def planar_matchings(n: int) -> list:
    """All planar matchings of n points, in a fixed order."""
    if n == 0:
        return [()]
    out = []
    for j in range(1, n, 2):
        for inner in planar_matchings(j - 1):
            for rest in planar_matchings(n - j - 1):
                m = [0] * n
                m[0], m[j] = j, 0
                for i, p in enumerate(inner):
                    m[i + 1] = p + 1
                for i, p in enumerate(rest):
                    m[j + 1 + i] = p + j + 1
                out.append(tuple(m))
    return out


def _shift(p: int, k: int) -> int:
    return p if p < k else p - 2


# ---------------------------------------------------------------- bent calculus


def ptl_z(ell: int) -> Frac:
    """Value of the closure Z_ell in the quotient (D^ell = a D + b gives delta b)."""
    a, b = Frac(0), Frac(1)
    for _ in range(ell):
        a, b = a * QUAD_LINEAR + b, a * QUAD_CONST
    return b * Frac(DELTA)


def op_d(m: tuple, flags: frozenset) -> dict:
    if 0 in flags:
        return {(m, flags): QUAD_LINEAR, (m, flags - {0}): QUAD_CONST}
    return {(m, flags | {0}): ONE}


def op_cup(k: int, m: tuple, flags: frozenset) -> dict:
    return {(insert_cup(m, k), frozenset(p if p < k else p + 2 for p in flags)): ONE}


def op_cap(k: int, m: tuple, flags: frozenset) -> dict:
    x, y = m[k], m[k + 1]
    if x == k + 1:
        if k in flags:
            return {}
        rest = frozenset(_shift(p, k) for p in flags)
        return {(remove_cup(m, k), rest): Frac(DELTA)}
    new_m = cap_matching(m, k)
    if x < k and y > k + 1:
        # siblings (x, k) and (k+1, y) merge into (x, y)
        fa, fb = x in flags, (k + 1) in flags
        rest = frozenset(_shift(p, k) for p in flags - {x, k + 1})
        with_flag, without = (new_m, rest | {x}), (new_m, rest)
        if fa and fb:
            return {with_flag: QUAD_LINEAR, without: QUAD_CONST}
        if fa or fb:
            return {with_flag: ONE}
        return {without: ONE}
    if x > k + 1 and k + 1 < y < x:
        # (k+1, y) is the first child of (k, x); they merge into (y, x)
        rest = frozenset(_shift(p, k) for p in flags - {k})
        if k in flags:
            rest = rest | {y - 2}
        return {(new_m, rest): ONE}
    if x < k and y < x:
        # (x, k) is the last child of (y, k+1); they merge into (y, x)
        return {(new_m, frozenset(_shift(p, k) for p in flags)): ONE}
    raise ValueError(f"state {m} is not planar")


def apply_gen(g: tuple, vec: dict, zvals: dict | None = None) -> dict:
    kind, i = g[0], g[1]
    out: dict = {}
    if kind == "ID":
        return dict(vec)
    if kind == "Z":
        z = ptl_z(i)
        return {k: v * z for k, v in vec.items() if not (v * z).is_zero()}
    for (m, flags), c in vec.items():
        if kind == "D":
            _acc(out, op_d(m, flags), c)
        elif kind == "CUP":
            _acc(out, op_cup(i - 1, m, flags), c)
        elif kind == "CAP":
            _acc(out, op_cap(i - 1, m, flags), c)
        elif kind in ("E", "S"):
            piece: dict = {}
            for key, v in op_cap(i - 1, m, flags).items():
                _acc(piece, op_cup(i - 1, *key), v)
            if kind == "S":
                piece = {k: v * TWO_OVER_DELTA for k, v in piece.items()}
                _acc1(piece, (m, flags), -ONE)
            _acc(out, piece, c)
        else:
            raise ValueError(f"unknown generator {kind}")
    return out


# ---------------------------------------------------------------- public types


@dataclass(frozen=True)
class PlanarPolarDiagram:
    """A standard diagram r -> s: planar Brauer diagram plus 0/1 connectors per strand.

    ``connectors`` holds the 0-based anchor labels of the connected strands;
    the anchor of a strand is its endpoint that is the left end of the
    corresponding outermost cup in the bent picture.
    """

    diagram: BrauerDiagram
    connectors: tuple = ()

    @property
    def t(self) -> int:
        return len(self.connectors)

    def bent(self) -> tuple:
        d = self.diagram
        r, s = d.bot, d.top
        m = [0] * (r + s)
        for x, y in enumerate(d.pairing):
            m[_position(x, r, s)] = _position(y, r, s)
        return tuple(m), frozenset(_position(a, r, s) for a in self.connectors)

    def strand_key(self, label: int) -> str:
        a, b = sorted((label, self.diagram.pairing[label]))
        return f"{a + 1}-{b + 1}"

    def to_json(self) -> dict:
        d = self.diagram
        counts = {self.strand_key(x): 0 for x in range(d.bot + d.top) if x < d.pairing[x]}
        for a in self.connectors:
            counts[self.strand_key(a)] = 1
        return {"diagram": d.to_json(), "planar": True, "connectors": counts}

    def word(self) -> tuple:
        """A polar word for this diagram (bent form, then unbent)."""
        d = self.diagram
        r, s = d.bot, d.top
        m, flags = self.bent()
        return bent_word(m, flags, r, s)

    def elem(self) -> PolarElem:
        return PolarElem.word(self.word(), self.diagram.bot)


def planar_word(m: tuple, flags=frozenset()) -> tuple:
    """Crossing-free word 0 -> len(m) for the bent state (m, flags).

    Outer cups are created right to left at the pole side, so each connector
    is attached while its cup is leftmost and never crosses another strand.
    """
    word: list = []
    size = 0

    def build(lo: int, hi: int, offset: int) -> None:
        nonlocal size
        blocks, i = [], lo
        while i < hi:
            blocks.append((i, m[i]))
            i = m[i] + 1
        for a, b in reversed(blocks):
            size += 2
            word.append(("CUP", offset + 1, size))
            build(a + 1, b, offset + 1)
            if offset == 0 and a in flags:
                word.append(("D", 1, size))

    build(0, len(m), 0)
    return tuple(word)


def bent_word(m: tuple, flags, r: int, s: int) -> tuple:
    word = list(extend_word(planar_word(m, frozenset(flags)), r))
    for i in range(r):
        word.append(("CAP", s + r - i, s + 2 * r - 2 * i))
    return tuple(word)


def from_bent(m: tuple, flags, r: int, s: int) -> PlanarPolarDiagram:
    pairing = [0] * (r + s)
    for p, q in enumerate(m):
        pairing[_label(p, r, s)] = _label(q, r, s)
    return PlanarPolarDiagram(BrauerDiagram(r, s, tuple(pairing)), tuple(sorted(_label(p, r, s) for p in flags)))


class PTLElem:
    """Combination of standard diagrams r -> s with Frac coefficients (bent keys)."""

    def __init__(self, r: int, s: int, terms: dict | None = None):
        self.r, self.s = r, s
        self.terms = {k: v for k, v in (terms or {}).items() if not v.is_zero()}

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        return isinstance(other, PTLElem) and (self.r, self.s) == (other.r, other.s) and self.terms == other.terms

    def __add__(self, other):
        out = dict(self.terms)
        _acc(out, other.terms, ONE)
        return PTLElem(self.r, self.s, out)

    def __sub__(self, other):
        out = dict(self.terms)
        _acc(out, other.terms, -ONE)
        return PTLElem(self.r, self.s, out)

    def diagrams(self) -> list:
        items = [(from_bent(m, f, self.r, self.s), c) for (m, f), c in self.terms.items()]
        return sorted(items, key=lambda t: (t[0].t, t[0].diagram.pairing, t[0].connectors))

    def max_connectors(self) -> int:
        return max((len(f) for _, f in self.terms), default=0)

    def word_terms(self) -> tuple:
        return [(bent_word(m, f, self.r, self.s), c) for (m, f), c in self.terms.items()], self.r, self.s

    def to_polar(self) -> list:
        return self.word_terms()[0]

    def to_json(self) -> list:
        return [dict(d.to_json(), coeff=frac_text(c)) for d, c in self.diagrams()]

    def __repr__(self):
        body = " + ".join(f"({frac_text(c)}) {d.diagram}{list(d.connectors)}" for d, c in self.diagrams())
        return f"PTLElem({self.r}->{self.s}: {body or '0'})"


def project_words(terms, r: int, s: int) -> PTLElem:
    out: dict = {}
    start = (nested_cups(r), frozenset())
    for word, c in terms:
        vec = {start: ONE}
        for g in word:
            if g[0] == "Y":
                raise ValueError("expand Y with from_affine first")
            vec = apply_gen(g, vec)
            if not vec:
                break
        _acc(out, vec, _f(c))
    return PTLElem(r, s, out)


def project_ptl(a) -> PTLElem:
    """Image of a PolarElem (or PTLElem word form) in the polar TL quotient."""
    if isinstance(a, PTLElem):
        terms, r, s = a.word_terms()
        return project_words(terms, r, s)
    a = from_affine(a)
    return project_words(a.terms.items(), a.r, a.s)


def compose_ptl(a: PTLElem, b: PTLElem) -> PTLElem:
    """a o b computed inside the planar calculus."""
    terms = []
    ta, _, _ = a.word_terms()
    tb, _, _ = b.word_terms()
    for wb, cb in tb:
        for wa, ca in ta:
            terms.append((wb + wa, cb * ca))
    return project_words(terms, b.r, a.s)


def standard_bent(n: int) -> list:
    out = []
    for m in planar_matchings(n):
        tops = outer_cups(m)
        for mask in range(1 << len(tops)):
            out.append((m, frozenset(p for k, p in enumerate(tops) if mask >> k & 1)))
    return out


def standard_basis(r: int, s: int) -> list:
    if (r + s) % 2:
        raise OddBoundary(f"r + s = {r + s} is odd")
    return [from_bent(m, f, r, s) for m, f in standard_bent(r + s)]


def simple_tl_dim(two_n: int, i: int) -> int:
    n = two_n // 2
    return math.comb(two_n, n - i) - (math.comb(two_n, n - i - 1) if n - i - 1 >= 0 else 0)


def ptl_rank(r: int, s: int) -> int:
    """Number of standard diagrams, cross-checked connector by connector."""
    basis = standard_basis(r, s)
    n = (r + s) // 2
    for t in range(n + 1):
        count = sum(1 for b in basis if b.t == t)
        if count != simple_tl_dim(2 * n, t):
            raise ArithmeticError(f"{count} standard diagrams with {t} connectors, expected {simple_tl_dim(2 * n, t)}")
    if len(basis) != math.comb(2 * n, n):
        raise ArithmeticError("rank differs from the central binomial coefficient")
    return len(basis)


# ---------------------------------------------------------------- type B


def tlb_z2(delta0, lam):
    """z2 = -delta lambda ((delta - 2)/2 - lambda)."""
    d = Fraction(delta0)
    return -d * lam * ((d - 2) / 2 - lam)


def tlb_specialize(a, delta0, lam):
    """Substitute delta -> delta0 and z2 -> -delta0 lambda ((delta0-2)/2 - lambda).

    ``a`` is a PTLElem or a PolarElem (projected first).  ``lam`` is a
    rational or the Poly ``lambda``.  Returns {PlanarPolarDiagram: value}.
    """
    d = Fraction(delta0)
    if d == 0:
        raise DivisionByZero("delta = 0 is excluded")
    if d == 2:
        raise UnsupportedParameter("delta = 2 is degenerate for the polar TL quotient")
    if not isinstance(a, PTLElem):
        a = project_ptl(a)
    if not isinstance(lam, Poly):
        lam = Fraction(lam)
    z2 = tlb_z2(d, lam)
    out = {}
    for diag, c in a.diagrams():
        v = specialize(c, {"delta": d, "z2": z2})
        if isinstance(v, Poly) and v.is_zero() or v == 0:
            continue
        out[diag] = v
    return out


def tlb_quadratic(delta0, lam) -> dict:
    """(D + lambda)(D + (delta-2)/2 - lambda) specialised; should be empty."""
    lam_p = lam if isinstance(lam, Poly) else Poly.const(Fraction(lam))
    d = Fraction(delta0)
    c = (d - 2) / 2
    dd = PolarElem.word((("D", 1, 1),) * 2, 1)
    d1 = PolarElem.word((("D", 1, 1),), 1)
    one = PolarElem.identity(1)
    # D^2 + (lambda + c - lambda) D + lambda (c - lambda)
    expr = dd + d1.scale(Poly.const(c)) + one.scale(lam_p * (Poly.const(c) - lam_p))
    return tlb_specialize(expr, d, lam)


# ---------------------------------------------------------------- witnesses


def witness_dual(t: int) -> PolarElem:
    """The (2t, 0) diagram with t side-by-side caps, each with a connector.

    The connector of the leftmost cap is lowest.
    """
    n = 2 * t
    word = []
    for i in range(t):
        word += hh_word(2 * i + 1, n)
    for i in range(t):
        word.append(("CAP", n - 2 * i - 1, n - 2 * i))
    return PolarElem.word(word, n)


def witness(t: int) -> PolarElem:
    """(0, 2t): t side-by-side cups each with a connector, leftmost highest."""
    flags = frozenset(range(0, 2 * t, 2))
    m = tuple(p + 1 if p % 2 == 0 else p - 1 for p in range(2 * t))
    return PolarElem.word(bent_word(m, flags, 0, 2 * t), 0)


def _sp2_evaluator(lam, cutoff: int):
    from .superlin import Evaluator, TruncVerma, osp_build

    osp = osp_build(0, 1)
    return Evaluator(osp, TruncVerma(Fraction(lam), cutoff, osp))


def witness_image(t: int, lam=Fraction(1, 2)) -> list:
    """Coordinates of F(dual witness)(m_+ x v_{-1}^{2t}) in the basis m_k = Y^k m_+."""
    import numpy as np

    ev = _sp2_evaluator(lam, 2 * t + 4)
    n = 2 * t
    x = np.zeros((ev.module.dim,) + (2,) * n + (1,), dtype=object)
    x[(0,) + (1,) * n + (0,)] = 1
    terms, _, s = witness_dual(t).word_terms()
    y = ev.apply_elem(terms, x, s)
    return [Fraction(v) for v in y[:, 0]]


def witness_holds(t: int, lam=Fraction(1, 2)) -> bool:
    """The image is (-2Y)^t m_+ = (-2)^t m_t, which is nonzero."""
    img = witness_image(t, lam)
    want = [Fraction(0)] * len(img)
    want[t] = Fraction(-2) ** t
    return img == want and any(img)


def image_rank(r: int, s: int, lam=Fraction(1, 2), levels: int = 3) -> int:
    """Rank of the standard basis of Hom(r, s) under the truncated Verma functor."""
    import numpy as np

    from .superlin import rank_exact

    n = (r + s) // 2
    ev = _sp2_evaluator(lam, levels + n + 3)
    x = ev.basis_batch(r, levels=levels)
    rows = []
    for b in standard_basis(r, s):
        terms = [(b.word(), Fraction(1))]
        y = ev.apply_elem(terms, x, s)
        rows.append(list(np.asarray(y).ravel()))
    return rank_exact(rows)


def verify_ptl_suite(max_n: int = 4, indep_n: int = 2) -> Report:
    from .superlin import hom_dim_weightzero

    rep = Report("ptl")
    for n in range(1, max_n + 1):
        want = math.comb(2 * n, n)
        ranks = [ptl_rank(r, 2 * n - r) for r in range(2 * n + 1)]
        rep.add(f"rank(r, {2 * n} - r) = {want}", all(x == want for x in ranks), f"ranks {ranks}")
    for n in range(1, indep_n + 1):
        for r in range(2 * n + 1):
            k = image_rank(r, 2 * n - r)
            rep.add(f"images of standard basis ({r}, {2 * n - r}) independent at lambda = 1/2", k == math.comb(2 * n, n), f"rank {k}")
    lam = Poly.var("lambda")
    rep.add("(H + lambda)(H + (delta-2)/2 - lambda) = 0 at delta = -2", not tlb_quadratic(-2, lam))
    for n in range(1, 7):
        rep.add(f"weight zero dimension N = {n}", hom_dim_weightzero(n) == math.comb(2 * n, n))
    for t in range(1, 4):
        rep.add(f"witness (-2Y)^{t} m_+ nonzero", witness_holds(t))
    return rep

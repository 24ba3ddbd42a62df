"""The Brauer category B(delta).

A diagram r -> s is a fixed-point-free involution on the labels
``0 .. r+s-1`` (bottom points left to right, then top points left to right;
the JSON form shifts these to 1-based).  Composition glues the top of one
diagram to the bottom of the next and counts the closed loops that appear in
the middle, each worth a factor ``delta``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction

from .errors import IndexOutOfRange, RankMismatch
from .report import Report
from .scalars import DELTA, Frac, Poly, as_scalar, frac_text, is_zero, normalize_scalar


@dataclass(frozen=True)
class BrauerDiagram:
    bot: int
    top: int
    pairing: tuple

    def __post_init__(self):
        n = self.bot + self.top
        if len(self.pairing) != n or n % 2:
            raise ValueError("pairing must cover an even number of points")
        for i, j in enumerate(self.pairing):
            if i == j or self.pairing[j] != i:
                raise ValueError(f"not a perfect matching: {self.pairing}")

    @staticmethod
    def from_pairs(bot: int, top: int, pairs) -> "BrauerDiagram":
        """Build from 1-based label pairs."""
        p = [None] * (bot + top)
        for a, b in pairs:
            p[a - 1], p[b - 1] = b - 1, a - 1
        return BrauerDiagram(bot, top, tuple(p))

    def pairs(self) -> list:
        return sorted((i + 1, j + 1) for i, j in enumerate(self.pairing) if i < j)

    def to_json(self) -> dict:
        return {"bot": self.bot, "top": self.top, "pairs": [list(p) for p in self.pairs()]}

    def propagating(self) -> int:
        return sum(1 for i in range(self.bot) if self.pairing[i] >= self.bot)

    def __str__(self):
        return f"<{self.bot}->{self.top} {self.pairs()}>"


def identity_diagram(r: int) -> BrauerDiagram:
    return BrauerDiagram(r, r, tuple(list(range(r, 2 * r)) + list(range(r))))


def compose_diagrams(a: BrauerDiagram, b: BrauerDiagram) -> tuple:
    """a after b, returned as (diagram, number of closed loops)."""
    if b.top != a.bot:
        raise RankMismatch(f"cannot compose {a.bot}->{a.top} after {b.bot}->{b.top}")
    r, s, t = b.bot, b.top, a.top
    # b-points: 0..r-1 bottom, r..r+s-1 middle; a-points: 0..s-1 middle, s..s+t-1 top
    out = [None] * (r + t)

    def trace(side, idx):
        # walk from a point on one diagram until it exits the middle layer
        while True:
            if side == "b":
                j = b.pairing[idx]
                if j < r:
                    return ("bot", j)
                side, idx = "a", j - r
            else:
                j = a.pairing[idx]
                if j >= s:
                    return ("top", j - s)
                side, idx = "b", j + r

    seen_mid = [False] * s
    for i in range(r):
        if out[i] is not None:
            continue
        j = b.pairing[i]
        end = ("bot", j) if j < r else trace("a", j - r)
        k = end[1] if end[0] == "bot" else r + end[1]
        out[i], out[k] = k, i
    for i in range(t):
        if out[r + i] is not None:
            continue
        j = a.pairing[s + i]
        end = ("top", j - s) if j >= s else trace("b", j + r)
        k = end[1] if end[0] == "bot" else r + end[1]
        out[r + i], out[k] = k, r + i
    # mark middle points that lie on open paths, then count closed loops
    for i in range(r):
        _mark_open(b, a, r, s, i, seen_mid)
    for i in range(t):
        _mark_open_top(b, a, r, s, i, seen_mid)
    loops = 0
    for m in range(s):
        if seen_mid[m]:
            continue
        loops += 1
        cur = m
        while True:
            seen_mid[cur] = True
            nxt = a.pairing[cur]  # across a (stays in middle for a closed loop)
            seen_mid[nxt] = True
            cur = b.pairing[nxt + r] - r
            if cur == m:
                break
    return BrauerDiagram(r, t, tuple(out)), loops


def _mark_open(b, a, r, s, i, seen):
    j = b.pairing[i]
    while j >= r:
        m = j - r
        seen[m] = True
        k = a.pairing[m]
        if k >= s:
            return
        seen[k] = True
        j = b.pairing[k + r]


def _mark_open_top(b, a, r, s, i, seen):
    j = a.pairing[s + i]
    while j < s:
        seen[j] = True
        k = b.pairing[j + r]
        if k < r:
            return
        seen[k - r] = True
        j = a.pairing[k - r]


def tensor_diagrams(a: BrauerDiagram, b: BrauerDiagram) -> BrauerDiagram:
    """a placed to the left of b."""
    ra, sa, rb, sb = a.bot, a.top, b.bot, b.top
    r, s = ra + rb, sa + sb

    def amap(i):
        return i if i < ra else r + (i - ra)

    def bmap(i):
        return ra + i if i < rb else r + sa + (i - rb)

    out = [None] * (r + s)
    for i, j in enumerate(a.pairing):
        out[amap(i)] = amap(j)
    for i, j in enumerate(b.pairing):
        out[bmap(i)] = bmap(j)
    return BrauerDiagram(r, s, tuple(out))


class BrauerElem:
    """Finite linear combination of diagrams r -> s."""

    __slots__ = ("bot", "top", "terms")

    def __init__(self, bot: int, top: int, terms=None):
        self.bot, self.top = bot, top
        self.terms = {}
        for d, c in (terms or {}).items():
            if (d.bot, d.top) != (bot, top):
                raise RankMismatch("mixed shapes in one BrauerElem")
            if not is_zero(c):
                self.terms[d] = normalize_scalar(c)

    @staticmethod
    def of(d: BrauerDiagram, c=1) -> "BrauerElem":
        return BrauerElem(d.bot, d.top, {d: as_scalar(c)})

    def __add__(self, other: "BrauerElem") -> "BrauerElem":
        if (self.bot, self.top) != (other.bot, other.top):
            raise RankMismatch("adding elements of different hom spaces")
        t = dict(self.terms)
        for d, c in other.terms.items():
            t[d] = t[d] + c if d in t else c
        return BrauerElem(self.bot, self.top, t)

    def __neg__(self):
        return BrauerElem(self.bot, self.top, {d: -c for d, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "BrauerElem":
        c = as_scalar(c)
        return BrauerElem(self.bot, self.top, {d: c * v for d, v in self.terms.items()})

    def __rmul__(self, c):
        return self.scale(c)

    def __matmul__(self, other: "BrauerElem") -> "BrauerElem":
        return compose(self, other)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, BrauerElem):
            return NotImplemented
        return (self - other).is_zero() if (self.bot, self.top) == (other.bot, other.top) else False

    def __hash__(self):
        return hash((self.bot, self.top, frozenset(self.terms)))

    def to_json(self) -> dict:
        return {
            "bot": self.bot,
            "top": self.top,
            "terms": [
                {"pairs": [list(p) for p in d.pairs()], "coeff": frac_text(c)}
                for d, c in sorted(self.terms.items(), key=lambda t: t[0].pairs())
            ],
        }

    def __repr__(self):
        body = " + ".join(f"({frac_text(c)}){d}" for d, c in self.terms.items()) or "0"
        return f"BrauerElem[{self.bot}->{self.top}]({body})"


def _delta_power(k: int):
    return DELTA**k if k else Poly.const(1)


def compose(a: BrauerElem, b: BrauerElem) -> BrauerElem:
    """a after b."""
    if b.top != a.bot:
        raise RankMismatch(f"cannot compose {a.bot}->{a.top} after {b.bot}->{b.top}")
    t: dict = {}
    for da, ca in a.terms.items():
        for db, cb in b.terms.items():
            d, loops = compose_diagrams(da, db)
            c = ca * cb * _delta_power(loops)
            t[d] = t[d] + c if d in t else c
    return BrauerElem(b.bot, a.top, t)


def tensor(a: BrauerElem, b: BrauerElem) -> BrauerElem:
    t: dict = {}
    for da, ca in a.terms.items():
        for db, cb in b.terms.items():
            d = tensor_diagrams(da, db)
            c = ca * cb
            t[d] = t[d] + c if d in t else c
    return BrauerElem(a.bot + b.bot, a.top + b.top, t)


# ---------------------------------------------------------------- generators


def perm_diagram(perm) -> BrauerDiagram:
    """Bottom point i joined to top point perm[i]."""
    r = len(perm)
    p = [None] * (2 * r)
    for i, j in enumerate(perm):
        p[i], p[r + j] = r + j, i
    return BrauerDiagram(r, r, tuple(p))


def swap_diagram(i: int, j: int, r: int) -> BrauerDiagram:
    """X_ij: the transposition of strands i and j (1-based)."""
    perm = list(range(r))
    perm[i - 1], perm[j - 1] = j - 1, i - 1
    return perm_diagram(perm)


def e_diagram(i: int, j: int, r: int) -> BrauerDiagram:
    """E_ij: cap on bottom points i, j and cup on top points i, j."""
    p = list(range(r, 2 * r)) + list(range(r))
    a, b = i - 1, j - 1
    p[a], p[b] = b, a
    p[r + a], p[r + b] = r + b, r + a
    return BrauerDiagram(r, r, tuple(p))


def cap_diagram(i: int, r: int) -> BrauerDiagram:
    """r -> r-2 joining bottom points i, i+1."""
    t = r - 2
    p = [None] * (r + t)
    k = 0
    for a in range(r):
        if a == i - 1:
            p[a], p[a + 1] = a + 1, a
        elif a == i:
            continue
        else:
            p[a], p[r + k] = r + k, a
            k += 1
    return BrauerDiagram(r, t, tuple(p))


def cup_diagram(i: int, r: int) -> BrauerDiagram:
    """r-2 -> r joining top points i, i+1."""
    b = r - 2
    p = [None] * (b + r)
    k = 0
    for a in range(r):
        if a == i - 1:
            p[b + a], p[b + a + 1] = b + a + 1, b + a
        elif a == i:
            continue
        else:
            p[k], p[b + a] = b + a, k
            k += 1
    return BrauerDiagram(b, r, tuple(p))


def generator(kind: str, i: int, r: int) -> BrauerElem:
    """Named generator.  r is the larger of source and target rank."""
    kind = kind.upper()
    if kind == "ID":
        return BrauerElem.of(identity_diagram(r))
    if kind in ("S", "E", "H"):
        if not 1 <= i <= r - 1:
            raise IndexOutOfRange(f"{kind}_{i} needs 1 <= i <= {r - 1}")
        if kind == "S":
            return BrauerElem.of(swap_diagram(i, i + 1, r))
        if kind == "E":
            return BrauerElem.of(e_diagram(i, i + 1, r))
        return BrauerElem.of(swap_diagram(i, i + 1, r)) - BrauerElem.of(e_diagram(i, i + 1, r))
    if kind in ("CAP", "CUP"):
        if not 1 <= i <= r - 1:
            raise IndexOutOfRange(f"{kind}_{i} needs 1 <= i <= {r - 1}")
        return BrauerElem.of(cap_diagram(i, r) if kind == "CAP" else cup_diagram(i, r))
    raise ValueError(f"unknown generator kind {kind!r}")


def identity(r: int) -> BrauerElem:
    return generator("ID", 0, r)


def h_elem(i: int, j: int, r: int) -> BrauerElem:
    """H_ij = X_ij - E_ij on r strands."""
    return BrauerElem.of(swap_diagram(i, j, r)) - BrauerElem.of(e_diagram(i, j, r))


def _matchings(points: list):
    if not points:
        yield []
        return
    a = points[0]
    for k in range(1, len(points)):
        rest = points[1:k] + points[k + 1 :]
        for m in _matchings(rest):
            yield [(a, points[k])] + m


def enumerate_basis(r: int, s: int) -> list:
    """All diagrams r -> s in a fixed order; empty when r+s is odd."""
    if (r + s) % 2:
        return []
    out = []
    for m in _matchings(list(range(r + s))):
        p = [None] * (r + s)
        for a, b in m:
            p[a], p[b] = b, a
        out.append(BrauerDiagram(r, s, tuple(p)))
    return out


def random_diagram(r: int, s: int, rng: random.Random) -> BrauerDiagram:
    pts = list(range(r + s))
    rng.shuffle(pts)
    p = [None] * (r + s)
    for a, b in zip(pts[::2], pts[1::2]):
        p[a], p[b] = b, a
    return BrauerDiagram(r, s, tuple(p))


def theta() -> BrauerElem:
    """Theta = X + I - (2/delta) E on two strands."""
    x = generator("S", 1, 2)
    e = generator("E", 1, 2)
    return x + identity(2) - e.scale(Frac(Poly.const(2), DELTA))


def diagram_word(d: BrauerDiagram) -> list:
    """Generators (kind, i, r) whose composite, first element applied first, is d.

    The bottom strands are permuted so that vertical strands come first (in
    the order of their top ends) followed by the caps; the caps close from the
    right; fresh cups open on the right; a final permutation places every top
    point.  Ranks follow the convention of ``generator``.
    """
    r, s = d.bot, d.top
    p = d.pairing
    verts = sorted((i for i in range(r) if p[i] >= r), key=lambda i: p[i])
    caps = [(i, p[i]) for i in range(r) if p[i] < r and i < p[i]]
    order = verts + [x for c in caps for x in c]
    word: list = []
    word += _sort_word(order, r)
    n = r
    for _ in caps:
        word.append(("CAP", n - 1, n))
        n -= 2
    k = len(verts)
    tops_v = [p[i] - r for i in verts]
    cups = [(a - r, p[a] - r) for a in range(r, r + s) if p[a] >= r and a < p[a]]
    for _ in cups:
        n += 2
        word.append(("CUP", n - 1, n))
    # current top layout: verticals (in tops_v order) then cups in order
    layout = tops_v + [x for c in cups for x in c]
    assert n == s and len(layout) == s and k == len(tops_v)
    word += _place_word(layout, s)
    return word


def _sort_word(order: list, r: int) -> list:
    """S-word bringing bottom strand order[i] to position i."""
    cur = list(range(r))  # cur[pos] = original strand at pos
    word = []
    target = list(order)
    for pos in range(r):
        j = cur.index(target[pos])
        while j > pos:
            word.append(("S", j, r))
            cur[j - 1], cur[j] = cur[j], cur[j - 1]
            j -= 1
    return word


def _place_word(layout: list, s: int) -> list:
    """S-word moving the strand at position i to top position layout[i]."""
    cur = list(layout)
    word = []
    for pos in range(s):
        j = cur.index(pos)
        while j > pos:
            word.append(("S", j, s))
            cur[j - 1], cur[j] = cur[j], cur[j - 1]
            j -= 1
    return word


def word_to_elem(word: list, r: int) -> BrauerElem:
    out = identity(r)
    for kind, i, rank in word:
        out = compose(generator(kind, i, rank), out)
    return out


# ---------------------------------------------------------------- suites


def _commutator(a: BrauerElem, b: BrauerElem) -> BrauerElem:
    return compose(a, b) - compose(b, a)


def verify_four_term_H(r: int) -> Report:
    rep = Report(f"four_term_H r={r}")
    for i, j, k in itertools.combinations(range(1, r + 1), 3):
        hij, hik, hjk = h_elem(i, j, r), h_elem(i, k, r), h_elem(j, k, r)
        rep.add(f"[H{i}{j}, H{i}{k}+H{j}{k}] = 0", _commutator(hij, hik + hjk).is_zero())
        rep.add(f"[H{i}{j}+H{i}{k}, H{j}{k}] = 0", _commutator(hij + hik, hjk).is_zero())
    return rep


def verify_brauer_suite() -> Report:
    rep = Report("brauer")
    h = generator("H", 1, 2)
    one = identity(2)
    e = generator("E", 1, 2)
    rep.add("H^2 = I - (2-delta)E", compose(h, h) == one - e.scale(2 - DELTA))
    c = compose(compose(h - one, h + one), h - one.scale(1 - DELTA))
    rep.add("(H-1)(H+1)(H-(1-delta)) = 0", c.is_zero())
    th = theta()
    rep.add("Theta^2 = 2 Theta", compose(th, th) == th.scale(2))
    rep.add("(I-X) Theta = 0", compose(one - generator("S", 1, 2), th).is_zero())
    rep.add("E Theta = 0", compose(e, th).is_zero())
    cap, cup = generator("CAP", 1, 2), generator("CUP", 1, 2)
    rep.add("cap after cup = delta", compose(cap, cup) == BrauerElem.of(identity_diagram(0), DELTA))
    i1 = identity(1)
    rep.add("straightening (cap x I)(I x cup) = I", compose(tensor(cap, i1), tensor(i1, cup)) == i1)
    rep.add("straightening (I x cap)(cup x I) = I", compose(tensor(i1, cap), tensor(cup, i1)) == i1)
    for r, s in [(2, 0), (3, 3), (4, 2), (5, 5)]:
        n = len(enumerate_basis(r, s))
        rep.add(f"|basis({r},{s})| = (r+s-1)!!", n == _double_factorial(r + s - 1))
    rng = random.Random(7)
    ok = True
    for _ in range(100):
        r, s, t, u = (rng.randint(0, 4) for _ in range(4))
        if (r + s) % 2 or (s + t) % 2 or (t + u) % 2:
            continue
        a = BrauerElem.of(random_diagram(t, u, rng))
        b = BrauerElem.of(random_diagram(s, t, rng))
        cc = BrauerElem.of(random_diagram(r, s, rng))
        ok &= compose(a, compose(b, cc)) == compose(compose(a, b), cc)
    rep.add("associativity on random triples", ok)
    for r in (3, 4):
        rep.extend(verify_four_term_H(r))
    return rep


def _double_factorial(n: int) -> int:
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


def signed_permutation_sum(m: int) -> BrauerElem:
    """Sigma(m) = sum over Sym_m of (-1)^length(sigma) sigma."""
    out = BrauerElem(m, m)
    for perm in itertools.permutations(range(m)):
        inv = sum(1 for a, b in itertools.combinations(range(m), 2) if perm[a] > perm[b])
        out = out + BrauerElem.of(perm_diagram(perm), (-1) ** inv)
    return out


def partial_trace_last(x: BrauerElem) -> BrauerElem:
    """Close the rightmost strand: (I x cap)(x x I)(I x cup)."""
    m = x.bot
    cup = tensor(identity(m - 1), generator("CUP", 1, 2))
    cap = tensor(identity(m - 1), generator("CAP", 1, 2))
    return compose(cap, compose(tensor(x, identity(1)), cup))


def enhanced_coupon_check(m: int = 3, rep=None) -> Report:
    """Check the coupon relations for Delta_m realised by the epsilon tensor.

    Delta_m = c * eps and Delta_m^* = Cap(m)(Delta_m x I(m)).  Only c^2 enters
    Sigma(m) = Delta_m Delta_m^*, so c^2 is solved for as a rational number.
    """
    from . import superlin

    out = Report(f"enhanced_coupon m={m}")
    if rep is None:
        rep = superlin.natural_rep(superlin.osp_build(m, 0))
    osp = rep.osp
    if (osp.m, osp.n) != (m, 0):
        raise ValueError("the coupon check needs the natural so_m representation")
    eps = superlin.levi_civita(m)
    sig_ok = True
    for perm in itertools.permutations(range(m)):
        inv = sum(1 for a, b in itertools.combinations(range(m), 2) if perm[a] > perm[b])
        moved = superlin.permute_tensor(eps, perm)
        sig_ok &= bool((moved == eps * (-1) ** inv).all())
    out.add("sigma Delta = (-1)^l(sigma) Delta", sig_ok)
    raw_star = superlin.coupon_dual(eps, osp)  # Cap(m)(eps x I(m)) as a row covector
    raw = superlin.outer(eps, raw_star)  # eps eps^* with c = 1
    sigma = superlin.brauer_matrix(signed_permutation_sum(m), osp)
    c2 = superlin.solve_scalar_multiple(sigma, raw)
    out.add("Sigma(m) = c^2 eps eps^* for a rational c^2", c2 is not None, f"c^2 = {c2}")
    if c2 is None:
        return out
    out.add("Sigma(m) = Delta Delta^*", bool((sigma == raw * c2).all()), f"c^2 = {c2}")
    # partial trace of Sigma(m) in B_m(delta) is (delta - m + 1) Sigma(m-1);
    # under the functor the same closure of Delta Delta^* must agree
    tr_sym = partial_trace_last(signed_permutation_sum(m))
    lower = signed_permutation_sum(m - 1)
    factor = None
    for d, coeff in lower.terms.items():
        factor = tr_sym.terms.get(d, Poly()) * (Fraction(1) / coeff.const_value())
        break
    out.add(
        "closure of Sigma(m) = (delta-m+1) Sigma(m-1) in B(delta)",
        tr_sym == lower.scale(factor) and factor == DELTA - (m - 1),
        f"factor {factor}",
    )
    tr_rep = superlin.partial_trace_matrix(raw * c2, osp, m)
    lower_rep = superlin.brauer_matrix(lower, osp)
    k = superlin.solve_scalar_multiple(tr_rep, lower_rep)
    # (delta - m + 1) = k forces delta
    forced = k + (m - 1) if k is not None else None
    out.add("delta forced to m", forced == m, f"delta = {forced}")
    out.add("forced delta equals sdim", forced == osp.sdim, f"sdim = {osp.sdim}")
    return out

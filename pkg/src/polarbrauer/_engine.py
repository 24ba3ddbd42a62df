"""Rewriting engine behind ``polar.normalize``.

Every morphism A: r -> s is bent into Hom(0, s + r) by composing A (extended
by the identity on r strands) with r nested cups.  In Hom(0, n) the engine
works with states

    [M; a] = theta^a o U_M,

where ``M`` is a perfect matching of the n top points (all cups, stored as a
partner tuple) and ``theta^a`` is a product of the commuting Jucys-Murphy
type elements theta_j(n) (position j, 0-based; theta_0 is the connector D).
In a general state the exponents may sit anywhere; a normal state carries
exponents only on the left end of each cup.

Relations used (positions 0-based, S_k swaps k and k+1):

    S_k th_k     = th_{k+1} S_k + E_k - 1
    S_k th_{k+1} = th_k S_k - E_k + 1
    Cap_k (th_k + th_{k+1}) = (1 - delta) Cap_k
    Cap_k th_j  = th_j' Cap_k          (j outside {k, k+1}, shifted index)
    th_i U + th_j U = corr(U)          (cup (i, j) of U; corr is dot-free)
    Cap_0 th_0^c Cup_0 = Z_c           (central)

Odd Z_c are eliminated by running the engine on Cap_0 S_0 th_0^c Cup_0,
which equals Z_c because Cap_0 S_0 = Cap_0.  For odd c the result is
(-1) Z_c plus lower terms, which determines Z_c.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import BudgetExceeded
from .scalars import DELTA, Poly

ONE = Poly.const(1)
ONE_MINUS_DELTA = ONE - DELTA


def _acc(target: dict, source: dict, coeff) -> None:
    """target += coeff * source, dropping zeros."""
    for k, v in source.items():
        w = v * coeff if coeff is not ONE else v
        old = target.get(k)
        if old is None:
            if w:
                target[k] = w
        else:
            new = old + w
            if new:
                target[k] = new
            else:
                del target[k]


def _acc1(target: dict, key, coeff) -> None:
    old = target.get(key)
    if old is None:
        if coeff:
            target[key] = coeff
    else:
        new = old + coeff
        if new:
            target[key] = new
        else:
            del target[key]


# ------------------------------------------------------------ matchings


def swap(m: tuple, k: int) -> tuple:
    a, b = m[k], m[k + 1]
    if a == k + 1:
        return m
    out = list(m)
    out[k], out[k + 1] = b, a
    out[b] = k
    out[a] = k + 1
    return tuple(out)


def _shift_down(i: int, k: int) -> int:
    return i if i < k else i - 2


def cap_matching(m: tuple, k: int) -> tuple:
    """Cap positions k, k+1 when they lie on different cups."""
    x, y = m[k], m[k + 1]
    out = []
    for i, p in enumerate(m):
        if i == k or i == k + 1:
            continue
        if i == x:
            p = y
        elif i == y:
            p = x
        out.append(_shift_down(p, k))
    return tuple(out)


def remove_cup(m: tuple, k: int) -> tuple:
    return tuple(_shift_down(p, k) for i, p in enumerate(m) if i != k and i != k + 1)


def insert_cup(m: tuple, k: int) -> tuple:
    out = [p if p < k else p + 2 for p in m]
    return tuple(out[:k] + [k + 1, k] + out[k:])


def drop2(a: tuple, k: int) -> tuple:
    return a[:k] + a[k + 2 :]


def insert2(a: tuple, k: int) -> tuple:
    return a[:k] + (0, 0) + a[k:]


def bump(a: tuple, j: int, d: int = 1) -> tuple:
    return a[:j] + (a[j] + d,) + a[j + 1 :]


def add_vec(a: tuple, b: tuple) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


def nested_cups(r: int) -> tuple:
    return tuple(2 * r - 1 - i for i in range(2 * r))


# ------------------------------------------------------------ engine


class Engine:
    """Memoised rewriting on states [M; a] with Poly coefficients.

    With ``raw=True`` every pole closure Cap_0 th_0^c Cup_0 (c >= 1) is
    returned as the bare indeterminate z_c; this is the mode used to derive
    the odd closures.
    """

    def __init__(self, raw: bool = False):
        self.raw = raw
        self.steps = 0
        self.budget: int | None = None
        self._s: dict = {}
        self._cap: dict = {}
        self._bubble: dict = {}
        self._corr: dict = {}
        self._norm: dict = {}
        self._z: dict = {}

    # budget accounting ------------------------------------------------
    def _tick(self):
        self.steps += 1
        if self.budget is not None and self.steps > self.budget:
            raise BudgetExceeded(f"rewrite budget of {self.budget} steps exhausted")

    # closures ---------------------------------------------------------
    def z_value(self, c: int) -> Poly:
        if c == 0:
            return DELTA
        if self.raw:
            return Poly.var(f"z{c}")
        if c not in self._z:
            self._z[c] = derive_closure(c)
        return self._z[c]

    # generators on single states --------------------------------------
    def op_s(self, k: int, m: tuple, a: tuple) -> dict:
        key = (k, m, a)
        hit = self._s.get(key)
        if hit is not None:
            return hit
        self._tick()
        x, y = a[k], a[k + 1]
        out: dict = {}
        if x == 0 and y == 0:
            out[(swap(m, k), a)] = ONE
        elif x > 0:
            a1 = bump(a, k, -1)
            for (m2, b2), c in self.op_s(k, m, a1).items():
                _acc1(out, (m2, bump(b2, k + 1)), c)
            _acc(out, self.op_e(k, m, a1), ONE)
            _acc1(out, (m, a1), -ONE)
        else:
            a1 = bump(a, k + 1, -1)
            for (m2, b2), c in self.op_s(k, m, a1).items():
                _acc1(out, (m2, bump(b2, k)), c)
            _acc(out, self.op_e(k, m, a1), -ONE)
            _acc1(out, (m, a1), ONE)
        self._s[key] = out
        return out

    def op_e(self, k: int, m: tuple, a: tuple) -> dict:
        out: dict = {}
        for (m2, b2), c in self.op_cap(k, m, a).items():
            _acc1(out, (insert_cup(m2, k), insert2(b2, k)), c)
        return out

    def op_cap(self, k: int, m: tuple, a: tuple) -> dict:
        key = (k, m, a)
        hit = self._cap.get(key)
        if hit is not None:
            return hit
        self._tick()
        out: dict = {}
        if a[k + 1] > 0:
            a1 = bump(a, k + 1, -1)
            _acc(out, self.op_cap(k, m, a1), ONE_MINUS_DELTA)
            _acc(out, self.op_cap(k, m, bump(a1, k)), -ONE)
        elif m[k] == k + 1:
            rest = drop2(a, k)
            for (m2, b2), c in self.bubble(k, a[k], m).items():
                _acc1(out, (m2, add_vec(b2, rest)), c)
        elif a[k] > 0:
            x = m[k]
            a1 = bump(a, k, -1)
            _acc(out, self.op_cap(k, m, bump(a1, x)), -ONE)
            for (m2, _), c in self.corr(m, min(k, x), max(k, x)).items():
                _acc(out, self.op_cap(k, m2, a1), c)
        else:
            out[(cap_matching(m, k), drop2(a, k))] = ONE
        self._cap[key] = out
        return out

    def bubble(self, p: int, c: int, m: tuple) -> dict:
        """Cap_p th_p^c U_M where (p, p+1) is a cup of M."""
        key = (p, c, m)
        hit = self._bubble.get(key)
        if hit is not None:
            return hit
        self._tick()
        n = len(m)
        zero = (0,) * (n - 2)
        out: dict = {}
        if c == 0:
            out[(remove_cup(m, p), zero)] = DELTA
        elif p == 0:
            zc = self.z_value(c)
            if zc:
                out[(remove_cup(m, 0), zero)] = zc
        else:
            m1 = swap(swap(m, p - 1), p)  # cup moved to (p-1, p)
            _acc(out, self.bubble(p - 1, c, m1), ONE)
            m3 = swap(m1, p)
            base = (0,) * n
            for i in range(c):
                b = bump(base, p - 1, c - 1 - i) if c - 1 - i else base
                piece: dict = {(m3, b): ONE}
                _acc(piece, self.op_e(p - 1, m3, b), -ONE)
                for (m4, b4), v in piece.items():
                    b5 = bump(b4, p, i) if i else b4
                    _acc(out, self.op_cap(p, m4, b5), v)
        self._bubble[key] = out
        return out

    def corr(self, m: tuple, i: int, j: int) -> dict:
        """th_i U_M + th_j U_M for the cup (i, j), i < j; dot-free states."""
        key = (m, i, j)
        hit = self._corr.get(key)
        if hit is not None:
            return hit
        self._tick()
        zero = (0,) * len(m)
        out: dict = {}
        if j == i + 1:
            out[(m, zero)] = ONE_MINUS_DELTA
        else:
            m2 = swap(m, j - 1)
            for (m3, _), c in self.corr(m2, i, j - 1).items():
                _acc1(out, (swap(m3, j - 1), zero), c)
            _acc1(out, (m2, zero), ONE)
            for (m3, b3), c in self.op_e(j - 1, m2, zero).items():
                _acc1(out, (m3, b3), -c)
        self._corr[key] = out
        return out

    # normal form ------------------------------------------------------
    def normal_term(self, m: tuple, a: tuple) -> dict:
        """Move every exponent to the left end of its cup."""
        key = (m, a)
        hit = self._norm.get(key)
        if hit is not None:
            return hit
        for j, e in enumerate(a):
            if e and m[j] < j:
                break
        else:
            out = {key: ONE}
            self._norm[key] = out
            return out
        self._tick()
        i = m[j]
        a1 = bump(a, j, -1)
        out: dict = {}
        _acc(out, self.normal_term(m, bump(a1, i)), -ONE)
        for (m2, _), c in self.corr(m, i, j).items():
            _acc(out, self.normal_term(m2, a1), c)
        self._norm[key] = out
        return out

    def normalize_vec(self, vec: dict) -> dict:
        out: dict = {}
        for (m, a), c in vec.items():
            _acc(out, self.normal_term(m, a), c)
        return out

    # words -------------------------------------------------------------
    def apply(self, gen: tuple, vec: dict) -> dict:
        """Apply one generator (kind, i, n) in bent form to a vector.

        Indices are 1-based as in the word grammar; the bent tail of the
        state is untouched.
        """
        kind, i = gen[0], gen[1]
        out: dict = {}
        if kind == "D":
            for (m, a), c in vec.items():
                _acc1(out, (m, bump(a, 0)), c)
        elif kind == "S":
            for (m, a), c in vec.items():
                _acc(out, self.op_s(i - 1, m, a), c)
        elif kind == "E":
            for (m, a), c in vec.items():
                _acc(out, self.op_e(i - 1, m, a), c)
        elif kind == "CAP":
            for (m, a), c in vec.items():
                _acc(out, self.op_cap(i - 1, m, a), c)
        elif kind == "CUP":
            for (m, a), c in vec.items():
                _acc1(out, (insert_cup(m, i - 1), insert2(a, i - 1)), c)
        elif kind == "Z":
            zc = self.z_value(i)
            for key, c in vec.items():
                _acc1(out, key, c * zc)
        else:
            raise ValueError(f"engine cannot apply {kind}")
        return out

    def run_word(self, word, r0: int) -> dict:
        """Bent image of a word (first generator applied first) on source r0."""
        vec = {(nested_cups(r0), (0,) * (2 * r0)): ONE}
        for g in word:
            vec = self.apply(g, vec)
            if not vec:
                break
        return vec


_RAW = Engine(raw=True)
_CLOSURES: dict = {}


def derive_closure(c: int) -> Poly:
    """Z_c in terms of delta and even closures (Z_0 = delta)."""
    if c in _CLOSURES:
        return _CLOSURES[c]
    if c == 0:
        return DELTA
    if c % 2 == 0:
        val = Poly.var(f"z{c}")
    else:
        cup = ((1, 0), (c, 0))
        vec = {}
        for key, v in _RAW.op_s(0, *cup).items():
            _acc(vec, _RAW.op_cap(0, *key), v)
        total = Poly()
        for v in vec.values():
            total = total + v
        name = f"z{c}"
        own = Poly({m: k for m, k in total.terms.items() if dict(m).get(name, 0) == 1})
        rest = total - own
        a = own.subs({name: 1})
        if not a.is_const() or a.const_value() != -1:
            raise ArithmeticError(f"closure recursion for Z_{c} has unexpected leading coefficient {a}")
        # Z_c = -Z_c + rest
        val = rest * Fraction(1, 2)
        lower = {f"z{k}": derive_closure(k) for k in range(1, c, 2)}
        val = val.subs(lower)
    _CLOSURES[c] = val
    return val


def check_even_closure(c: int) -> Poly:
    """For even c the same route gives Z_c = Z_c + rest; returns rest (should vanish)."""
    vec = {}
    for key, v in _RAW.op_s(0, (1, 0), (c, 0)).items():
        _acc(vec, _RAW.op_cap(0, *key), v)
    total = Poly()
    for v in vec.values():
        total = total + v
    lower = {f"z{k}": derive_closure(k) for k in range(1, c + 1, 2)}
    return (total - Poly.var(f"z{c}")).subs(lower)

"""Exact coefficient arithmetic.

``Poly`` is a sparse polynomial over the rationals in named indeterminates
drawn from the universe ``delta, z1, z2, z3, ..., lambda``.  A monomial is a
tuple of ``(name, exponent)`` pairs sorted by universe order, so monomials
hash cheaply and never store zero exponents.

``Frac`` is a quotient of two ``Poly``.  Reduction cancels common monomial
factors and rational content.  When the denominator involves only ``delta``
it also cancels the univariate gcd in ``delta`` taken against every
coefficient of the numerator.  Nothing more general is attempted.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Iterable, Mapping, Union


class DivisionByZero(ZeroDivisionError):
    """A denominator vanished (usually ``delta = 0`` in a TL context)."""


_ZNAME = re.compile(r"^z(\d+)$")


def var_rank(name: str) -> tuple:
    """Sort key of an indeterminate in the declared universe."""
    if name == "delta":
        return (0, 0)
    m = _ZNAME.match(name)
    if m:
        return (1, int(m.group(1)))
    if name == "lambda":
        return (2, 0)
    raise ValueError(f"indeterminate {name!r} is outside the universe")


Monomial = tuple  # tuple[tuple[str, int], ...]
ONE_MONO: Monomial = ()


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for n, e in b:
        d[n] = d.get(n, 0) + e
    return tuple(sorted(d.items(), key=lambda t: var_rank(t[0])))


def _mono_key(m: Monomial) -> tuple:
    """Graded-lex key: larger key prints first."""
    deg = sum(e for _, e in m)
    return (deg, tuple((tuple(-x for x in var_rank(n)), e) for n, e in m))


def _coerce_rational(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot read {x!r} as a rational")


class Poly:
    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Fraction] | None = None):
        self.terms: dict = {m: c for m, c in (terms or {}).items() if c != 0}
        self._hash = None

    # construction helpers
    @staticmethod
    def const(c) -> "Poly":
        c = _coerce_rational(c)
        return Poly({ONE_MONO: c}) if c else Poly()

    @staticmethod
    def var(name: str, power: int = 1) -> "Poly":
        var_rank(name)
        if power == 0:
            return Poly.const(1)
        return Poly({((name, power),): Fraction(1)})

    @staticmethod
    def _raw(terms: dict) -> "Poly":
        p = Poly.__new__(Poly)
        p.terms = terms
        p._hash = None
        return p

    # predicates
    def is_zero(self) -> bool:
        return not self.terms

    def is_const(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and ONE_MONO in self.terms)

    def const_value(self) -> Fraction:
        if not self.is_const():
            raise ValueError(f"{self} is not constant")
        return self.terms.get(ONE_MONO, Fraction(0))

    def variables(self) -> set:
        return {n for m in self.terms for n, _ in m}

    def degree(self, name: str | None = None) -> int:
        if not self.terms:
            return -1
        if name is None:
            return max(sum(e for _, e in m) for m in self.terms)
        return max(dict(m).get(name, 0) for m in self.terms)

    # arithmetic
    def _lift(self, other):
        if isinstance(other, Poly):
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.const(other)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if not o.terms:
            return self
        if not self.terms:
            return o
        t = dict(self.terms)
        for m, c in o.terms.items():
            v = t.get(m)
            if v is None:
                t[m] = c
            else:
                v += c
                if v:
                    t[m] = v
                else:
                    del t[m]
        return Poly._raw(t)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return Poly()
            return Poly._raw({m: c * other for m, c in self.terms.items()})
        if not isinstance(other, Poly):
            return NotImplemented
        if not self.terms or not other.terms:
            return Poly()
        t: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                v = t.get(m, 0) + c1 * c2
                if v:
                    t[m] = v
                else:
                    t.pop(m, None)
        return Poly._raw(t)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a Poly")
        out = Poly.const(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                raise DivisionByZero("division by zero")
            return self * (Fraction(1) / other)
        if isinstance(other, Poly):
            return Frac(self, other)
        return NotImplemented

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return Frac(o, self)

    def __eq__(self, other):
        if isinstance(other, Frac):
            return other == self
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self.terms == o.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    # views
    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), key=lambda t: _mono_key(t[0]), reverse=True)

    def leading(self) -> tuple:
        return self.sorted_terms()[0]

    def __str__(self):
        return poly_text(self)

    def __repr__(self):
        return f"Poly({poly_text(self)!r})"

    def content(self) -> Fraction:
        """Positive rational c with self/c primitive in Z[vars]."""
        if not self.terms:
            return Fraction(0)
        nums = [c.numerator for c in self.terms.values()]
        dens = [c.denominator for c in self.terms.values()]
        g = reduce(gcd, nums)
        lcm = reduce(lambda a, b: a * b // gcd(a, b), dens)
        return Fraction(abs(g), lcm)

    def subs(self, bindings: Mapping[str, object]) -> "Poly":
        """Substitute names by Rationals or Polys."""
        out = Poly()
        cache: dict = {}
        for m, c in self.terms.items():
            term = Poly.const(c)
            rest = []
            for n, e in m:
                if n in bindings:
                    key = (n, e)
                    if key not in cache:
                        v = bindings[n]
                        v = v if isinstance(v, Poly) else Poly.const(v)
                        cache[key] = v ** e
                    term = term * cache[key]
                else:
                    rest.append((n, e))
            if rest:
                term = term * Poly._raw({tuple(rest): Fraction(1)})
            out = out + term
        return out


def _fmt_rational(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def mono_text(m: Monomial) -> str:
    return "*".join(n if e == 1 else f"{n}^{e}" for n, e in m)


def poly_text(p: Poly) -> str:
    """Canonical text, graded-lex with the highest term first."""
    if not p.terms:
        return "0"
    parts = []
    for i, (m, c) in enumerate(p.sorted_terms()):
        neg = c < 0
        a = -c if neg else c
        body = mono_text(m)
        if not body:
            s = _fmt_rational(a)
        elif a == 1:
            s = body
        else:
            s = f"{_fmt_rational(a)}*{body}"
        if i == 0:
            parts.append(("-" if neg else "") + s)
        else:
            parts.append((" - " if neg else " + ") + s)
    return "".join(parts)


def poly_add(a: Poly, b: Poly) -> Poly:
    return a + b


def poly_mul(a: Poly, b: Poly) -> Poly:
    return a * b


DELTA = Poly.var("delta")


def z(n: int) -> Poly:
    return Poly.var(f"z{n}")


# ---------------------------------------------------------------- division


def _lex_key(m: Monomial) -> tuple:
    d = dict(m)
    names = sorted(d, key=var_rank)
    return tuple((tuple(-x for x in var_rank(n)), d[n]) for n in names)


def _divides(a: Monomial, b: Monomial) -> bool:
    db = dict(b)
    return all(db.get(n, 0) >= e for n, e in a)


def _mono_div(b: Monomial, a: Monomial) -> Monomial:
    d = dict(b)
    for n, e in a:
        d[n] -= e
    return tuple(sorted(((n, e) for n, e in d.items() if e), key=lambda t: var_rank(t[0])))


def exact_div(num: Poly, den: Poly) -> Poly | None:
    """num/den when den divides num, else None (multivariate division)."""
    if den.is_zero():
        raise DivisionByZero("division by the zero polynomial")
    if num.is_zero():
        return Poly()
    lead_m, lead_c = max(den.terms.items(), key=lambda t: _lex_key(t[0]))
    q = Poly()
    r = num
    guard = 0
    while r.terms:
        m, c = max(r.terms.items(), key=lambda t: _lex_key(t[0]))
        if not _divides(lead_m, m):
            return None
        t = Poly._raw({_mono_div(m, lead_m): c / lead_c})
        q = q + t
        r = r - t * den
        guard += 1
        if guard > 100000:
            return None
    return q


def _univariate(p: Poly, name: str) -> dict:
    return {dict(m).get(name, 0): c for m, c in p.terms.items()}


def _uni_to_poly(d: dict, name: str) -> Poly:
    return Poly({(((name, e),) if e else ()): c for e, c in d.items()})


def _uni_gcd(a: dict, b: dict) -> dict:
    """Monic gcd of univariate polys given as {exp: coeff}."""

    def trim(p):
        return {e: c for e, c in p.items() if c}

    a, b = trim(a), trim(b)
    while b:
        db = max(b)
        lb = b[db]
        r = dict(a)
        while r and max(r) >= db:
            dr = max(r)
            f = r[dr] / lb
            for e, c in b.items():
                k = e + dr - db
                r[k] = r.get(k, 0) - f * c
            r = trim(r)
        a, b = b, r
    if not a:
        return {}
    la = a[max(a)]
    return {e: c / la for e, c in a.items()}


def _split_by_delta(p: Poly) -> list:
    """Coefficients of p as polynomials in delta, one per monomial in the other names."""
    groups: dict = {}
    for m, c in p.terms.items():
        rest = tuple((n, e) for n, e in m if n != "delta")
        e = dict(m).get("delta", 0)
        groups.setdefault(rest, {})[e] = c
    return list(groups.values())


class Frac:
    """Reduced quotient num/den of Polys."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = num if isinstance(num, Poly) else Poly.const(num)
        den = Poly.const(1) if den is None else (den if isinstance(den, Poly) else Poly.const(den))
        if den.is_zero():
            raise DivisionByZero("zero denominator")
        self.num, self.den = _reduce(num, den)

    @staticmethod
    def of(x) -> "Frac":
        return x if isinstance(x, Frac) else Frac(x)

    def is_poly(self) -> bool:
        return self.den == Poly.const(1)

    def simplify(self):
        """Collapse to a Poly when the denominator is one."""
        return self.num if self.is_poly() else self

    def __add__(self, other):
        if not isinstance(other, (Frac, Poly, int, Fraction)):
            return NotImplemented
        o = Frac.of(other)
        if self.den == o.den:
            return Frac(self.num + o.num, self.den)
        return Frac(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        f = Frac.__new__(Frac)
        f.num, f.den = -self.num, self.den
        return f

    def __sub__(self, other):
        if not isinstance(other, (Frac, Poly, int, Fraction)):
            return NotImplemented
        return self + (-Frac.of(other))

    def __rsub__(self, other):
        return Frac.of(other) + (-self)

    def __mul__(self, other):
        if not isinstance(other, (Frac, Poly, int, Fraction)):
            return NotImplemented
        o = Frac.of(other)
        return Frac(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, (Frac, Poly, int, Fraction)):
            return NotImplemented
        o = Frac.of(other)
        if o.num.is_zero():
            raise DivisionByZero("division by zero")
        return Frac(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return Frac.of(other) / self

    def __pow__(self, n: int):
        if n < 0:
            return Frac(self.den ** (-n), self.num ** (-n))
        return Frac(self.num**n, self.den**n)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self):
        return not self.num.is_zero()

    def __eq__(self, other):
        if not isinstance(other, (Frac, Poly, int, Fraction)):
            return NotImplemented
        o = Frac.of(other)
        return (self.num * o.den - o.num * self.den).is_zero()

    def __hash__(self):
        return hash((self.num, self.den))

    def __str__(self):
        if self.is_poly():
            return poly_text(self.num)
        n, d = poly_text(self.num), poly_text(self.den)
        if len(self.num.terms) > 1:
            n = f"({n})"
        if len(self.den.terms) > 1 or not self.den.is_const() and self.den.leading()[1] != 1:
            d = f"({d})"
        return f"{n}/{d}"

    def __repr__(self):
        return f"Frac({str(self)!r})"


def _reduce(num: Poly, den: Poly) -> tuple:
    one = Poly.const(1)
    if num.is_zero():
        return Poly(), one
    if den.is_const():
        return num * (1 / den.const_value()), one
    # common monomial factor
    shared = None
    for m in list(num.terms) + list(den.terms):
        d = dict(m)
        shared = d if shared is None else {n: min(e, d.get(n, 0)) for n, e in shared.items()}
    shared = {n: e for n, e in (shared or {}).items() if e}
    if shared:
        sm = tuple(sorted(shared.items(), key=lambda t: var_rank(t[0])))
        num = Poly._raw({_mono_div(m, sm): c for m, c in num.terms.items()})
        den = Poly._raw({_mono_div(m, sm): c for m, c in den.terms.items()})
    if den.is_const():
        return num * (1 / den.const_value()), one
    q = exact_div(num, den)
    if q is not None:
        return q, one
    if den.variables() == {"delta"}:
        g = _univariate(den, "delta")
        for piece in _split_by_delta(num):
            g = _uni_gcd(g, piece)
            if max(g) == 0:
                break
        if g and max(g) > 0:
            gp = _uni_to_poly(g, "delta")
            num = exact_div(num, gp)
            den = exact_div(den, gp)
    # normalise scale: denominator primitive with positive leading coefficient
    lead = den.leading()[1]
    k = den.content() * (1 if lead > 0 else -1)
    return num * (1 / k), den * (1 / k)


Scalar = Union[Poly, Frac]


def as_scalar(x) -> Scalar:
    if isinstance(x, (Poly, Frac)):
        return x
    return Poly.const(x)


def normalize_scalar(x) -> Scalar:
    """Frac with unit denominator collapses to Poly."""
    if isinstance(x, Frac):
        return x.simplify()
    return as_scalar(x)


def is_zero(x) -> bool:
    return (x.is_zero() if isinstance(x, (Poly, Frac)) else x == 0)


def specialize(p, bindings: Mapping[str, object]):
    """Substitute exact values; returns a Fraction when nothing symbolic is left."""
    b = {k: (v if isinstance(v, Poly) else _coerce_rational(v)) for k, v in bindings.items()}
    for k in b:
        var_rank(k)
    if isinstance(p, Frac):
        num = p.num.subs(b)
        den = p.den.subs(b)
        if den.is_zero():
            raise DivisionByZero(f"denominator {p.den} vanishes at {dict(bindings)}")
        out = Frac(num, den).simplify()
    elif isinstance(p, Poly):
        out = p.subs(b)
    else:
        return _coerce_rational(p)
    if isinstance(out, Poly) and out.is_const():
        return out.const_value()
    return out


def parse_poly(text: str) -> Poly:
    """Read the canonical text form (and a little more: parentheses are not supported)."""
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty polynomial")
    out = Poly()
    for sign, body in re.findall(r"([+-]?)([^+-]+)", s):
        coeff = Fraction(-1 if sign == "-" else 1)
        mono = Poly.const(1)
        for f in body.split("*"):
            if re.fullmatch(r"\d+(/\d+)?", f):
                coeff *= Fraction(f)
            else:
                name, _, e = f.partition("^")
                mono = mono * Poly.var(name, int(e) if e else 1)
        out = out + mono * coeff
    return out


def frac_text(x) -> str:
    return str(x) if isinstance(x, (Poly, Frac)) else _fmt_rational(_coerce_rational(x))


def iter_names(ps: Iterable[Poly]) -> set:
    out: set = set()
    for p in ps:
        out |= p.variables()
    return out

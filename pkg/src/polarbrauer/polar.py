"""The polar Brauer category: words, normal forms and the relation battery.

Objects are ranks r standing for (m, v^r).  A word is a tuple of generators
``(kind, i, r)`` listed in the order they are applied (first applied first).
The rank field follows the text grammar: for CAP it is the source rank, for
CUP the target rank, and for every other kind the (unchanged) rank.  D is the
connector to strand 1; Y is the affine dot on strand 1; ``("Z", l, r)`` is
Z_l tensored with the identity on r strands.

Normal forms live on dotted diagrams: a Brauer diagram with a number of
dots on each strand.  A dot on a strand whose smaller label is a bottom point
b is the connector hh(b, r) applied before the diagram; a dot on a top cup
with left end j is hh(j, s) applied after it.  Bottom dots are applied in
increasing b, top dots in decreasing j.
"""

from __future__ import annotations

import itertools
import os
import random
import re
from dataclasses import dataclass
from fractions import Fraction

from . import _engine
from .brauer import BrauerDiagram, BrauerElem, diagram_word, h_elem
from .errors import BudgetExceeded, IndexOutOfRange, ParseError, RankMismatch
from .report import Report
from .scalars import DELTA, Frac, Poly, poly_text

REWRITE_BUDGET = int(os.environ.get("REWRITE_BUDGET", "20000000"))

KINDS = ("S", "E", "CAP", "CUP", "D", "ID", "Z", "Y")
ONE = Poly.const(1)
HALF_ONE_MINUS_DELTA = (ONE - DELTA) * Fraction(1, 2)


def _poly(c) -> Poly:
    if isinstance(c, Poly):
        return c
    if isinstance(c, Frac):
        p = c.simplify()
        if isinstance(p, Poly):
            return p
        raise TypeError(f"polar coefficients must be polynomial, got {c}")
    return Poly.const(c)


# ---------------------------------------------------------------- words


def step(gen: tuple, cur: int) -> int:
    """Target rank of gen applied at rank cur, with validation."""
    kind, i, r = gen
    if kind not in KINDS:
        raise ValueError(f"unknown generator kind {kind!r}")
    if kind == "Z":
        if i < 1:
            raise IndexOutOfRange("Z_l needs l >= 1")
        return cur
    if kind == "CUP":
        if cur != r - 2:
            raise RankMismatch(f"CUP{i}@{r} needs rank {r - 2}, got {cur}", (r - 2, cur))
    elif cur != r:
        raise RankMismatch(f"{kind}@{r} applied at rank {cur}", (r, cur))
    if kind in ("S", "E", "CAP", "CUP") and not 1 <= i <= r - 1:
        raise IndexOutOfRange(f"{kind}_{i} needs 1 <= i <= {r - 1}")
    if kind in ("D", "Y") and r < 1:
        raise IndexOutOfRange(f"{kind} needs at least one strand")
    return r - 2 if kind == "CAP" else r


def word_target(word, r: int) -> int:
    for g in word:
        r = step(g, r)
    return r


def clean_word(word) -> tuple:
    return tuple(g for g in word if g[0] != "ID")


def gen_text(g: tuple) -> str:
    kind, i, r = g
    if kind in ("D", "ID", "Y"):
        return f"{kind}@{r}"
    if kind == "Z":
        return f"Z{i}"
    return f"{kind}{i}@{r}"


def extend_word(word, k: int) -> tuple:
    """The word tensored with k identity strands on the right."""
    return tuple((g[0], g[1], g[2] + k) for g in word)


class PolarElem:
    """Linear combination of words r -> s with polynomial coefficients."""

    __slots__ = ("r", "s", "terms")

    def __init__(self, r: int, s: int, terms=None):
        self.r, self.s = r, s
        self.terms: dict = {}
        for w, c in (terms or {}).items():
            w = clean_word(w)
            if word_target(w, r) != s:
                raise RankMismatch(f"word {w} does not map {r} -> {s}")
            _engine._acc1(self.terms, w, _poly(c))

    @staticmethod
    def word(word, r: int, c=1) -> "PolarElem":
        word = tuple(word)
        return PolarElem(r, word_target(word, r), {word: c})

    @staticmethod
    def identity(r: int) -> "PolarElem":
        return PolarElem(r, r, {(): 1})

    @staticmethod
    def from_brauer(b: BrauerElem) -> "PolarElem":
        return PolarElem(b.bot, b.top, {tuple(diagram_word(d)): c for d, c in b.terms.items()})

    def _same(self, other):
        if (self.r, self.s) != (other.r, other.s):
            raise RankMismatch(f"{self.r}->{self.s} vs {other.r}->{other.s}")

    def __add__(self, other):
        self._same(other)
        out = PolarElem(self.r, self.s)
        out.terms = dict(self.terms)
        _engine._acc(out.terms, other.terms, ONE)
        return out

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "PolarElem":
        c = _poly(c)
        out = PolarElem(self.r, self.s)
        if c:
            out.terms = {w: v * c for w, v in self.terms.items()}
        return out

    def __rmul__(self, c):
        return self.scale(c)

    def __matmul__(self, other: "PolarElem") -> "PolarElem":
        return compose_polar(self, other)

    def __pow__(self, n: int) -> "PolarElem":
        out = PolarElem.identity(self.r)
        for _ in range(n):
            out = self @ out
        return out

    def tensor_id(self, k: int) -> "PolarElem":
        out = PolarElem(self.r + k, self.s + k)
        out.terms = {extend_word(w, k): c for w, c in self.terms.items()}
        return out

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        return isinstance(other, PolarElem) and (self.r, self.s) == (other.r, other.s) and self.terms == other.terms

    def __hash__(self):
        return hash((self.r, self.s, frozenset(self.terms.items())))

    def word_terms(self) -> tuple:
        return list(self.terms.items()), self.r, self.s

    def text(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for w, c in sorted(self.terms.items(), key=lambda t: (len(t[0]), t[0])):
            body = " * ".join(gen_text(g) for g in reversed(w)) or f"ID@{self.r}"
            parts.append(body if c == 1 else f"({poly_text(c)}) * {body}")
        return " + ".join(parts)

    def __repr__(self):
        return f"PolarElem({self.r}->{self.s}: {self.text()})"


def compose_polar(a: PolarElem, b: PolarElem) -> PolarElem:
    """a o b (b applied first)."""
    if b.s != a.r:
        raise RankMismatch(f"cannot compose {a.r}->{a.s} after {b.r}->{b.s}")
    out = PolarElem(b.r, a.s)
    for wb, cb in b.terms.items():
        for wa, ca in a.terms.items():
            _engine._acc1(out.terms, wb + wa, cb * ca)
    return out


def gen(kind: str, i: int, r: int) -> PolarElem:
    g = (kind, i, r)
    src = r - 2 if kind == "CUP" else r
    if kind == "Z":
        src = r
    return PolarElem.word((g,), src)


def hh_word(j: int, r: int) -> tuple:
    if not 1 <= j <= r:
        raise IndexOutOfRange(f"hh({j}, {r}) needs 1 <= j <= r")
    down = tuple(("S", k, r) for k in range(j - 1, 0, -1))
    return down + (("D", 1, r),) + tuple(reversed(down))


def hh(j: int, r: int) -> PolarElem:
    """Connector from the pole to strand j."""
    return PolarElem.word(hh_word(j, r), r)


def vartheta(j: int, r: int) -> PolarElem:
    """Sum of the connectors into strand j from the pole and the strands a < j."""
    out = hh(j, r)
    for a in range(1, j):
        out = out + PolarElem.from_brauer(h_elem(a, j, r))
    return out


def z_closure(ell: int) -> Poly:
    if ell < 1:
        raise IndexOutOfRange("closures are indexed from 1")
    return _engine.derive_closure(ell)


def closure_word(ell: int) -> tuple:
    return (("CUP", 1, 2),) + (("D", 1, 2),) * ell + (("CAP", 1, 2),)


def transpose_word(word) -> tuple:
    """Turn the strand of an End(1) word around.

    A cup opens on strands 2, 3, the word acts on the pole and strand 2 (its
    connectors pass over strand 1), and strands 1, 2 are capped.
    """
    conj = (("S", 1, 3),)
    return (("CUP", 2, 3),) + conj + extend_word(word, 2) + conj + (("CAP", 1, 3),)


def transpose(a: PolarElem) -> PolarElem:
    if (a.r, a.s) != (1, 1):
        raise RankMismatch("transpose is defined on End(1)")
    out = PolarElem(1, 1)
    for w, c in a.terms.items():
        _engine._acc1(out.terms, transpose_word(w), c)
    return out


# ---------------------------------------------------------------- affine layer


def to_affine(a: PolarElem) -> PolarElem:
    """Replace each D@r by Y@r - ((1 - delta)/2) ID@r."""
    return _substitute(a, "D", "Y", -HALF_ONE_MINUS_DELTA)


def from_affine(a: PolarElem) -> PolarElem:
    """Replace each Y@r by D@r + ((1 - delta)/2) ID@r."""
    return _substitute(a, "Y", "D", HALF_ONE_MINUS_DELTA)


def _substitute(a: PolarElem, old: str, new: str, shift: Poly) -> PolarElem:
    out = PolarElem(a.r, a.s)
    for w, c in a.terms.items():
        options = []
        for g in w:
            if g[0] == old:
                options.append(((((new, 1, g[2]),), ONE), ((), shift)))
            else:
                options.append((((g,), ONE),))
        for choice in itertools.product(*options):
            word = tuple(x for part, _ in choice for x in part)
            coeff = c
            for _, k in choice:
                coeff = coeff * k
            _engine._acc1(out.terms, word, coeff)
    return out


# ---------------------------------------------------------------- dotted diagrams


@dataclass(frozen=True)
class DottedDiagram:
    """Brauer diagram with dot counts keyed by the 0-based anchor label of each strand."""

    diagram: BrauerDiagram
    dots: tuple = ()

    def __post_init__(self):
        for anchor, n in self.dots:
            if n <= 0:
                raise ValueError("dot counts must be positive (omit empty strands)")
            if self.diagram.pairing[anchor] < anchor:
                raise ValueError(f"label {anchor} is not the anchor of its strand")

    @staticmethod
    def make(d: BrauerDiagram, dots: dict | None = None) -> "DottedDiagram":
        return DottedDiagram(d, tuple(sorted((a, n) for a, n in (dots or {}).items() if n)))

    @property
    def total(self) -> int:
        return sum(n for _, n in self.dots)

    def strand_key(self, anchor: int) -> str:
        return f"{anchor + 1}-{self.diagram.pairing[anchor] + 1}"

    def to_json(self) -> dict:
        return {"diagram": self.diagram.to_json(), "dots": {self.strand_key(a): n for a, n in self.dots}}

    def word(self) -> tuple:
        d = self.diagram
        r, s = d.bot, d.top
        out: list = []
        dots = dict(self.dots)
        for b in range(r):
            out += list(hh_word(b + 1, r)) * dots.get(b, 0)
        out += diagram_word(d)
        for t in range(r + s - 1, r - 1, -1):
            out += list(hh_word(t - r + 1, s)) * dots.get(t, 0)
        return tuple(out)

    def elem(self) -> PolarElem:
        return PolarElem.word(self.word(), self.diagram.bot)


def _position(label: int, r: int, s: int) -> int:
    return label - r if label >= r else s + r - 1 - label


def _label(pos: int, r: int, s: int) -> int:
    return pos + r if pos < s else s + r - 1 - pos


def bent_state(dd: DottedDiagram) -> tuple:
    d = dd.diagram
    r, s = d.bot, d.top
    m = [0] * (r + s)
    for x, y in enumerate(d.pairing):
        m[_position(x, r, s)] = _position(y, r, s)
    a = [0] * (r + s)
    for anchor, n in dd.dots:
        p, q = _position(anchor, r, s), _position(d.pairing[anchor], r, s)
        a[min(p, q)] = n
    return tuple(m), tuple(a)


def state_diagram(m: tuple, a: tuple, r: int, s: int) -> DottedDiagram:
    pairing = [0] * (r + s)
    for p, q in enumerate(m):
        pairing[_label(p, r, s)] = _label(q, r, s)
    d = BrauerDiagram(r, s, tuple(pairing))
    dots = {}
    for p, n in enumerate(a):
        if n:
            x, y = _label(p, r, s), _label(m[p], r, s)
            dots[min(x, y)] = n
    return DottedDiagram.make(d, dots)


class NormalForm:
    """Combination of dotted diagrams with coefficients in Q[delta, z2, z4, ...]."""

    def __init__(self, r: int, s: int, terms: dict | None = None):
        self.r, self.s = r, s
        self.terms = {k: v for k, v in (terms or {}).items() if v}

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        return isinstance(other, NormalForm) and (self.r, self.s) == (other.r, other.s) and self.terms == other.terms

    def __hash__(self):
        return hash((self.r, self.s, frozenset(self.terms.items())))

    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), key=lambda t: (-t[0].total, t[0].diagram.pairing, t[0].dots))

    def to_elem(self) -> PolarElem:
        out = PolarElem(self.r, self.s)
        for dd, c in self.terms.items():
            _engine._acc1(out.terms, dd.word(), c)
        return out

    def word_terms(self) -> tuple:
        return self.to_elem().word_terms()

    def to_json(self) -> list:
        return [dict(dd.to_json(), coeff=poly_text(c)) for dd, c in self.sorted_terms()]

    def variables(self) -> set:
        out: set = set()
        for c in self.terms.values():
            out |= c.variables()
        return out

    def __repr__(self):
        body = " + ".join(f"({poly_text(c)}) {dd.diagram}{dict(dd.dots)}" for dd, c in self.sorted_terms())
        return f"NormalForm({self.r}->{self.s}: {body or '0'})"


# ---------------------------------------------------------------- normalization


_ENGINE = _engine.Engine()
_INTERNAL: dict = {}


def _engine_word(word) -> tuple:
    out = []
    for g in word:
        if g[0] == "Y":
            raise ValueError("expand Y with from_affine before running the engine")
        out.append(g)
    return tuple(out)


def _internal(dd: DottedDiagram) -> tuple:
    """(lead coefficient, full normal expansion) of a dotted diagram."""
    hit = _INTERNAL.get(dd)
    if hit is not None:
        return hit
    eng = _ENGINE
    vec = eng.normalize_vec(eng.run_word(dd.word(), dd.diagram.bot))
    top = bent_state(dd)
    lead = vec.get(top)
    if lead is None or lead not in (ONE, -ONE):
        raise ArithmeticError(f"dotted diagram {dd} lost its leading term")
    for (m, a) in vec:
        if (m, a) != top and sum(a) >= dd.total:
            raise ArithmeticError(f"dotted diagram {dd} has a second top-degree term")
    hit = (lead, vec)
    _INTERNAL[dd] = hit
    return hit


def normalize(a, budget: int | None = None) -> NormalForm:
    """Rewrite a PolarElem (or re-embed a NormalForm) into dotted-diagram normal form.

    An explicit ``budget`` runs on a fresh engine, so the step count does not
    depend on what earlier calls left in the shared cache.
    """
    if isinstance(a, NormalForm):
        a = a.to_elem()
    a = from_affine(a)
    eng = _ENGINE if budget is None else _engine.Engine()
    eng.budget = eng.steps + (REWRITE_BUDGET if budget is None else budget)
    vec: dict = {}
    try:
        for w, c in a.terms.items():
            v = eng.normalize_vec(eng.run_word(_engine_word(w), a.r))
            _engine._acc(vec, v, c)
        out = _solve(vec, a.r, a.s)
    except BudgetExceeded as exc:
        err = BudgetExceeded(str(exc))
        err.partial = vec
        raise err from None
    finally:
        eng.budget = None
    return out


def _solve(vec: dict, r: int, s: int) -> NormalForm:
    work = dict(vec)
    out: dict = {}
    while work:
        key = max(work, key=lambda k: (sum(k[1]), k))
        dd = state_diagram(key[0], key[1], r, s)
        lead, expansion = _internal(dd)
        c = work[key] * lead
        _engine._acc1(out, dd, c)
        _engine._acc(work, expansion, -c)
    return NormalForm(r, s, out)


# ---------------------------------------------------------------- text grammar


_TOKEN = re.compile(
    r"\s*(?:(?P<gen>CAP|CUP|ID|[SEDYZ])(?P<idx>\d*)(?:@(?P<rank>\d+))?"
    r"|(?P<op>[*+\-()^/])|(?P<num>\d+)|(?P<name>delta|z\d+|lambda))"
)


class _Chain:
    """Sum of (coefficient, generators in written order); a parse-time value."""

    def __init__(self, terms: list):
        self.terms = terms


class _Parser:
    """Recursive descent for

    expr   := ['+'|'-'] term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := atom ['^' int]
    atom   := generator | integer | name | '(' expr ')'

    Scalars and words share the grammar; '/' only divides by scalars.
    """

    def __init__(self, text: str):
        self.text = text
        self.tokens = []
        pos = 0
        while pos < len(text):
            if text[pos].isspace():
                pos += 1
                continue
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                raise ParseError(f"unexpected character {text[pos]!r}", pos + 1)
            start = pos + len(m.group(0)) - len(m.group(0).lstrip())
            self.tokens.append((m, start + 1))
            pos = m.end()
        self.k = 0

    def peek(self) -> str:
        if self.k >= len(self.tokens):
            return ""
        return self.tokens[self.k][0].group("op") or "atom"

    def col(self) -> int:
        return self.tokens[self.k][1] if self.k < len(self.tokens) else len(self.text) + 1

    def take(self, op: str) -> None:
        if self.peek() != op:
            raise ParseError(f"expected {op!r}", self.col())
        self.k += 1

    def parse(self):
        if not self.tokens:
            raise ParseError("empty expression", 1)
        val = self.expr()
        if self.k < len(self.tokens):
            raise ParseError("unexpected token", self.col())
        return val

    def expr(self):
        sign = 1
        if self.peek() in ("+", "-"):
            sign = -1 if self.peek() == "-" else 1
            self.k += 1
        val = _scale(self.term(), sign)
        while self.peek() in ("+", "-"):
            sign = -1 if self.peek() == "-" else 1
            col = self.col()
            self.k += 1
            val = _add(val, _scale(self.term(), sign), col)
        return val

    def term(self):
        val = self.factor()
        while self.peek() in ("*", "/"):
            op, col = self.peek(), self.col()
            self.k += 1
            rhs = self.factor()
            if op == "/":
                if isinstance(rhs, _Chain):
                    raise ParseError("division by a morphism", col)
                if rhs.is_zero():
                    raise ParseError("division by zero", col)
                val = _scale(val, 1 / rhs)
            else:
                val = _mul(val, rhs)
        return val

    def factor(self):
        val = self.atom()
        if self.peek() == "^":
            self.k += 1
            if self.peek() != "atom" or not self.tokens[self.k][0].group("num"):
                raise ParseError("exponent must be a non-negative integer", self.col())
            n = int(self.tokens[self.k][0].group("num"))
            col = self.col()
            self.k += 1
            if n == 0:
                if isinstance(val, _Chain):
                    raise ParseError("zeroth power of a morphism needs a rank", col)
                return Frac(ONE)
            out = val
            for _ in range(n - 1):
                out = _mul(out, val)
            return out
        return val

    def atom(self):
        if self.peek() == "(":
            self.k += 1
            val = self.expr()
            self.take(")")
            return val
        if self.peek() != "atom":
            raise ParseError("expected a generator or a coefficient", self.col())
        m, col = self.tokens[self.k]
        self.k += 1
        if m.group("num"):
            return Frac(Poly.const(int(m.group("num"))))
        if m.group("name"):
            return Frac(Poly.var(m.group("name")))
        kind, idx, rank = m.group("gen"), m.group("idx"), m.group("rank")
        if kind == "Z":
            if not idx or rank:
                raise ParseError("Z takes an index and no rank", col)
            return _Chain([(Frac(ONE), [("Z", int(idx), None, col)])])
        if rank is None:
            raise ParseError(f"{kind} needs a rank '@r'", col)
        if kind in ("S", "E", "CAP", "CUP") and not idx:
            raise ParseError(f"{kind} needs an index", col)
        if kind in ("D", "ID", "Y") and idx:
            raise ParseError(f"{kind} takes no index", col)
        return _Chain([(Frac(ONE), [(kind, int(idx) if idx else 1, int(rank), col)])])


def _scale(val, c):
    if isinstance(val, _Chain):
        return _Chain([(k * c, g) for k, g in val.terms])
    return val * c


def _mul(a, b):
    if isinstance(a, _Chain) and isinstance(b, _Chain):
        return _Chain([(ka * kb, ga + gb) for ka, ga in a.terms for kb, gb in b.terms])
    if isinstance(a, _Chain):
        return _scale(a, b)
    return _scale(b, a)


def _add(a, b, col: int):
    if isinstance(a, _Chain) and isinstance(b, _Chain):
        return _Chain(a.terms + b.terms)
    if isinstance(a, _Chain) or isinstance(b, _Chain):
        raise ParseError("cannot add a scalar to a morphism", col)
    return a + b


def parse_morphism(text: str) -> PolarElem:
    """Parse a polar word expression; ``A * B`` is A applied after B."""
    val = _Parser(text).parse()
    if not isinstance(val, _Chain):
        raise ParseError("expression has no generators", 1)
    return _assemble(val.terms)


def _assemble(terms: list) -> PolarElem:
    built = []
    for coeff, gens in terms:
        applied = list(reversed(gens))
        src = None
        for g in applied:
            if g[0] != "Z":
                src = g[2] - 2 if g[0] == "CUP" else g[2]
                break
        built.append((coeff, applied, src, gens[0][3] if gens else 1))
    known = [b[2] for b in built if b[2] is not None]
    out = None
    for coeff, applied, src, col in built:
        if src is None:
            src = known[0] if known else 0
        cur = src
        word = []
        for g in applied:
            g3 = (g[0], g[1], cur if g[0] == "Z" else g[2])
            try:
                cur = step(g3, cur)
            except RankMismatch as exc:
                raise RankMismatch(str(exc), exc.ranks, g[3]) from None
            except IndexOutOfRange as exc:
                raise ParseError(str(exc), g[3]) from None
            word.append(g3)
        try:
            elem = PolarElem.word(word, src, coeff)
        except TypeError as exc:
            raise ParseError(str(exc), col) from None
        if out is None:
            out = elem
        elif (out.r, out.s) != (elem.r, elem.s):
            raise RankMismatch(f"term maps {elem.r}->{elem.s}, expected {out.r}->{out.s}", ((out.r, out.s), (elem.r, elem.s)), col)
        else:
            out = out + elem
    return out


# ---------------------------------------------------------------- random words


def random_word(r: int, length: int, rng: random.Random, max_rank: int = 6, kinds=("S", "E", "CAP", "CUP", "D")) -> tuple:
    """Random composable word; kind "H" inserts a whole connector hh(j, r) as one step."""
    word = []
    cur = r
    for _ in range(length):
        options = []
        if cur >= 1:
            options += ["D", "D", "H"]
        if cur >= 2:
            options += ["S", "E", "CAP", "CAP"]
        if cur + 2 <= max_rank:
            options.append("CUP")
        options = [k for k in options if k in kinds]
        if not options:
            break
        kind = rng.choice(options)
        if kind == "H":
            word += hh_word(rng.randint(1, cur), cur)
        elif kind == "CUP":
            word.append(("CUP", rng.randint(1, cur + 1), cur + 2))
            cur += 2
        elif kind == "D":
            word.append(("D", 1, cur))
        else:
            word.append((kind, rng.randint(1, cur - 1), cur))
            if kind == "CAP":
                cur -= 2
    return tuple(word)


def random_elem(r: int, rng: random.Random, max_len: int = 8, max_rank: int = 6, connectors: bool = False) -> PolarElem:
    kinds = ("S", "E", "CAP", "CUP", "D") + (("H",) if connectors else ())
    return PolarElem.word(random_word(r, rng.randint(0, max_len), rng, max_rank, kinds), r)


# ---------------------------------------------------------------- relation battery


def _comm(a: PolarElem, b: PolarElem) -> PolarElem:
    return a @ b - b @ a


def phi() -> PolarElem:
    return PolarElem.identity(1).scale(ONE - DELTA) - hh(1, 1)


def g_elem(ell: int) -> PolarElem:
    z = PolarElem.identity(1).scale(DELTA) if ell == 0 else zgen(ell, 1)
    return z - hh(1, 1) ** ell


def zgen(ell: int, r: int) -> PolarElem:
    return PolarElem.word((("Z", ell, r),), r)


def ht(ell: int) -> PolarElem:
    """(H^ell)^T in End(1)."""
    return transpose(hh(1, 1) ** ell)


def relation_battery(max_r: int = 4) -> list:
    """(label, element that must vanish)."""
    rels = []
    closure = lambda ell: PolarElem.word(closure_word(ell), 0)
    idm = PolarElem.identity
    rels.append(("Z1 = 0", closure(1)))
    rels.append(("2 Z3 = (2 - delta) Z2", closure(3).scale(2) - closure(2).scale(2 - DELTA)))
    rels.append(("Z5 closure equals z_closure(5)", closure(5) - idm(0).scale(z_closure(5))))
    rels.append(("Z2 x I commutes with H", _comm(zgen(2, 1), hh(1, 1))))
    h = hh(1, 1)
    rels.append(("H^T = -H", transpose(h) + h))
    rels.append(("(H^2)^T = H^2 + (delta-2) H", ht(2) - h @ h - h.scale(DELTA - 2)))
    for ell in range(0, 5):
        rels.append((f"HT-H-1 l={ell}", ht(ell + 1) - ht(ell) @ phi() - g_elem(ell)))
        rels.append((f"HT-H-2 l={ell}", ht(ell + 1) - phi() @ ht(ell) - g_elem(ell)))
    for k in range(1, 6):
        for ell in range(1, 7 - k):
            rels.append((f"[H^{k}, (H^{ell})^T] = 0", _comm(h**k, ht(ell))))
    for ell in range(2, 6):
        total = PolarElem(1, 1)
        for i in range(1, ell):
            total = total + _comm(zgen(i, 1), phi() ** (ell - i))
        rels.append((f"sum [Z_i x I, Phi^(l-i)] = 0 l={ell}", total))
    for ell in range(1, 5):
        for r in (1, 2):
            rels.append((f"Z{ell} central against D at r={r}", _comm(zgen(ell, r), hh(1, r))))
        rels.append((f"Z{ell} central against S1, E1 at r=2", _comm(zgen(ell, 2), gen("S", 1, 2)) + _comm(zgen(ell, 2), gen("E", 1, 2)).scale(3)))
    four = _comm(hh(1, 2) + hh(2, 2), PolarElem.from_brauer(h_elem(1, 2, 2)))
    rels.append(("four term [H01 + H02, H12] = 0", four))
    rels.append(("four term [H01, H02 + H12] = 0", _comm(hh(1, 2), hh(2, 2) + PolarElem.from_brauer(h_elem(1, 2, 2)))))
    for r in range(2, max_r + 1):
        th = {j: vartheta(j, r) for j in range(1, r + 1)}
        e1 = gen("E", 1, r)
        for ell in range(1, 4):
            rels.append((f"JM-1 r={r} l={ell}", e1 @ th[1] ** ell @ e1 - zgen(ell, r) @ e1 if ell > 1 else e1 @ th[1] @ e1))
        for i in range(1, r + 1):
            for j in range(i + 1, r + 1):
                rels.append((f"JM-2 r={r} [th{i}, th{j}]", _comm(th[i], th[j])))
        for k in range(1, r):
            s, e = gen("S", k, r), gen("E", k, r)
            for j in range(1, r + 1):
                if j not in (k, k + 1):
                    rels.append((f"JM-3 r={r} k={k} j={j}", _comm(s, th[j])))
                    rels.append((f"JM-4 r={r} k={k} j={j}", _comm(e, th[j])))
            one = idm(r)
            rels.append((f"JM-5 r={r} k={k}", s @ th[k] - th[k + 1] @ s - e + one))
            rels.append((f"JM-6 r={r} k={k}", th[k] @ s - s @ th[k + 1] - e + one))
            rels.append((f"JM-7 r={r} k={k}", e @ (th[k] + th[k + 1]) - e.scale(ONE - DELTA)))
            rels.append((f"JM-8 r={r} k={k}", (th[k] + th[k + 1]) @ e - e.scale(ONE - DELTA)))
    return rels


POLAR_FAMILY = [(3, 0), (5, 0), (0, 1), (0, 2), (2, 1)]


def oracle_vanishes(a, osp, module, rng: random.Random, probes: int = 2, full_limit: int = 200) -> bool:
    from .superlin import Evaluator, is_zero_mat

    ev = Evaluator(osp, module)
    terms, r, s = a.word_terms()
    x = _batch(ev, terms, r, rng, probes, full_limit)
    return is_zero_mat(ev.apply_elem(terms, x, s))


def oracle_equal(a, b, osp, module, rng: random.Random, probes: int = 2, full_limit: int = 200) -> bool:
    from .superlin import Evaluator, mat_equal

    ev = Evaluator(osp, module)
    ta, r, s = a.word_terms()
    tb, _, _ = b.word_terms()
    x = _batch(ev, ta + tb, r, rng, probes, full_limit)
    return mat_equal(ev.apply_elem(ta, x, s), ev.apply_elem(tb, x, s))


def max_rank(word, r: int) -> int:
    top = r
    for g in word:
        r = step(g, r) if g[0] != "Z" else r
        top = max(top, r)
    return top


def _batch(ev, terms, r: int, rng, probes: int, full_limit: int):
    """Full basis when it is small, otherwise random integer probes."""
    peak = max([max_rank(w, r) for w, _ in terms] + [r])
    n_in = ev.module.dim * ev.d**r
    if n_in <= full_limit and n_in * ev.module.dim * ev.d**peak <= 200000:
        return ev.basis_batch(r)
    return ev.random_batch(r, probes, rng)


def verify_polar_suite(max_r: int = 4, family=POLAR_FAMILY, seed: int = 5, oracle: bool = True) -> Report:
    from .superlin import natural_rep, osp_build

    rep = Report("polar")
    rng = random.Random(seed)
    mods = []
    if oracle:
        for m, n in family:
            osp = osp_build(m, n)
            mods.append((f"({m}|{2 * n})", osp, natural_rep(osp)))
    rep.add("z_closure(1) = 0", z_closure(1) == 0)
    rep.add("z_closure(3) = (2-delta)/2 z2", z_closure(3) == (2 - DELTA) * Poly.var("z2") * Fraction(1, 2))
    rep.add("odd closures contain only even z", all(all(int(v[1:]) % 2 == 0 for v in z_closure(c).variables() if v != "delta") for c in (3, 5, 7)))
    for label, elem in relation_battery(max_r):
        ok = normalize(elem).is_zero()
        detail = ""
        if oracle:
            bad = [tag for tag, osp, mod in mods if not oracle_vanishes(elem, osp, mod, rng)]
            ok = ok and not bad
            detail = f"oracle failures: {bad}" if bad else ""
        rep.add(label, ok, detail)
    return rep


def verify_soundness(count: int = 200, seed: int = 11, max_len: int = 8, max_r: int = 4, family=POLAR_FAMILY) -> Report:
    """Random words against their normal forms under every module of the family.

    Normalizing the normal form again must give the same normal form.
    """
    from .superlin import natural_rep, osp_build

    rng = random.Random(seed)
    mods = [(f"({m}|{2 * n})", osp_build(m, n)) for m, n in family]
    mods = [(tag, osp, natural_rep(osp)) for tag, osp in mods]
    rep = Report("soundness")
    bad, unstable = [], []
    for k in range(count):
        w = random_elem(rng.randint(0, max_r), rng, max_len, 6, connectors=True)
        nf = normalize(w)
        if normalize(nf.to_elem()) != nf:
            unstable.append(k)
        ne = nf.to_elem()
        for tag, osp, mod in mods:
            if not oracle_equal(w, ne, osp, mod, rng):
                bad.append((k, tag))
    rep.add(f"functor_eval(W) = functor_eval(normalize(W)) on {count} words", not bad, f"failures {bad[:5]}" if bad else "")
    rep.add("normalize is idempotent", not unstable, f"unstable {unstable[:5]}" if unstable else "")
    return rep

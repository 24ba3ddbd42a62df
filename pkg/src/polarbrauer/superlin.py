"""Super linear algebra and the representation functors.

V = C^{m|2n} has its even basis vectors first.  The form is
omega(e^a, e^b) = g^{ab} with g^{ab} the identity on the even block and the
standard symplectic matrix [[0, I], [-I, 0]] on the odd block; g_{ab} denotes
the inverse matrix.  The matrix unit E^c_b sends e^b to e^c, and

    E_{ab} = sum_c g_{ac} E^c_b,   J_{ab} = E_{ab} - (-1)^{[a][b]} E_{ba},
    X^a_b  = sum_c g^{ac} J_{cb}.

Operators on graded tensor products follow the Koszul rule
(A x B)(u x w) = (-1)^{|B||u|} A u x B w; this is implemented once, in
``gkron`` and in the slot operators of ``Evaluator``.

All arrays are numpy object arrays holding ints or Fractions, so every
entry is exact.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import CutoffExceeded
from .report import Report
from .scalars import Frac, Poly, specialize


class EmptySpace(ValueError):
    pass


class SingularForm(ValueError):
    pass


class DimensionMismatch(ValueError):
    pass


class SpecializationMissing(KeyError):
    pass


def zeros(*shape) -> np.ndarray:
    return np.zeros(shape, dtype=object)


def eye(n: int) -> np.ndarray:
    out = zeros(n, n)
    for i in range(n):
        out[i, i] = 1
    return out


def mat_equal(a: np.ndarray, b: np.ndarray) -> bool:
    return a.shape == b.shape and bool(np.all(a == b))


def is_zero_mat(a: np.ndarray) -> bool:
    return bool(np.all(a == 0))


def exact_inverse(a: np.ndarray) -> np.ndarray:
    n = a.shape[0]
    aug = [[Fraction(a[i, j]) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise SingularForm("matrix is singular")
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [x / p for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    out = zeros(n, n)
    for i in range(n):
        for j in range(n):
            v = aug[i][n + j]
            out[i, j] = int(v) if v.denominator == 1 else v
    return out


def rank_exact(rows) -> int:
    """Rank of a list of rows (any exact entries) by Gaussian elimination."""
    m = [[Fraction(x) for x in r] for r in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    for col in range(ncols):
        piv = next((r for r in range(rank, len(m)) if m[r][col] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        p = m[rank][col]
        for r in range(len(m)):
            if r != rank and m[r][col] != 0:
                f = m[r][col] / p
                m[r] = [x - f * y for x, y in zip(m[r], m[rank])]
        rank += 1
    return rank


def solve_coords(basis_vecs: list, target) -> list | None:
    """Coefficients c with sum c_i basis_vecs[i] = target, or None."""
    n = len(basis_vecs)
    rows = len(target)
    aug = [[Fraction(basis_vecs[j][i]) for j in range(n)] + [Fraction(target[i])] for i in range(rows)]
    piv_cols = []
    r = 0
    for col in range(n):
        piv = next((k for k in range(r, rows) if aug[k][col] != 0), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        p = aug[r][col]
        aug[r] = [x / p for x in aug[r]]
        for k in range(rows):
            if k != r and aug[k][col] != 0:
                f = aug[k][col]
                aug[k] = [x - f * y for x, y in zip(aug[k], aug[r])]
        piv_cols.append(col)
        r += 1
    for k in range(r, rows):
        if aug[k][n] != 0:
            return None
    out = [Fraction(0)] * n
    for k, col in enumerate(piv_cols):
        out[col] = aug[k][n]
    return out


def solve_scalar_multiple(a: np.ndarray, b: np.ndarray):
    """c with a = c * b exactly, or None."""
    flat_a, flat_b = a.ravel(), b.ravel()
    c = None
    for x, y in zip(flat_a, flat_b):
        if y != 0:
            c = Fraction(x) / Fraction(y)
            break
    if c is None:
        return Fraction(0) if is_zero_mat(a) else None
    return c if mat_equal(a, b * c) else None


def _clean(x):
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x)
    return x


def clean(a: np.ndarray) -> np.ndarray:
    return np.vectorize(_clean, otypes=[object])(a) if a.size else a


# ---------------------------------------------------------------- spaces


@dataclass(frozen=True)
class GradedSpace:
    parities: tuple

    @property
    def dim(self) -> int:
        return len(self.parities)

    @property
    def sdim(self) -> int:
        return sum(1 if p == 0 else -1 for p in self.parities)


@dataclass
class SuperMatrix:
    mat: np.ndarray
    rows: tuple
    cols: tuple

    def __matmul__(self, other: "SuperMatrix") -> "SuperMatrix":
        if self.cols != other.rows:
            raise DimensionMismatch("incompatible super matrices")
        return SuperMatrix(self.mat.dot(other.mat), self.rows, other.cols)

    def __eq__(self, other):
        return isinstance(other, SuperMatrix) and mat_equal(self.mat, other.mat)

    def to_json(self) -> list:
        return [[str(x) for x in row] for row in self.mat]


def gkron(a: np.ndarray, a_cols: tuple, b: np.ndarray, b_parity: int) -> np.ndarray:
    """Koszul tensor product of homogeneous operators a and b."""
    out = np.kron(a, b)
    if b_parity % 2:
        nb = b.shape[1]
        for u, p in enumerate(a_cols):
            if p:
                out[:, u * nb : (u + 1) * nb] *= -1
    return out


def kron_parities(p: tuple, q: tuple) -> tuple:
    return tuple((x + y) % 2 for x in p for y in q)


# ---------------------------------------------------------------- osp


@dataclass
class OspData:
    m: int
    n: int
    parities: tuple
    g_up: np.ndarray  # g^{ab} = omega(e^a, e^b)
    g_low: np.ndarray  # inverse
    basis_pairs: list  # (a, b) indices of the basis J_{ab}
    basis: list  # matrices on V

    @property
    def dim_v(self) -> int:
        return len(self.parities)

    @property
    def sdim(self) -> int:
        return self.m - 2 * self.n

    @property
    def space(self) -> GradedSpace:
        return GradedSpace(self.parities)

    def unit(self, c: int, b: int) -> np.ndarray:
        e = zeros(self.dim_v, self.dim_v)
        e[c, b] = 1
        return e

    def e_low(self, a: int, b: int) -> np.ndarray:
        return sum((self.g_low[a, c] * self.unit(c, b) for c in range(self.dim_v)), zeros(self.dim_v, self.dim_v))

    def j_matrix(self, a: int, b: int) -> np.ndarray:
        pa, pb = self.parities[a], self.parities[b]
        return self.e_low(a, b) - (-1) ** (pa * pb) * self.e_low(b, a)

    def j_parity(self, a: int, b: int) -> int:
        return (self.parities[a] + self.parities[b]) % 2


def standard_form(m: int, n: int) -> np.ndarray:
    d = m + 2 * n
    g = zeros(d, d)
    for i in range(m):
        g[i, i] = 1
    for k in range(n):
        g[m + k, m + n + k] = 1
        g[m + n + k, m + k] = -1
    return g


def osp_build(m: int, n: int, g_up: np.ndarray | None = None) -> OspData:
    if m < 0 or n < 0 or m + 2 * n == 0:
        raise EmptySpace("V must be nonzero")
    parities = tuple([0] * m + [1] * (2 * n))
    g = standard_form(m, n) if g_up is None else g_up
    g_low = exact_inverse(g)
    osp = OspData(m, n, parities, g, g_low, [], [])
    pairs = []
    d = m + 2 * n
    for a in range(d):
        for b in range(a, d):
            if a == b and parities[a] == 0:
                continue
            pairs.append((a, b))
    osp.basis_pairs = pairs
    osp.basis = [clean(osp.j_matrix(a, b)) for a, b in pairs]
    return osp


def osp_dimension(m: int, n: int) -> int:
    return m * (m - 1) // 2 + 2 * m * n + n * (2 * n + 1)


def tau(space: GradedSpace) -> np.ndarray:
    """Signed flip on V x V, tau(e^a x e^b) = (-1)^{[a][b]} e^b x e^a."""
    d = space.dim
    out = zeros(d * d, d * d)
    for a in range(d):
        for b in range(d):
            out[b * d + a, a * d + b] = (-1) ** (space.parities[a] * space.parities[b])
    return out


def cap_cup(osp: OspData) -> tuple:
    """(C_hat as a 1 x d^2 row, C_check as a d^2 x 1 column)."""
    d = osp.dim_v
    cap = zeros(1, d * d)
    cup = zeros(d * d, 1)
    for a in range(d):
        for b in range(d):
            cap[0, a * d + b] = osp.g_up[a, b]
            cup[a * d + b, 0] = osp.g_low[a, b]
    return cap, cup


def e_matrix_v(osp: OspData) -> np.ndarray:
    cap, cup = cap_cup(osp)
    return cup.dot(cap)


# ---------------------------------------------------------------- reps


@dataclass
class Rep:
    """A finite-dimensional module over osp given by the images of the J basis."""

    osp: OspData
    parities: tuple
    mats: list  # images of osp.basis, same order
    name: str = "rep"
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def dim(self) -> int:
        return len(self.parities)

    def j_image(self, a: int, b: int) -> np.ndarray:
        """Image of J_{ab} for any index pair."""
        key = ("J", a, b)
        if key in self._cache:
            return self._cache[key]
        osp = self.osp
        if (a, b) in osp.basis_pairs:
            out = self.mats[osp.basis_pairs.index((a, b))]
        elif (b, a) in osp.basis_pairs:
            pa, pb = osp.parities[a], osp.parities[b]
            out = -((-1) ** (pa * pb)) * self.mats[osp.basis_pairs.index((b, a))]
        else:
            out = zeros(self.dim, self.dim)
        self._cache[key] = out
        return out

    def x_upper(self, a: int, b: int) -> np.ndarray:
        """Image of X^a_b = sum_c g^{ac} J_{cb}."""
        key = ("X", a, b)
        if key in self._cache:
            return self._cache[key]
        osp = self.osp
        out = zeros(self.dim, self.dim)
        for c in range(osp.dim_v):
            if osp.g_up[a, c] != 0:
                out = out + osp.g_up[a, c] * self.j_image(c, b)
        self._cache[key] = out
        return out

    def casimir(self) -> np.ndarray:
        """C = 1/2 sum (-1)^{[b]} X^a_b X^b_a."""
        osp = self.osp
        out = zeros(self.dim, self.dim)
        for a in range(osp.dim_v):
            for b in range(osp.dim_v):
                out = out + (-1) ** osp.parities[b] * self.x_upper(a, b).dot(self.x_upper(b, a))
        return clean(out * Fraction(1, 2))


def natural_rep(osp: OspData) -> Rep:
    return Rep(osp, osp.parities, list(osp.basis), name=f"V({osp.m}|{2 * osp.n})")


def trivial_rep(osp: OspData) -> Rep:
    return Rep(osp, (0,), [zeros(1, 1) for _ in osp.basis], name="trivial")


def supercommutator(x: np.ndarray, px: int, y: np.ndarray, py: int) -> np.ndarray:
    return x.dot(y) - (-1) ** (px * py) * y.dot(x)


def adjoint_rep(osp: OspData) -> Rep:
    """The adjoint module, in the J basis."""
    flat = [b.ravel() for b in osp.basis]
    par = [osp.j_parity(a, b) for a, b in osp.basis_pairs]
    mats = []
    for i, x in enumerate(osp.basis):
        cols = []
        for j, y in enumerate(osp.basis):
            br = supercommutator(x, par[i], y, par[j]).ravel()
            c = solve_coords(flat, br)
            if c is None:
                raise ArithmeticError("basis is not closed under the bracket")
            cols.append([_clean(v) for v in c])
        mats.append(np.array(cols, dtype=object).T.copy())
    return Rep(osp, tuple(par), mats, name=f"adj({osp.m}|{2 * osp.n})")


def tensor_rep(r1: Rep, r2: Rep) -> Rep:
    osp = r1.osp
    par = kron_parities(r1.parities, r2.parities)
    mats = []
    for (a, b), x1, x2 in zip(osp.basis_pairs, r1.mats, r2.mats):
        p = osp.j_parity(a, b)
        mats.append(gkron(x1, r1.parities, eye(r2.dim), 0) + gkron(eye(r1.dim), r1.parities, x2, p))
    return Rep(osp, par, mats, name=f"{r1.name}x{r2.name}")


@dataclass
class TruncVerma:
    """Verma module of sp_2 = osp(0|2) with basis m_k = Y^k m_+, 0 <= k <= K."""

    lam: Fraction
    cutoff: int
    osp: OspData = None
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.lam = Fraction(self.lam)
        if self.osp is None:
            self.osp = osp_build(0, 1)
        self._coords = _sl2_coords(self.osp)

    @property
    def dim(self) -> int:
        return self.cutoff + 1

    @property
    def parities(self) -> tuple:
        return (0,) * self.dim

    def t_mat(self) -> np.ndarray:
        out = zeros(self.dim, self.dim)
        for k in range(self.dim):
            out[k, k] = _clean(self.lam - 2 * k)
        return out

    def x_mat(self) -> np.ndarray:
        out = zeros(self.dim, self.dim)
        for k in range(1, self.dim):
            out[k - 1, k] = _clean(k * (self.lam - k + 1))
        return out

    def y_mat(self) -> np.ndarray:
        out = zeros(self.dim, self.dim)
        for k in range(self.dim - 1):
            out[k + 1, k] = 1
        return out

    def j_image(self, a: int, b: int) -> np.ndarray:
        key = ("J", a, b)
        if key not in self._cache:
            ct, cx, cy = self._coords[(a, b)]
            self._cache[key] = clean(ct * self.t_mat() + cx * self.x_mat() + cy * self.y_mat())
        return self._cache[key]

    x_upper = Rep.x_upper
    casimir = Rep.casimir

    def z2_value(self) -> Fraction:
        """Z_2 acts on M_lambda by 2 chi_lambda(C) = -2 lambda (lambda + 2)."""
        return -2 * self.lam * (self.lam + 2)


def _sl2_coords(osp: OspData) -> dict:
    """Coordinates of each J_{ab} on V = C^{0|2} in the basis T, X, Y."""
    t = np.array([[1, 0], [0, -1]], dtype=object)
    x = np.array([[0, 1], [0, 0]], dtype=object)
    y = np.array([[0, 0], [1, 0]], dtype=object)
    out = {}
    for a in range(2):
        for b in range(2):
            j = osp.j_matrix(a, b)
            c = solve_coords([t.ravel(), x.ravel(), y.ravel()], j.ravel())
            if c is None:
                raise ArithmeticError("J does not lie in sl_2")
            out[(a, b)] = tuple(c)
    return out


def tempered_casimir(ma, mb) -> np.ndarray:
    """(mu_a x mu_b)(t), t = 1/2 sum X^a_b x (-1)^{[b]} X^b_a."""
    osp = ma.osp
    if mb.osp is not osp and (mb.osp.m, mb.osp.n) != (osp.m, osp.n):
        raise DimensionMismatch("modules over different algebras")
    out = zeros(ma.dim * mb.dim, ma.dim * mb.dim)
    for a in range(osp.dim_v):
        for b in range(osp.dim_v):
            p = osp.j_parity(a, b)
            out = out + (-1) ** osp.parities[b] * gkron(ma.x_upper(a, b), ma.parities, mb.x_upper(b, a), p)
    return clean(out * Fraction(1, 2))


def connector_matrix(m) -> np.ndarray:
    """(mu_M x mu_V)(t) through the form sum X^a_b x (-1)^{[b]} E^b_a."""
    osp = m.osp
    d = osp.dim_v
    out = zeros(m.dim * d, m.dim * d)
    for a in range(d):
        for b in range(d):
            p = osp.j_parity(a, b)
            out = out + (-1) ** osp.parities[b] * gkron(m.x_upper(a, b), m.parities, osp.unit(b, a), p)
    return clean(out)


def diagonal_action(m, a: int, b: int) -> np.ndarray:
    """Image of J_{ab} on M x V."""
    osp = m.osp
    p = osp.j_parity(a, b)
    return gkron(m.j_image(a, b), m.parities, eye(osp.dim_v), 0) + gkron(eye(m.dim), m.parities, osp.j_matrix(a, b), p)


def levi_civita(m: int) -> np.ndarray:
    out = zeros(*([m] * m))
    for perm in itertools.permutations(range(m)):
        inv = sum(1 for i, j in itertools.combinations(range(m), 2) if perm[i] > perm[j])
        out[perm] = (-1) ** inv
    return out


def permute_tensor(t: np.ndarray, perm) -> np.ndarray:
    """Action of a permutation on tensor slots (purely even spaces)."""
    return np.transpose(t, axes=list(perm))


# ---------------------------------------------------------------- evaluator


class Evaluator:
    """Applies generator words to batches of vectors in M x V^r.

    A batch is an array of shape (dim M, d, ..., d, B); slot 0 is M, slots
    1..r are tensor factors of V, and the last axis enumerates vectors.
    """

    def __init__(self, osp: OspData, module=None):
        self.osp = osp
        self.module = module if module is not None else trivial_rep(osp)
        self.d = osp.dim_v
        p = np.array(osp.parities, dtype=object)
        self.flip_sign = clean(np.array([[(-1) ** (int(a) * int(b)) for b in p] for a in p], dtype=object))
        self._hmat = None
        self._z: dict = {}
        self._nz: dict = {}
        self.verma = isinstance(self.module, TruncVerma)

    @property
    def sdim(self) -> int:
        return self.osp.sdim

    def hmat(self) -> np.ndarray:
        if self._hmat is None:
            dm, d = self.module.dim, self.d
            h = connector_matrix(self.module)
            self._hmat = h.reshape(dm, d, dm, d)
            self._hnz = [(idx, v) for idx, v in np.ndenumerate(self._hmat) if v != 0]
        return self._hmat

    # slot operators (slots are 1-based strand positions); the structure
    # tensors are sparse, so they are applied entry by entry on slices
    def flip(self, x: np.ndarray, i: int) -> np.ndarray:
        y = np.swapaxes(x, i, i + 1)
        shape = [1] * x.ndim
        shape[i], shape[i + 1] = self.d, self.d
        return y * self.flip_sign.reshape(shape)

    def cap(self, x: np.ndarray, i: int) -> np.ndarray:
        lead = (slice(None),) * i
        out = None
        for (a, b), v in self._gnz(self.osp.g_up):
            piece = x[lead + (a, b)]
            piece = piece if v == 1 else piece * v
            out = piece if out is None else out + piece
        return out

    def cup(self, x: np.ndarray, i: int) -> np.ndarray:
        shape = x.shape[:i] + (self.d, self.d) + x.shape[i:]
        y = zeros(*shape)
        lead = (slice(None),) * i
        for (a, b), v in self._gnz(self.osp.g_low):
            y[lead + (a, b)] = x if v == 1 else x * v
        return y

    def _gnz(self, g: np.ndarray) -> list:
        key = id(g)
        hit = self._nz.get(key)
        if hit is None:
            hit = [(idx, v) for idx, v in np.ndenumerate(g) if v != 0]
            self._nz[key] = hit
        return hit

    def connector(self, x: np.ndarray) -> np.ndarray:
        if self.verma and not is_zero_mat(x[-1]):
            raise CutoffExceeded(f"Verma cutoff K={self.module.cutoff} reached")
        self.hmat()
        y = zeros(*x.shape)
        for (mp, b, m, c), v in self._hnz:
            piece = x[m, c]
            y[mp, b] += piece if v == 1 else piece * v
        return y

    def z_scalar(self, ell: int):
        """Scalar by which Z_ell acts on M (needs a central character)."""
        if ell not in self._z:
            self._z[ell] = self._closure(ell)
        return self._z[ell]

    def _closure(self, ell: int):
        dm = self.module.dim
        if self.verma:
            if ell == 2:
                return self.module.z2_value()
            x = zeros(dm, 1)
            x[0, 0] = 1
            if ell + 1 > self.module.cutoff:
                raise CutoffExceeded("cutoff too small for the closure")
        else:
            x = eye(dm)
        y = self.cup(x, 1)
        for _ in range(ell):
            y = self.connector(y)
        y = self.cap(y, 1)
        if self.verma:
            val = y[0, 0]
            rest = y.copy()
            rest[0, 0] = 0
            if not is_zero_mat(rest):
                raise ArithmeticError("closure is not scalar on the highest weight vector")
            return _clean(val)
        c = solve_scalar_multiple(y, eye(dm))
        if c is None:
            raise SpecializationMissing(f"Z_{ell} does not act by a scalar on {self.module}")
        return _clean(c)

    def bindings(self, names) -> dict:
        out = {"delta": self.sdim}
        for n in names:
            if n.startswith("z"):
                out[n] = self.z_scalar(int(n[1:]))
            elif n == "lambda":
                if not self.verma:
                    raise SpecializationMissing("lambda needs a Verma module")
                out[n] = self.module.lam
        return out

    def scalar(self, c) -> Fraction:
        if isinstance(c, (int, Fraction)):
            return Fraction(c)
        names = c.num.variables() | c.den.variables() if isinstance(c, Frac) else c.variables()
        v = specialize(c, self.bindings(names))
        if isinstance(v, (Poly, Frac)):
            raise SpecializationMissing(f"could not specialise {c}")
        return v

    def apply_gen(self, g: tuple, x: np.ndarray) -> np.ndarray:
        kind, i = g[0], g[1]
        if kind == "ID":
            return x
        if kind == "S":
            return self.flip(x, i)
        if kind == "E":
            return self.cup(self.cap(x, i), i)
        if kind == "CAP":
            return self.cap(x, i)
        if kind == "CUP":
            return self.cup(x, i)
        if kind == "D":
            return self.connector(x)
        if kind == "Z":
            return x * self.z_scalar(i)
        if kind == "Y":
            return self.connector(x) + x * Fraction(1 - self.sdim, 2)
        raise ValueError(f"unknown generator {kind}")

    def apply_word(self, word, x: np.ndarray) -> np.ndarray:
        for g in word:
            x = self.apply_gen(g, x)
        return x

    def apply_elem(self, terms, x: np.ndarray, target_rank: int) -> np.ndarray:
        """Sum over (word, coeff) pairs applied to the batch x."""
        shape = (self.module.dim,) + (self.d,) * target_rank + (x.shape[-1],)
        out = zeros(*shape)
        for word, c in terms:
            v = _clean(self.scalar(c))
            if v == 0:
                continue
            y = self.apply_word(word, x)
            out = out + (y if v == 1 else y * v)
        return out

    def basis_batch(self, r: int, levels: int | None = None) -> np.ndarray:
        """All basis vectors; for a Verma module only those of M-level < levels."""
        n = self.module.dim * self.d**r
        out = eye(n).reshape((self.module.dim,) + (self.d,) * r + (n,))
        if levels is not None:
            keep = levels * self.d**r
            out = out[..., :keep]
        return out

    def random_batch(self, r: int, count: int, rng, low: int = -3, high: int = 3, levels: int | None = None) -> np.ndarray:
        shape = (self.module.dim,) + (self.d,) * r + (count,)
        vals = [rng.randint(low, high) for _ in range(int(np.prod(shape)))]
        out = np.array(vals, dtype=object).reshape(shape)
        if self.verma:
            out[levels if levels is not None else self.module.dim - 1 :] = 0
        return out


def _flatten(x: np.ndarray) -> np.ndarray:
    return x.reshape(-1, x.shape[-1])


def evaluate_terms(terms, r: int, s: int, module, osp: OspData) -> SuperMatrix:
    ev = Evaluator(osp, module)
    x = ev.basis_batch(r)
    y = ev.apply_elem(terms, x, s)
    rows = kron_parities(ev.module.parities, _power_parities(osp.parities, s))
    cols = kron_parities(ev.module.parities, _power_parities(osp.parities, r))
    return SuperMatrix(clean(_flatten(y)), rows, cols)


def _power_parities(p: tuple, r: int) -> tuple:
    out = (0,)
    for _ in range(r):
        out = kron_parities(out, p)
    return out


def functor_eval(a, module=None, osp: OspData | None = None) -> SuperMatrix:
    """Matrix of a BrauerElem, PolarElem, NormalForm or PTL combination."""
    from .brauer import BrauerElem

    if osp is None:
        osp = module.osp
    if isinstance(a, BrauerElem):
        return evaluate_terms(brauer_terms(a), a.bot, a.top, trivial_rep(osp), osp)
    terms, r, s = a.word_terms()
    return evaluate_terms(terms, r, s, module if module is not None else trivial_rep(osp), osp)


def brauer_terms(a) -> list:
    from .brauer import diagram_word

    return [(tuple(diagram_word(d)), c) for d, c in a.terms.items()]


def brauer_matrix(a, osp: OspData) -> np.ndarray:
    """Matrix of a BrauerElem on V^r -> V^s with delta = sdim."""
    return functor_eval(a, None, osp).mat


def coupon_dual(eps: np.ndarray, osp: OspData) -> np.ndarray:
    """Row covector of Cap(m)(eps x I(m)) on V^m."""
    from .brauer import BrauerDiagram, BrauerElem

    m = eps.ndim
    pairs = [(i + 1, 2 * m - i) for i in range(m)]
    capm = brauer_matrix(BrauerElem.of(BrauerDiagram.from_pairs(2 * m, 0, pairs)), osp)
    d = osp.dim_v
    col = eps.reshape(d**m, 1)
    return capm.dot(np.kron(col, eye(d**m)))


def outer(col_tensor: np.ndarray, row: np.ndarray) -> np.ndarray:
    return col_tensor.reshape(-1, 1).dot(row)


def partial_trace_matrix(x: np.ndarray, osp: OspData, m: int) -> np.ndarray:
    """(I x cap)(x x I)(I x cup) for x on V^m."""
    from .brauer import generator, identity, tensor

    cup = brauer_matrix(tensor(identity(m - 1), generator("CUP", 1, 2)), osp)
    cap = brauer_matrix(tensor(identity(m - 1), generator("CAP", 1, 2)), osp)
    return clean(cap.dot(gkron(x, _power_parities(osp.parities, m), eye(osp.dim_v), 0)).dot(cup))


def hom_dim_weightzero(n: int) -> int:
    """Dimension of the zero weight space of V^{2N} for sp_2 (weights +1, -1)."""
    counts = {0: 1}
    for _ in range(2 * n):
        nxt: dict = {}
        for w, c in counts.items():
            for dw in (1, -1):
                nxt[w + dw] = nxt.get(w + dw, 0) + c
        counts = nxt
    return counts.get(0, 0)


# ---------------------------------------------------------------- suites


TEST_FAMILY = [(3, 0), (5, 0), (0, 1), (0, 2), (2, 1)]


def idempotents(h: np.ndarray, delta: int) -> list:
    one = eye(h.shape[0])
    d = Fraction(delta)
    p1 = (h + one).dot(h - one * (1 - d)) * (1 / (2 * d))
    p2 = (h - one).dot(h - one * (1 - d)) * (1 / (2 * (2 - d)))
    p3 = (h - one).dot(h + one) * (-1 / (d * (2 - d)))
    return [clean(p) for p in (p1, p2, p3)]


def verify_osp_suite(family=TEST_FAMILY, rng=None, pairs: int = 100) -> Report:
    import random

    from .brauer import BrauerElem, compose, random_diagram

    rng = rng or random.Random(11)
    rep = Report("osp")
    for m, n in family:
        osp = osp_build(m, n)
        tag = f"({m}|{2 * n})"
        d = osp.dim_v
        sp = osp.space
        rep.add(f"{tag} dim osp", len(osp.basis) == osp_dimension(m, n))
        inv_ok = True
        for j in osp.basis:
            inv_ok &= is_zero_mat(_invariance_defect(osp, j))
        rep.add(f"{tag} omega invariance of J", inv_ok)
        t = tau(sp)
        i2 = eye(d * d)
        rep.add(f"{tag} tau^2 = 1", mat_equal(t.dot(t), i2))
        t12 = gkron(t, kron_parities(sp.parities, sp.parities), eye(d), 0)
        t23 = gkron(eye(d), sp.parities, t, 0)
        rep.add(f"{tag} braid relation", mat_equal(t12.dot(t23).dot(t12), t23.dot(t12).dot(t23)))
        cap, cup = cap_cup(osp)
        rep.add(f"{tag} C_hat C_check = sdim", cap.dot(cup)[0, 0] == osp.sdim)
        iv = eye(d)
        snake1 = gkron(cap, kron_parities(sp.parities, sp.parities), iv, 0).dot(gkron(iv, sp.parities, cup, 0))
        snake2 = gkron(iv, sp.parities, cap, 0).dot(gkron(cup, (0,), iv, 0))
        rep.add(f"{tag} snake identities", mat_equal(snake1, iv) and mat_equal(snake2, iv))
        rep.add(f"{tag} tau C_check = C_check, C_hat tau = C_hat", mat_equal(t.dot(cup), cup) and mat_equal(cap.dot(t), cap))
        pp = kron_parities(sp.parities, sp.parities)
        lhs = gkron(cap, pp, iv, 0).dot(gkron(iv, sp.parities, t, 0))
        rhs = gkron(iv, sp.parities, cap, 0).dot(gkron(t, pp, iv, 0))
        rep.add(f"{tag} sliding (C_hat x id)(id x tau) = (id x C_hat)(tau x id)", mat_equal(lhs, rhs))
        lhs = gkron(t, pp, iv, 0).dot(gkron(iv, sp.parities, cup, 0))
        rhs = gkron(iv, sp.parities, t, 0).dot(gkron(cup, (0,), iv, 0))
        rep.add(f"{tag} sliding (tau x id)(id x C_check) = (id x tau)(C_check x id)", mat_equal(lhs, rhs))
        v = natural_rep(osp)
        e = e_matrix_v(osp)
        h = tempered_casimir(v, v)
        rep.add(f"{tag} (mu x mu)(t) = tau - e", mat_equal(h, t - e))
        rep.add(f"{tag} connector form agrees", mat_equal(connector_matrix(v), h))
        c = v.casimir()
        rep.add(f"{tag} chi_V(C) = sdim - 1", mat_equal(c, eye(d) * (osp.sdim - 1)))
        one = i2
        cub = (h - one).dot(h + one).dot(h - one * (1 - osp.sdim))
        rep.add(f"{tag} cubic (H-1)(H+1)(H-(1-sdim)) = 0", is_zero_mat(cub))
        if osp.sdim not in (0, 2):
            ps = idempotents(h, osp.sdim)
            ok = mat_equal(ps[0] + ps[1] + ps[2], one)
            for i in range(3):
                for j in range(3):
                    prod = ps[i].dot(ps[j])
                    ok &= mat_equal(prod, ps[i]) if i == j else is_zero_mat(prod)
            rep.add(f"{tag} three orthogonal idempotents", ok)
        for mod in (v, adjoint_rep(osp)):
            hm = connector_matrix(mod)
            ok = True
            for a, b in osp.basis_pairs:
                dg = diagonal_action(mod, a, b)
                ok &= is_zero_mat(hm.dot(dg) - dg.dot(hm))
            rep.add(f"{tag} t commutes with the diagonal action on {mod.name} x V", ok)
        rep.add(f"{tag} super Jacobi closure", _closure_ok(osp))
        # functoriality on random composable Brauer pairs
        ok = True
        for _ in range(pairs):
            top = 4 if d <= 3 else 3
            r = rng.randint(0, top)
            s = rng.choice([k for k in range(r % 2, top + 1, 2)])
            u = rng.choice([k for k in range(s % 2, top + 1, 2)])
            a = BrauerElem.of(random_diagram(s, u, rng))
            b = BrauerElem.of(random_diagram(r, s, rng))
            ok &= mat_equal(brauer_matrix(compose(a, b), osp), brauer_matrix(a, osp).dot(brauer_matrix(b, osp)))
        rep.add(f"{tag} functoriality on {pairs} random pairs", ok)
    return rep


def _invariance_defect(osp: OspData, j: np.ndarray) -> np.ndarray:
    """omega(J e^c, e^d) + (-1)^{|J||c|} omega(e^c, J e^d) for all c, d."""
    d = osp.dim_v
    pj = None
    for a in range(d):
        for b in range(d):
            if j[a, b] != 0:
                pj = (osp.parities[a] + osp.parities[b]) % 2
                break
        if pj is not None:
            break
    pj = pj or 0
    out = zeros(d, d)
    for c in range(d):
        for e in range(d):
            lhs = sum(j[k, c] * osp.g_up[k, e] for k in range(d))
            rhs = sum(j[k, e] * osp.g_up[c, k] for k in range(d))
            out[c, e] = lhs + (-1) ** (pj * osp.parities[c]) * rhs
    return out


def _closure_ok(osp: OspData) -> bool:
    flat = [b.ravel() for b in osp.basis]
    par = [osp.j_parity(a, b) for a, b in osp.basis_pairs]
    for i, x in enumerate(osp.basis):
        for j, y in enumerate(osp.basis):
            if solve_coords(flat, supercommutator(x, par[i], y, par[j]).ravel()) is None:
                return False
    return True


def binomial(n: int, k: int) -> int:
    return math.comb(n, k) if 0 <= k <= n else 0

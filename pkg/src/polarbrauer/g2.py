"""G2 inside so_7, and its trivalent relations checked as matrices.

V = Q^7 with omega = identity.  The invariant 3-form is stored as a raw
epsilon tensor with entries in {0, 1, -1}; the trivalent maps are scaled
multiples of it whose scale is not rational.  Every identity below is at
least quadratic in the 3-form, so only the squared scales enter, and those
are rational:

* KAPPA_SQ: the 3-form with contraction 3 * cup(1) is kappa * eps, kappa^2 = -1/2;
* C_SQ: Upsilon = c * (raw contraction), c^2 = 2 * kappa^2 = -1.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .report import Report
from .superlin import exact_inverse, rank_exact, solve_coords, zeros

DIM = 7
KAPPA_SQ = Fraction(-1, 2)
C_SQ = 2 * KAPPA_SQ

# (i, j, k, sign) with 1-based indices: e1^e2^e3 - e1^(e4^e5 + e6^e7)
# - e2^(e4^e6 - e5^e7) - e3^(e4^e7 + e5^e6)
TRIPLES = (
    (1, 2, 3, 1),
    (1, 4, 5, -1),
    (1, 6, 7, -1),
    (2, 4, 6, -1),
    (2, 5, 7, 1),
    (3, 4, 7, -1),
    (3, 5, 6, -1),
)


def _perm_sign(p) -> int:
    sign = 1
    p = list(p)
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] > p[j]:
                sign = -sign
    return sign


@dataclass(frozen=True)
class Epsilon3:
    """Totally antisymmetric tensor with eps[i, j, k] = +-1 on the seven lines."""

    tensor: np.ndarray

    @staticmethod
    def standard() -> "Epsilon3":
        eps = np.zeros((DIM,) * 3, dtype=object)
        for i, j, k, s in TRIPLES:
            base = (i - 1, j - 1, k - 1)
            for perm in itertools.permutations(range(3)):
                eps[tuple(base[p] for p in perm)] = s * _perm_sign(perm)
        return Epsilon3(eps)

    def support(self) -> set:
        return {tuple(sorted(idx)) for idx in zip(*np.nonzero(self.tensor != 0))}

    def is_antisymmetric(self) -> bool:
        e = self.tensor
        return bool(
            (e == -e.transpose(1, 0, 2)).all() and (e == -e.transpose(0, 2, 1)).all() and (e == -e.transpose(2, 1, 0)).all()
        )


def _unit(a: int, b: int) -> np.ndarray:
    m = zeros(DIM, DIM)
    m[a, b] = 1
    return m


def so7_basis() -> list:
    return [_unit(a, b) - _unit(b, a) for a, b in itertools.combinations(range(DIM), 2)]


def act3(x: np.ndarray, t: np.ndarray) -> np.ndarray:
    """Derivation action of a matrix on a 3-tensor."""
    return (
        np.einsum("ia,ajk->ijk", x, t)
        + np.einsum("ja,iak->ijk", x, t)
        + np.einsum("ka,ija->ijk", x, t)
    )


@dataclass
class G2Data:
    basis: list  # 14 matrices on V
    gram: np.ndarray  # trace form tr(XY) on the basis
    scale: Fraction  # C = scale * sum_ij gram^{-1}_{ij} X_i X_j
    eps: Epsilon3

    @property
    def dim(self) -> int:
        return len(self.basis)

    def casimir_v(self) -> np.ndarray:
        ginv = exact_inverse(self.gram)
        out = zeros(DIM, DIM)
        for i, j in itertools.product(range(self.dim), repeat=2):
            if ginv[i, j]:
                out = out + self.basis[i].dot(self.basis[j]) * ginv[i, j]
        return out * self.scale

    def tempered(self) -> np.ndarray:
        """(mu x mu)(t) = scale * sum_ij gram^{-1}_{ij} X_i x X_j on V x V."""
        ginv = exact_inverse(self.gram)
        out = zeros(DIM * DIM, DIM * DIM)
        for i, j in itertools.product(range(self.dim), repeat=2):
            if ginv[i, j]:
                out = out + np.kron(self.basis[i], self.basis[j]) * ginv[i, j]
        return out * self.scale


def _kernel_rows(rows: list, ncols: int) -> list:
    """Rational basis of the nullspace of a list of row vectors."""
    m = [[Fraction(x) for x in r] for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((k for k in range(r, len(m)) if m[k][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        pv = m[r][c]
        m[r] = [x / pv for x in m[r]]
        for k in range(len(m)):
            if k != r and m[k][c] != 0:
                f = m[k][c]
                m[k] = [x - f * y for x, y in zip(m[k], m[r])]
        pivots.append(c)
        r += 1
    out = []
    for f in (c for c in range(ncols) if c not in pivots):
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for k, c in enumerate(pivots):
            v[c] = -m[k][f]
        out.append(v)
    return out


def g2_subalgebra(target: int = 12) -> G2Data:
    """Kernel of so_7 acting on the 3-form, with the Casimir scaled to act by ``target`` on V."""
    eps = Epsilon3.standard()
    so7 = so7_basis()
    images = [act3(x, eps.tensor).ravel() for x in so7]
    rows = [[img[p] for img in images] for p in range(len(images[0]))]
    kernel = _kernel_rows(rows, len(so7))
    basis = [sum((x * c for x, c in zip(so7, v) if c), zeros(DIM, DIM)) for v in kernel]
    gram = zeros(len(basis), len(basis))
    for i, j in itertools.product(range(len(basis)), repeat=2):
        gram[i, j] = Fraction(np.trace(basis[i].dot(basis[j])))
    data = G2Data(basis, gram, Fraction(1), eps)
    raw = data.casimir_v()
    c0 = raw[0, 0]
    if not (raw == np.identity(DIM, dtype=object) * c0).all():
        raise ArithmeticError("Casimir is not scalar on V")
    data.scale = Fraction(target) / c0
    return data


# ---------------------------------------------------------------- trivalent maps


def upsilon_raw(eps: Epsilon3) -> tuple:
    """Unscaled (Upsilon, Upsilon-hat) as 49x7 and 7x49 matrices.

    Upsilon(e_p) = sum eps[i, j, p] e_i x e_j and
    Upsilon-hat(e_q x e_r) = sum eps[i, r, q] e_i.
    """
    e = eps.tensor
    up = zeros(DIM * DIM, DIM)
    down = zeros(DIM, DIM * DIM)
    for i, j, p in itertools.product(range(DIM), repeat=3):
        if e[i, j, p]:
            up[i * DIM + j, p] = e[i, j, p]
            down[i, p * DIM + j] = e[i, j, p]
    return up, down


def upsilon(data: G2Data | None = None) -> tuple:
    """Upsilon up to the irrational scale c; quadratic products use C_SQ."""
    eps = data.eps if data is not None else Epsilon3.standard()
    return upsilon_raw(eps)


def swap() -> np.ndarray:
    t = zeros(DIM * DIM, DIM * DIM)
    for a, b in itertools.product(range(DIM), repeat=2):
        t[b * DIM + a, a * DIM + b] = 1
    return t


def cap_cup() -> np.ndarray:
    """e = cup o cap on V x V."""
    e = zeros(DIM * DIM, DIM * DIM)
    for a, b in itertools.product(range(DIM), repeat=2):
        e[a * DIM + a, b * DIM + b] = 1
    return e


def vee_first(m: np.ndarray) -> np.ndarray:
    """omega-transpose of the first tensor factor of an operator on V x V."""
    out = zeros(DIM * DIM, DIM * DIM)
    for a, b, c, d in itertools.product(range(DIM), repeat=4):
        out[a * DIM + b, c * DIM + d] = m[c * DIM + b, a * DIM + d]
    return out


def bent_transpose(m: np.ndarray) -> np.ndarray:
    """B^T = (I x cap x I)(B x X)(I x cup x I) on V x V."""
    out = zeros(DIM * DIM, DIM * DIM)
    for x, k, c, d in itertools.product(range(DIM), repeat=4):
        out[x * DIM + k, c * DIM + d] = m[x * DIM + d, c * DIM + k]
    return out


def norm_contraction(eps: Epsilon3) -> np.ndarray:
    """(id x omega x id)(id^2 x omega x id^2)(C3 x C3) as a vector in V x V, C3 = kappa * eps.

    Returns the coefficient matrix with kappa^2 already applied.
    """
    e = eps.tensor
    return np.einsum("ijk,kjn->in", e, e) * KAPPA_SQ


def triangle_raw(up: np.ndarray, down: np.ndarray) -> np.ndarray:
    """(I x Upsilon-hat)(Upsilon x I) Upsilon, unscaled (carries c^3)."""
    i7 = np.identity(DIM, dtype=object)
    return np.kron(i7, down).dot(np.kron(up, i7)).dot(up)


def _is_zero(m: np.ndarray) -> bool:
    return not np.any(m != 0)


def _rank(m: np.ndarray) -> int:
    return rank_exact([list(r) for r in m]) if m.size else 0


def kernel_dim(m: np.ndarray) -> int:
    return m.shape[1] - _rank(m)


def verify_g2_suite() -> Report:
    rep = Report("g2")
    data = g2_subalgebra()
    eps = data.eps
    n = DIM * DIM
    one = np.identity(n, dtype=object)
    i7 = np.identity(DIM, dtype=object)

    rep.add("eps totally antisymmetric on seven lines", eps.is_antisymmetric() and len(eps.support()) == 7)
    rep.add("dim G2 = 14", data.dim == 14, f"dim {data.dim}")
    rep.add("each basis matrix kills the 3-form", all(_is_zero(act3(x, eps.tensor)) for x in data.basis))
    flat = [x.ravel() for x in data.basis]
    closed = all(
        solve_coords(flat, (x.dot(y) - y.dot(x)).ravel()) is not None for x, y in itertools.combinations(data.basis, 2)
    )
    rep.add("basis closed under bracket", closed)
    rep.add("chi_V(C) = 12", (data.casimir_v() == i7 * 12).all(), f"scale s = {data.scale}")

    h = data.tempered()
    cv = np.kron(data.casimir_v(), i7) + np.kron(i7, data.casimir_v())
    delta_c = cv + 2 * h
    mults = {v: kernel_dim(delta_c - one * v) for v in (0, 12, 24, 28)}
    prod = one
    for v in mults:
        prod = prod.dot(delta_c - one * v)
    rep.add(
        "Casimir spectrum on V x V is {0, 12, 24, 28}",
        _is_zero(prod) and sum(mults.values()) == n and all(mults.values()),
        f"multiplicities {mults}",
    )
    tspec = {v: kernel_dim(h - one * v) for v in (-12, -6, 0, 2)}
    quartic = h.dot(h - one * 2).dot(h + one * 6).dot(h + one * 12)
    rep.add("tempered spectrum {-12, -6, 0, 2}", sum(tspec.values()) == n and all(tspec.values()), f"multiplicities {tspec}")
    rep.add("quartic H(H-2)(H+6)(H+12) = 0", _is_zero(quartic))

    up, down = upsilon_raw(eps)
    k = up.dot(down) * C_SQ  # Upsilon Upsilon-hat
    rep.add("Upsilon-hat Upsilon = 6 I", (down.dot(up) * C_SQ == i7 * 6).all())
    rep.add("contraction of C3 x C3 = 3 cup(1)", (norm_contraction(eps) == i7 * 3).all(), f"kappa^2 = {KAPPA_SQ}")
    rep.add("c^2 = 2 kappa^2", C_SQ == 2 * KAPPA_SQ, f"c^2 = {C_SQ}")
    rep.add("(Upsilon Upsilon-hat)^2 = 6 Upsilon Upsilon-hat", (k.dot(k) == k * 6).all())

    tau, e = swap(), cap_cup()
    p = k * Fraction(1, 6)
    rep.add("P^2 = P", (p.dot(p) == p).all())
    rep.add("tau P = -P", (tau.dot(p) == -p).all())
    rep.add("e P = 0", _is_zero(e.dot(p)))
    rep.add("spectral relation H = 1 + tau - 2e - 6P", (h == one + tau - 2 * e - 6 * p).all())
    rep.add("H - tau + 2e - 1 + Upsilon Upsilon-hat = 0", _is_zero(h - tau + 2 * e - one + k))
    vee_ok = (6 * vee_first(p) + 6 * p == 2 * one - e - tau).all()
    swapped = (6 * vee_first(p) + 6 * p == -2 * tau + e + one).all()
    rep.add("6 (vee x id) P + 6 P = 2 - e - tau", vee_ok, f"variant with tau applied on the left holds: {bool(swapped)}")
    reduction = k - tau.dot(bent_transpose(k)) + 2 * tau - e - one
    rep.add("reduction K - X K^T + 2X - E - I = 0", _is_zero(reduction))

    ptrace = zeros(DIM, DIM)
    for a, b, j in itertools.product(range(DIM), repeat=3):
        ptrace[a, b] += k[a * DIM + j, b * DIM + j]
    rep.add("closed K strand + (1 - delta) I = 0", (ptrace + (1 - DIM) * i7 == 0).all())
    tri = triangle_raw(up, down) * C_SQ  # c^3 T = -3 c Upsilon  <=>  c^2 T = -3 Upsilon
    rep.add("triangle + 3 Upsilon = 0", _is_zero(tri + 3 * up))
    rep.add("cap o cup = 7 = delta", sum(i7[a, a] for a in range(DIM)) == 7)

    equi_h = all(_is_zero((np.kron(x, i7) + np.kron(i7, x)).dot(h) - h.dot(np.kron(x, i7) + np.kron(i7, x))) for x in data.basis)
    equi_u = all(_is_zero((np.kron(x, i7) + np.kron(i7, x)).dot(up) - up.dot(x)) for x in data.basis)
    rep.add("H and Upsilon are G2-equivariant", equi_h and equi_u)
    return rep

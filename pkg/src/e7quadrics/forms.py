"""The invariant symplectic form h and four-linear form f on V(w7).

Both forms come out of the 5-grading of E8 by the alpha_8 coefficient,
with the 56 weights sitting in degree 1:

* ``h(e_a, e_b)`` is the coefficient of ``e_delta`` in ``[e_a, e_b]``;
* ``c(a, b, c, d)`` is the coefficient of ``e_delta`` in
  ``[[[[e_{-delta}, e_a], e_b], e_c], e_d]``.

The inner double bracket ``[[e_{-delta}, e_a], e_b]`` lands in the degree 0
part (E7 plus the E8 Cartan), so ``f`` factors through that 134-dimensional
space:  ``f = sum_t A_t (x) B_t`` with bilinear forms ``A_t`` and ``B_t``.
This factorization gives an exact similarity test for f without ever
forming the 56**4 tensor.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Any, Sequence

import numpy as np

from .chevalley import LieElement, bracket, build_structure_table
from .linalg import SparseEchelon, det, inverse
from .rings import QQ, ZZ, ArrayArith, PrimeField, Ring, integral_scaling
from .root_system import RANK, WeightIndex, add, build_e8, height, neg, pair, sub

__all__ = [
    "SymplecticForm",
    "FourLinearForm",
    "G0Factorization",
    "Probes",
    "Similarity",
    "build_h",
    "build_f",
    "coeff_c",
    "g0_factorization",
    "eval_f",
    "eval_h",
    "quartic_Q",
    "pullback_f_table",
    "similarity",
    "orbit_class",
    "ORBIT_CLASSES",
]

ORBIT_CLASSES = ("zero", "singular", "brilliant", "luminous", "dark")


@dataclass(frozen=True)
class SymplecticForm:
    """``coeffs[(i, j)]`` for weight indices with ``lam_i + lam_j = delta``."""

    coeffs: dict

    def __call__(self, i: int, j: int) -> int:
        return self.coeffs.get((i, j), 0)

    def matrix(self) -> np.ndarray:
        m = np.zeros((56, 56), dtype=np.int64)
        for (i, j), c in self.coeffs.items():
            m[i, j] = c
        return m


@dataclass(frozen=True)
class FourLinearForm:
    """Sparse table of the nonzero coefficients ``c(a, b, c, d)``."""

    coeffs: dict

    def __call__(self, a: int, b: int, c: int, d: int) -> int:
        return self.coeffs.get((a, b, c, d), 0)

    def __len__(self) -> int:
        return len(self.coeffs)

    @property
    def index_array(self) -> np.ndarray:
        return _arrays(self)[0]

    @property
    def values(self) -> np.ndarray:
        return _arrays(self)[1]

    def dense(self) -> np.ndarray:
        t = np.zeros((56,) * 4, dtype=np.int8)
        idx, val = _arrays(self)
        t[idx[:, 0], idx[:, 1], idx[:, 2], idx[:, 3]] = val
        return t


_ARRAYS: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _arrays(f: FourLinearForm) -> tuple[np.ndarray, np.ndarray]:
    key = id(f.coeffs)
    if key not in _ARRAYS:
        items = sorted(f.coeffs.items())
        idx = np.array([k for k, _ in items], dtype=np.int64).reshape(-1, 4)
        val = np.array([v for _, v in items], dtype=np.int64)
        _ARRAYS[key] = (idx, val)
    return _ARRAYS[key]


@lru_cache(maxsize=1)
def build_h() -> SymplecticForm:
    t = build_structure_table()
    rs = t.rs
    out = {}
    for w in rs.weights:
        b = rs.bar(w)
        out[w.index, b.index] = t.N(w.root, b.root)
    return SymplecticForm(out)


def coeff_c(lam: WeightIndex, mu: WeightIndex, nu: WeightIndex, rho: WeightIndex) -> int:
    """The e_delta coefficient of the nested bracket, by direct Lie algebra arithmetic."""
    rs = build_e8()
    x = LieElement.e(neg(rs.highest_root))
    for w in (lam, mu, nu, rho):
        x = bracket(x, LieElement.e(rs.weight(w).root))
        if x.is_zero():
            return 0
    return int(x.coefficient(rs.highest_root))


@lru_cache(maxsize=1)
def build_f() -> FourLinearForm:
    """All nonzero ``c(a, b, c, d)``, walking the bracket one step at a time."""
    t = build_structure_table()
    rs = t.rs
    N = t.N
    W = rs.weights
    delta = rs.highest_root
    mdelta = neg(delta)
    hN = [N(w.root, rs.bar(w).root) for w in W]
    bar = [rs.bar_index(i) for i in range(56)]
    out: dict[tuple[int, int, int, int], int] = {}
    for i, li in enumerate(W):
        r1 = sub(li.root, delta)  # = -bar(lam_i), degree -1
        a1 = N(mdelta, li.root)
        for j, mj in enumerate(W):
            if j == bar[i]:
                # [e_r1, e_{-r1}] = H_r1 acts on e_nu by (nu, r1)
                for k, nk in enumerate(W):
                    a3 = a1 * pair(nk.root, r1)
                    if a3:
                        out[i, j, k, bar[k]] = a3 * hN[k]
                continue
            beta = add(r1, mj.root)
            if beta not in rs.e7_set:
                continue
            a2 = a1 * N(r1, mj.root)
            for k, nk in enumerate(W):
                kappa = rs.weight_of.get(add(beta, nk.root))
                if kappa is not None:
                    a3 = a2 * N(beta, nk.root)
                    out[i, j, k, bar[kappa.index]] = a3 * hN[kappa.index]
    return FourLinearForm(out)


# ---------------------------------------------------------------------------
# evaluation


def _vec(v: Any, ring: Ring) -> np.ndarray:
    a = np.asarray(v, dtype=object if ring.dtype is object else np.int64)
    if a.shape != (56,):
        raise ValueError("expected a vector of length 56")
    if isinstance(ring, PrimeField):
        return np.mod(a, ring.p)
    return a


def eval_h(u: Sequence, v: Sequence, ring: Ring = QQ) -> Any:
    u, v = _vec(u, ring), _vec(v, ring)
    h = build_h()
    s = sum(c * u[i] * v[j] for (i, j), c in h.coeffs.items())
    return ring(s)


def eval_f(u: Sequence, v: Sequence, w: Sequence, z: Sequence, ring: Ring = QQ) -> Any:
    f = build_f()
    idx, val = f.index_array, f.values
    vs = [_vec(x, ring) for x in (u, v, w, z)]
    if isinstance(ring, PrimeField):
        p = ring.p
        prod = val % p
        for k in range(4):
            prod = (prod * vs[k][idx[:, k]]) % p
        return int(prod.sum() % p)
    prod = val.astype(object)
    for k in range(4):
        prod = prod * vs[k][idx[:, k]]
    return ring(prod.sum())


def quartic_Q(v: Sequence, ring: Ring = QQ) -> Any:
    return eval_f(v, v, v, v, ring)


def pullback_f_table(m: np.ndarray, ring: Ring) -> dict:
    """Coefficient table of ``f(M., M., M., M.)``, for a matrix with sparse rows.

    Cost is the support size times the product of row supports, so this
    is meant for generator matrices, not for dense products.
    """
    rows = [[(j, m[i, j]) for j in np.nonzero(m[i] != 0)[0]] for i in range(56)]
    p = ring.p if isinstance(ring, PrimeField) else None
    out: dict = {}
    for (a, b, c, d), v in build_f().coeffs.items():
        for ja, ma in rows[a]:
            for jb, mb in rows[b]:
                for jc, mc in rows[c]:
                    for jd, md in rows[d]:
                        key = (ja, jb, jc, jd)
                        out[key] = out.get(key, 0) + v * ma * mb * mc * md
    if p is not None:
        out = {k: int(x) % p for k, x in out.items()}
    return {k: ring(x) for k, x in out.items() if x != 0}


# ---------------------------------------------------------------------------
# factorization through the degree 0 part


@dataclass(frozen=True)
class Probes:
    """Positions that read off coordinates in a family of sparse forms.

    Each root form owns ``pivots[s]`` (a position no other form touches,
    holding +-1).  The 8 Cartan forms live on positions ``(a, bar a)``;
    ``cartan_inverse`` inverts their integral, unimodular block at
    ``cartan_rows``.
    """

    pivots: tuple
    cartan_rows: tuple
    cartan_inverse: np.ndarray


@dataclass(frozen=True)
class G0Factorization:
    """``f = sum_t A_t (x) B_t`` over the 126 E7 root vectors and 8 coroots.

    ``left[t]`` and ``right[t]`` are tuples of ``(row, col, value)``.
    """

    labels: tuple
    left: tuple
    right: tuple
    left_probes: Probes
    right_probes: Probes


def _probes(factors: list[list], nroot: int) -> Probes:
    rs = build_e8()
    W = rs.weights
    pivots = tuple((e[0][0], e[0][1]) for e in factors[:nroot])
    cart = [dict(((r, c), v) for r, c, v in factors[nroot + k]) for k in range(RANK)]

    def row(a: int) -> list:
        return [cart[k].get((a, rs.bar_index(a)), 0) for k in range(RANK)]

    # walking up from the lowest weight keeps the block unitriangular
    chosen: list[int] = []
    ech = SparseEchelon(QQ)
    for a in sorted(range(56), key=lambda a: (height(W[rs.bar_index(a)].root), a)):
        if ech.add(dict(enumerate(row(a)))):
            chosen.append(a)
        if len(chosen) == RANK:
            break
    blk = np.array([row(a) for a in chosen], dtype=object)
    if len(chosen) != RANK or abs(det(blk, ZZ)) != 1:
        raise RuntimeError("Cartan probe block is not unimodular")
    inv = np.array([[int(x) for x in r] for r in inverse(blk, QQ).tolist()], dtype=np.int64)
    return Probes(pivots, tuple(chosen), inv)


@lru_cache(maxsize=1)
def g0_factorization() -> G0Factorization:
    t = build_structure_table()
    rs = t.rs
    N = t.N
    W = rs.weights
    delta = rs.highest_root
    mdelta = neg(delta)
    labels = [("e", r) for r in rs.e7_roots] + [("H", k) for k in range(RANK)]
    pos = {lab: i for i, lab in enumerate(labels)}
    left: list[list] = [[] for _ in labels]
    right: list[list] = [[] for _ in labels]
    for a, la in enumerate(W):
        r1 = sub(la.root, delta)
        a1 = N(mdelta, la.root)
        for b, lb in enumerate(W):
            beta = add(r1, lb.root)
            if not any(beta):
                for k in range(RANK):
                    if r1[k]:
                        left[pos["H", k]].append((a, b, a1 * r1[k]))
            elif beta in rs.e7_set:
                left[pos["e", beta]].append((a, b, a1 * N(r1, lb.root)))
    hN = [N(w.root, rs.bar(w).root) for w in W]
    for c, lc in enumerate(W):
        for beta in rs.e7_roots:
            kappa = rs.weight_of.get(add(beta, lc.root))
            if kappa is not None:
                right[pos["e", beta]].append((c, rs.bar_index(kappa.index), N(beta, lc.root) * hN[kappa.index]))
        for k in range(RANK):
            s = pair(lc.root, rs.simple_roots[k])
            if s:
                right[pos["H", k]].append((c, rs.bar_index(c), s * hN[c]))
    nroot = len(rs.e7_roots)
    return G0Factorization(
        tuple(labels),
        tuple(tuple(x) for x in left),
        tuple(tuple(x) for x in right),
        _probes(left, nroot),
        _probes(right, nroot),
    )


# ---------------------------------------------------------------------------
# similarity test


@dataclass(frozen=True)
class Similarity:
    """Outcome of testing ``M`` against both forms.

    ``eps_h`` / ``eps_f`` are the multipliers when ``M`` is a similarity of
    the respective form, otherwise ``None`` with a reason in ``witness``.
    """

    eps_h: Any
    eps_f: Any
    witness: str | None = None

    @property
    def similar(self) -> bool:
        return self.eps_h is not None and self.eps_f is not None


def _pull_factors(mi: np.ndarray, factors: tuple, ar: ArrayArith) -> np.ndarray:
    """``M^T A_t M`` for every sparse factor ``A_t``; shape (134, 56, 56)."""
    out = []
    for entries in factors:
        a = np.array([e[0] for e in entries])
        b = np.array([e[1] for e in entries])
        v = ar.cast(np.array([e[2] for e in entries], dtype=np.int64))
        left = ar.red(mi[a] * v[:, None])
        out.append(ar.red(left.T @ mi[b]))
    return np.stack(out)


def _coordinates(pulled: np.ndarray, factors: tuple, pr: Probes, ar: ArrayArith) -> np.ndarray | None:
    """Coordinates of each pulled-back factor in the original factors, or None."""
    n = len(factors)
    nroot = len(pr.pivots)
    coords = ar.cast(np.zeros((pulled.shape[0], n), dtype=np.int64))
    for s, (r, c) in enumerate(pr.pivots):
        v = dict(((x, y), z) for x, y, z in factors[s])[r, c]
        coords[:, s] = pulled[:, r, c] * v  # v = +-1
    rs = build_e8()
    y = np.stack([pulled[:, r, rs.bar_index(r)] for r in pr.cartan_rows], axis=1)
    coords[:, nroot:] = ar.red(y @ ar.cast(pr.cartan_inverse.T))
    recon = ar.cast(np.zeros(pulled.shape, dtype=np.int64))
    for s, entries in enumerate(factors):
        col = coords[:, s]
        for a, b, v in entries:
            recon[:, a, b] = recon[:, a, b] + col * v
    if not ar.is_zero(recon - pulled):
        return None
    return coords


def similarity(m: Any, ring: Ring | None = None) -> Similarity:
    """Test ``M`` for being a similarity of h and of f, exactly.

    ``m`` is an :class:`~e7quadrics.rep56.ExactMatrix` or a raw array with
    ``ring`` given.  Over the rationals the matrix is first scaled to an
    integer matrix, and the multipliers are corrected afterwards.
    """
    if ring is None:
        ring, data = m.ring, m.data
    else:
        data = np.asarray(m)
    if ring is ZZ:
        ring = QQ
    mi, den = integral_scaling(data, ring)
    ar = ArrayArith(ring)
    rs = build_e8()

    H = ar.cast(build_h().matrix())
    hp = ar.red(ar.red(mi.T @ H) @ mi)
    b0 = rs.bar_index(0)
    eh = ar.red(hp[0, b0] * H[0, b0])
    eps_h = None
    witness = None
    if ar.is_zero(hp - eh * H):
        eps_h = ring(Fraction(int(eh), den**2)) if ar.p is None else ring(int(eh))
    else:
        i, j = np.argwhere(ar.red(hp - eh * H) != 0)[0]
        witness = f"h(M e_{i + 1}, M e_{j + 1}) breaks proportionality with h"

    g0 = g0_factorization()
    eps_f = None
    C = _coordinates(_pull_factors(mi, g0.left, ar), g0.left, g0.left_probes, ar)
    D = None if C is None else _coordinates(_pull_factors(mi, g0.right, ar), g0.right, g0.right_probes, ar)
    if C is None or D is None:
        witness = witness or "pullback of f leaves the span of its degree-0 factors"
    else:
        P = ar.red(C.T @ D)
        ef = P[0, 0]
        if ar.is_zero(P - ef * ar.cast(np.eye(P.shape[0], dtype=np.int64))):
            eps_f = ring(Fraction(int(ef), den**4)) if ar.p is None else ring(int(ef))
        else:
            witness = witness or "pullback of f is not a multiple of f"
    if eps_f is not None and ring(eps_f) == 0:
        eps_f = None
        witness = witness or "pullback of f vanishes"
    return Similarity(eps_h, eps_f, witness)


# ---------------------------------------------------------------------------
# orbit classes


def _contract(u: np.ndarray, slots: int, ar: ArrayArith) -> np.ndarray:
    """``f(u, .., u, x, ..)`` with ``u`` in the first ``slots`` positions."""
    f = build_f()
    idx, val = f.index_array, ar.cast(f.values)
    prod = val
    for k in range(slots):
        prod = ar.red(prod * u[idx[:, k]])
    if slots == 4:
        return ar.red(np.array([prod.sum()], dtype=prod.dtype))
    rest = idx[:, slots:]
    shape = (56,) * (4 - slots)
    out = ar.cast(np.zeros(shape, dtype=np.int64))
    np.add.at(out, tuple(rest.T), prod)
    return ar.red(out)


def orbit_class(v: Sequence, ring: Ring) -> str:
    """zero, singular, brilliant, luminous or dark, probing f on basis vectors.

    Only fields of characteristic other than 2 and 3 are accepted; an
    integer or rational vector is classified over the rationals.
    """
    if ring is ZZ:
        ring = QQ
    if isinstance(ring, PrimeField) and ring.p in (2, 3):
        raise ValueError("orbit classes need characteristic other than 2 and 3")
    u, _ = integral_scaling(np.asarray(v, dtype=object).reshape(-1), ring)
    if u.shape != (56,):
        raise ValueError("expected a vector of length 56")
    ar = ArrayArith(ring)
    u = ar.cast(u)
    if ar.is_zero(u):
        return "zero"
    if ar.is_zero(_contract(u, 2, ar)):
        return "singular"
    if ar.is_zero(_contract(u, 3, ar)):
        return "brilliant"
    if ar.is_zero(_contract(u, 4, ar)):
        return "luminous"
    return "dark"

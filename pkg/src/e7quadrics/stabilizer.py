"""Lie algebras of the stabilizers and membership tests for group elements.

Infinitesimal stabilizers are computed as kernels of exact linear
systems in the 3136 entries ``z[k, l]`` of a 56 x 56 matrix (index
``56 * k + l``), where ``z`` acts on column vectors.  Every constraint
only involves entries whose weight difference ``w_k - w_l`` is one fixed
vector, so the systems split into small independent blocks that are
solved densely.

* For the ideal: the derivative ``sum_k (d q / d x_k) (z x)_k`` of every
  generator ``q`` must lie in the span of the 133 generators.
* For the forms: ``f(zu, v, w, t) + ... + f(u, v, w, zt)`` and
  ``h(zu, v) + h(u, zv)`` must vanish, or in the extended system equal
  ``e f + c2 h(u,v)h(w,t) + c3 h(u,w)h(v,t) + c4 h(u,t)h(v,w)`` and
  ``e' h`` respectively, with five auxiliary unknowns ``e, e', c2, c3, c4``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Any, Iterable, Mapping, Sequence

import numpy as np

from .forms import build_f, build_h, similarity
from .linalg import integer_row, rank_dense
from .quadrics import MONOMIALS, NMONO, QuadraticForm, build_basis, pullback_many
from .rep56 import DIM, ExactMatrix, unipotent_entries
from .rings import QQ, ZZ, ArrayArith, PrimeField, Ring, integral_scaling
from .root_system import build_e8, sub

__all__ = [
    "LieSolveReport",
    "MembershipVerdict",
    "CrossCheckReport",
    "NUNKNOWNS",
    "AUX_NAMES",
    "unknown",
    "lie_dim_GI",
    "lie_dim_fh",
    "root_element_vector",
    "diagonal_vector",
    "diagonal_relation",
    "membership_GI",
    "membership_forms",
    "cross_check",
]

NUNKNOWNS = DIM * DIM
AUX_NAMES = ("e", "e'", "c2", "c3", "c4")


def unknown(k: int, l: int) -> int:
    """Index of the matrix entry ``z[k, l]`` (zero-based weights)."""
    return k * DIM + l


def _field(ring: Ring) -> Ring:
    if ring is ZZ:
        return QQ
    if not (ring is QQ or isinstance(ring, PrimeField)):
        raise ValueError(f"{ring!r} is not a field")
    return ring


@dataclass
class _Block:
    cols: np.ndarray  # global unknown indices
    rows: np.ndarray  # integer constraint rows (residues over GF(p))
    kernel: list  # kernel basis in local coordinates
    rank: int


@dataclass
class LieSolveReport:
    """Rank and kernel of one infinitesimal-stabilizer system."""

    ring: str
    unknowns: int
    rank: int
    kernel_dim: int
    kernel_basis: list | None = None
    _field: Ring | None = field(default=None, repr=False, compare=False)
    _blocks: list = field(default_factory=list, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.kernel_dim != self.unknowns - self.rank:
            raise ValueError("kernel dimension must equal unknowns minus rank")

    def to_json(self) -> dict:
        out = {"ring": self.ring, "unknowns": self.unknowns, "rank": self.rank, "kernel_dim": self.kernel_dim}
        if self.kernel_basis is not None:
            out["kernel_basis"] = [{str(k): str(v) for k, v in sorted(vec.items())} for vec in self.kernel_basis]
        return out

    def in_kernel(self, vec: Mapping[int, Any]) -> bool:
        """Does the vector ``{unknown: value}`` satisfy every constraint?"""
        ring = self._field
        for b in self._blocks:
            local = [ring(vec.get(int(c), 0)) for c in b.cols]
            if not any(local) or b.rows.shape[0] == 0:
                continue
            if isinstance(ring, PrimeField):
                v = np.array([int(x) for x in local], dtype=np.int64)
                if np.any((b.rows @ v) % ring.p):
                    return False
            else:
                v = np.array(local, dtype=object)
                if np.any(b.rows.astype(object).dot(v) != 0):
                    return False
        return True

    def vanishes_on_kernel(self, functional: Mapping[int, Any]) -> bool:
        """Is the linear functional ``sum c_u z_u`` identically zero on the kernel?"""
        ring = self._field
        for b in self._blocks:
            coeff = [ring(functional.get(int(c), 0)) for c in b.cols]
            if not any(coeff):
                continue
            for kv in b.kernel:
                s = sum((ring(c) * ring(x) for c, x in zip(coeff, kv)), ring.zero)
                if ring(s) != 0:
                    return False
        return True


def _ring_tag(ring: Ring) -> str:
    return f"fp{ring.p}" if isinstance(ring, PrimeField) else ring.tag


def _solve(blocks: Mapping[Any, tuple[np.ndarray, np.ndarray, np.ndarray]], nunknowns: int, ring: Ring, with_basis: bool) -> LieSolveReport:
    """Rank of a block-diagonal system given as ``block -> (row ids, columns, values)``.

    Unknowns that appear in no constraint are free and form singleton blocks.
    """
    p = ring.p if isinstance(ring, PrimeField) else None
    solved: list[_Block] = []
    seen = np.zeros(nunknowns, dtype=bool)
    total_rank = 0
    for key in sorted(blocks):
        rid, col, val = blocks[key]
        cols, ci = np.unique(col, return_inverse=True)
        _, ri = np.unique(rid, return_inverse=True)
        seen[cols] = True
        dtype = np.int64 if p or val.dtype != object else object
        mat = np.zeros((int(ri.max()) + 1, len(cols)), dtype=dtype)
        np.add.at(mat, (ri, ci), val)
        if p:
            mat %= p
        elif dtype is object and _small(mat):
            mat = mat.astype(np.int64)
        mat = _dedupe(mat)
        r, kern = rank_dense(mat, ring)
        total_rank += r
        solved.append(_Block(cols, mat, kern, r))
    for c in np.nonzero(~seen)[0]:
        solved.append(_Block(np.array([c]), np.zeros((0, 1), dtype=np.int64), [[ring.one]], 0))
    report = LieSolveReport(_ring_tag(ring), nunknowns, total_rank, nunknowns - total_rank, _field=ring, _blocks=solved)
    if with_basis:
        basis = []
        for b in solved:
            for kv in b.kernel:
                basis.append({int(c): ring(x) for c, x in zip(b.cols, kv) if ring(x) != 0})
        report.kernel_basis = basis
    return report


def _split(rid: np.ndarray, col: np.ndarray, val: np.ndarray, blk: np.ndarray) -> dict:
    """Group flat constraint entries by block code."""
    order = np.argsort(blk, kind="stable")
    rid, col, val, blk = rid[order], col[order], val[order], blk[order]
    bounds = np.nonzero(np.diff(blk))[0] + 1
    out = {}
    for lo, hi in zip(np.r_[0, bounds], np.r_[bounds, len(blk)]):
        if lo < hi:
            out[int(blk[lo])] = (rid[lo:hi], col[lo:hi], val[lo:hi])
    return out


def _small(mat: np.ndarray) -> bool:
    return mat.size == 0 or max(abs(int(x)) for x in mat.ravel()) < (1 << 40)


def _dedupe(mat: np.ndarray) -> np.ndarray:
    if mat.shape[0] == 0:
        return mat
    mat = mat[np.any(mat != 0, axis=1)]
    if mat.dtype != object and mat.shape[0]:
        mat = np.unique(mat, axis=0)
    return mat


# ---------------------------------------------------------------------------
# weight differences


@lru_cache(maxsize=1)
def _weight_matrix() -> np.ndarray:
    return np.array(build_e8().weight_roots, dtype=np.int64)


def _code(v: np.ndarray) -> np.ndarray:
    """Injective integer code of small 8-vectors (entries in -16..15)."""
    return ((v + 16) * (32 ** np.arange(8, dtype=np.int64))).sum(axis=-1)


@lru_cache(maxsize=1)
def _weight_lookup() -> tuple[np.ndarray, np.ndarray]:
    codes = _code(_weight_matrix())
    order = np.argsort(codes)
    return codes[order], order


def _lookup(vecs: np.ndarray) -> np.ndarray:
    """Weight index of each row of ``vecs``, or -1."""
    codes, order = _weight_lookup()
    c = _code(vecs)
    pos = np.clip(np.searchsorted(codes, c), 0, len(codes) - 1)
    return np.where(codes[pos] == c, order[pos], -1)


def _block_of(k: int, l: int) -> int:
    W = _weight_matrix()
    return int(_code(W[k] - W[l]))


# ---------------------------------------------------------------------------
# the ideal


def lie_dim_GI(ring: Ring = QQ, with_basis: bool = False) -> LieSolveReport:
    """Matrices ``z`` whose derivative of every generator stays in the span."""
    ring = _field(ring)
    basis = build_basis()
    rem = basis.monomial_remainders(ring)
    mono = {m: k for k, m in enumerate(MONOMIALS)}
    rows: dict[tuple[int, int], dict[int, Any]] = {}
    for qi, q in enumerate(basis.forms):
        for (a, b), c in q.coeffs.items():
            for var, other in ((a, b), (b, a)):
                # d q / d x_var contains c * x_other; z[var, l] feeds x_l into slot var
                for l in range(DIM):
                    m = mono[(l, other) if l <= other else (other, l)]
                    for mm, v in rem[m].items():
                        row = rows.setdefault((qi, mm), {})
                        u = unknown(var, l)
                        row[u] = row.get(u, 0) + c * v
    return _solve(_group_rows(rows.values(), ring), NUNKNOWNS, ring, with_basis)


def _group_rows(rows: Iterable[dict[int, Any]], ring: Ring) -> dict:
    rid, col, val, blk = [], [], [], []
    for r, row in enumerate(rows):
        if isinstance(ring, PrimeField):
            row = {u: int(ring(v)) for u, v in row.items() if ring(v) != 0}
        else:
            row = integer_row({u: Fraction(v) for u, v in row.items() if v != 0})
        if not row:
            continue
        keys = {_block_of(u // DIM, u % DIM) for u in row}
        if len(keys) != 1:
            raise ArithmeticError("constraint mixes weight differences; remainders are not homogeneous")
        key = keys.pop()
        for u, v in row.items():
            rid.append(r)
            col.append(u)
            val.append(v)
            blk.append(key)
    vals = np.array(val, dtype=object)
    if max((abs(v) for v in val), default=0) < (1 << 40):
        vals = vals.astype(np.int64)
    return _split(np.array(rid, dtype=np.int64), np.array(col, dtype=np.int64), vals, np.array(blk, dtype=np.int64))


# ---------------------------------------------------------------------------
# the forms


@lru_cache(maxsize=1)
def _f_dense() -> np.ndarray:
    return build_f().dense()


def _f_rows(extended: bool) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Constraint rows from ``f`` as flat arrays ``(row id, column, value, block code)``."""
    f = build_f()
    F = _f_dense()
    W = _weight_matrix()
    delta = np.array(build_e8().highest_root, dtype=np.int64)
    support = f.index_array
    cand = []
    for s in range(4):
        t = np.repeat(support, DIM, axis=0)
        t[:, s] = np.tile(np.arange(DIM), len(support))
        cand.append(t)
    t = np.concatenate(cand)
    codes = ((t[:, 0] * DIM + t[:, 1]) * DIM + t[:, 2]) * DIM + t[:, 3]
    _, first = np.unique(codes, return_index=True)
    t = t[np.sort(first)]
    D = 2 * delta - W[t].sum(axis=1)
    block = _code(D)
    rid, col, val = [], [], []
    ids = np.arange(len(t))
    for s in range(4):
        kappa = _lookup(W[t[:, s]] + D)
        ok = kappa >= 0
        tt = t[ok].copy()
        tt[:, s] = kappa[ok]
        v = F[tt[:, 0], tt[:, 1], tt[:, 2], tt[:, 3]].astype(np.int64)
        nz = v != 0
        rid.append(ids[ok][nz])
        col.append(kappa[ok][nz] * DIM + t[ok][nz][:, s])
        val.append(v[nz])
    if extended:
        H = build_h().matrix().astype(np.int64)
        a, b, c, d = t.T
        aux = [
            -F[a, b, c, d].astype(np.int64),
            -H[a, b] * H[c, d],
            -H[a, c] * H[b, d],
            -H[a, d] * H[b, c],
        ]
        for j, v in zip((0, 2, 3, 4), aux):
            nz = v != 0
            rid.append(ids[nz])
            col.append(np.full(int(nz.sum()), NUNKNOWNS + j, dtype=np.int64))
            val.append(v[nz])
    rid, col, val = (np.concatenate(x) for x in (rid, col, val))
    return rid, col, val, block[rid]


def _h_rows(extended: bool) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    rs = build_e8()
    H = build_h().matrix().astype(np.int64)
    W = _weight_matrix()
    delta = np.array(rs.highest_root, dtype=np.int64)
    rid, col, val, blk = [], [], [], []
    for a in range(DIM):
        for b in range(DIM):
            r = a * DIM + b
            ba, bb = rs.bar_index(a), rs.bar_index(b)
            code = int(_code(delta - W[a] - W[b]))
            # h(z e_a, e_b) + h(e_a, z e_b) = z[bar b, a] h(bar b, b) + z[bar a, b] h(a, bar a)
            entries = [(unknown(bb, a), H[bb, b]), (unknown(ba, b), H[a, ba])]
            if extended and H[a, b]:
                entries.append((NUNKNOWNS + 1, -H[a, b]))
            for c, v in entries:
                rid.append(r)
                col.append(c)
                val.append(int(v))
                blk.append(code)
    return tuple(np.array(x, dtype=np.int64) for x in (rid, col, val, blk))


def lie_dim_fh(ring: Ring = QQ, extended: bool = False, with_basis: bool = False) -> LieSolveReport:
    """Matrices preserving ``f`` and ``h`` infinitesimally.

    With ``extended`` the five auxiliary unknowns ``e, e', c2, c3, c4``
    (indices 3136..3140) allow the similarity and ``h (x) h`` corrections.
    """
    ring = _field(ring)
    p = ring.p if isinstance(ring, PrimeField) else None
    f_rows, h_rows = _f_rows(extended), _h_rows(extended)
    # h rows get ids after the f rows so the two families never merge
    offset = int(f_rows[0].max()) + 1
    rid, col, val, blk = (np.concatenate((a, b)) for a, b in zip(f_rows, h_rows))
    rid[len(f_rows[0]):] += offset
    if p:
        val = val % p
    keep = val != 0
    blocks = _split(rid[keep], col[keep], val[keep], blk[keep])
    n = NUNKNOWNS + (len(AUX_NAMES) if extended else 0)
    return _solve(blocks, n, ring, with_basis)


# ---------------------------------------------------------------------------
# known kernel elements


def root_element_vector(gamma: Sequence[int]) -> dict[int, int]:
    """The nilpotent matrix ``d/dxi x_gamma(xi)`` at 0, as an unknown vector."""
    gamma = build_e8().e7_root(gamma)
    return {unknown(i, j): v for i, j, v in unipotent_entries(gamma)}


def diagonal_vector(i: int, extended: bool = False) -> dict[int, int]:
    """Diagonal matrix ``z[l, l] = (coefficient i of weight l)``, i = 0..7.

    In the extended system the matching multipliers ``e = 2 phi(delta)``
    and ``e' = phi(delta)`` are attached.
    """
    if not 0 <= i < 8:
        raise ValueError("coefficient index ranges over 0..7")
    rs = build_e8()
    out = {unknown(l, l): w[i] for l, w in enumerate(rs.weight_roots) if w[i]}
    if extended:
        d = rs.highest_root[i]
        if d:
            out[NUNKNOWNS] = 2 * d
            out[NUNKNOWNS + 1] = d
    return out


def relation_weights() -> list[int]:
    """Eight weights reached from the highest one by lowering along a7, a6, a5, a4, then a2 or a3, a1."""
    rs = build_e8()
    simple = rs.simple_roots
    w1 = rs.weight_roots[0]
    w2 = sub(w1, simple[6])
    w3 = sub(w2, simple[5])
    w4 = sub(w3, simple[4])
    w5 = sub(w4, simple[3])
    w6 = sub(w5, simple[1])
    w7 = sub(w5, simple[2])
    w8 = sub(w7, simple[0])
    return [rs.weight(w).index for w in (w1, w2, w3, w4, w5, w6, w7, w8)]


def diagonal_relation() -> dict[int, int]:
    """``z11 + ... + z55 - 3 z66 - 2 z77 - 2 z88`` on the weights of :func:`relation_weights`."""
    coeffs = (1, 1, 1, 1, 1, -3, -2, -2)
    return {unknown(k, k): c for k, c in zip(relation_weights(), coeffs)}


# ---------------------------------------------------------------------------
# membership


@dataclass
class MembershipVerdict:
    """Decision for one matrix.  ``witness`` is ``(name, remainder)`` on rejection."""

    member: bool
    eps_h: Any = None
    eps_f: Any = None
    witness: tuple[str, Any] | None = None

    def to_json(self) -> dict:
        w = None
        if self.witness is not None:
            name, rest = self.witness
            w = {"generator": name, "remainder": rest.to_json() if isinstance(rest, QuadraticForm) else str(rest)}
        return {
            "member": self.member,
            "eps_h": None if self.eps_h is None else str(self.eps_h),
            "eps_f": None if self.eps_f is None else str(self.eps_f),
            "witness": w,
        }


def _prepare(m: ExactMatrix) -> ExactMatrix:
    if m.shape != (DIM, DIM):
        raise ValueError(f"expected a 56 x 56 matrix, got {m.shape}")
    ring = _field(m.ring)
    if ring is not m.ring:
        m = m.to_ring(ring)
    if m.ring(m.det()) == 0:
        raise ValueError("matrix is singular")
    return m


def membership_GI(m: ExactMatrix) -> MembershipVerdict:
    """Does ``q(M x)`` lie in the span of the generators for every generator ``q``?"""
    m = _prepare(m)
    ring = m.ring
    basis = build_basis()
    data, _ = integral_scaling(m.data, ring)
    # scaling M by a constant rescales every pullback uniformly, so the span test is unaffected
    pulled = pullback_many(basis.forms, data, ArrayArith(ring))
    for q, row in zip(basis.forms, pulled):
        nz = np.nonzero(row)[0]
        red = basis.reduce(QuadraticForm.from_row({int(k): ring(int(row[k])) for k in nz}), ring)
        if not red.remainder.is_zero():
            return MembershipVerdict(False, witness=(q.name, red.remainder))
    return MembershipVerdict(True)


def membership_forms(m: ExactMatrix) -> MembershipVerdict:
    """Is ``M`` a similarity of both ``h`` and ``f``?"""
    m = _prepare(m)
    s = similarity(m)
    if not s.similar:
        return MembershipVerdict(False, s.eps_h, s.eps_f, ("h" if s.eps_h is None else "f", s.witness))
    ring = m.ring
    if ring(s.eps_f) != ring(s.eps_h * s.eps_h):
        raise ArithmeticError(f"multipliers violate eps_f = eps_h^2: {s.eps_f} vs {s.eps_h}")
    return MembershipVerdict(True, s.eps_h, s.eps_f)


@dataclass
class CrossCheckReport:
    """Verdicts of both procedures per labelled matrix."""

    entries: list = field(default_factory=list)

    @property
    def disagreements(self) -> list:
        return [e for e in self.entries if e["ideal"] != e["forms"]]

    @property
    def ok(self) -> bool:
        return not self.disagreements

    def to_json(self) -> dict:
        return {
            "checked": len(self.entries),
            "accepted": sum(1 for e in self.entries if e["ideal"] and e["forms"]),
            "rejected": sum(1 for e in self.entries if not e["ideal"] and not e["forms"]),
            "disagreements": self.disagreements,
        }


def cross_check(ms: Iterable[ExactMatrix | tuple[str, ExactMatrix]]) -> CrossCheckReport:
    """Run both membership procedures on every matrix and record disagreements."""
    rep = CrossCheckReport()
    for k, item in enumerate(ms):
        label, m = item if isinstance(item, tuple) else (f"#{k}", item)
        gi = membership_GI(m).member
        fo = membership_forms(m).member
        rep.entries.append({"label": label, "ideal": gi, "forms": fo})
    return rep

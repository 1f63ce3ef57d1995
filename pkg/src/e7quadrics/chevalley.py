"""Structure constants of the E8 Chevalley basis and the Lie bracket.

Signs come from the bilinear form ``eps`` on the root lattice defined on
fundamental roots by ``eps(a_i, a_i) = -1``, ``eps(a_i, a_j) = -1`` for
``i < j`` adjacent in the Dynkin diagram and ``+1`` otherwise.  This
satisfies ``eps(a, b) eps(b, a) = (-1)^(a, b)``.  The algebra with
``[E_a, E_b] = eps(a, b) E_{a+b}`` and ``[E_a, E_{-a}] = -a`` is turned
into a Chevalley basis by ``e_a = E_a`` for positive ``a`` and
``e_a = -E_a`` for negative ``a``, so that ``[e_a, e_{-a}] = H_a`` and

    N(a, b) = s(a) s(b) s(a + b) eps(a, b),   s = sign of the height.

The Cartan part of a :class:`LieElement` is kept in the basis of simple
coroots H_1..H_8; ``H_a`` for an arbitrary root expands by linearity.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Mapping

import numpy as np

from .root_system import CARTAN_E8, RANK, Root, RootSystem, add, build_e8, height, pair

__all__ = ["StructureTable", "LieElement", "build_structure_table", "bracket", "height_component"]


def _eps_matrix() -> tuple[tuple[int, ...], ...]:
    e = [[1] * RANK for _ in range(RANK)]
    for i in range(RANK):
        e[i][i] = -1
        for j in range(i + 1, RANK):
            if CARTAN_E8[i][j] == -1:
                e[i][j] = -1
    return tuple(tuple(r) for r in e)


_EPS = _eps_matrix()
_EPS_ODD = tuple((i, j) for i in range(RANK) for j in range(RANK) if _EPS[i][j] == -1)


def eps(a: Root, b: Root) -> int:
    n = 0
    for i, j in _EPS_ODD:
        n += a[i] * b[j]
    return -1 if n & 1 else 1


class StructureTable:
    """Signs ``N(a, b)`` for every ordered pair of roots with ``a + b`` a root."""

    def __init__(self, rs: RootSystem) -> None:
        self.rs = rs
        sign = {}
        for a in rs.roots:
            sa = 1 if height(a) > 0 else -1
            for b in rs.roots:
                c = add(a, b)
                if c in rs.root_set:
                    sb = 1 if height(b) > 0 else -1
                    sc = 1 if height(c) > 0 else -1
                    sign[a, b] = sa * sb * sc * eps(a, b)
        self.sign: dict[tuple[Root, Root], int] = sign

    def N(self, a: Root, b: Root) -> int:
        """Structure constant; 0 when ``a + b`` is not a root."""
        return self.sign.get((a, b), 0)

    def cartan_pairing(self, b: Root, a: Root) -> int:
        """<b, a^vee>, which equals (b, a) in the simply laced case."""
        return pair(b, a)

    def index_tables(self) -> tuple[np.ndarray, np.ndarray]:
        """``(S, Nm)`` with ``S[i, j]`` the index of root_i + root_j (-1 if none)."""
        rs = self.rs
        n = len(rs.roots)
        S = np.full((n, n), -1, dtype=np.int64)
        Nm = np.zeros((n, n), dtype=np.int64)
        idx = rs.root_index
        for (a, b), v in self.sign.items():
            i, j = idx[a], idx[b]
            S[i, j] = idx[add(a, b)]
            Nm[i, j] = v
        return S, Nm

    def violations(self) -> list[str]:
        """Exhaustive check of the sign identities; empty if consistent."""
        rs = self.rs
        n = len(rs.roots)
        S, Nm = self.index_tables()
        neg = np.array([rs.root_index[tuple(-x for x in r)] for r in rs.roots])
        bad = []
        defined = S >= 0
        if np.any(Nm[defined] != -Nm.T[defined]):
            bad.append("antisymmetry")
        # N(a,b) = N(-b,-a) = -N(-a,-b)
        flip = Nm[np.ix_(neg, neg)]
        if np.any(Nm[defined] != flip.T[defined]) or np.any(Nm[defined] != -flip[defined]):
            bad.append("negation")
        # a + b + g = 0  =>  N(a,b) = N(b,g) = N(g,a)
        ii, jj = np.nonzero(defined)
        gg = neg[S[ii, jj]]
        if np.any(Nm[ii, jj] != Nm[jj, gg]) or np.any(Nm[ii, jj] != Nm[gg, ii]):
            bad.append("triple")
        # N(b,g) N(a,b+g) = N(a+b,g) N(a,b) whenever all four are defined
        ab = S[ii, jj]
        for g in range(n):
            bg = S[jj, g]
            abg = S[ab, g]
            ok = (bg >= 0) & (abg >= 0)
            if not ok.any():
                continue
            i, j, k, l = ii[ok], jj[ok], bg[ok], ab[ok]
            a_bg = S[i, k]
            ok2 = a_bg >= 0
            lhs = Nm[j, g][ok2] * Nm[i, k[ok2]]
            rhs = Nm[l[ok2], g] * Nm[i[ok2], j[ok2]]
            for t in np.nonzero(lhs != rhs)[0]:
                bad.append(f"cocycle {rs.roots[i[ok2][t]]} {rs.roots[j[ok2][t]]} {rs.roots[g]}")
        return bad


@lru_cache(maxsize=1)
def build_structure_table() -> StructureTable:
    return StructureTable(build_e8())


@dataclass(frozen=True)
class LieElement:
    """Element of the E8 Lie algebra over an exact ring, stored sparsely."""

    root_part: Mapping[Root, object] = field(default_factory=dict)
    cartan_part: Mapping[int, object] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "root_part", {k: v for k, v in self.root_part.items() if v != 0})
        object.__setattr__(self, "cartan_part", {k: v for k, v in self.cartan_part.items() if v != 0})

    @classmethod
    def e(cls, a: Root, c: object = 1) -> "LieElement":
        return cls({tuple(a): c})

    @classmethod
    def H(cls, a: Root, c: object = 1) -> "LieElement":
        """The coroot ``H_a`` expanded over simple coroots."""
        return cls({}, {i: c * a[i] for i in range(RANK) if a[i]})

    def is_zero(self) -> bool:
        return not self.root_part and not self.cartan_part

    def __add__(self, other: "LieElement") -> "LieElement":
        rp = dict(self.root_part)
        for k, v in other.root_part.items():
            rp[k] = rp.get(k, 0) + v
        cp = dict(self.cartan_part)
        for k, v in other.cartan_part.items():
            cp[k] = cp.get(k, 0) + v
        return LieElement(rp, cp)

    def __neg__(self) -> "LieElement":
        return LieElement({k: -v for k, v in self.root_part.items()}, {k: -v for k, v in self.cartan_part.items()})

    def __sub__(self, other: "LieElement") -> "LieElement":
        return self + (-other)

    def scale(self, c: object) -> "LieElement":
        return LieElement({k: c * v for k, v in self.root_part.items()}, {k: c * v for k, v in self.cartan_part.items()})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LieElement):
            return NotImplemented
        return dict(self.root_part) == dict(other.root_part) and dict(self.cartan_part) == dict(other.cartan_part)

    def coefficient(self, a: Root) -> object:
        return self.root_part.get(tuple(a), 0)


def bracket(x: LieElement, y: LieElement, table: StructureTable | None = None) -> LieElement:
    """Lie bracket in the Chevalley basis."""
    t = table or build_structure_table()
    roots = t.rs.root_set
    rp: dict[Root, object] = {}
    cp: dict[int, object] = {}
    for a, u in x.root_part.items():
        for b, v in y.root_part.items():
            c = add(a, b)
            if not any(c):
                for i in range(RANK):
                    if a[i]:
                        cp[i] = cp.get(i, 0) + u * v * a[i]
            elif c in roots:
                rp[c] = rp.get(c, 0) + t.sign[a, b] * u * v
        # [e_a, H_i] = -(a, a_i) e_a
        for i, h in y.cartan_part.items():
            k = _simple_pairing(a, i)
            if k:
                rp[a] = rp.get(a, 0) - k * u * h
    for i, h in x.cartan_part.items():
        for b, v in y.root_part.items():
            k = _simple_pairing(b, i)
            if k:
                rp[b] = rp.get(b, 0) + k * h * v
    return LieElement(rp, cp)


def _simple_pairing(a: Root, i: int) -> int:
    row = CARTAN_E8[i]
    return sum(a[j] * row[j] for j in range(RANK) if a[j])


def height_component(x: LieElement, k: int) -> LieElement:
    """Projection onto the alpha_8-height ``k`` summand of the 5-grading."""
    if not -2 <= k <= 2:
        raise ValueError("alpha_8 height ranges over -2..2")
    rp = {a: v for a, v in x.root_part.items() if a[7] == k}
    return LieElement(rp, dict(x.cartan_part) if k == 0 else {})

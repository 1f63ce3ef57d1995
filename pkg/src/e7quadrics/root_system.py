"""The E8 root system, its E7 subsystem and the 56 weights of V(w7).

Roots are tuples of eight integer coefficients over the fundamental roots
alpha_1..alpha_8 (Bourbaki numbering).  The lattice pairing is normalized
so that every root has squared length 2; halving it gives the customary
values 1, 1/2, 0, -1/2 for pairs of weights.

Weights of the 56-dimensional module are the E8 roots whose alpha_8
coefficient is 1.  They are numbered 1..56 by decreasing height, ties
broken by the lexicographic order of the coefficient vectors, and carry
labels 1..28, -28..-1 in that order, so that ``label(bar w) == -label(w)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import combinations, product
from typing import Iterable, Sequence

__all__ = [
    "Root",
    "CARTAN_E8",
    "RootSystem",
    "WeightIndex",
    "MaximalSquare",
    "build_e8",
    "e8_even_coordinate_roots",
    "BOURBAKI_SIMPLE_ROOTS",
]

Root = tuple  # 8 integer coefficients over alpha_1..alpha_8

RANK = 8

# Bourbaki: 1-3-4-5-6-7-8 with 2 attached to 4.
_EDGES = [(0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (1, 3)]


def _cartan() -> tuple[tuple[int, ...], ...]:
    c = [[2 if i == j else 0 for j in range(RANK)] for i in range(RANK)]
    for i, j in _EDGES:
        c[i][j] = c[j][i] = -1
    return tuple(tuple(r) for r in c)


CARTAN_E8 = _cartan()

# Bourbaki's fundamental roots for E8 in the even-coordinate model.
_h = Fraction(1, 2)
BOURBAKI_SIMPLE_ROOTS = (
    (_h, -_h, -_h, -_h, -_h, -_h, -_h, _h),
    (1, 1, 0, 0, 0, 0, 0, 0),
    (-1, 1, 0, 0, 0, 0, 0, 0),
    (0, -1, 1, 0, 0, 0, 0, 0),
    (0, 0, -1, 1, 0, 0, 0, 0),
    (0, 0, 0, -1, 1, 0, 0, 0),
    (0, 0, 0, 0, -1, 1, 0, 0),
    (0, 0, 0, 0, 0, -1, 1, 0),
)


def pair(a: Sequence[int], b: Sequence[int]) -> int:
    """Lattice pairing with (alpha, alpha) = 2 for roots."""
    s = 0
    for i in range(RANK):
        ai = a[i]
        if ai:
            row = CARTAN_E8[i]
            for j in range(RANK):
                if b[j]:
                    s += ai * row[j] * b[j]
    return s


def add(a: Root, b: Root) -> Root:
    return tuple(x + y for x, y in zip(a, b))


def sub(a: Root, b: Root) -> Root:
    return tuple(x - y for x, y in zip(a, b))


def neg(a: Root) -> Root:
    return tuple(-x for x in a)


def height(a: Root) -> int:
    return sum(a)


def e8_even_coordinate_roots() -> list[tuple]:
    """The 240 E8 roots in the even-coordinate model (independent oracle)."""
    roots: set[tuple] = set()
    for i, j in combinations(range(8), 2):
        for si, sj in product((-1, 1), repeat=2):
            v = [Fraction(0)] * 8
            v[i], v[j] = Fraction(si), Fraction(sj)
            roots.add(tuple(v))
    for signs in product((-1, 1), repeat=8):
        if signs.count(-1) % 2 == 0:
            roots.add(tuple(Fraction(s, 2) for s in signs))
    return sorted(roots)


@dataclass(frozen=True, order=True)
class WeightIndex:
    """One of the 56 weights, with its position in the numbering."""

    ordinal: int
    root: Root
    label: int

    @property
    def index(self) -> int:
        """Zero-based position, used for array layout."""
        return self.ordinal - 1

    def __str__(self) -> str:
        return str(self.label) if self.label > 0 else f"-{-self.label}"


@dataclass(frozen=True)
class MaximalSquare:
    alpha: Root
    members: tuple[WeightIndex, ...]
    pairs: tuple[tuple[WeightIndex, WeightIndex], ...]


class RootSystem:
    """E8 with the 5-grading by alpha_8 coefficient.

    All tables are computed once at construction and never mutated.
    """

    def __init__(self) -> None:
        simple = [tuple(1 if i == j else 0 for i in range(RANK)) for j in range(RANK)]
        self.simple_roots: tuple[Root, ...] = tuple(simple)
        roots = set(simple)
        frontier = list(simple)
        while frontier:
            nxt = []
            for r in frontier:
                for i, a in enumerate(simple):
                    k = pair(r, a)
                    if k:
                        s = tuple(x - k * y for x, y in zip(r, a))
                        if s not in roots:
                            roots.add(s)
                            nxt.append(s)
            frontier = nxt
        self.roots: tuple[Root, ...] = tuple(sorted(roots, key=lambda r: (-height(r), r)))
        self.root_set = frozenset(self.roots)
        self.root_index = {r: i for i, r in enumerate(self.roots)}
        self.highest_root: Root = self.roots[0]

        e7 = [r for r in self.roots if r[7] == 0]
        self.e7_roots: tuple[Root, ...] = tuple(e7)
        self.e7_set = frozenset(e7)

        lam = sorted((r for r in self.roots if r[7] == 1), key=lambda r: (-height(r), r))
        self.weights: tuple[WeightIndex, ...] = tuple(
            WeightIndex(k + 1, r, k + 1 if k < 28 else -(56 - k)) for k, r in enumerate(lam)
        )
        self.weight_of = {w.root: w for w in self.weights}
        self.weight_roots: tuple[Root, ...] = tuple(lam)
        n = len(lam)
        self.gram = tuple(tuple(pair(a, b) for b in lam) for a in lam)
        self._bar = tuple(self.weight_of[sub(self.highest_root, r)].index for r in lam)
        self._squares: dict[Root, MaximalSquare] = {}
        assert n == 56

    # parsing boundary -------------------------------------------------

    def root(self, coeffs: Iterable[int]) -> Root:
        r = tuple(int(c) for c in coeffs)
        if len(r) != RANK or r not in self.root_set:
            raise ValueError(f"{r} is not an E8 root")
        return r

    def e7_root(self, coeffs: Iterable[int]) -> Root:
        r = tuple(int(c) for c in coeffs)
        if r not in self.e7_set:
            raise ValueError(f"{r} is not an E7 root")
        return r

    def weight(self, key: int | Root | WeightIndex) -> WeightIndex:
        """Look a weight up by label, by root, or pass a WeightIndex through."""
        if isinstance(key, WeightIndex):
            if self.weights[key.index] != key:
                raise ValueError(f"foreign weight {key!r}")
            return key
        if isinstance(key, int):
            if 1 <= key <= 28:
                return self.weights[key - 1]
            if -28 <= key <= -1:
                return self.weights[56 + key]
            raise ValueError(f"no weight labelled {key}")
        r = tuple(key)
        if r not in self.weight_of:
            raise ValueError(f"{r} is not a weight of V(w7)")
        return self.weight_of[r]

    # weight combinatorics ------------------------------------------------

    @property
    def highest_weight(self) -> WeightIndex:
        return self.weights[0]

    def inner(self, a: WeightIndex, b: WeightIndex) -> int:
        return self.gram[a.index][b.index]

    def distance(self, a: WeightIndex, b: WeightIndex) -> int:
        return _DIST[self.gram[a.index][b.index]]

    def bar(self, a: WeightIndex) -> WeightIndex:
        return self.weights[self._bar[a.index]]

    def bar_index(self, i: int) -> int:
        return self._bar[i]

    def is_e7_root(self, r: Root) -> bool:
        return r in self.e7_set

    def maximal_square(self, alpha: Root) -> MaximalSquare:
        alpha = tuple(alpha)
        if alpha not in self.e7_set:
            raise ValueError(f"{alpha} is not an E7 root")
        sq = self._squares.get(alpha)
        if sq is None:
            members = tuple(w for w in self.weights if sub(w.root, alpha) in self.weight_of)
            target = add(self.highest_root, alpha)
            pairs = []
            for w in members:
                partner = self.weight_of[sub(target, w.root)]
                if w.ordinal < partner.ordinal:
                    pairs.append((w, partner))
            sq = MaximalSquare(alpha, members, tuple(pairs))
            self._squares[alpha] = sq
        return sq

    def square_root_of_pair(self, a: WeightIndex, b: WeightIndex) -> Root:
        """The E7 root alpha with a + b = delta + alpha, for orthogonal a, b."""
        if self.inner(a, b) != 0:
            raise ValueError(f"weights {a} and {b} are not orthogonal")
        return sub(add(a.root, b.root), self.highest_root)

    @cached_property
    def orthogonal(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(j for j in range(56) if self.gram[i][j] == 0) for i in range(56))

    def tetrads(self) -> list[tuple[int, int, int, int]]:
        """Unordered tetrads of pairwise orthogonal weights, as index 4-tuples."""
        orth = [set(o) for o in self.orthogonal]
        out = []
        for a in range(56):
            for b in orth[a]:
                if b <= a:
                    continue
                ab = orth[a] & orth[b]
                for c in ab:
                    if c <= b:
                        continue
                    for d in ab & orth[c]:
                        if d > c:
                            out.append((a, b, c, d))
        out.sort()
        return out

    def alpha8_height(self, r: Root) -> int:
        return r[7]


_DIST = {2: 0, 1: 1, 0: 2, -1: 3}


@lru_cache(maxsize=1)
def build_e8() -> RootSystem:
    """The shared immutable E8 root system."""
    return RootSystem()

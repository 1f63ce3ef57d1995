"""Exact 56x56 matrices for the E7 Chevalley group acting on V(w7).

The module is realized inside E8 as the alpha_8-height 1 piece, and a
root element of E7 acts by the exponential of its adjoint action:

    (x_g(xi) v)_lam = v_lam + N(g, lam - g) xi v_{lam - g}.

Because the weights are minuscule the nilpotent part squares to zero.
The torus element attached to the fundamental weight w7 multiplies the
basis vector of weight ``lam`` by ``eta ** (c7(lam) - 2)``, where ``c7``
is the alpha_7 coefficient.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Iterable, Sequence, Union

import numpy as np

from . import linalg
from .chevalley import build_structure_table
from .rings import QQ, ZZ, PrimeField, Ring, ring_from_tag
from .root_system import Root, build_e8, neg, sub

__all__ = [
    "DIM",
    "ExactMatrix",
    "RootUnipotent",
    "TorusWeight",
    "WeylElem",
    "GroupWord",
    "Lcg",
    "root_unipotent",
    "torus_weight",
    "torus_exponents",
    "weyl_element",
    "evaluate_word",
    "random_word",
    "unipotent_entries",
    "matrix_from_json",
    "matrix_to_json",
]

DIM = 56


class ExactMatrix:
    """Dense matrix over an exact ring.

    Entries live in a numpy array: ``object`` dtype holding ``int`` or
    ``Fraction`` for the integers and rationals, ``int64`` residues for a
    prime field.  Instances are treated as immutable values.
    """

    __slots__ = ("ring", "data")

    def __init__(self, ring: Ring, data: np.ndarray) -> None:
        if data.ndim != 2:
            raise ValueError("matrix data must be two-dimensional")
        self.ring = ring
        self.data = data
        self.data.setflags(write=False)

    @classmethod
    def from_rows(cls, ring: Ring, rows: Sequence[Sequence[Any]]) -> "ExactMatrix":
        rows = [list(r) for r in rows]
        if rows and any(len(r) != len(rows[0]) for r in rows):
            raise ValueError("ragged matrix rows")
        return cls(ring, ring.array(rows) if rows else ring.zeros((0, 0)))

    @classmethod
    def identity(cls, ring: Ring, n: int = DIM) -> "ExactMatrix":
        a = ring.zeros((n, n))
        for i in range(n):
            a[i, i] = ring.one
        return cls(ring, a)

    @classmethod
    def diagonal(cls, ring: Ring, diag: Sequence[Any]) -> "ExactMatrix":
        n = len(diag)
        a = ring.zeros((n, n))
        for i, v in enumerate(diag):
            a[i, i] = ring(v)
        return cls(ring, a)

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape  # type: ignore[return-value]

    def __getitem__(self, ij: tuple[int, int]) -> Any:
        return self.data[ij]

    def copy_data(self) -> np.ndarray:
        return self.data.copy()

    def _check(self, other: "ExactMatrix") -> None:
        if self.ring != other.ring:
            raise ValueError(f"ring mismatch: {self.ring!r} vs {other.ring!r}")

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._check(other)
        if self.shape[1] != other.shape[0]:
            raise ValueError("shape mismatch in product")
        out = self.data @ other.data
        if isinstance(self.ring, PrimeField):
            out = out % self.ring.p
        elif self.ring is QQ:
            out = _normalize_q(out)
        return ExactMatrix(self.ring, out)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.ring == other.ring and self.shape == other.shape and bool(np.all(self.data == other.data))

    def __hash__(self) -> int:
        return hash((self.ring, self.shape, tuple(self.data.ravel().tolist())))

    def __repr__(self) -> str:
        return f"ExactMatrix({self.ring!r}, {self.shape[0]}x{self.shape[1]})"

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix(self.ring, self.data.T.copy())

    def det(self) -> Any:
        return linalg.det(self.data, self.ring)

    def inverse(self) -> "ExactMatrix":
        ring = QQ if self.ring is ZZ else self.ring
        inv = linalg.inverse(self.data, ring)
        if self.ring is ZZ:
            inv = ZZ.array(inv)
        return ExactMatrix(self.ring, inv)

    def is_identity(self) -> bool:
        return self == ExactMatrix.identity(self.ring, self.shape[0])

    def is_monomial(self) -> bool:
        nz = self.data != 0
        return bool(np.all(nz.sum(axis=0) == 1) and np.all(nz.sum(axis=1) == 1))

    def is_diagonal(self) -> bool:
        nz = np.argwhere(self.data != 0)
        return bool(np.all(nz[:, 0] == nz[:, 1]))

    def to_ring(self, ring: Ring) -> "ExactMatrix":
        """Coerce entries into another ring (e.g. integers to a prime field)."""
        return ExactMatrix(ring, ring.array(self.data))

    def to_json(self) -> dict:
        return matrix_to_json(self)


def _normalize_q(a: np.ndarray) -> np.ndarray:
    out = np.empty(a.shape, dtype=object)
    out.ravel()[:] = [QQ(x) for x in a.ravel()]
    return out


# ---------------------------------------------------------------------------
# serialization


def matrix_to_json(m: ExactMatrix) -> dict:
    ring = m.ring
    doc: dict[str, Any] = {"ring": ring.tag}
    if isinstance(ring, PrimeField):
        doc["p"] = ring.p
    doc["rows"], doc["cols"] = m.shape
    doc["entries"] = [[ring.encode(x) for x in row] for row in m.data.tolist()]
    return doc


def matrix_from_json(doc: Any) -> ExactMatrix:
    """Parse the matrix JSON format; raises ``ValueError`` on any defect."""
    if isinstance(doc, (str, bytes)):
        doc = json.loads(doc)
    if not isinstance(doc, dict):
        raise ValueError("matrix document must be a JSON object")
    tag = doc.get("ring")
    p = doc.get("p")
    if tag == "fp" and (not isinstance(p, int) or isinstance(p, bool)):
        raise ValueError("prime-field matrix needs an integer 'p'")
    ring = ring_from_tag(tag, p)
    rows, cols, entries = doc.get("rows"), doc.get("cols"), doc.get("entries")
    if not isinstance(rows, int) or not isinstance(cols, int) or rows < 0 or cols < 0:
        raise ValueError("'rows' and 'cols' must be non-negative integers")
    if not isinstance(entries, list) or len(entries) != rows:
        raise ValueError("'entries' must be a list of 'rows' rows")
    data = ring.zeros((rows, cols))
    for i, row in enumerate(entries):
        if not isinstance(row, list) or len(row) != cols:
            raise ValueError(f"row {i} does not have {cols} entries")
        for j, v in enumerate(row):
            data[i, j] = ring.decode(v)
    return ExactMatrix(ring, data)


# ---------------------------------------------------------------------------
# generators


def unipotent_entries(gamma: Root) -> tuple[tuple[int, int, int], ...]:
    """``(row, col, N)`` for the nilpotent part of x_gamma: row lam, col lam - gamma."""
    return _unipotent_entries(build_e8().e7_root(gamma))


@lru_cache(maxsize=None)
def _unipotent_entries(gamma: Root) -> tuple[tuple[int, int, int], ...]:
    t = build_structure_table()
    rs = t.rs
    out = []
    for w in rs.weights:
        src = sub(w.root, gamma)
        v = rs.weight_of.get(src)
        if v is not None:
            out.append((w.index, v.index, t.N(gamma, src)))
    return tuple(out)


def root_unipotent(gamma: Root, xi: Any, ring: Ring = ZZ) -> ExactMatrix:
    a = ExactMatrix.identity(ring).copy_data()
    xi = ring(xi)
    for i, j, n in unipotent_entries(gamma):
        a[i, j] = ring(n * xi)
    return ExactMatrix(ring, a)


def torus_exponents() -> list[int]:
    """Exponent of eta on each basis vector under the w7 torus element."""
    return [w.root[6] - 2 for w in build_e8().weights]


def _require_unit(ring: Ring, x: Any, what: str) -> Any:
    x = ring(x)
    if not ring.is_unit(x):
        raise ValueError(f"{what} = {x} is not invertible in {ring!r}")
    return x


def _power(ring: Ring, x: Any, k: int) -> Any:
    if k >= 0:
        return ring(x**k) if not isinstance(ring, PrimeField) else pow(int(x), k, ring.p)
    return _power(ring, ring.inv(x), -k)


def torus_weight(eta: Any, ring: Ring = QQ) -> ExactMatrix:
    """Diagonal element h_{w7}(eta)."""
    eta = _require_unit(ring, eta, "eta")
    return ExactMatrix.diagonal(ring, [_power(ring, eta, k) for k in torus_exponents()])


def weyl_element(alpha: Root, eps: Any, ring: Ring = ZZ) -> ExactMatrix:
    """w_alpha(eps) = x_alpha(eps) x_{-alpha}(-1/eps) x_alpha(eps)."""
    eps = _require_unit(ring, eps, "eps")
    return evaluate_word([WeylElem(tuple(alpha), eps)], ring)


# ---------------------------------------------------------------------------
# words


@dataclass(frozen=True)
class RootUnipotent:
    gamma: Root
    xi: Any


@dataclass(frozen=True)
class TorusWeight:
    eta: Any


@dataclass(frozen=True)
class WeylElem:
    alpha: Root
    eps: Any


Token = Union[RootUnipotent, TorusWeight, WeylElem]
GroupWord = list  # list of tokens, read left to right as a product


def _left_unipotent(a: np.ndarray, gamma: Root, xi: Any, ring: Ring) -> None:
    # rows lam and lam - gamma never coincide and no row is both a source and
    # a target, so the in-place update is the product x_gamma(xi) @ a
    xi = ring(xi)
    if xi == 0:
        return
    p = ring.p if isinstance(ring, PrimeField) else None
    for i, j, n in unipotent_entries(gamma):
        if p is None:
            a[i] = a[i] + (n * xi) * a[j]
        else:
            a[i] = (a[i] + ((n * xi) % p) * a[j]) % p


def _apply_left(a: np.ndarray, tok: Token, ring: Ring) -> None:
    if isinstance(tok, RootUnipotent):
        _left_unipotent(a, tok.gamma, tok.xi, ring)
    elif isinstance(tok, TorusWeight):
        eta = _require_unit(ring, tok.eta, "eta")
        for i, k in enumerate(torus_exponents()):
            if k:
                s = _power(ring, eta, k)
                a[i] = ring.normalize_array(a[i] * s) if isinstance(ring, PrimeField) else a[i] * s
    elif isinstance(tok, WeylElem):
        eps = _require_unit(ring, tok.eps, "eps")
        build_e8().e7_root(tok.alpha)
        # leftmost factor is applied last
        _left_unipotent(a, tok.alpha, eps, ring)
        _left_unipotent(a, neg(tok.alpha), ring(-ring.inv(eps)), ring)
        _left_unipotent(a, tok.alpha, eps, ring)
    else:
        raise TypeError(f"unknown generator token {tok!r}")


def evaluate_word(word: Iterable[Token], ring: Ring = ZZ) -> ExactMatrix:
    """Ordered product of the generator matrices of ``word``."""
    toks = list(word)
    for t in toks:
        if isinstance(t, RootUnipotent):
            build_e8().e7_root(t.gamma)
    a = ExactMatrix.identity(ring).copy_data()
    for tok in reversed(toks):
        _apply_left(a, tok, ring)
    if ring is QQ:
        a = _normalize_q(a)
    return ExactMatrix(ring, a)


class Lcg:
    """64-bit linear congruential generator (Knuth's MMIX constants).

    ``state <- a * state + c mod 2**64``; outputs are the high 32 bits.
    """

    A = 6364136223846793005
    C = 1442695040888963407
    MASK = (1 << 64) - 1

    def __init__(self, seed: int) -> None:
        self.state = seed & self.MASK

    def next_u32(self) -> int:
        self.state = (self.A * self.state + self.C) & self.MASK
        return self.state >> 32

    def below(self, n: int) -> int:
        """Uniform-ish integer in ``range(n)`` via multiply-shift."""
        if n <= 0:
            raise ValueError("empty range")
        return (self.next_u32() * n) >> 32


_Q_PARAMS = (1, -1, 2, -2, 3, -3)
_Q_UNITS = (2, -2, 3, QQ("1/2"), -1)


def random_word(
    seed: int,
    length: int,
    ring: Ring = ZZ,
    torus: bool = False,
    weyl: bool = False,
) -> GroupWord:
    """Reproducible word of ``length`` generators.

    Root elements are always drawn; torus and Weyl elements only when
    requested.  Over a prime field parameters are uniform residues (units
    for torus and Weyl elements); over the integers and rationals they are
    drawn from small fixed lists.
    """
    if length < 0:
        raise ValueError("length must be non-negative")
    rs = build_e8()
    rng = Lcg(seed)
    kinds = ["x"] + (["h"] if torus else []) + (["w"] if weyl else [])
    p = ring.p if isinstance(ring, PrimeField) else None
    word: GroupWord = []
    for _ in range(length):
        kind = kinds[rng.below(len(kinds))]
        if kind == "x":
            gamma = rs.e7_roots[rng.below(len(rs.e7_roots))]
            xi = rng.below(p) if p else _Q_PARAMS[rng.below(len(_Q_PARAMS))]
            word.append(RootUnipotent(gamma, xi))
        elif kind == "h":
            if p:
                eta = 1 + rng.below(p - 1)
            elif ring is ZZ:
                eta = (1, -1)[rng.below(2)]
            else:
                eta = _Q_UNITS[rng.below(len(_Q_UNITS))]
            word.append(TorusWeight(eta))
        else:
            alpha = rs.e7_roots[rng.below(len(rs.e7_roots))]
            eps = 1 + rng.below(p - 1) if p else (1, -1)[rng.below(2)]
            word.append(WeylElem(alpha, eps))
    return word

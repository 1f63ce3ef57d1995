"""The 133 quadrics cutting out the highest-weight orbit, and their span.

Monomials ``x_i x_j`` (``i <= j``, zero-based weight indices) are ordered
lexicographically, which fixes column numbers 0..1595 for every linear
algebra step.  Degree-2 membership in the ideal is membership in the
linear span of the 133 generators.

Two families of generators:

* a *square equation* for every E7 root ``a``: the 12 weights ``lam`` with
  ``lam - a`` again a weight split into 6 orthogonal pairs with common sum
  ``delta + a``; one pair leads with coefficient 1 and the other five are
  weighted by products of structure constants;
* ``g_a = sum N(lam, bar lam) x_lam x_{bar lam}`` over the same 12 weights,
  of which only ``g_1 .. g_7`` (simple roots of E7) enter the basis.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Any, Iterable, Mapping, Sequence

import numpy as np

from .chevalley import build_structure_table
from .linalg import SparseEchelon
from .rings import QQ, ZZ, ArrayArith, GF, PrimeField, Ring, integral_scaling
from .root_system import Root, WeightIndex, add, build_e8, neg, pair, sub

__all__ = [
    "MONOMIALS",
    "NMONO",
    "mono_index",
    "QuadraticForm",
    "QuadricBasis",
    "Reduction",
    "InvarianceReport",
    "square_equation",
    "canonical_pair",
    "square_equation_for",
    "g_form",
    "build_basis",
    "pullback",
    "pullback_many",
    "verify_invariance",
    "DEFAULT_PRIMES",
]

DEFAULT_PRIMES = (2, 3, 5, 7, 11, 13)

MONOMIALS: tuple[tuple[int, int], ...] = tuple((i, j) for i in range(56) for j in range(i, 56))
NMONO = len(MONOMIALS)
_MONO_INDEX = {m: k for k, m in enumerate(MONOMIALS)}


def mono_index(i: int, j: int) -> int:
    return _MONO_INDEX[(i, j) if i <= j else (j, i)]


@dataclass(frozen=True)
class QuadraticForm:
    """Sparse quadratic form: ``coeffs[(i, j)]`` with ``i <= j``, no zeros."""

    coeffs: Mapping[tuple[int, int], Any] = field(default_factory=dict)
    name: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        clean: dict[tuple[int, int], Any] = {}
        for (i, j), c in self.coeffs.items():
            key = (i, j) if i <= j else (j, i)
            clean[key] = clean.get(key, 0) + c
        object.__setattr__(self, "coeffs", {k: v for k, v in sorted(clean.items()) if v != 0})

    def __len__(self) -> int:
        return len(self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: "QuadraticForm") -> "QuadraticForm":
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + v
        return QuadraticForm(out)

    def __neg__(self) -> "QuadraticForm":
        return QuadraticForm({k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other: "QuadraticForm") -> "QuadraticForm":
        return self + (-other)

    def scale(self, c: Any) -> "QuadraticForm":
        return QuadraticForm({k: c * v for k, v in self.coeffs.items()})

    def in_ring(self, ring: Ring) -> "QuadraticForm":
        return QuadraticForm({k: ring(v) for k, v in self.coeffs.items()}, self.name)

    def evaluate(self, x: Sequence, ring: Ring = QQ) -> Any:
        s = 0
        for (i, j), c in self.coeffs.items():
            s += c * x[i] * x[j]
        return ring(s)

    def polar_matrix(self) -> np.ndarray:
        """Integer Gram matrix of ``q(x + y) - q(x) - q(y)``."""
        m = np.zeros((56, 56), dtype=object)
        for (i, j), c in self.coeffs.items():
            m[i, j] += c
            m[j, i] += c
        return m

    def row(self) -> dict[int, Any]:
        return {_MONO_INDEX[k]: v for k, v in self.coeffs.items()}

    @classmethod
    def from_row(cls, row: Mapping[int, Any], name: str = "") -> "QuadraticForm":
        return cls({MONOMIALS[k]: v for k, v in row.items() if k < NMONO}, name)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "monomials": [{"i": i + 1, "j": j + 1, "c": _json_scalar(c)} for (i, j), c in self.coeffs.items()],
        }


def _json_scalar(c: Any) -> int | str:
    """Integers stay integers; other rationals become ``"a/b"`` strings."""
    q = Fraction(c) if not isinstance(c, Fraction) else c
    return int(q) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


# ---------------------------------------------------------------------------
# generators


def _idx(w: Any) -> WeightIndex:
    return build_e8().weight(w)


@lru_cache(maxsize=None)
def _square_equation(r: int, s: int) -> QuadraticForm:
    t = build_structure_table()
    rs = t.rs
    W = rs.weights
    rho, sig = W[r], W[s]
    alpha = rs.square_root_of_pair(rho, sig)
    sq = rs.maximal_square(alpha)
    coeffs: dict[tuple[int, int], int] = {(r, s): 1}
    for lam, lstar in sq.pairs:
        if {lam.index, lstar.index} == {r, s}:
            continue
        c = t.N(rho.root, neg(lam.root)) * t.N(sig.root, neg(lstar.root))
        coeffs[lam.index, lstar.index] = -c
    lo, hi = sorted((rho.ordinal, sig.ordinal))
    return QuadraticForm(coeffs, f"f[{lo},{hi}]")


def square_equation(rho: Any, sigma: Any) -> QuadraticForm:
    """Square equation with leading monomial ``x_rho x_sigma``.

    ``rho`` and ``sigma`` (weight labels, roots or WeightIndex) must be
    orthogonal, i.e. at distance 2.
    """
    rs = build_e8()
    a, b = _idx(rho), _idx(sigma)
    if rs.distance(a, b) != 2:
        raise ValueError(f"weights {a} and {b} are at distance {rs.distance(a, b)}, not 2")
    return _square_equation(a.index, b.index)


def canonical_pair(alpha: Root) -> tuple[WeightIndex, WeightIndex]:
    """The orthogonal pair of the square of ``alpha`` with the smallest first ordinal."""
    return build_e8().maximal_square(alpha).pairs[0]


def square_equation_for(alpha: Root) -> QuadraticForm:
    rho, sig = canonical_pair(alpha)
    return _square_equation(rho.index, sig.index)


@lru_cache(maxsize=None)
def _g_form(alpha: Root) -> QuadraticForm:
    t = build_structure_table()
    rs = t.rs
    sq = rs.maximal_square(alpha)
    coeffs = {}
    for lam in sq.members:
        b = rs.bar(lam)
        coeffs[lam.index, b.index] = t.N(lam.root, b.root)
    return QuadraticForm(coeffs, f"g{list(alpha)}")


def g_form(alpha: Root) -> QuadraticForm:
    """``g_alpha``; 12 monomials, one per bar pair meeting the square."""
    return _g_form(build_e8().e7_root(alpha))


# ---------------------------------------------------------------------------
# basis and reduction


@dataclass(frozen=True)
class Reduction:
    coordinates: tuple
    remainder: QuadraticForm

    @property
    def in_span(self) -> bool:
        return self.remainder.is_zero()


class QuadricBasis:
    """The 126 canonical square equations followed by ``g_1 .. g_7``."""

    def __init__(self) -> None:
        rs = build_e8()
        squares = sorted((square_equation_for(a) for a in rs.e7_roots), key=lambda q: next(iter(q.coeffs)))
        gs = []
        for k in range(7):
            q = g_form(rs.simple_roots[k])
            gs.append(QuadraticForm(q.coeffs, f"g[{k + 1}]"))
        self.forms: tuple[QuadraticForm, ...] = tuple(squares) + tuple(gs)
        self._echelons: dict[Ring, SparseEchelon] = {}
        self._remainders: dict[Ring, dict[int, dict]] = {}

    def __len__(self) -> int:
        return len(self.forms)

    def __iter__(self):
        return iter(self.forms)

    def names(self) -> list[str]:
        return [q.name for q in self.forms]

    def rank(self, ring: Ring) -> int:
        ech = SparseEchelon(ring)
        ech.extend(q.row() for q in self.forms)
        return ech.rank

    def echelon(self, ring: Ring) -> SparseEchelon:
        """Echelon form of the generators with tag columns for coordinates."""
        if ring is ZZ:
            ring = QQ
        ech = self._echelons.get(ring)
        if ech is None:
            ech = SparseEchelon(ring, fraction_free=False, pivot_limit=NMONO)
            for k, q in enumerate(self.forms):
                row = q.row()
                row[NMONO + k] = 1
                if not ech.add(row):
                    raise RuntimeError(f"generator {q.name} is dependent over {ring!r}")
            ech.reduced_rows()
            self._echelons[ring] = ech
        return ech

    def reduce(self, q: QuadraticForm, ring: Ring = QQ) -> Reduction:
        """``q = sum coord_k * generator_k + remainder``; remainder avoids pivot monomials."""
        ech = self.echelon(ring)
        r = ech.reduce(q.row())
        ring = ech.ring
        coords = tuple(ring(-r.get(NMONO + k, 0)) for k in range(len(self.forms)))
        rem = QuadraticForm.from_row({c: v for c, v in r.items() if c < NMONO})
        return Reduction(coords, rem)

    def contains(self, q: QuadraticForm, ring: Ring = QQ) -> bool:
        ech = self.echelon(ring)
        r = ech.reduce(q.row())
        return not any(c < NMONO for c in r)

    def monomial_remainders(self, ring: Ring) -> dict[int, dict[int, Any]]:
        """Remainder of every single monomial, keyed by monomial column."""
        if ring is ZZ:
            ring = QQ
        out = self._remainders.get(ring)
        if out is None:
            ech = self.echelon(ring)
            out = {}
            for k in range(NMONO):
                r = ech.reduce({k: 1})
                out[k] = {c: v for c, v in r.items() if c < NMONO}
            self._remainders[ring] = out
        return out


@lru_cache(maxsize=1)
def build_basis() -> QuadricBasis:
    return QuadricBasis()


# ---------------------------------------------------------------------------
# pullback


def pullback(q: QuadraticForm, m: Any, ring: Ring | None = None) -> QuadraticForm:
    """``q(M x)`` expanded exactly; ``m`` is an ExactMatrix or an array with ``ring``."""
    if ring is None:
        ring, data = m.ring, m.data
    else:
        data = np.asarray(m)
    return _pull_rows(q, _sparse_rows(data), ring)


def _pull_rows(q: QuadraticForm, rows: list, ring: Ring) -> QuadraticForm:
    p = ring.p if isinstance(ring, PrimeField) else None
    out: dict[tuple[int, int], Any] = {}
    for (a, b), c in q.coeffs.items():
        for i, u in rows[a]:
            cu = c * u
            for j, v in rows[b]:
                key = (i, j) if i <= j else (j, i)
                out[key] = out.get(key, 0) + cu * v
    if p is not None:
        out = {k: v % p for k, v in out.items()}
    return QuadraticForm({k: ring(v) for k, v in out.items()})


def _sparse_rows(data: np.ndarray) -> list[list[tuple[int, Any]]]:
    rows = []
    for i in range(data.shape[0]):
        nz = np.nonzero(data[i] != 0)[0]
        rows.append([(int(j), data[i, j]) for j in nz])
    return rows


_UPPER_I, _UPPER_J = np.triu_indices(56)


def pullback_many(forms: Sequence[QuadraticForm], data: np.ndarray, ar: ArrayArith) -> np.ndarray:
    """Coefficient vectors of ``q(M x)`` for every form, shape (len(forms), 1596).

    ``data`` must already be integral (or residues); ``ar`` supplies the
    arithmetic.  Columns follow :data:`MONOMIALS`.
    """
    out = []
    for q in forms:
        a = np.array([k[0] for k in q.coeffs])
        b = np.array([k[1] for k in q.coeffs])
        c = ar.cast(np.array([int(v) for v in q.coeffs.values()], dtype=object))
        left = ar.red(data[a] * c[:, None])
        p = ar.red(left.T @ data[b])
        sym = p + p.T
        # diagonal of p + p.T counts x_k^2 twice
        sym[np.diag_indices(56)] = np.diagonal(p)
        out.append(ar.red(sym[_UPPER_I, _UPPER_J]))
    return np.stack(out)


# ---------------------------------------------------------------------------
# invariance under root elements


@dataclass
class InvarianceReport:
    """Outcome of :func:`verify_invariance` for one root element.

    ``span_failures`` lists generators whose pullback leaves the span;
    ``identity_failures`` lists closed-form expressions that do not match
    the pullback coefficient by coefficient.
    """

    gamma: Root
    xi: Any
    ring: str
    generators_checked: int = 0
    identities_checked: dict = field(default_factory=dict)
    span_failures: list = field(default_factory=list)
    identity_failures: list = field(default_factory=list)

    @property
    def span_ok(self) -> bool:
        return not self.span_failures

    @property
    def identities_ok(self) -> bool:
        return not self.identity_failures

    @property
    def ok(self) -> bool:
        return self.span_ok and self.identities_ok

    def to_json(self) -> dict:
        return {
            "gamma": list(self.gamma),
            "xi": str(self.xi),
            "ring": self.ring,
            "generators_checked": self.generators_checked,
            "identities_checked": dict(sorted(self.identities_checked.items())),
            "span_failures": self.span_failures,
            "identity_failures": self.identity_failures,
        }


_CASE = {-2: "-1", -1: "-1/2", 0: "0", 1: "1/2", 2: "1"}


def _expected_square(rho: WeightIndex, sig: WeightIndex, gamma: Root, xi: Any) -> tuple[str, QuadraticForm]:
    """Closed form of ``f_{rho,sigma}(x_gamma(xi) x)`` for the five cases."""
    t = build_structure_table()
    rs = t.rs
    N = t.N
    alpha = rs.square_root_of_pair(rho, sig)
    k = pair(alpha, gamma)
    f0 = _square_equation(rho.index, sig.index)
    if k in (-2, -1, 0):
        return _CASE[k], f0
    if k == 1:
        if pair(rho.root, gamma) != 1:
            rho, sig = sig, rho
        r_g = rs.weight(sub(rho.root, gamma))
        corr = _square_equation(r_g.index, sig.index).scale(xi * N(gamma, r_g.root))
        return _CASE[k], f0 + corr
    r_g = rs.weight(sub(rho.root, gamma))
    s_g = rs.weight(sub(sig.root, gamma))
    c1 = xi * N(gamma, s_g.root) * N(rho.root, s_g.root)
    c2 = xi * xi * N(gamma, r_g.root) * N(gamma, s_g.root)
    return _CASE[k], f0 + g_form(alpha).scale(c1) + _square_equation(r_g.index, s_g.index).scale(c2)


def _expected_g(alpha: Root, gamma: Root, xi: Any) -> list[tuple[str, QuadraticForm]]:
    """Closed forms of ``g_alpha(x_gamma(xi) x)``, one per admissible choice of pair.

    For ``gamma = -alpha`` two expressions are produced: the claim that
    ``g_alpha`` is unchanged (key ``-1``), and the expression obtained from
    the ``gamma = alpha`` case through ``g_{-alpha} = -g_alpha`` (key
    ``-1:via-negation``).  Only the second one is an identity; the first
    misses the substitution in ``x_{bar lam}``.
    """
    t = build_structure_table()
    rs = t.rs
    N = t.N
    k = pair(alpha, gamma)
    g0 = g_form(alpha)
    if k == 0:
        return [(_CASE[k], g0)]
    if k in (2, -2):
        sign = 1 if k == 2 else -1
        base = alpha if k == 2 else neg(alpha)
        out = [(_CASE[k], g0)] if k == -2 else []
        for lam0 in rs.maximal_square(base).members:
            rho = rs.weight(sub(lam0.root, gamma))
            sig = rs.bar(lam0)
            c = sign * 2 * xi * N(add(rho.root, gamma), sig.root) * N(gamma, rho.root)
            key = _CASE[k] if k == 2 else "-1:via-negation"
            out.append((key, g0 + _square_equation(rho.index, sig.index).scale(c)))
        return out
    # (alpha, gamma) = +-1/2: for -1/2 pass to g_{-alpha} = -g_alpha
    sign = 1 if k == 1 else -1
    base = alpha if k == 1 else neg(alpha)
    out = []
    for lam in rs.maximal_square(base).members:
        if pair(lam.root, gamma) != 1:
            continue
        rho = rs.weight(sub(lam.root, gamma))
        sig = rs.bar(lam)
        c = sign * xi * N(add(rho.root, gamma), sig.root) * N(gamma, rho.root)
        out.append((_CASE[k], g0 + _square_equation(rho.index, sig.index).scale(c)))
    return out


def verify_invariance(gamma: Root, xi: Any, ring: Ring = ZZ, basis: QuadricBasis | None = None) -> InvarianceReport:
    """Pull every generator back along ``x_gamma(xi)`` and check it stays in the span.

    Also compares the pullback of every canonical square equation and of
    every ``g_alpha`` with its closed-form expression, coefficient by
    coefficient.
    """
    from .rep56 import root_unipotent

    rs = build_e8()
    gamma = rs.e7_root(gamma)
    basis = basis or build_basis()
    rows = _sparse_rows(root_unipotent(gamma, xi, ring).data)
    xi = ring(xi)
    rep = InvarianceReport(gamma, xi, ring.tag if not isinstance(ring, PrimeField) else f"fp{ring.p}")
    red_ring = QQ if ring is ZZ else ring
    for q in basis.forms:
        rep.generators_checked += 1
        if not basis.contains(_pull_rows(q, rows, ring), red_ring):
            rep.span_failures.append({"form": q.name, "gamma": list(gamma), "xi": str(xi)})

    def record(key: str, name: str, got: QuadraticForm, expected: QuadraticForm) -> None:
        rep.identities_checked[key] = rep.identities_checked.get(key, 0) + 1
        if _differs(got, expected, ring):
            rep.identity_failures.append({"form": name, "case": key, "gamma": list(gamma), "xi": str(xi)})

    for alpha in rs.e7_roots:
        rho, sig = canonical_pair(alpha)
        f0 = _square_equation(rho.index, sig.index)
        case, expected = _expected_square(rho, sig, gamma, xi)
        record(f"square:{case}", f0.name, _pull_rows(f0, rows, ring), expected)
        gp = _pull_rows(g_form(alpha), rows, ring)
        for case, expected in _expected_g(alpha, gamma, xi):
            record(f"g:{case}", f"g{list(alpha)}", gp, expected)
    return rep


def _differs(a: QuadraticForm, b: QuadraticForm, ring: Ring) -> bool:
    return a.in_ring(ring) != b.in_ring(ring)

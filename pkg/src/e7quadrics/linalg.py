"""Exact linear algebra over the integers, the rationals and prime fields.

The workhorse is :class:`SparseEchelon`, an incremental row-echelon basis
for sparse rows given as ``{column: value}`` dictionaries.  Rows are
reduced against the pivots found so far and, if anything survives, the
smallest surviving column becomes a new pivot.  Over the rationals the
basis is kept fraction-free (primitive integer rows) unless exact
coordinates are requested, in which case pivots are normalized to 1.

Dense helpers (determinant, inverse, rank) operate on numpy arrays whose
entries belong to a :class:`~e7quadrics.rings.Ring`.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Mapping, Sequence

import numpy as np

from .rings import QQ, ZZ, PrimeField, Ring

__all__ = [
    "SparseEchelon",
    "integer_row",
    "det",
    "inverse",
    "rank",
    "echelon_mod_p",
    "kernel_from_rref",
    "rank_certified_q",
    "rank_dense",
]

Row = dict


def integer_row(row: Mapping[int, object]) -> dict[int, int]:
    """Scale a row with rational entries to a primitive integer row."""
    den = 1
    for v in row.values():
        if isinstance(v, Fraction):
            den = lcm(den, v.denominator)
    out = {c: int(v * den) for c, v in row.items() if v != 0}
    g = 0
    for v in out.values():
        g = gcd(g, v)
    if g > 1:
        out = {c: v // g for c, v in out.items()}
    return out


class SparseEchelon:
    """Incremental echelon basis of sparse rows over a field.

    Parameters
    ----------
    ring:
        ``QQ`` or a prime field.
    fraction_free:
        Over ``QQ`` keep primitive integer rows (fast, enough for ranks and
        span tests).  Set to False to get pivot-normalized Fraction rows,
        needed for coordinates and kernels.
    pivot_limit:
        Columns ``>= pivot_limit`` are never chosen as pivots; they can be
        used to carry bookkeeping tags alongside a row.
    """

    def __init__(self, ring: Ring, fraction_free: bool = True, pivot_limit: int | None = None) -> None:
        if ring is ZZ:
            ring = QQ
        if not ring.is_field:
            raise ValueError("echelon basis needs a field")
        self.ring = ring
        self.pivot_limit = pivot_limit
        self._p = ring.p if isinstance(ring, PrimeField) else None
        self._ff = self._p is None and fraction_free
        self.pivots: dict[int, dict] = {}
        self._reduced = False

    def __len__(self) -> int:
        return len(self.pivots)

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def _coerce(self, row: Mapping[int, object]) -> dict:
        if self._p is not None:
            p = self._p
            out = {}
            for c, v in row.items():
                if isinstance(v, Fraction):
                    v = v.numerator * pow(v.denominator, -1, p)
                v = int(v) % p
                if v:
                    out[c] = v
            return out
        if self._ff:
            return integer_row(row)
        return {c: QQ(v) for c, v in row.items() if v != 0}

    def _hits(self, row: dict) -> int | None:
        best = None
        piv = self.pivots
        for c in row:
            if c in piv and (best is None or c < best):
                best = c
        return best

    def reduce(self, row: Mapping[int, object]) -> dict:
        """Reduce ``row`` against every pivot; returns the remainder."""
        row = self._coerce(row)
        piv = self.pivots
        p = self._p
        while True:
            c = self._hits(row)
            if c is None:
                return row
            prow = piv[c]
            if p is not None:
                f = row[c]
                for k, v in prow.items():
                    nv = (row.get(k, 0) - f * v) % p
                    if nv:
                        row[k] = nv
                    else:
                        row.pop(k, None)
            elif self._ff:
                a, b = prow[c], row[c]
                g = gcd(a, b)
                a, b = a // g, b // g
                if a != 1:
                    row = {k: a * v for k, v in row.items()}
                for k, v in prow.items():
                    nv = row.get(k, 0) - b * v
                    if nv:
                        row[k] = nv
                    else:
                        row.pop(k, None)
                g = 0
                for v in row.values():
                    g = gcd(g, v)
                    if g == 1:
                        break
                if g > 1:
                    row = {k: v // g for k, v in row.items()}
            else:
                f = row[c]
                for k, v in prow.items():
                    nv = QQ(row.get(k, 0) - f * v)
                    if nv != 0:
                        row[k] = nv
                    else:
                        row.pop(k, None)

    def add(self, row: Mapping[int, object]) -> bool:
        """Insert ``row``; returns True if it enlarged the span."""
        r = self.reduce(row)
        if not r:
            return False
        cands = [c for c in r if self.pivot_limit is None or c < self.pivot_limit]
        if not cands:
            raise ValueError("row has no admissible pivot column")
        c = min(cands)
        v = r[c]
        if self._p is not None:
            inv = pow(v, -1, self._p)
            r = {k: (x * inv) % self._p for k, x in r.items()}
        elif self._ff:
            if v < 0:
                r = {k: -x for k, x in r.items()}
        else:
            r = {k: QQ(Fraction(x) / v) for k, x in r.items()}
        self.pivots[c] = r
        self._reduced = False
        return True

    def extend(self, rows: Iterable[Mapping[int, object]]) -> int:
        n = 0
        for row in rows:
            n += self.add(row)
        return n

    def contains(self, row: Mapping[int, object]) -> bool:
        return not self.reduce(row)

    def reduced_rows(self) -> dict[int, dict]:
        """Fully reduced pivot rows, pivot entries equal to 1.

        Over QQ the rows are returned with Fraction entries.
        """
        if self._ff:
            rows = {c: {k: QQ(Fraction(v, r[c])) for k, v in r.items()} for c, r in self.pivots.items()}
            field = SparseEchelon(QQ, fraction_free=False)
            field.pivots = rows
        else:
            field = self
            rows = self.pivots
        if field._reduced:
            return rows
        for c in sorted(rows, reverse=True):
            r = rows[c]
            others = [k for k in r if k != c and k in rows]
            if others:
                tail = {k: v for k, v in r.items() if k != c}
                red = field.reduce(tail)
                red[c] = field.ring.one
                rows[c] = red
        field._reduced = True
        return rows

    def kernel_basis(self, ncols: int) -> list[dict]:
        """Basis of the solution space of ``row . x = 0`` in ``ncols`` unknowns."""
        rows = self.reduced_rows()
        ring = self.ring
        free = [k for k in range(ncols) if k not in rows]
        by_free: dict[int, list] = {k: [] for k in free}
        for c, r in rows.items():
            for k, v in r.items():
                if k != c:
                    by_free[k].append((c, v))
        basis = []
        for k in free:
            vec = {k: ring.one}
            for c, v in by_free[k]:
                vec[c] = ring(-v)
            basis.append(vec)
        return basis


def _as_field_rows(a: np.ndarray, ring: Ring) -> list[list]:
    return [[ring(x) for x in row] for row in a.tolist()]


def det(a: np.ndarray, ring: Ring) -> object:
    """Exact determinant of a square matrix over ``ring``.

    Integer matrices use Bareiss fraction-free elimination; fields use
    ordinary Gaussian elimination.
    """
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return ring.one
    if ring is ZZ:
        m = [[int(x) for x in row] for row in a.tolist()]
        sign = 1
        prev = 1
        for k in range(n - 1):
            if m[k][k] == 0:
                for i in range(k + 1, n):
                    if m[i][k] != 0:
                        m[k], m[i] = m[i], m[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            prev = m[k][k]
        return sign * m[n - 1][n - 1]
    m = _as_field_rows(a, ring)
    d = ring.one
    for k in range(n):
        piv = next((i for i in range(k, n) if m[i][k] != 0), None)
        if piv is None:
            return ring.zero
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
            d = ring(-d)
        d = ring(d * m[k][k])
        inv = ring.inv(m[k][k])
        for i in range(k + 1, n):
            f = m[i][k]
            if f != 0:
                f = ring(f * inv)
                mi, mk = m[i], m[k]
                for j in range(k, n):
                    mi[j] = ring(mi[j] - f * mk[j])
    return d


def inverse(a: np.ndarray, ring: Ring) -> np.ndarray:
    """Exact inverse over a field; raises ``ZeroDivisionError`` if singular."""
    n = a.shape[0]
    m = _as_field_rows(a, ring)
    for i in range(n):
        m[i] = m[i] + [ring.one if j == i else ring.zero for j in range(n)]
    for k in range(n):
        piv = next((i for i in range(k, n) if m[i][k] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        m[k], m[piv] = m[piv], m[k]
        inv = ring.inv(m[k][k])
        m[k] = [ring(x * inv) for x in m[k]]
        for i in range(n):
            if i != k and m[i][k] != 0:
                f = m[i][k]
                mi, mk = m[i], m[k]
                m[i] = [ring(x - f * y) for x, y in zip(mi, mk)]
    return ring.array([row[n:] for row in m])


def rank(rows: Iterable[Mapping[int, object]], ring: Ring) -> int:
    ech = SparseEchelon(ring)
    ech.extend(rows)
    return ech.rank


# ---------------------------------------------------------------------------
# dense blocks: many rows, few columns


def echelon_mod_p(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int], list[int]]:
    """Reduced row echelon form of an integer matrix modulo ``p``.

    Returns ``(R, pivot_cols, pivot_rows)`` where ``R`` holds the nonzero
    rows of the RREF and ``pivot_rows`` are indices into ``a`` of rows
    that together span the row space.
    """
    m = np.asarray(a, dtype=np.int64) % p
    nrows, ncols = m.shape
    order = np.arange(nrows)
    pcols: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            m[[r, k]] = m[[k, r]]
            order[[r, k]] = order[[k, r]]
        m[r] = (m[r] * pow(int(m[r, c]), -1, p)) % p
        col = m[:, c].copy()
        col[r] = 0
        hit = np.nonzero(col)[0]
        if hit.size:
            m[hit] = (m[hit] - col[hit, None] * m[r]) % p
        pcols.append(c)
        r += 1
    return m[:r], pcols, [int(i) for i in order[:r]]


def kernel_from_rref(rref: np.ndarray, pivots: Sequence[int], ncols: int, ring: Ring) -> list[list]:
    """Kernel basis (as dense lists) from a reduced echelon form over a field."""
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [ring.zero] * ncols
        v[f] = ring.one
        for i, c in enumerate(pivots):
            v[c] = ring(-rref[i][f])
        basis.append(v)
    return basis


def _rref_q(rows: list[list[int]], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    m = [[Fraction(x) for x in row] for row in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        k = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if k is None:
            continue
        m[r], m[k] = m[k], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m[:r], pivots


_CERT_PRIME = 2147483629  # largest prime below 2**31


def rank_certified_q(a: np.ndarray) -> tuple[int, list[list[int]]]:
    """Exact rank over QQ of an integer matrix, with an integral kernel basis.

    Rows independent modulo a large prime are independent over QQ.  The
    exact kernel of those rows is then checked against every row; a row
    that fails is added and the process repeats, so the answer never
    depends on luck with the prime.
    """
    a = np.asarray(a, dtype=object)
    nrows, ncols = a.shape
    if nrows == 0:
        return 0, [[1 if i == j else 0 for i in range(ncols)] for j in range(ncols)]
    small = np.asarray(a, dtype=np.int64) if _fits_int64(a) else None
    _, _, chosen = echelon_mod_p(small if small is not None else np.mod(a, _CERT_PRIME).astype(np.int64), _CERT_PRIME)
    chosen = list(chosen)
    while True:
        rref, piv = _rref_q([list(a[i]) for i in chosen], ncols)
        kern = kernel_from_rref(rref, piv, ncols, QQ)
        kint = [list(integer_row(dict(enumerate(v))).get(i, 0) for i in range(ncols)) for v in kern]
        if not kint:
            return len(piv), []
        k = np.array(kint, dtype=object).T
        prod = a.dot(k)
        bad = np.nonzero(np.any(prod != 0, axis=1))[0]
        if bad.size == 0:
            return len(piv), kint
        chosen.append(int(bad[0]))


def _fits_int64(a: np.ndarray) -> bool:
    if a.size == 0:
        return True
    return max(abs(int(x)) for x in a.ravel()) < (1 << 62)


def rank_dense(a: np.ndarray, ring: Ring) -> tuple[int, list[list]]:
    """Rank and kernel basis of a dense integer matrix over ``QQ`` or ``GF(p)``."""
    if isinstance(ring, PrimeField):
        ncols = a.shape[1]
        if a.shape[0] == 0:
            return 0, kernel_from_rref(np.zeros((0, ncols), dtype=np.int64), [], ncols, ring)
        rref, piv, _ = echelon_mod_p(a, ring.p)
        return len(piv), kernel_from_rref(rref.tolist(), piv, ncols, ring)
    return rank_certified_q(a)

"""Small independent reference implementations used as test oracles."""

from __future__ import annotations

from fractions import Fraction

import numpy as np


def naive_rank(rows, p: int | None = None) -> int:
    """Plain Gaussian elimination over QQ (p=None) or GF(p), no shortcuts."""
    m = [[Fraction(x) if p is None else int(x) % p for x in row] for row in rows]
    if not m:
        return 0
    r = 0
    for c in range(len(m[0])):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                if p is None:
                    f = m[i][c] / m[r][c]
                    m[i] = [a - f * b for a, b in zip(m[i], m[r])]
                else:
                    f = m[i][c] * pow(m[r][c], -1, p) % p
                    m[i] = [(a - f * b) % p for a, b in zip(m[i], m[r])]
        r += 1
    return r


def naive_det(rows) -> Fraction:
    m = [[Fraction(x) for x in row] for row in rows]
    n = len(m)
    d = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            d = -d
        d *= m[c][c]
        for i in range(c + 1, n):
            f = m[i][c] / m[c][c]
            m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return d


def dense_f_pullback_mod(F: np.ndarray, m: np.ndarray, p: int) -> np.ndarray:
    """Contract the dense 56^4 coefficient tensor with ``m`` in every slot, modulo p."""
    t = F.astype(np.int64) % p
    m = np.asarray(m, dtype=np.int64) % p
    for axis in range(4):
        t = np.moveaxis(np.tensordot(t, m, axes=([axis], [0])) % p, -1, axis)
    return t

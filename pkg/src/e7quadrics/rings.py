"""Exact scalar rings: the integers, the rationals and prime fields.

Elements are plain Python objects (``int`` for the integers and for
prime fields, :class:`fractions.Fraction` for the rationals); a ring
object knows how to normalize them, invert them and lay them out in
numpy arrays.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Any

import numpy as np

__all__ = [
    "Ring",
    "IntegerRing",
    "RationalField",
    "PrimeField",
    "ZZ",
    "QQ",
    "GF",
    "ring_from_tag",
    "is_prime",
    "ArrayArith",
    "integral_scaling",
]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


class Ring:
    tag: str = ""
    is_field: bool = False
    characteristic: int = 0
    dtype: Any = object

    def __call__(self, x: Any) -> Any:
        raise NotImplementedError

    @property
    def zero(self) -> Any:
        return self(0)

    @property
    def one(self) -> Any:
        return self(1)

    def is_unit(self, x: Any) -> bool:
        raise NotImplementedError

    def inv(self, x: Any) -> Any:
        raise NotImplementedError

    def div(self, x: Any, y: Any) -> Any:
        return self(x * self.inv(y))

    def normalize_array(self, a: np.ndarray) -> np.ndarray:
        return a

    def array(self, values: Any) -> np.ndarray:
        a = np.empty(np.shape(values), dtype=self.dtype)
        flat = np.asarray(values, dtype=object).ravel()
        a.ravel()[:] = [self(v) for v in flat]
        return a

    def zeros(self, shape: Any) -> np.ndarray:
        if self.dtype is object:
            a = np.empty(shape, dtype=object)
            a.fill(self.zero)
            return a
        return np.zeros(shape, dtype=self.dtype)

    def encode(self, x: Any) -> Any:
        """JSON representation of an element."""
        return int(x)

    def decode(self, v: Any) -> Any:
        if isinstance(v, bool) or not isinstance(v, int):
            raise ValueError(f"bad {self.tag} entry {v!r}")
        return self(int(v))

    def describe(self) -> dict:
        return {"ring": self.tag}

    def __eq__(self, other: object) -> bool:
        return type(self) is type(other) and self.describe() == other.describe()  # type: ignore[attr-defined]

    def __hash__(self) -> int:
        return hash(tuple(sorted(self.describe().items())))


class IntegerRing(Ring):
    tag = "int"

    def __call__(self, x: Any) -> int:
        if isinstance(x, Fraction):
            if x.denominator != 1:
                raise ValueError(f"{x} is not an integer")
            return x.numerator
        return int(x)

    def is_unit(self, x: Any) -> bool:
        return x in (1, -1)

    def inv(self, x: Any) -> int:
        if x not in (1, -1):
            raise ZeroDivisionError(f"{x} is not a unit in ZZ")
        return int(x)

    def __repr__(self) -> str:
        return "ZZ"


class RationalField(Ring):
    tag = "rat"
    is_field = True

    def __call__(self, x: Any) -> Any:
        if isinstance(x, Fraction):
            return x.numerator if x.denominator == 1 else x
        if isinstance(x, (int, np.integer)):
            return int(x)
        f = Fraction(x)
        return f.numerator if f.denominator == 1 else f

    def is_unit(self, x: Any) -> bool:
        return x != 0

    def inv(self, x: Any) -> Any:
        if x == 0:
            raise ZeroDivisionError("division by zero in QQ")
        return self(Fraction(1) / x)

    def encode(self, x: Any) -> str:
        f = Fraction(x)
        return f"{f.numerator}/{f.denominator}"

    def decode(self, v: Any) -> Any:
        if isinstance(v, bool) or not isinstance(v, (int, str)):
            raise ValueError(f"bad rational entry {v!r}")
        try:
            return self(Fraction(v))
        except ZeroDivisionError:
            raise ValueError(f"zero denominator in {v!r}") from None

    def __repr__(self) -> str:
        return "QQ"


class PrimeField(Ring):
    tag = "fp"
    is_field = True
    dtype = np.int64

    def __init__(self, p: int) -> None:
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        # products of two residues summed 56 times must fit in int64
        if p >= 1 << 28:
            raise ValueError(f"prime {p} too large for machine arithmetic")
        self.p = p
        self.characteristic = p

    def __call__(self, x: Any) -> int:
        if isinstance(x, Fraction):
            return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
        return int(x) % self.p

    def is_unit(self, x: Any) -> bool:
        return int(x) % self.p != 0

    def inv(self, x: Any) -> int:
        x = int(x) % self.p
        if x == 0:
            raise ZeroDivisionError(f"division by zero in GF({self.p})")
        return pow(x, -1, self.p)

    def normalize_array(self, a: np.ndarray) -> np.ndarray:
        return np.mod(a, self.p)

    def array(self, values: Any) -> np.ndarray:
        flat = [self(v) for v in np.asarray(values, dtype=object).ravel()]
        return np.array(flat, dtype=np.int64).reshape(np.shape(values))

    def decode(self, v: Any) -> int:
        if isinstance(v, bool) or not isinstance(v, int):
            raise ValueError(f"bad GF({self.p}) entry {v!r}")
        x = int(v)
        if not 0 <= x < self.p:
            raise ValueError(f"GF({self.p}) entry {x} outside 0..{self.p - 1}")
        return x

    def describe(self) -> dict:
        return {"ring": "fp", "p": self.p}

    def __repr__(self) -> str:
        return f"GF({self.p})"


ZZ = IntegerRing()
QQ = RationalField()

_FIELDS: dict[int, PrimeField] = {}


def GF(p: int) -> PrimeField:
    if p not in _FIELDS:
        _FIELDS[p] = PrimeField(p)
    return _FIELDS[p]


def ring_from_tag(tag: str, p: int | None = None) -> Ring:
    if tag == "int":
        return ZZ
    if tag == "rat":
        return QQ
    if tag == "fp":
        if p is None:
            raise ValueError("prime field needs a modulus")
        return GF(p)
    raise ValueError(f"unknown ring tag {tag!r}")


def integral_scaling(data: np.ndarray, ring: Ring) -> tuple[np.ndarray, int]:
    """``(D * M, D)`` with ``D * M`` integral (residues for a prime field)."""
    if isinstance(ring, PrimeField):
        return np.asarray(data, dtype=np.int64) % ring.p, 1
    den = 1
    for x in data.ravel():
        if isinstance(x, Fraction):
            den = lcm(den, x.denominator)
    out = np.empty(data.shape, dtype=object)
    out.ravel()[:] = [int(x * den) for x in data.ravel()]
    return out, den


class ArrayArith:
    """Integer or modular arithmetic on numpy arrays."""

    def __init__(self, ring: Ring) -> None:
        self.p = ring.p if isinstance(ring, PrimeField) else None

    def red(self, a: np.ndarray) -> np.ndarray:
        return a % self.p if self.p is not None else a

    def cast(self, a: np.ndarray) -> np.ndarray:
        return a.astype(np.int64) % self.p if self.p is not None else a.astype(object)

    def is_zero(self, a: np.ndarray) -> bool:
        return not np.any(self.red(a) != 0)

"""Points of R/Z in 128-bit fixed point, and the additive character e(t)."""
from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from math import isqrt
from typing import Union

import numpy as np

from weylslice.errors import InvalidArgument

FRAC_BITS = 128
ONE = 1 << FRAC_BITS
MASK = ONE - 1
_HALF_PI = math.pi / 2
_TWO_PI = 2 * math.pi


@dataclass(frozen=True, order=True)
class TorusPoint:
    """A value in [0, 1) stored as ``raw / 2**128``.

    Addition, negation and integer multiples are exact mod 1.
    """

    raw: int

    def __post_init__(self):
        if not 0 <= self.raw < ONE:
            object.__setattr__(self, "raw", self.raw & MASK)

    @classmethod
    def from_fraction(cls, num: int, den: int = 1) -> "TorusPoint":
        """Nearest fixed-point value to num/den mod 1 (ties round up)."""
        if den <= 0:
            raise InvalidArgument("denominator must be positive")
        num %= den
        return cls(((num << FRAC_BITS) * 2 + den) // (2 * den))

    @classmethod
    def from_rational(cls, x: Fraction) -> "TorusPoint":
        x = Fraction(x)
        return cls.from_fraction(x.numerator, x.denominator)

    @classmethod
    def from_float(cls, x: float) -> "TorusPoint":
        return cls.from_rational(Fraction(x))

    @classmethod
    def parse(cls, text: str) -> "TorusPoint":
        """Decimal string (``"0.4142"``, ``"-1/3"`` also accepted) or a named constant."""
        text = text.strip()
        named = NAMED_CONSTANTS.get(text.lower())
        if named is not None:
            return named()
        try:
            if "/" in text:
                return cls.from_rational(Fraction(text))
            return cls.from_rational(Fraction(Decimal(text)))
        except (InvalidOperation, ValueError, ZeroDivisionError) as exc:
            raise InvalidArgument(f"cannot parse torus point {text!r}") from exc

    def __add__(self, other: "TorusPoint") -> "TorusPoint":
        return TorusPoint((self.raw + other.raw) & MASK)

    def __sub__(self, other: "TorusPoint") -> "TorusPoint":
        return TorusPoint((self.raw - other.raw) & MASK)

    def __neg__(self) -> "TorusPoint":
        return TorusPoint(-self.raw & MASK)

    def __mul__(self, n: int) -> "TorusPoint":
        if not isinstance(n, int):
            return NotImplemented
        return TorusPoint((self.raw * n) & MASK)

    __rmul__ = __mul__

    def as_fraction(self) -> Fraction:
        return Fraction(self.raw, ONE)

    def __float__(self) -> float:
        return self.raw / ONE

    def __repr__(self) -> str:
        return f"TorusPoint({float(self)!r})"


def sqrt2_minus_1() -> TorusPoint:
    return TorusPoint(isqrt(2 << (2 * FRAC_BITS)) - ONE)


def golden_fraction() -> TorusPoint:
    """(sqrt(5) - 1) / 2."""
    return TorusPoint((isqrt(5 << (2 * FRAC_BITS)) - ONE) >> 1)


NAMED_CONSTANTS = {"sqrt2m1": sqrt2_minus_1, "golden": golden_fraction}


def _quadrant_rotate(q: int, c: float, s: float) -> complex:
    if q == 0:
        return complex(c, s)
    if q == 1:
        return complex(-s, c)
    if q == 2:
        return complex(-c, -s)
    return complex(s, -c)


def e_frac(t: TorusPoint) -> complex:
    """exp(2 pi i t).

    The quadrant is taken from the top two bits so the four quarter points
    come out exact.
    """
    quad = t.raw >> (FRAC_BITS - 2)
    rem = (t.raw & ((1 << (FRAC_BITS - 2)) - 1)) / (1 << (FRAC_BITS - 2))
    theta = _HALF_PI * rem
    return _quadrant_rotate(quad, math.cos(theta), math.sin(theta))


def e(x: float) -> complex:
    """exp(2 pi i x) for a real x, reduced mod 1 first."""
    return e_frac(TorusPoint.from_rational(Fraction(x)))


def unit_from_u64(u: np.ndarray) -> np.ndarray:
    """e(u / 2**64) for an array of uint64 phases."""
    u = np.asarray(u, dtype=np.uint64)
    quad = (u >> np.uint64(62)).astype(np.int8)
    rem = (u & np.uint64((1 << 62) - 1)).astype(np.float64) * 2.0**-62
    theta = _HALF_PI * rem
    c = np.cos(theta)
    s = np.sin(theta)
    re = np.select([quad == 0, quad == 1, quad == 2], [c, -s, -c], s)
    im = np.select([quad == 0, quad == 1, quad == 2], [s, c, -s], -c)
    return re + 1j * im


def unit_from_real(x: np.ndarray) -> np.ndarray:
    """e(x) for a float array; the reduction mod 1 is done in floating point."""
    x = np.asarray(x, dtype=np.float64)
    t = x - np.rint(x)
    return np.cos(_TWO_PI * t) + 1j * np.sin(_TWO_PI * t)


def dist_to_int(x: Union[float, Fraction, int]) -> Union[float, Fraction]:
    """||x||, the distance from x to the nearest integer."""
    if not math.isfinite(x):
        raise InvalidArgument("dist_to_int needs a finite argument")
    return abs(x - round(x))

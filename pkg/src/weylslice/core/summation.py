from __future__ import annotations

import math
from typing import Iterable

import numpy as np


def _two_sum(a: float, b: float):
    s = a + b
    bp = s - a
    err = (a - (s - bp)) + (b - bp)
    return s, err


class ComplexAccumulator:
    """Running complex sum with a compensation term per component.

    Scalars go through a TwoSum update; whole arrays are first reduced with
    ``math.fsum`` (correctly rounded) and the result folded in the same way.
    Instances are single-owner: parallel code keeps one per worker and calls
    :meth:`merge` in a fixed order.
    """

    __slots__ = ("re", "im", "re_comp", "im_comp")

    def __init__(self, value: complex = 0j):
        self.re = float(value.real)
        self.im = float(value.imag)
        self.re_comp = 0.0
        self.im_comp = 0.0

    def add(self, z: complex) -> None:
        self.re, e = _two_sum(self.re, float(z.real))
        self.re_comp += e
        self.im, e = _two_sum(self.im, float(z.imag))
        self.im_comp += e

    def add_many(self, zs: Iterable[complex]) -> None:
        arr = np.asarray(zs, dtype=np.complex128)
        if arr.size == 0:
            return
        self.add(complex(math.fsum(arr.real.tolist()), math.fsum(arr.imag.tolist())))

    def merge(self, other: "ComplexAccumulator") -> None:
        self.add(complex(other.re, other.im))
        self.add(complex(other.re_comp, other.im_comp))

    @property
    def value(self) -> complex:
        return complex(self.re + self.re_comp, self.im + self.im_comp)

    def __repr__(self) -> str:
        return f"ComplexAccumulator({self.value!r})"


def compensated_sum(zs: Iterable[complex]) -> complex:
    acc = ComplexAccumulator()
    acc.add_many(zs)
    return acc.value

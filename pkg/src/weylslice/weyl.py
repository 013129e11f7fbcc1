"""Incomplete Weyl sums f(alpha1, alpha2), g(alpha, gamma) and their rational approximation.

Two evaluation paths exist. The generic one multiplies exact integer
polynomial values by 128-bit fixed-point phases. The decomposed one applies
when gamma = c/p exactly: the polynomial part is a residue mod p and only a
small linear phase e(beta x) is real-valued.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from weylslice._parallel import ordered_map
from weylslice.complete_sums import complete_sum, roots_of_unity
from weylslice.core import (
    ComplexAccumulator,
    IntPolynomial,
    TorusPoint,
    is_prime,
    unit_from_real,
    unit_from_u64,
)
from weylslice.core.torus import FRAC_BITS, MASK
from weylslice.errors import InvalidArgument

BLOCK = 1 << 16


@dataclass(frozen=True)
class WeylParams:
    phi: IntPolynomial
    P: int
    alpha1: TorusPoint
    alpha2: TorusPoint

    def __post_init__(self):
        if self.P < 1:
            raise InvalidArgument(f"P must be >= 1, got {self.P}")


@dataclass(frozen=True)
class LemmaOneReport:
    p: int
    a: int
    c: int
    beta: float
    P: int
    g_value: complex
    main_term: complex
    error: float
    normalized_error: float


def _blocks(P: int):
    return [(lo, min(lo + BLOCK - 1, P)) for lo in range(1, P + 1, BLOCK)]


def _reduce(partials) -> complex:
    acc = ComplexAccumulator()
    for part in partials:
        acc.merge(part)
    return acc.value


def _fixed_point_sum(phi: IntPolynomial, P: int, lin: int, quad: int, threads) -> complex:
    """sum_{x<=P} e((lin * x + quad * phi(x)) / 2**128)."""
    shift = FRAC_BITS - 64

    def block(bounds):
        lo, hi = bounds
        xs = np.arange(lo, hi + 1, dtype=object)
        raw = (lin * xs + quad * phi.eval_object_array(xs)) & MASK
        acc = ComplexAccumulator()
        acc.add_many(unit_from_u64((raw >> shift).astype(np.uint64)))
        return acc

    return _reduce(ordered_map(block, _blocks(int(P)), threads))


def weyl_f(params: WeylParams, threads: Optional[int] = None) -> complex:
    """sum_{x=1}^{P} e(alpha1 (phi(x) + x) + alpha2 phi(x))."""
    a1, a2 = params.alpha1.raw, params.alpha2.raw
    # alpha1 (phi + x) + alpha2 phi == alpha1 x + (alpha1 + alpha2) phi, exactly mod 2**128
    return _fixed_point_sum(params.phi, params.P, a1, (a1 + a2) & MASK, threads)


def weyl_g(
    phi: IntPolynomial, P: int, alpha: TorusPoint, gamma: TorusPoint, threads: Optional[int] = None
) -> complex:
    """sum_{x=1}^{P} e(alpha x + gamma phi(x))."""
    if P < 1:
        raise InvalidArgument(f"P must be >= 1, got {P}")
    return _fixed_point_sum(phi, P, alpha.raw, gamma.raw, threads)


def _period_table(phi: IntPolynomial, p: int, a: int, c: int) -> np.ndarray:
    """e((a b + c phi(b)) / p) for b = 0..p-1."""
    bs = np.arange(p, dtype=np.int64)
    res = ((a % p) * bs % p + (c % p) * phi.eval_mod_array(bs, p)) % p
    return roots_of_unity(p)[res]


def _geometric(theta: float, n: np.ndarray) -> np.ndarray:
    """sum_{j<n} e(j theta), in the form e((n-1) theta / 2) sin(pi n theta) / sin(pi theta)."""
    n = np.asarray(n, dtype=np.float64)
    if theta == 0.0:
        return n.astype(np.complex128)
    ratio = np.sin(math.pi * n * theta) / math.sin(math.pi * theta)
    return unit_from_real((n - 1) * theta / 2) * ratio


def weyl_g_decomposed(
    phi: IntPolynomial,
    P: int,
    p: int,
    a: int,
    c: int,
    beta: float,
    method: str = "direct",
    threads: Optional[int] = None,
) -> complex:
    """g(a/p + beta, c/p) = sum_{x=1}^{P} e((a x + c phi(x)) / p) e(beta x).

    ``method="direct"`` sums term by term in fixed blocks. ``method="folded"``
    uses that the residue part has period p and sums each residue class as a
    closed-form geometric series, which costs O(p) instead of O(P).
    """
    if p < 2:
        raise InvalidArgument(f"p must be >= 2, got {p}")
    if abs(beta) > 1 / (2 * p):
        raise InvalidArgument(f"|beta| = {abs(beta)} exceeds 1/(2p) = {1 / (2 * p)}")
    P = int(P)
    if P < 1:
        raise InvalidArgument(f"P must be >= 1, got {P}")
    table = _period_table(phi, p, a, c)
    beta = float(beta)

    if method == "folded":
        bs = np.arange(p)
        first = np.where(bs == 0, p, bs)
        n = np.where(first <= P, (P - first) // p + 1, 0)
        terms = table * unit_from_real(beta * first) * _geometric(beta * p, n)
        acc = ComplexAccumulator()
        acc.add_many(terms[n > 0])
        return acc.value
    if method != "direct":
        raise InvalidArgument(f"unknown method {method!r}")

    def block(bounds):
        lo, hi = bounds
        xs = np.arange(lo, hi + 1, dtype=np.int64)
        acc = ComplexAccumulator()
        acc.add_many(table[xs % p] * unit_from_real(beta * xs.astype(np.float64)))
        return acc

    return _reduce(ordered_map(block, _blocks(P), threads))


def integral_I(P: float, beta: float) -> complex:
    """int_0^P e(beta x) dx = P e(beta P / 2) sinc(beta P)."""
    x = beta * P
    if x == 0.0:
        return complex(P)
    return complex(P * np.sinc(x) * unit_from_real(x / 2))


def lemma_one_check(
    phi: IntPolynomial,
    P: int,
    p: int,
    a: int,
    c: int,
    beta: float,
    method: str = "folded",
) -> LemmaOneReport:
    """Compare g(a/p + beta, c/p) with its main term S(p; a, c) I(beta) / p.

    The error is normalised by sqrt(p) log p, the size of the remainder term.
    """
    if p < 3 or not is_prime(p):
        raise InvalidArgument(f"p must be a prime >= 3, got {p}")
    if c % p == 0:
        raise InvalidArgument(f"p = {p} divides c = {c}")
    if abs(beta) > 1 / (2 * p):
        raise InvalidArgument(f"|beta| = {abs(beta)} exceeds 1/(2p)")
    g = weyl_g_decomposed(phi, P, p, a, c, beta, method=method)
    main = complete_sum(phi, p, a, c).value / p * integral_I(P, beta)
    err = abs(g - main)
    return LemmaOneReport(p, a, c, beta, int(P), g, main, err, err / (math.sqrt(p) * math.log(p)))

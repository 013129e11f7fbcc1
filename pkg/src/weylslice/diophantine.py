"""Rational approximations with prime denominators.

For a torus point alpha we look for primes p and integers a with
|alpha - a/p| < 1/p^2. Two searches are offered: filtering the continued
fraction convergents for prime denominators (fast, but only a subset), and
scanning every p in a range (complete).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional

import numpy as np

from weylslice._parallel import ordered_map
from weylslice.core import TorusPoint, is_prime
from weylslice.core.torus import FRAC_BITS, ONE
from weylslice.errors import InvalidArgument

# Expansion stops once q^2 would exceed 2**(FRAC_BITS - _GUARD_BITS); beyond
# that the fixed-point rounding of alpha can change the partial quotients.
_GUARD_BITS = 8
_SCAN_BLOCK = 1 << 18


@dataclass(frozen=True)
class PrimeApprox:
    a: int
    p: int
    beta: float

    def beta_exact(self, alpha: TorusPoint) -> Fraction:
        return alpha.as_fraction() - Fraction(self.a, self.p)


def continued_fraction(alpha: TorusPoint, max_terms: int = 64) -> List[int]:
    """Partial quotients [0; a1, a2, ...] of alpha in [0, 1).

    The list is shorter than ``max_terms`` when alpha is (to working
    precision) rational or the fixed-point precision is exhausted.
    """
    num, den = alpha.raw, ONE
    out: List[int] = []
    q_prev, q = 0, 1
    limit = 1 << ((FRAC_BITS - _GUARD_BITS) // 2)
    while len(out) < max_terms:
        t, r = divmod(num, den)
        if out:
            q_prev, q = q, t * q + q_prev
            if q > limit:
                break
        out.append(t)
        if r == 0:
            break
        num, den = den, r
    return out


def convergents(alpha: TorusPoint, max_terms: int = 64) -> List[Fraction]:
    """Convergents h/q of alpha with strictly increasing denominators.

    The list starts at 0/1, or at 1/1 when alpha > 1/2.
    """
    h_prev, h = 1, 0
    q_prev, q = 0, 1
    out = []
    for i, t in enumerate(continued_fraction(alpha, max_terms)):
        if i == 0:
            h, q = t, 1
            h_prev, q_prev = 1, 0
        else:
            h_prev, h = h, t * h + h_prev
            q_prev, q = q, t * q + q_prev
        out.append(Fraction(h, q))
    # with a1 = 1 the first two convergents share denominator 1 and 1/1 is the closer one
    if len(out) > 1 and out[1].denominator == 1:
        out.pop(0)
    return out


def nearest_numerator(alpha: TorusPoint, p: int) -> int:
    """Nearest integer to p * alpha; an exact tie goes down."""
    return (p * alpha.raw + (ONE >> 1) - 1) >> FRAC_BITS


def exact_approx(alpha: TorusPoint, p: int) -> Optional[PrimeApprox]:
    """PrimeApprox for p if |alpha - a/p| < 1/p^2, computed in integers."""
    a = nearest_numerator(alpha, p)
    # |alpha - a/p| < 1/p^2  <=>  |p raw - a 2^128| * p < 2^128
    if abs(p * alpha.raw - (a << FRAC_BITS)) * p >= ONE:
        return None
    beta = Fraction(alpha.raw, ONE) - Fraction(a, p)
    return PrimeApprox(a, p, float(beta))


def _scan_block(alpha: TorusPoint, lo: int, hi: int) -> List[PrimeApprox]:
    hi_word = np.uint64(alpha.raw >> 64)
    lo_frac = (alpha.raw & ((1 << 64) - 1)) / ONE
    ps = np.arange(lo, hi + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        top = ps * hi_word  # wraps mod 2**64: the top 64 bits of frac(p alpha)
        dist_top = np.minimum(top, -top).astype(np.float64) * 2.0**-64
    # the neglected low word moves frac(p alpha) by less than p * 2**-64
    pf = ps.astype(np.float64)
    slack = pf * (lo_frac + 2.0**-64) + 2.0**-50 * dist_top + 2.0**-60
    cand = ps[dist_top < 1.0 / pf + slack]
    out = []
    for p in cand.tolist():
        if is_prime(p):
            hit = exact_approx(alpha, p)
            if hit is not None:
                out.append(hit)
    return out


def prime_denominator_approx(
    alpha: TorusPoint,
    p_min: int,
    p_max: int,
    strategy: str = "prime-scan",
    threads: Optional[int] = None,
) -> List[PrimeApprox]:
    """All (a, p) with p prime in [p_min, p_max] and |alpha - a/p| < 1/p^2, sorted by p.

    ``"convergent-filter"`` only reports convergent denominators that are
    prime, a subset of what ``"prime-scan"`` finds.
    """
    if not 2 <= p_min <= p_max <= 1 << 63:
        raise InvalidArgument(f"need 2 <= p_min <= p_max <= 2**63, got [{p_min}, {p_max}]")
    if strategy == "convergent-filter":
        out = []
        for conv in convergents(alpha):
            q = conv.denominator
            if p_min <= q <= p_max and is_prime(q):
                hit = exact_approx(alpha, q)
                if hit is not None:
                    out.append(hit)
        return sorted(out, key=lambda r: r.p)
    if strategy != "prime-scan":
        raise InvalidArgument(f"unknown strategy {strategy!r}")
    ranges = [(lo, min(lo + _SCAN_BLOCK - 1, p_max)) for lo in range(p_min, p_max + 1, _SCAN_BLOCK)]
    found = ordered_map(lambda r: _scan_block(alpha, *r), ranges, threads)
    return sorted((hit for block in found for hit in block), key=lambda r: r.p)

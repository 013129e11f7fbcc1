"""Exact and fixed-point primitives used by every other module."""
from weylslice.core.polynomial import DeltaPoly, IntPolynomial, delta_poly, eval_mod
from weylslice.core.primes import is_prime, primes_between
from weylslice.core.summation import ComplexAccumulator, compensated_sum
from weylslice.core.torus import (
    FRAC_BITS,
    TorusPoint,
    dist_to_int,
    e,
    e_frac,
    golden_fraction,
    sqrt2_minus_1,
    unit_from_real,
    unit_from_u64,
)

__all__ = [
    "ComplexAccumulator",
    "DeltaPoly",
    "FRAC_BITS",
    "IntPolynomial",
    "TorusPoint",
    "compensated_sum",
    "delta_poly",
    "dist_to_int",
    "e",
    "e_frac",
    "eval_mod",
    "golden_fraction",
    "is_prime",
    "primes_between",
    "sqrt2_minus_1",
    "unit_from_real",
    "unit_from_u64",
]

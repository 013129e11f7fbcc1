"""Complete exponential sums modulo q and the finite-field machinery around them.

Covers the sums S(q; a, c), the Weil bound check, the curve
Delta(m, h) = 0 with its additive character sum, the second-moment identity,
and the search for a residue a with a large S(p; a, a + c).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from weylslice.core import DeltaPoly, IntPolynomial, is_prime, unit_from_u64
from weylslice.errors import InvalidArgument


@dataclass(frozen=True)
class CompleteSum:
    q: int
    a: int
    c: int
    value: complex

    def __abs__(self) -> float:
        return abs(self.value)


@dataclass(frozen=True)
class CurveCount:
    p: int
    c: int
    char_sum: complex
    point_count: int


@dataclass(frozen=True)
class WeilCheck:
    lhs: float
    rhs: float
    holds: bool


@dataclass(frozen=True)
class SecondMoment:
    lhs: float
    rhs: float
    residual: float


@dataclass(frozen=True)
class LargeA:
    a: int
    magnitude: float
    below_threshold: bool = False
    scanned: int = 0


@lru_cache(maxsize=64)
def roots_of_unity(q: int) -> np.ndarray:
    """Read-only table of e(j/q), j = 0..q-1, built from 64-bit phases."""
    if q < 2:
        raise InvalidArgument(f"modulus must be >= 2, got {q}")
    phases = np.array([((j << 65) + q) // (2 * q) for j in range(q)], dtype=np.uint64)
    table = unit_from_u64(phases)
    table.setflags(write=False)
    return table


def _sum_table(counts: np.ndarray, table: np.ndarray) -> complex:
    nz = np.flatnonzero(counts)
    w = counts[nz].astype(np.float64)
    vals = table[nz]
    return complex(math.fsum((w * vals.real).tolist()), math.fsum((w * vals.imag).tolist()))


def _residues(phi: IntPolynomial, q: int, a: int, c: int) -> np.ndarray:
    xs = np.arange(1, q + 1, dtype=np.int64)
    return ((a % q) * xs % q + (c % q) * phi.eval_mod_array(xs, q)) % q


def complete_sum(phi: IntPolynomial, q: int, a: int, c: int) -> CompleteSum:
    """S(q; a, c) = sum_{x=1}^{q} e((a x + c phi(x)) / q)."""
    if q < 2:
        raise InvalidArgument(f"modulus must be >= 2, got {q}")
    counts = np.bincount(_residues(phi, q, a, c), minlength=q)
    return CompleteSum(q, a, c, _sum_table(counts, roots_of_unity(q)))


def complete_sum_row(phi: IntPolynomial, p: int, c: int) -> np.ndarray:
    """S(p; a, c) for every a in 0..p-1 at once (one FFT of length p)."""
    xs = np.arange(p, dtype=np.int64)
    v = roots_of_unity(p)[(c % p) * phi.eval_mod_array(xs, p) % p]
    return p * np.fft.ifft(v)


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise InvalidArgument(msg)


def _field_preconditions(phi: IntPolynomial, p: int) -> None:
    _require(is_prime(p), f"p = {p} is not prime")
    _require(p > phi.degree, f"need p > k, got p = {p}, k = {phi.degree}")
    _require(phi.lc % p != 0, f"p = {p} divides the leading coefficient {phi.lc}")


def weil_bound(k: int, p: int) -> float:
    return (k - 1) * math.sqrt(p)


def check_weil(phi: IntPolynomial, p: int, a: int, c: int) -> WeilCheck:
    _field_preconditions(phi, p)
    _require(c % p != 0, f"p = {p} divides c = {c}")
    lhs = abs(complete_sum(phi, p, a, c).value)
    rhs = weil_bound(phi.degree, p)
    return WeilCheck(lhs, rhs, lhs <= rhs + 1e-6)


def bombieri_bound(k: int, p: int) -> float:
    d = k - 1
    return (d * d + 2 * d - 3) * math.sqrt(p) + d * d


def curve_h_counts(phi: IntPolynomial, p: int, include_h_zero: bool) -> np.ndarray:
    """n[h] = #{m in [1, p] : Delta(m, h) = 0 mod p}, indexed by h mod p.

    Entry 0 is left at zero unless ``include_h_zero``.
    """
    ms = np.arange(1, p + 1)
    hs = np.arange(0 if include_h_zero else 1, p)
    grid = DeltaPoly(phi).grid_mod(ms, hs, p)
    counts = np.zeros(p, dtype=np.int64)
    counts[hs] = np.count_nonzero(grid == 0, axis=0)
    return counts


def curve_char_sum(phi: IntPolynomial, p: int, c: int, include_h_zero: bool = True) -> CurveCount:
    """Sum of e(c h / p) over the points (m, h) of Delta(m, h) = 0 in [1, p]^2.

    Without ``include_h_zero`` the h range is [1, p-1].
    """
    _field_preconditions(phi, p)
    counts = curve_h_counts(phi, p, include_h_zero)
    val = _sum_table(counts, roots_of_unity(p)[(c % p) * np.arange(p) % p])
    return CurveCount(p, c, val, int(counts.sum()))


def second_moment_identity(phi: IntPolynomial, p: int, c: int) -> SecondMoment:
    """Both sides of the exact identity

        sum_{a=1}^{p-1} |S(p; a-c, a)|^2 = p^2 + p sum_{m, h != 0, Delta = 0} e(c h / p)
    """
    _field_preconditions(phi, p)
    _require(c % p != 0, f"p = {p} divides c = {c}")
    lhs = math.fsum(abs(complete_sum(phi, p, a - c, a).value) ** 2 for a in range(1, p))
    curve = curve_char_sum(phi, p, c, include_h_zero=False)
    rhs = p * p + p * curve.char_sum.real
    return SecondMoment(lhs, rhs, abs(lhs - rhs))


def second_moment_all_c(phi: IntPolynomial, p: int):
    """(lhs, rhs) arrays over c = 1..p-1, via FFTs instead of p^2 single sums."""
    _field_preconditions(phi, p)
    xs = np.arange(p, dtype=np.int64)
    u = (xs + phi.eval_mod_array(xs, p)) % p
    table = roots_of_unity(p)
    cs = np.arange(1, p, dtype=np.int64)
    # W[j, c] = sum over x with u_x = j of e(-c x / p)
    E = table[(-np.outer(xs, cs)) % p]
    W = np.zeros((p, len(cs)), dtype=np.complex128)
    np.add.at(W, u, E)
    S = p * np.fft.ifft(W, axis=0)
    lhs = np.sum(np.abs(S[1:]) ** 2, axis=0)
    counts = curve_h_counts(phi, p, include_h_zero=False)
    char = table[np.outer(cs, np.arange(p)) % p] @ counts.astype(np.float64)
    rhs = p * p + p * char.real
    return lhs, rhs


def lemma2_threshold(p: int) -> float:
    return math.sqrt(p) / 3


def find_large_a(
    phi: IntPolynomial, p: int, c: int, max_scan: Optional[int] = None
) -> LargeA:
    """First a in 1, 2, ..., p with p not dividing a + c and |S(p; a, a + c)| >= sqrt(p)/3.

    Existence is guaranteed for p > (2k)^4. If ``max_scan`` values of a are
    tried without success, the best one seen is returned with
    ``below_threshold=True``.
    """
    k = phi.degree
    _require(is_prime(p), f"p = {p} is not prime")
    _require(p > (2 * k) ** 4, f"need p > (2k)^4 = {(2 * k) ** 4}, got p = {p}")
    _require(phi.lc % p != 0, f"p = {p} divides the leading coefficient {phi.lc}")
    _require(c % p != 0, f"p = {p} divides c = {c}")
    threshold = lemma2_threshold(p)
    limit = p if max_scan is None else min(p, max_scan)
    best_a, best_mag = 0, -1.0
    scanned = 0
    for a in range(1, limit + 1):
        if (a + c) % p == 0:
            continue
        scanned += 1
        mag = abs(complete_sum(phi, p, a, a + c).value)
        if mag >= threshold:
            return LargeA(a, mag, False, scanned)
        if mag > best_mag:
            best_a, best_mag = a, mag
    return LargeA(best_a, best_mag, True, scanned)

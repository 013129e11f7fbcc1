"""Invariant sweeps over ranges of primes (Weil, second moment, Bombieri, Lemma 1)."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional

import numpy as np

from weylslice._parallel import ordered_map
from weylslice.complete_sums import (
    bombieri_bound,
    complete_sum_row,
    curve_h_counts,
    roots_of_unity,
    second_moment_all_c,
    weil_bound,
)
from weylslice.core import IntPolynomial, primes_between
from weylslice.weyl import lemma_one_check

SUITES = ("weil", "second-moment", "bombieri", "lemma1")


@dataclass
class SuiteResult:
    suite: str
    phi: str
    primes: int = 0
    checked: int = 0
    failures: List[Dict] = field(default_factory=list)
    worst: Dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.checked > 0 and not self.failures


@dataclass
class _PrimeOutcome:
    checked: int
    failures: List[Dict]
    worst: Dict


def _weil_prime(phi: IntPolynomial, p: int) -> _PrimeOutcome:
    rhs = weil_bound(phi.degree, p)
    fails, worst = [], {"p": p, "margin": math.inf}
    for c in range(1, p):
        mags = np.abs(complete_sum_row(phi, p, c))
        a = int(np.argmax(mags))
        margin = rhs - float(mags[a])
        if margin < worst["margin"]:
            worst = {"p": p, "a": a, "c": c, "lhs": float(mags[a]), "rhs": rhs, "margin": margin}
        if margin < -1e-6:
            for a_bad in np.flatnonzero(mags > rhs + 1e-6):
                fails.append({"p": p, "a": int(a_bad), "c": c, "lhs": float(mags[a_bad]), "rhs": rhs})
    return _PrimeOutcome(p * (p - 1), fails, worst)


def _second_moment_prime(phi: IntPolynomial, p: int) -> _PrimeOutcome:
    lhs, rhs = second_moment_all_c(phi, p)
    resid = np.abs(lhs - rhs)
    tol = 1e-6 * p * p
    i = int(np.argmax(resid))
    worst = {"p": p, "c": i + 1, "residual": float(resid[i]), "tolerance": tol,
             "margin": tol - float(resid[i])}
    fails = [{"p": p, "c": int(j) + 1, "residual": float(resid[j])} for j in np.flatnonzero(resid > tol)]
    return _PrimeOutcome(p - 1, fails, worst)


def _bombieri_prime(phi: IntPolynomial, p: int) -> _PrimeOutcome:
    counts = curve_h_counts(phi, p, include_h_zero=True).astype(np.float64)
    cs = np.arange(1, p)
    sums = roots_of_unity(p)[np.outer(cs, np.arange(p)) % p] @ counts
    mags = np.abs(sums)
    bound = bombieri_bound(phi.degree, p)
    i = int(np.argmax(mags))
    worst = {"p": p, "c": i + 1, "lhs": float(mags[i]), "rhs": bound, "margin": bound - float(mags[i])}
    fails = [{"p": p, "c": int(j) + 1, "lhs": float(mags[j]), "rhs": bound}
             for j in np.flatnonzero(mags > bound + 1e-9)]
    return _PrimeOutcome(p - 1, fails, worst)


def _lemma1_prime(phi: IntPolynomial, p: int, samples: int, seed: int, ceiling: float) -> _PrimeOutcome:
    rng = np.random.default_rng([seed, p])
    fails, worst = [], {"p": p, "normalized_error": -1.0}
    checked = 0
    for _ in range(samples):
        a = int(rng.integers(0, p))
        c = int(rng.integers(1, p))
        beta = float(rng.uniform(-1.0, 1.0)) / (2 * p)
        for P in (p * p, 2 * p * p):
            rep = lemma_one_check(phi, P, p, a, c, beta)
            checked += 1
            row = {"p": p, "a": a, "c": c, "beta": beta, "P": P, "normalized_error": rep.normalized_error}
            if rep.normalized_error > worst["normalized_error"]:
                worst = dict(row, margin=ceiling - rep.normalized_error)
            if rep.normalized_error > ceiling:
                fails.append(row)
    return _PrimeOutcome(checked, fails, worst)


def run_suite(
    suite: str,
    phi: IntPolynomial,
    p_max: int,
    p_min: Optional[int] = None,
    threads: Optional[int] = None,
    samples: int = 10,
    seed: int = 0,
    ceiling: float = 20.0,
) -> SuiteResult:
    """Run one invariant sweep over the admissible primes p_min <= p <= p_max.

    Default lower ends: p > max(k, 3) for ``weil``, p > k for
    ``second-moment`` and ``bombieri``, p > 10 for ``lemma1``. Primes dividing
    the leading coefficient are skipped.
    """
    k = phi.degree
    default_lo = {"weil": max(k, 3) + 1, "second-moment": k + 1, "bombieri": k + 1, "lemma1": 11}
    if suite not in default_lo:
        raise ValueError(f"unknown suite {suite!r}")
    lo = default_lo[suite] if p_min is None else max(p_min, default_lo[suite])
    primes = [p for p in primes_between(lo, p_max) if phi.lc % p]
    per_prime: Dict[str, Callable[[int], _PrimeOutcome]] = {
        "weil": lambda p: _weil_prime(phi, p),
        "second-moment": lambda p: _second_moment_prime(phi, p),
        "bombieri": lambda p: _bombieri_prime(phi, p),
        "lemma1": lambda p: _lemma1_prime(phi, p, samples, seed, ceiling),
    }
    outcomes = ordered_map(per_prime[suite], primes, threads)
    res = SuiteResult(suite, ",".join(map(str, phi.coeffs)), primes=len(primes))
    for out in outcomes:
        res.checked += out.checked
        res.failures.extend(out.failures)
        if not res.worst or out.worst.get("margin", math.inf) < res.worst.get("margin", math.inf):
            res.worst = out.worst
    return res

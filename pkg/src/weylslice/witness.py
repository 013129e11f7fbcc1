"""Building slices where the two-dimensional Weyl sum is large.

Given alpha2 with a prime-denominator approximation a2/p, the construction
picks a1 with a large complete sum S(p; a1, a1 + a2), sets
alpha1 = a1/p - (alpha2 - a2/p) so that alpha1 + alpha2 is exactly rational,
and chooses the length P with P^(1 + tau) = p^2. Then |f(alpha1, alpha2)|
should be about P p^(-1/2), i.e. at least P^(3/4 - tau).
"""
from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass, field
from typing import List, Optional

import numpy as np

from weylslice._parallel import ordered_map
from weylslice.complete_sums import complete_sum, find_large_a
from weylslice.core import IntPolynomial, TorusPoint, is_prime
from weylslice.diophantine import PrimeApprox, prime_denominator_approx
from weylslice.errors import InvalidArgument, LemmaViolation
from weylslice.weyl import integral_I, weyl_g_decomposed

log = logging.getLogger(__name__)

# Ceiling on |g - S I / p| / (sqrt(p) log p) used by the lower-bound chain.
LEMMA1_CONSTANT = 20.0


@dataclass(frozen=True)
class WitnessConfig:
    phi: IntPolynomial
    tau: float
    p_min: int
    p_max: int
    alpha2: TorusPoint

    def __post_init__(self):
        if not 0 < self.tau < 0.25:
            raise InvalidArgument(f"tau must lie in (0, 1/4), got {self.tau}")
        floor = (2 * self.phi.degree) ** 4
        if self.p_min <= floor:
            raise InvalidArgument(f"p_min must exceed (2k)^4 = {floor}, got {self.p_min}")


@dataclass(frozen=True)
class WitnessReport:
    p: int
    a2: int
    beta2: float
    a1: int
    beta1: float
    P: int
    f_abs: float
    target: float
    ratio: float
    S_abs: float
    exponent: float
    f_value: complex = field(repr=False, default=0j)

    def as_row(self) -> dict:
        row = asdict(self)
        row.pop("f_value")
        return row


@dataclass
class SweepResult:
    reports: List[WitnessReport]
    slope: Optional[float]
    rejected: List[PrimeApprox]
    diagnostic: str = ""


def summation_length(p: int, tau: float) -> int:
    """Largest integer P with P^(1 + tau) <= p^2."""
    P = int(math.floor(p ** (2.0 / (1.0 + tau))))
    while (P + 1) ** (1.0 + tau) <= p * p:
        P += 1
    while P > 1 and P ** (1.0 + tau) > p * p:
        P -= 1
    return P


def lower_bound_chain(report: WitnessReport, constant: float = LEMMA1_CONSTANT) -> float:
    """S I(beta1) / p - C sqrt(p) log p, which |f| must not fall below."""
    p = report.p
    main = report.S_abs * abs(integral_I(report.P, report.beta1)) / p
    return main - constant * math.sqrt(p) * math.log(p)


def construct_witness(
    config: WitnessConfig, approx: PrimeApprox, threads: Optional[int] = None
) -> WitnessReport:
    phi, p, tau = config.phi, approx.p, config.tau
    k = phi.degree
    if not is_prime(p):
        raise InvalidArgument(f"p = {p} is not prime")
    if p <= (2 * k) ** 4:
        raise InvalidArgument(f"need p > (2k)^4 = {(2 * k) ** 4}, got p = {p}")
    if phi.lc % p == 0:
        raise InvalidArgument(f"p = {p} divides the leading coefficient {phi.lc}")
    if approx.a % p == 0:
        raise InvalidArgument(f"p = {p} divides the numerator a2 = {approx.a}")
    beta2_exact = approx.beta_exact(config.alpha2)
    if abs(beta2_exact) * p * p > 1:
        raise InvalidArgument(f"|alpha2 - a2/p| exceeds 1/p^2 for p = {p}")

    P = summation_length(p, tau)
    a2 = approx.a % p
    found = find_large_a(phi, p, a2)
    if found.below_threshold:
        raise LemmaViolation(
            f"no a with |S(p; a, a + {a2})| >= sqrt(p)/3 for p = {p}, phi = {phi}"
        )
    a1 = found.a
    c = (a1 + a2) % p

    gamma = TorusPoint.from_fraction(c, p)
    alpha1 = gamma - config.alpha2
    # alpha1 = a1/p + beta1 with beta1 = -beta2, and alpha1 + alpha2 is exactly gamma
    assert alpha1 + config.alpha2 == gamma
    beta2 = float(beta2_exact)
    beta1 = -beta2
    if abs(beta1) * P > P ** (-tau) * (1 + 1e-12):
        raise AssertionError(f"|beta1| P = {abs(beta1) * P} exceeds P^-tau")

    f = weyl_g_decomposed(phi, P, p, a1, c, beta1, threads=threads)
    f_abs = abs(f)
    target = P ** (0.75 - tau)
    return WitnessReport(
        p=p,
        a2=approx.a,
        beta2=beta2,
        a1=a1,
        beta1=beta1,
        P=P,
        f_abs=f_abs,
        target=target,
        ratio=f_abs / target,
        S_abs=abs(complete_sum(phi, p, a1, c).value),
        exponent=math.log(f_abs) / math.log(P) if f_abs > 0 else float("-inf"),
        f_value=f,
    )


def fit_slope(reports: List[WitnessReport]) -> Optional[float]:
    """Least-squares slope of log |f| against log P."""
    pts = [(math.log(r.P), math.log(r.f_abs)) for r in reports if r.f_abs > 0 and r.P > 1]
    if len(pts) < 2 or len({x for x, _ in pts}) < 2:
        return None
    xs, ys = np.array(pts).T
    return float(np.polyfit(xs, ys, 1)[0])


def exponent_sweep(
    config: WitnessConfig, strategy: str = "prime-scan", threads: Optional[int] = None
) -> SweepResult:
    """Witnesses for every admissible prime-denominator approximation in range."""
    if config.p_max < config.p_min:
        return SweepResult([], None, [], f"empty prime range [{config.p_min}, {config.p_max}]")
    approxes = prime_denominator_approx(
        config.alpha2, config.p_min, config.p_max, strategy=strategy, threads=threads
    )
    admissible, rejected = [], []
    for ap in approxes:
        if ap.a % ap.p == 0 or config.phi.lc % ap.p == 0:
            log.info("rejecting approximation %s/%s", ap.a, ap.p)
            rejected.append(ap)
        else:
            admissible.append(ap)
    if not admissible:
        return SweepResult(
            [], None, rejected,
            f"no admissible prime-denominator approximations in [{config.p_min}, {config.p_max}]",
        )
    # one witness per worker; the inner sum stays single-threaded so the result is thread-count independent
    reports = ordered_map(lambda ap: construct_witness(config, ap, threads=1), admissible, threads)
    reports.sort(key=lambda r: (r.P, r.p))
    return SweepResult(reports, fit_slope(reports), rejected)

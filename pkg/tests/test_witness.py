import math
from fractions import Fraction

import pytest

from weylslice.complete_sums import complete_sum
from weylslice.core import IntPolynomial, TorusPoint, sqrt2_minus_1
from weylslice.diophantine import PrimeApprox, exact_approx
from weylslice.errors import InvalidArgument
from weylslice.weyl import WeylParams, integral_I, lemma_one_check, weyl_f
from weylslice.witness import (
    WitnessConfig,
    construct_witness,
    exponent_sweep,
    fit_slope,
    lower_bound_chain,
    summation_length,
)

X2 = IntPolynomial([0, 0, 1])
X3X = IntPolynomial([0, 1, 0, 1])
SQRT2M1 = sqrt2_minus_1()


def config(phi=X2, tau=0.1, p_min=257, p_max=10**4, alpha2=SQRT2M1):
    return WitnessConfig(phi, tau, p_min, p_max, alpha2)


class TestConfig:
    @pytest.mark.parametrize("tau", [0.0, 0.25, 0.3, -0.1])
    def test_tau_range(self, tau):
        with pytest.raises(InvalidArgument):
            config(tau=tau)

    def test_p_min_above_lemma_floor(self):
        with pytest.raises(InvalidArgument):
            config(p_min=256)


class TestSummationLength:
    @pytest.mark.parametrize("p, tau", [(577, 0.1), (5741, 0.1), (5741, 0.2), (10007, 0.01)])
    def test_floor(self, p, tau):
        P = summation_length(p, tau)
        assert P ** (1 + tau) <= p * p < (P + 1) ** (1 + tau)


class TestConstruct:
    def test_pell_prime(self):
        approx = exact_approx(SQRT2M1, 5741)
        r = construct_witness(config(), approx)
        assert r.P == summation_length(5741, 0.1)
        assert r.ratio >= 1
        assert r.beta1 == -r.beta2
        assert (r.a1 + r.a2) % r.p != 0
        assert r.S_abs >= math.sqrt(r.p) / 3
        assert r.exponent == pytest.approx(math.log(r.f_abs) / math.log(r.P))
        assert r.f_abs >= lower_bound_chain(r)

    def test_slice_is_exactly_rational(self):
        approx = exact_approx(SQRT2M1, 577)
        r = construct_witness(config(), approx)
        c = (r.a1 + r.a2) % r.p
        gamma = TorusPoint.from_fraction(c, r.p)
        alpha1 = gamma - SQRT2M1
        assert alpha1 + SQRT2M1 == gamma
        # the generic fixed-point evaluation of f on the same slice agrees
        f_generic = weyl_f(WeylParams(X2, r.P, alpha1, SQRT2M1))
        assert abs(f_generic - r.f_value) < 1e-6 * math.sqrt(r.P)

    def test_rational_alpha2(self):
        p, a2 = 263, 100
        alpha2 = TorusPoint.from_fraction(a2, p)
        approx = exact_approx(alpha2, p)
        assert approx is not None and abs(approx.beta) < 1e-30
        r = construct_witness(config(alpha2=alpha2), approx)
        c = (r.a1 + a2) % p
        lemma = lemma_one_check(X2, r.P, p, r.a1, c, r.beta1)
        main = complete_sum(X2, p, r.a1, c).value / p * integral_I(r.P, r.beta1)
        assert abs(main) == pytest.approx(r.P / p * r.S_abs, rel=1e-9)
        assert abs(r.f_value - main) <= lemma.error + 1e-6
        assert lemma.normalized_error <= 20

    def test_preconditions(self):
        good = exact_approx(SQRT2M1, 577)
        with pytest.raises(InvalidArgument):
            construct_witness(config(), PrimeApprox(good.a, 239, good.beta))
        with pytest.raises(InvalidArgument):
            construct_witness(config(), PrimeApprox(good.a, 578, good.beta))
        with pytest.raises(InvalidArgument):
            construct_witness(config(), PrimeApprox(good.a + 1, 577, good.beta))
        with pytest.raises(InvalidArgument):
            construct_witness(config(alpha2=TorusPoint(0)), PrimeApprox(577, 577, 0.0))

    def test_deterministic(self):
        approx = exact_approx(SQRT2M1, 5741)
        assert construct_witness(config(), approx) == construct_witness(config(), approx, threads=3)


class TestSweep:
    def test_quadratic(self):
        res = exponent_sweep(config())
        assert [r.p for r in res.reports] == [577, 5741]
        assert [r.P for r in res.reports] == sorted(r.P for r in res.reports)
        for r in res.reports:
            assert r.exponent >= 0.75 - 0.1 - 0.05
            assert r.f_abs >= lower_bound_chain(r)
        assert res.slope == pytest.approx(fit_slope(res.reports))

    def test_rational_alpha2_is_empty(self):
        res = exponent_sweep(config(alpha2=TorusPoint.from_fraction(1, 2)))
        assert res.reports == [] and res.slope is None
        assert "no admissible" in res.diagnostic

    def test_empty_range(self):
        res = exponent_sweep(config(p_max=100))
        assert res.reports == [] and "empty" in res.diagnostic

    def test_rejects_zero_numerator(self):
        # alpha2 just above 0: the nearest numerator is 0 for every large p
        res = exponent_sweep(config(alpha2=TorusPoint.from_rational(Fraction(1, 10**9)), p_max=2000))
        assert res.reports == []
        assert res.rejected and all(r.a == 0 for r in res.rejected)

    def test_cubic(self):
        res = exponent_sweep(config(phi=X3X, p_min=1297))
        assert res.reports
        for r in res.reports:
            assert r.exponent >= 0.60

    def test_threads_do_not_change_results(self):
        assert exponent_sweep(config(), threads=1).reports == exponent_sweep(config(), threads=4).reports

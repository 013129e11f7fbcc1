import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import is_prime_trial, poly_value
from weylslice.core import (
    ComplexAccumulator,
    IntPolynomial,
    TorusPoint,
    dist_to_int,
    e_frac,
    eval_mod,
    golden_fraction,
    is_prime,
    primes_between,
    sqrt2_minus_1,
    unit_from_u64,
)
from weylslice.core.torus import FRAC_BITS
from weylslice.errors import InvalidArgument


class TestIntPolynomial:
    def test_strips_trailing_zeros(self):
        phi = IntPolynomial([1, 0, 3, 0, 0])
        assert phi.coeffs == (1, 0, 3)
        assert phi.degree == 2
        assert phi.lc == 3

    @pytest.mark.parametrize("coeffs", [[0, 1], [5], [], [0, 2, 0]])
    def test_rejects_low_degree(self, coeffs):
        with pytest.raises(InvalidArgument):
            IntPolynomial(coeffs)

    def test_parse(self):
        assert IntPolynomial.parse("1, 2,3").coeffs == (1, 2, 3)
        with pytest.raises(InvalidArgument):
            IntPolynomial.parse("1,x,3")


class TestEvalMod:
    def test_examples(self):
        assert eval_mod(IntPolynomial([0, 0, 1]), 3, 5) == 4
        assert eval_mod(IntPolynomial([0, 1, 0, 1]), 2, 7) == 3

    def test_large_argument(self):
        phi = IntPolynomial([1, 2, 0, 0, 3])
        q = 2**31 - 1
        x = 10**6
        assert eval_mod(phi, x, q) == (3 * x**4 + 2 * x + 1) % q

    @pytest.mark.parametrize("q", [1, 0, -3])
    def test_bad_modulus(self, q):
        with pytest.raises(InvalidArgument):
            eval_mod(IntPolynomial([0, 0, 1]), 3, q)

    def test_random_against_big_ints(self):
        rng = random.Random(1)
        for _ in range(10_000):
            k = rng.randint(2, 8)
            coeffs = [rng.randint(-10**6, 10**6) for _ in range(k)] + [rng.choice([-7, -1, 1, 3, 10**9])]
            phi = IntPolynomial(coeffs)
            x = rng.randint(-10**12, 10**12)
            q = rng.choice([rng.randint(2, 100), rng.randint(2, 2**62), 2**61 - 1])
            assert eval_mod(phi, x, q) == poly_value(coeffs, x) % q

    def test_array_matches_scalar(self):
        phi = IntPolynomial([-4, 7, 0, 11, 2])
        xs = np.arange(-50, 500)
        for q in (2, 97, 65537, 2**31 - 1, 2**40 + 15):
            got = phi.eval_mod_array(xs, q)
            assert [int(v) for v in got] == [phi.eval_mod(int(x), q) for x in xs]


class TestTorus:
    def test_e_frac_examples(self):
        assert e_frac(TorusPoint(0)) == 1 + 0j
        assert e_frac(TorusPoint.from_fraction(1, 4)) == 1j
        z = e_frac(TorusPoint.from_fraction(1, 3))
        assert abs(z - complex(-0.5, math.sqrt(3) / 2)) < 1e-14

    def test_e_frac_ulp_accuracy(self):
        import mpmath

        rng = random.Random(7)
        for _ in range(2000):
            t = TorusPoint(rng.getrandbits(FRAC_BITS))
            z = e_frac(t)
            with mpmath.workdps(40):
                ref = mpmath.expjpi(2 * mpmath.mpf(t.raw) / 2**FRAC_BITS)
            assert abs(complex(ref) - z) <= 4 * 2.0**-53
            assert abs(abs(z) - 1) < 1e-14

    def test_vectorised_e_matches_scalar(self):
        rng = random.Random(3)
        raws = [rng.getrandbits(FRAC_BITS) for _ in range(500)]
        vec = unit_from_u64(np.array([r >> 64 for r in raws], dtype=np.uint64))
        for r, z in zip(raws, vec):
            assert abs(z - e_frac(TorusPoint(r))) < 1e-15

    def test_character_is_multiplicative(self):
        rng = random.Random(11)
        for _ in range(10_000):
            s = TorusPoint(rng.getrandbits(FRAC_BITS))
            t = TorusPoint(rng.getrandbits(FRAC_BITS))
            assert abs(e_frac(s) * e_frac(t) - e_frac(s + t)) < 1e-12

    def test_exact_arithmetic(self):
        a = TorusPoint.from_fraction(2, 3)
        assert (a * 3).raw in (0, 1, (1 << FRAC_BITS) - 1)
        x = sqrt2_minus_1()
        assert (x + golden_fraction()) - golden_fraction() == x
        assert -(-x) == x
        assert (x * 5) == x + x + x + x + x

    def test_named_constants(self):
        assert abs(float(sqrt2_minus_1()) - (math.sqrt(2) - 1)) < 3e-16
        assert abs(float(golden_fraction()) - (math.sqrt(5) - 1) / 2) < 3e-16
        # floor((sqrt2 - 1) 2^128) squared relation pins all 128 bits
        r = sqrt2_minus_1().raw + (1 << FRAC_BITS)
        assert r * r <= 2 << (2 * FRAC_BITS) < (r + 1) ** 2

    def test_parse(self):
        assert TorusPoint.parse("0.5") == TorusPoint(1 << (FRAC_BITS - 1))
        assert TorusPoint.parse("-0.25") == TorusPoint.from_fraction(3, 4)
        assert TorusPoint.parse("1/3") == TorusPoint.from_fraction(1, 3)
        assert TorusPoint.parse("SQRT2M1") == sqrt2_minus_1()
        with pytest.raises(InvalidArgument):
            TorusPoint.parse("pi")


class TestDistToInt:
    @pytest.mark.parametrize("x, want", [(3.7, 0.3), (-0.5, 0.5), (2.0, 0.0), (0.25, 0.25)])
    def test_examples(self, x, want):
        assert dist_to_int(x) == pytest.approx(want, abs=1e-12)

    def test_fraction_exact(self):
        assert dist_to_int(Fraction(37, 10)) == Fraction(3, 10)

    @given(st.floats(min_value=-1e6, max_value=1e6, allow_nan=False))
    def test_symmetries(self, x):
        d = dist_to_int(x)
        assert 0 <= d <= 0.5
        assert dist_to_int(-x) == d
        if (x + 1.0) - 1.0 == x:
            assert dist_to_int(x + 1.0) == d

    def test_nonfinite(self):
        with pytest.raises(InvalidArgument):
            dist_to_int(float("inf"))


class TestPrimality:
    @pytest.mark.parametrize("n, want", [(2, True), (5741, True), (169, False), (1, False), (0, False)])
    def test_examples(self, n, want):
        assert is_prime(n) is want

    def test_matches_trial_division(self):
        sieve = set(primes_between(0, 10**6))
        for n in range(10**6 + 1):
            assert is_prime(n) == (n in sieve)
        for n in list(range(0, 3000)) + list(range(10**6 - 3000, 10**6 + 1)):
            assert is_prime(n) == is_prime_trial(n)

    @pytest.mark.parametrize(
        "n, want",
        [
            (2**61 - 1, True),
            (2**64 - 59, True),
            (3215031751, False),  # strong pseudoprime to bases 2, 3, 5, 7
            (3825123056546413051, False),  # strong pseudoprime to bases up to 23
            (341550071728321, False),  # strong pseudoprime to bases up to 17
            (3474749660383, False),  # strong pseudoprime to bases up to 13
            ((2**32 - 5) * (2**32 - 17), False),
            (2**64 - 1, False),
        ],
    )
    def test_hard_cases(self, n, want):
        assert is_prime(n) is want


class TestAccumulator:
    def test_exact_against_fraction_sum(self):
        rng = np.random.default_rng(5)
        theta = rng.uniform(0, 2 * np.pi, 200_000)
        zs = np.exp(1j * theta)
        acc = ComplexAccumulator()
        for block in np.array_split(zs, 17):
            acc.add_many(block)
        exact_re = sum(Fraction(v) for v in zs.real.tolist())
        exact_im = sum(Fraction(v) for v in zs.imag.tolist())
        eps = 2.0**-52
        assert abs(Fraction(acc.value.real) - exact_re) <= 4 * eps * max(1.0, abs(float(exact_re)))
        assert abs(Fraction(acc.value.imag) - exact_im) <= 4 * eps * max(1.0, abs(float(exact_im)))

    def test_scalar_adds_and_merge(self):
        a, b = ComplexAccumulator(), ComplexAccumulator()
        vals = [1e16, 1.0, -1e16, 1.0 + 1j, 1e-3j]
        for v in vals[:3]:
            a.add(v)
        for v in vals[3:]:
            b.add(v)
        a.merge(b)
        assert a.value == complex(2.0, 1.001)

    def test_cancellation_of_unit_terms(self):
        n = 1_000_003
        zs = np.exp(2j * np.pi * np.arange(n) / n)
        acc = ComplexAccumulator()
        acc.add_many(zs)
        # |sum| is only the rounding noise of the inputs themselves
        assert abs(acc.value) < 1e-9


@pytest.mark.parametrize(
    "coeffs, text",
    [([0, 0, 1], "X^2"), ([0, 1, 0, 1], "X^3 + X"), ([-4, 7, 0, -11, 2], "2X^4 - 11X^3 + 7X - 4"), ([1, 0, -1], "-X^2 + 1")],
)
def test_polynomial_str(coeffs, text):
    assert str(IntPolynomial(coeffs)) == text

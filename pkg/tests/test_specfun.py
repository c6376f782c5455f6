import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lrbounds.errors import DomainError
from lrbounds.specfun import (
    LogValue,
    log_beta,
    log_exprel,
    log_gamma,
    log_gen_binom,
    log_multivariate_gamma,
)

mpmath.mp.dps = 40


def oracle_log_gamma(x: float) -> mpmath.mpf:
    return mpmath.loggamma(mpmath.mpf(x))


def oracle_points(count=10_000, seed=20240611):
    """Log-uniform over [1e-6, 1e6] plus a dense band around the zeros at 1 and 2."""
    rng = np.random.default_rng(seed)
    wide = np.exp(rng.uniform(math.log(1e-6), math.log(1e6), count - 1000))
    near = rng.uniform(0.5, 3.0, 1000)
    return np.concatenate([wide, near])


def max_relative_error(xs):
    worst = 0.0
    for x in xs:
        ref = oracle_log_gamma(float(x))
        got = log_gamma(float(x))
        err = abs(mpmath.mpf(got) - ref)
        rel = float(err / abs(ref)) if ref != 0 else float(err)
        worst = max(worst, rel)
    return worst


class TestLogGamma:
    def test_examples(self):
        assert log_gamma(1.0) == 0.0
        assert log_gamma(0.5) == pytest.approx(0.5723649429247001, rel=1e-15)
        assert log_gamma(10.0) == pytest.approx(12.801827480081469, rel=1e-15)

    def test_exact_factorials(self):
        for k in range(1, 60):
            assert log_gamma(float(k + 1)) == pytest.approx(math.log(math.factorial(k)), rel=1e-14, abs=1e-15)

    def test_high_precision_oracle_10k_points(self):
        assert max_relative_error(oracle_points()) <= 1e-13

    def test_vectorised_matches_scalar(self):
        xs = oracle_points(2000, seed=7)
        arr = log_gamma(xs)
        scalars = np.array([log_gamma(float(x)) for x in xs])
        np.testing.assert_allclose(arr, scalars, rtol=2e-15, atol=1e-300)

    @pytest.mark.parametrize("bad", [0.0, -1.0, -0.5, math.inf, math.nan])
    def test_domain(self, bad):
        with pytest.raises(DomainError):
            log_gamma(bad)

    def test_recurrence_grid(self):
        xs = np.linspace(0.1, 100.0, 10_000)
        for x in xs:
            lhs = log_gamma(x + 1) - log_gamma(x) - math.log(x)
            assert abs(lhs) <= 1e-12 * max(1.0, abs(log_gamma(x)))

    @settings(max_examples=300, deadline=None)
    @given(st.floats(min_value=1e-3, max_value=1e5))
    def test_recurrence_property(self, x):
        lhs = log_gamma(x + 1) - log_gamma(x) - math.log(x)
        assert abs(lhs) <= 1e-12 * max(1.0, abs(log_gamma(x)), abs(log_gamma(x + 1)))

    @settings(max_examples=200, deadline=None)
    @given(st.floats(min_value=1e-3, max_value=0.999))
    def test_reflection_property(self, x):
        # Γ(x)Γ(1-x) = π / sin(πx)
        lhs = log_gamma(x) + log_gamma(1 - x)
        rhs = math.log(math.pi / math.sin(math.pi * x))
        assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-12)


class TestLogBeta:
    def test_examples(self):
        assert log_beta(1, 1) == 0.0
        assert log_beta(2, 3) == pytest.approx(-2.4849066497880004, rel=1e-14)
        assert log_beta(2, 3) == pytest.approx(math.log(1 / 12), rel=1e-14)

    @settings(max_examples=300, deadline=None)
    @given(st.floats(min_value=1e-4, max_value=1e4), st.floats(min_value=1e-4, max_value=1e4))
    def test_symmetry_exact(self, a, b):
        assert log_beta(a, b) == log_beta(b, a)

    @settings(max_examples=100, deadline=None)
    @given(st.floats(min_value=1e-2, max_value=200), st.floats(min_value=1e-2, max_value=200))
    def test_against_oracle(self, a, b):
        ref = mpmath.log(mpmath.beta(mpmath.mpf(a), mpmath.mpf(b)))
        assert log_beta(a, b) == pytest.approx(float(ref), rel=1e-12, abs=1e-12)

    @pytest.mark.parametrize("a,b", [(0, 1), (1, -2), (-1, -1)])
    def test_domain(self, a, b):
        with pytest.raises(DomainError):
            log_beta(a, b)


class TestMultivariateGamma:
    def test_examples(self):
        assert log_multivariate_gamma(1, 2.5) == log_gamma(2.5)
        ref = 0.5 * mpmath.log(mpmath.pi) + mpmath.loggamma(2) + mpmath.loggamma(1.5)
        assert log_multivariate_gamma(2, 2.0) == pytest.approx(float(ref), rel=1e-14)
        assert log_multivariate_gamma(2, 2.0) == pytest.approx(0.451582705289455, rel=1e-14)

    def test_domain(self):
        with pytest.raises(DomainError):
            log_multivariate_gamma(2, 0.5)
        with pytest.raises(DomainError):
            log_multivariate_gamma(0, 2.0)

    @settings(max_examples=200, deadline=None)
    @given(st.floats(min_value=1e-3, max_value=1e4))
    def test_p1_reduction(self, a):
        assert log_multivariate_gamma(1, a) == pytest.approx(log_gamma(a), rel=1e-14, abs=1e-300)

    @pytest.mark.parametrize("p", [2, 3, 5])
    def test_against_oracle(self, p):
        for a in (p / 2.0, p + 0.3, 10.0 + p):
            ref = mpmath.mpf(p * (p - 1)) / 4 * mpmath.log(mpmath.pi)
            ref += mpmath.fsum(mpmath.loggamma(mpmath.mpf(a) + mpmath.mpf(1 - j) / 2) for j in range(1, p + 1))
            assert log_multivariate_gamma(p, a) == pytest.approx(float(ref), rel=1e-13)


class TestGenBinom:
    def test_examples(self):
        assert log_gen_binom(3.7, 0).value == 1.0
        assert log_gen_binom(5, 2).value == pytest.approx(10.0, rel=1e-14)
        assert log_gen_binom(2.5, 2).value == pytest.approx(1.875, rel=1e-14)

    def test_integer_table(self):
        for n in range(61):
            for k in range(n + 1):
                lv = log_gen_binom(n, k)
                exact = math.comb(n, k)
                assert lv.sign == 1
                assert abs(lv.log_magnitude - math.log(exact)) <= 1e-12 * max(1.0, math.log(exact))

    def test_zero_and_sign(self):
        # a factor hits zero: C(2, 3) = 0
        assert log_gen_binom(2, 3).sign == 0
        assert log_gen_binom(2, 3).value == 0.0
        # C(-1, k) = (-1)^k
        for k in range(6):
            lv = log_gen_binom(-1, k)
            assert lv.sign == (-1) ** k
            assert lv.value == pytest.approx((-1) ** k, rel=1e-14)

    @settings(max_examples=200, deadline=None)
    @given(st.floats(min_value=-30, max_value=30), st.integers(min_value=0, max_value=20))
    def test_against_product_oracle(self, t, k):
        ref = mpmath.mpf(1)
        for l in range(1, k + 1):
            ref *= (mpmath.mpf(t) - (l - 1)) / l
        lv = log_gen_binom(t, k)
        if ref == 0:
            assert lv.sign == 0
        else:
            assert lv.sign == (1 if ref > 0 else -1)
            assert lv.log_magnitude == pytest.approx(float(mpmath.log(abs(ref))), rel=1e-12, abs=1e-12)


class TestLogValue:
    @settings(max_examples=200, deadline=None)
    @given(st.floats(min_value=-1e300, max_value=1e300).filter(lambda v: v == 0 or abs(v) > 1e-300))
    def test_round_trip(self, x):
        lv = LogValue.from_float(x)
        assert (lv.sign == 0) == (x == 0)
        assert lv.value == pytest.approx(x, rel=1e-12)

    def test_rejects_bad_sign(self):
        with pytest.raises((DomainError, ValueError)):
            LogValue(0.0, 2)


class TestLogExprel:
    @pytest.mark.parametrize("t", [-700.0, -30.0, -1.0, -1e-6, 0.0, 1e-9, 0.3, 2.0, 40.0, 700.0])
    def test_against_oracle(self, t):
        tm = mpmath.mpf(t)
        ref = mpmath.mpf(0) if t == 0 else mpmath.log(mpmath.expm1(tm) / tm)
        assert log_exprel(t) == pytest.approx(float(ref), rel=1e-13, abs=1e-15)

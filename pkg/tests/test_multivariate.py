import itertools
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lrbounds import DistributionSpec
from lrbounds.errors import DimensionError, DomainError
from lrbounds.multivariate import (
    LoewnerQuery,
    OrthantQuery,
    dcm_orthant_bound,
    img_loewner_bound,
    mvn_orthant_bound,
    mvp_balanced_theta,
    mvp_orthant_bound,
)
from lrbounds.registry import evaluate

mpmath.mp.dps = 30


def dcm_pmf(alphas, x):
    """Exact Dirichlet-compound multinomial pmf; x has one count per alpha."""
    a = [mpmath.mpf(v) for v in alphas]
    n = sum(x)
    total = mpmath.loggamma(sum(a)) - mpmath.loggamma(n + sum(a)) + mpmath.loggamma(n + 1)
    for xi, ai in zip(x, a):
        total += mpmath.loggamma(xi + ai) - mpmath.loggamma(ai) - mpmath.loggamma(xi + 1)
    return mpmath.exp(total)


def dcm_orthant_exact(alphas, n, z):
    """P(X_l <= z_l for l >= 1) by summing the pmf over every outcome."""
    k = len(alphas) - 1
    acc = mpmath.mpf(0)
    for rest in itertools.product(range(n + 1), repeat=k):
        if sum(rest) > n:
            continue
        if all(r <= zl for r, zl in zip(rest, z)):
            acc += dcm_pmf(alphas, (n - sum(rest),) + rest)
    return acc


class TestDcm:
    def test_mean_point_is_one(self):
        r = dcm_orthant_bound([2.0, 2.0], 4, [2.0])
        assert abs(r.bound - 1.0) <= 1e-12

    def test_k2_mean_point_is_one(self):
        r = dcm_orthant_bound([1.0, 1.0, 1.0], 6, [2.0, 2.0])
        assert abs(r.bound - 1.0) <= 1e-12

    def test_k1_example(self):
        r = dcm_orthant_bound([2.0, 2.0], 4, [1.0])
        exact = float(dcm_orthant_exact([2.0, 2.0], 4, [1]))
        assert 0.0 < r.bound < 1.0
        assert r.bound >= exact

    def test_k2_example(self):
        r = dcm_orthant_bound([1.0, 1.0, 1.0], 6, [2.0, 2.0])
        outcomes = [c for c in itertools.product(range(7), repeat=3) if sum(c) == 6]
        assert len(outcomes) == 28
        exact = sum(dcm_pmf([1, 1, 1], c) for c in outcomes if c[1] <= 2 and c[2] <= 2)
        assert r.bound >= float(exact)

    def test_pmf_sums_to_one(self):
        for alphas, n in (([2.0, 2.0], 4), ([0.5, 1.5, 2.0], 5)):
            k = len(alphas) - 1
            s = sum(
                dcm_pmf(alphas, (n - sum(r),) + r)
                for r in itertools.product(range(n + 1), repeat=k)
                if sum(r) <= n
            )
            assert float(s) == pytest.approx(1.0, rel=1e-20)

    @pytest.mark.parametrize("alphas", [[2.0, 2.0], [1.0, 3.0], [0.5, 0.5], [3.0, 1.0], [5.0, 2.0]])
    @pytest.mark.parametrize("n", [4, 10, 25])
    def test_k1_dominates_exact_tail(self, alphas, n):
        cap = n * alphas[1] / sum(alphas)
        zs = [z for z in range(1, n) if z <= cap]
        assert zs, "grid must contain at least one valid z"
        for z in zs:
            r = dcm_orthant_bound(alphas, n, [float(z)])
            assert r.valid
            exact = dcm_orthant_exact(alphas, n, [z])
            assert mpmath.mpf(r.bound) >= exact * (1 - 1e-12), (alphas, n, z, r.bound, exact)

    def test_validity(self):
        assert not dcm_orthant_bound([2.0, 2.0], 4, [3.0]).valid
        assert not dcm_orthant_bound([2.0, 2.0], 4, [0.0]).valid
        with pytest.raises(DimensionError):
            dcm_orthant_bound([2.0, 2.0], 4, [1.0, 1.0])
        with pytest.raises(DomainError):
            dcm_orthant_bound([2.0, -1.0], 4, [1.0])

    def test_theta(self):
        r = dcm_orthant_bound([2.0, 1.0, 3.0], 8, [1.0, 2.0])
        assert r.theta_star == pytest.approx((2.0, 2.0 / 5.0, 4.0 / 5.0), rel=1e-15)


class TestImg:
    def test_example(self):
        r = img_loewner_bound(2, 5.0, 0.5)
        ref = mpmath.mpf(2) ** 10 * mpmath.exp(-7)
        assert r.bound == pytest.approx(float(ref), rel=1e-9)
        assert r.bound == pytest.approx(1024 * math.exp(-7.0), rel=1e-15)

    def test_above_one_is_allowed(self):
        r = img_loewner_bound(1, 2.0, 0.5)
        assert r.valid
        assert r.bound == pytest.approx(float(4 * mpmath.exp(-1)), rel=1e-9)

    def test_rho_to_one(self):
        assert img_loewner_bound(3, 4.0, 1 - 1e-12).bound == pytest.approx(1.0, abs=1e-9)

    def test_invalid(self):
        assert not img_loewner_bound(3, 2.0, 0.5).valid
        assert not img_loewner_bound(2, 5.0, 1.0).valid

    @settings(max_examples=200, deadline=None)
    @given(st.integers(1, 6), st.floats(0.05, 0.95), st.floats(0.1, 20.0))
    def test_linear_in_alpha(self, p, rho, step):
        a0 = (p + 1) / 2 + 0.5
        l0 = img_loewner_bound(p, a0, rho).log_bound
        l1 = img_loewner_bound(p, a0 + step, rho).log_bound
        slope = -p * math.log(rho) - p * (1 / rho - 1)
        assert (l1 - l0) / step == pytest.approx(slope, rel=1e-9, abs=1e-9)

    def test_registry_ignores_beta_and_psi(self):
        q = LoewnerQuery(0.6)
        a = evaluate("img_loewner_lower", DistributionSpec("img", {"p": 2, "alpha": 4.0}), q)
        b = evaluate("img_loewner_lower", DistributionSpec(
            "img", {"p": 2, "alpha": 4.0, "beta": 3.0, "psi": [[2.0, 0.5], [0.5, 1.0]]}), q)
        assert a.log_bound == b.log_bound


class TestMvn:
    def test_example(self):
        r = mvn_orthant_bound([0.0, 0.0], np.eye(2), 1, [1.0, 1.0])
        assert r.bound == pytest.approx(math.exp(-1.0), rel=1e-12)
        exact = float(mpmath.ncdf(-1) ** 2)
        assert r.bound >= exact

    def test_log_linear(self):
        r = mvn_orthant_bound([0.0, 0.0], np.eye(2), 3, [1.0, 1.0])
        assert r.bound == pytest.approx(math.exp(-3.0), rel=1e-12)

    @pytest.mark.parametrize("mu,sigma", [
        ([0.0, 0.0], [[1.0, 0.0], [0.0, 1.0]]),
        ([1.0, -2.0, 0.5], [[2.0, 0.3, 0.1], [0.3, 1.0, 0.2], [0.1, 0.2, 1.5]]),
    ])
    def test_mean_point(self, mu, sigma):
        assert abs(mvn_orthant_bound(mu, sigma, 5, mu).bound - 1.0) <= 1e-12

    def test_invalid_direction(self):
        r = mvn_orthant_bound([0.0, 0.0], np.eye(2), 1, [-1.0, 1.0])
        assert not r.valid and "l=1" in r.reason

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            mvn_orthant_bound([0.0, 0.0], np.eye(3), 1, [1.0, 1.0])

    def test_independent_oracle(self):
        # with identity covariance and n = 1 the orthant probability factorises
        for z in ([0.5, 1.5], [2.0, 0.2, 1.0]):
            k = len(z)
            r = mvn_orthant_bound([0.0] * k, np.eye(k), 1, z)
            exact = math.prod(float(mpmath.ncdf(-v)) for v in z)
            assert r.bound >= exact

    @settings(max_examples=100, deadline=None)
    @given(st.permutations([0, 1, 2]), st.integers(0, 10_000))
    def test_permutation_invariance(self, perm, seed):
        rng = np.random.default_rng(seed)
        a = rng.normal(size=(3, 3))
        sigma = a @ a.T + 3 * np.eye(3)
        mu = rng.normal(size=3)
        z = mu + sigma @ rng.uniform(0.0, 1.0, size=3)  # keeps inv(sigma) z >= inv(sigma) mu
        base = mvn_orthant_bound(mu, sigma, 2, z)
        idx = list(perm)
        swapped = mvn_orthant_bound(mu[idx], sigma[np.ix_(idx, idx)], 2, z[idx])
        assert base.valid and swapped.valid
        assert swapped.log_bound == pytest.approx(base.log_bound, rel=1e-12, abs=1e-12)


class TestMvp:
    def test_balanced_example(self):
        r = mvp_orthant_bound(2.0, [1.0], [1.2], 1, "balanced_root")
        theta = 1 / math.log(1.2)
        assert r.theta_star == pytest.approx(theta, rel=1e-12)
        assert r.theta_star == pytest.approx(5.4848, abs=1e-4)
        assert r.bound == pytest.approx((2 / theta) * 1.2 ** (theta - 2), rel=1e-12)
        assert r.bound == pytest.approx(0.6884, abs=1e-4)
        assert r.bound >= 1 - 1.2 ** -2

    def test_mean_based_example(self):
        r = mvp_orthant_bound(2.0, [1.0], [1.5], 1, "mean_based")
        assert r.theta_star == pytest.approx(3.0, rel=1e-15)
        assert r.bound == pytest.approx(1.0, rel=1e-15)

    def test_direct_near_alpha(self):
        r = mvp_orthant_bound(2.0, [1.0, 2.0], [1.3, 2.5], 2, "direct", theta=2.0 + 1e-10)
        assert r.bound == pytest.approx(1.0, abs=1e-8)

    def test_balanced_root_solves_equation(self):
        a, b, z = 3.0, [1.0, 2.0], [1.2, 2.4]
        t = mvp_balanced_theta(a, b, z)
        rhs = math.log(1 - 2 + sum(zi / bi for zi, bi in zip(z, b)))
        assert abs(1 / t + 1 / (t + 1) - rhs) <= 1e-12
        assert t > a

    @pytest.mark.parametrize("alpha,betas,z", [
        (2.0, [1.0], [1.1]),
        (2.0, [1.0], [1.4]),
        (3.0, [1.0, 2.0], [1.2, 2.4]),
        (1.5, [1.0, 1.0, 1.0], [1.3, 1.3, 1.3]),
    ])
    @pytest.mark.parametrize("n", [1, 4])
    def test_balanced_below_direct(self, alpha, betas, z, n):
        bal = mvp_orthant_bound(alpha, betas, z, n, "balanced_root")
        assert bal.valid
        for t in np.linspace(alpha + 1e-3, alpha + 60.0, 400):
            direct = mvp_orthant_bound(alpha, betas, z, n, "direct", theta=float(t))
            assert bal.log_bound <= direct.log_bound + 1e-12 * max(1.0, abs(direct.log_bound))

    def test_k1_dominates_exact_cdf(self):
        alpha = 2.0
        for z in (1.05, 1.2, 1.5, 1.9):
            r = mvp_orthant_bound(alpha, [1.0], [z], 1, "best")
            if r.valid:
                assert r.bound >= 1 - z ** -alpha

    def test_best_is_minimum(self):
        args = (3.0, [1.0, 2.0], [1.2, 2.4], 3)
        best = mvp_orthant_bound(*args, "best", theta=4.0)
        each = [mvp_orthant_bound(*args, s, theta=4.0) for s in ("balanced_root", "mean_based", "direct")]
        assert best.log_bound == min(r.log_bound for r in each if r.valid)

    def test_preconditions_named(self):
        r = mvp_orthant_bound(0.5, [1.0], [1.5], 1, "mean_based")
        assert not r.valid and "alpha > 1" in r.reason
        assert not mvp_orthant_bound(2.0, [1.0], [1.5], 1, "direct", theta=1.0).valid
        assert not mvp_orthant_bound(2.0, [1.0], [0.5], 1).valid
        with pytest.raises(DomainError):
            mvp_orthant_bound(2.0, [1.0], [1.5], 1, "nope")
        with pytest.raises(DomainError):
            mvp_orthant_bound(2.0, [1.0], [1.5], 1, "direct")

    def test_registry_strategy(self):
        spec = DistributionSpec("mvp", {"alpha": 2.0, "betas": [1.0]})
        q = OrthantQuery((1.5,), 1, "lower_orthant")
        r = evaluate("mvp_lower_orthant", spec, q, strategy="mean_based")
        assert r.bound == pytest.approx(1.0, rel=1e-15)

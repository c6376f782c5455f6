import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from lrbounds.errors import DimensionError, NotPositiveDefiniteError
from lrbounds.smallmat import PIVOT_TOL, cholesky, log_det, loewner_leq, spd_solve

SPD = np.array([[4.0, 2.0], [2.0, 3.0]])


def random_spd(rng, p):
    a = rng.normal(size=(p, p))
    return a @ a.T + p * np.eye(p)


class TestCholesky:
    def test_identity(self):
        np.testing.assert_array_equal(cholesky(np.eye(3)), np.eye(3))

    def test_hand_example(self):
        np.testing.assert_allclose(cholesky(SPD), [[2, 0], [1, math.sqrt(2)]], atol=1e-15)

    def test_indefinite(self):
        with pytest.raises(NotPositiveDefiniteError):
            cholesky([[1, 2], [2, 1]])

    def test_asymmetric(self):
        with pytest.raises(DimensionError):
            cholesky([[1, 0.5], [0.0, 1]])

    def test_not_square(self):
        with pytest.raises(DimensionError):
            cholesky(np.ones((2, 3)))

    @pytest.mark.parametrize("p", [1, 2, 5, 20, 50])
    def test_reconstruction(self, p):
        m = random_spd(np.random.default_rng(p), p)
        l = cholesky(m)
        assert np.allclose(np.triu(l, 1), 0)
        assert np.max(np.abs(l @ l.T - m)) <= 1e-10 * np.linalg.norm(m)


class TestLogDet:
    def test_examples(self):
        assert log_det(np.eye(4)) == 0.0
        assert log_det(SPD) == pytest.approx(math.log(8), rel=1e-14)
        assert log_det(np.diag([2.0, 3.0])) == pytest.approx(math.log(6), rel=1e-14)

    def test_against_slogdet(self):
        m = random_spd(np.random.default_rng(3), 6)
        assert log_det(m) == pytest.approx(np.linalg.slogdet(m)[1], rel=1e-10)


class TestSolve:
    def test_examples(self):
        np.testing.assert_allclose(spd_solve(np.eye(3), [1, 2, 3]), [1, 2, 3])
        np.testing.assert_allclose(spd_solve(SPD, [1, 0]), [0.375, -0.25], atol=1e-15)
        np.testing.assert_allclose(spd_solve(np.diag([2.0, 4.0]), [2, 4]), [1, 1])

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            spd_solve(SPD, [1, 2, 3])

    @settings(max_examples=50, deadline=None)
    @given(st.integers(1, 8), st.integers(0, 2**32 - 1))
    def test_residual(self, p, seed):
        rng = np.random.default_rng(seed)
        m = random_spd(rng, p)
        v = rng.normal(size=p)
        x = spd_solve(m, v)
        assert np.linalg.norm(m @ x - v) <= 1e-9 * max(np.linalg.norm(v), 1e-300)


class TestLoewner:
    def test_examples(self):
        assert loewner_leq(np.eye(2), 2 * np.eye(2)) is True
        assert loewner_leq(2 * np.eye(2), np.eye(2)) is False

    def test_boundary_is_not_ordered(self):
        # difference [[1,1],[1,1]] has eigenvalues 2 and 0: singular, so strict order fails
        assert loewner_leq(np.eye(2), [[2, 1], [1, 2]]) is False

    def test_tolerance_is_configurable(self):
        b = np.eye(2) + np.diag([1.0, 1e-12])
        assert loewner_leq(np.eye(2), b) is False
        assert loewner_leq(np.eye(2), b, pivot_tol=1e-14) is True
        assert PIVOT_TOL == 1e-10

    def test_equal_is_not_ordered(self):
        assert loewner_leq(SPD, SPD) is False

    def test_shape_mismatch(self):
        with pytest.raises(DimensionError):
            loewner_leq(np.eye(2), np.eye(3))

    @settings(max_examples=100, deadline=None)
    @given(
        arrays(float, (3, 3), elements=st.floats(-2, 2)),
        arrays(float, (3, 3), elements=st.floats(-2, 2)),
    )
    def test_antisymmetry(self, x, y):
        a, b = x + x.T, y + y.T
        if np.array_equal(a, b):
            return
        assert not (loewner_leq(a, b) and loewner_leq(b, a))

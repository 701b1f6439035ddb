import numpy as np
import pytest

from acdckit.iht import iht_polish
from acdckit.numeric import SeededRng, gaussian_matrix
from acdckit.objective import LeastSquares, restricted_gradient
from acdckit.sparsity import Mask


class _Recording(LeastSquares):
    def __init__(self, A, b):
        LeastSquares.__init__(self, A, b)
        self.values = []

    def _value(self, theta):
        value = LeastSquares._value(self, theta)
        self.values.append(value)
        return value


@pytest.mark.unittest
class TestIhtPolish:
    def test_already_stationary(self):
        obj = LeastSquares(np.eye(3), [1.0, 2.0, 3.0])
        theta = np.array([1.0, 2.0, 0.0])
        result = iht_polish(obj, theta, Mask.from_indices(3, [0, 1]), 1e-9, 100)
        assert result.steps == 0
        assert result.converged
        assert np.array_equal(result.theta, theta)
        assert result.grad_norm_inf == 0.0

    def test_full_mask(self):
        rng = SeededRng(0)
        A = gaussian_matrix(30, 8, 1.0, rng)
        obj = LeastSquares(A, rng.normal(30))
        result = iht_polish(obj, np.zeros(8), Mask.ones(8), 1e-9, 20000, rng=SeededRng(1))
        assert result.converged
        expected, *_ = np.linalg.lstsq(A, obj.b, rcond=None)
        np.testing.assert_allclose(result.theta, expected, atol=1e-8)

    def test_separable_restricted(self):
        d = np.array([1.0, 2.0, 3.0, 4.0, 5.0, 6.0])
        obj = LeastSquares(np.diag(d), np.arange(1.0, 7.0))
        m = Mask.from_indices(6, [0, 2, 4])
        result = iht_polish(obj, np.zeros(6), m, 1e-12, 10000, step_size=1.0 / (2 * 36.0))
        expected = np.zeros(6)
        expected[[0, 2, 4]] = obj.b[[0, 2, 4]] / d[[0, 2, 4]]
        np.testing.assert_allclose(result.theta, expected, atol=1e-8)
        assert np.all(result.theta[[1, 3, 5]] == 0.0)

    def test_not_converged(self):
        rng = SeededRng(2)
        obj = LeastSquares(gaussian_matrix(20, 6, 1.0, rng), rng.normal(20))
        result = iht_polish(obj, np.zeros(6), Mask.ones(6), 1e-14, 2, rng=rng)
        assert result.steps == 2
        assert not result.converged
        assert result.grad_norm_inf > 1e-14
        assert result.grad_norm_l2 >= result.grad_norm_inf

    def test_halving(self):
        obj = LeastSquares(np.eye(2), [1.0, 1.0])
        result = iht_polish(obj, np.zeros(2), Mask.ones(2), 1e-10, 200, step_size=100.0)
        assert result.converged
        np.testing.assert_allclose(result.theta, [1.0, 1.0], atol=1e-9)

    def test_step_regrows(self):
        rng = SeededRng(3)
        A = gaussian_matrix(40, 10, 1.0, rng)
        obj = LeastSquares(A, rng.normal(40))
        result = iht_polish(obj, np.zeros(10), Mask.ones(10), 1e-11, 5000, step_size=10.0)
        assert result.converged
        expected, *_ = np.linalg.lstsq(A, obj.b, rcond=None)
        np.testing.assert_allclose(result.theta, expected, atol=1e-9)

    @pytest.mark.parametrize('seed', range(5))
    def test_monotone_steps(self, seed):
        rng = SeededRng(seed)
        A = gaussian_matrix(25, 12, 1.0, rng)
        obj = LeastSquares(A, rng.normal(25))
        mask = Mask.from_indices(12, [0, 3, 4, 7, 10])
        theta = np.where(mask.bits, rng.normal(12), 0.0)

        values = [obj.value(theta)]
        for max_inner in range(1, 31):
            result = iht_polish(obj, theta, mask, 1e-12, max_inner, rng=SeededRng(100 + seed))
            values.append(result.f_value)
        for before, after in zip(values, values[1:]):
            assert after <= before + 1e-12 * max(1.0, abs(before))

    @pytest.mark.parametrize('seed', range(100))
    def test_convex_instances(self, seed):
        rng = SeededRng(seed)
        m_rows, n = 25, 12
        obj = _Recording(gaussian_matrix(m_rows, n, 1.0, rng), rng.normal(m_rows))
        mask = Mask.from_indices(n, rng.choice(n, 5))
        theta = np.where(mask.bits, rng.normal(n), 0.0)
        eps = 1e-6
        result = iht_polish(obj, theta, mask, eps, 500, rng=rng)

        g = restricted_gradient(obj, result.theta, mask)
        if result.converged:
            assert np.max(np.abs(g)) <= eps
        else:
            assert result.steps == 500
        assert np.all(result.theta[~mask.bits] == 0.0)
        assert result.f_value == pytest.approx(obj.value(result.theta))
        assert result.f_value <= obj.values[0]
        assert min(obj.values) <= result.f_value + 1e-12 * max(1.0, abs(result.f_value))

    def test_invalid(self):
        obj = LeastSquares(np.eye(3), [1.0, 2.0, 3.0])
        with pytest.raises(ValueError):
            iht_polish(obj, np.ones(3), Mask.from_indices(3, [0]), 1e-6, 10)
        with pytest.raises(ValueError):
            iht_polish(obj, np.zeros(2), Mask.ones(3), 1e-6, 10)
        with pytest.raises(ValueError):
            iht_polish(obj, np.zeros(3), Mask.ones(3), 0.0, 10)

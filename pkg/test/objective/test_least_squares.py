import numpy as np
import pytest

from acdckit.numeric import SeededRng, gaussian_matrix
from acdckit.objective import LeastSquares, ls_value_grad
from .gradcheck import numeric_gradient, relative_gap


def _problem(m=30, n=12, seed=0):
    rng = SeededRng(seed)
    return LeastSquares(gaussian_matrix(m, n, 1.0, rng), rng.normal(m)), rng


@pytest.mark.unittest
class TestObjectiveLeastSquares:
    def test_value_grad(self):
        obj = LeastSquares(np.eye(2), [1, 2])
        value, grad = ls_value_grad(obj, np.zeros(2))
        assert value == 5.0
        assert grad.tolist() == [-2.0, -4.0]
        assert obj.residual([1.0, 0.0]).tolist() == [0.0, 2.0]
        assert obj.optimum_value is None
        assert LeastSquares(np.eye(2), [1, 2], optimum_value=0).optimum_value == 0.0

    def test_finite_difference(self):
        obj, rng = _problem()
        theta = rng.normal(obj.dim)
        assert relative_gap(obj.gradient(theta), numeric_gradient(obj.value, theta)) <= 1e-5

    def test_partition_average(self):
        obj, rng = _problem(m=40)
        theta = rng.normal(obj.dim)
        order = rng.permutation(obj.sample_count)
        batches = np.split(order, 8)
        mean = np.mean([obj.stochastic_gradient(theta, b) for b in batches], axis=0)
        assert np.allclose(mean, obj.gradient(theta), rtol=0.0, atol=1e-12 * max(1.0, np.abs(mean).max()))

    def test_per_sample_gradients(self):
        obj, rng = _problem(m=10)
        theta = rng.normal(obj.dim)
        rows = obj.per_sample_gradients(theta, np.arange(10))
        assert rows.shape == (10, obj.dim)
        assert np.allclose(rows.mean(axis=0), obj.gradient(theta))
        assert np.allclose(obj.stochastic_gradient(theta, [3]), rows[3])

    def test_smoothness_bound(self):
        obj, _ = _problem()
        eigen = np.linalg.eigvalsh(obj.A.T @ obj.A).max()
        assert obj.smoothness_bound() == pytest.approx(2 * eigen)

    def test_invalid(self):
        obj, _ = _problem()
        with pytest.raises(ValueError):
            obj.value(np.zeros(obj.dim + 1))
        with pytest.raises(ValueError):
            obj.stochastic_gradient(np.zeros(obj.dim), [])
        with pytest.raises(IndexError):
            obj.stochastic_gradient(np.zeros(obj.dim), [obj.sample_count])
        with pytest.raises(ValueError):
            LeastSquares(np.eye(3), [1.0, 2.0])

    def test_repr(self):
        obj, _ = _problem(m=30, n=12)
        assert repr(obj) == '<LeastSquares samples: 30, dim: 12>'

import numpy as np
import pytest

from acdckit.numeric import SeededRng, gaussian_matrix
from acdckit.objective import LeastSquares, LinearObjective, restricted_gradient, stochastic_gradient
from acdckit.sparsity import Mask


@pytest.mark.unittest
class TestObjectiveBase:
    def test_stochastic_gradient(self):
        rng = SeededRng(0)
        obj = LeastSquares(gaussian_matrix(12, 5, 1.0, rng), rng.normal(12))
        theta = rng.normal(5)
        assert np.array_equal(stochastic_gradient(obj, theta, [1, 4]), obj.stochastic_gradient(theta, [1, 4]))
        assert np.allclose(stochastic_gradient(obj, theta, np.arange(12)), obj.gradient(theta))

    def test_restricted_gradient(self):
        rng = SeededRng(1)
        obj = LeastSquares(gaussian_matrix(12, 6, 1.0, rng), rng.normal(12))
        theta = rng.normal(6)
        m = Mask.from_indices(6, [0, 3])
        g = restricted_gradient(obj, theta, m)
        full = obj.gradient(theta)
        assert g[[0, 3]].tolist() == full[[0, 3]].tolist()
        assert np.all(g[[1, 2, 4, 5]] == 0.0)

        gb = restricted_gradient(obj, theta, m, batch=[2, 5])
        assert np.all(gb[[1, 2, 4, 5]] == 0.0)
        assert np.allclose(gb[[0, 3]], obj.stochastic_gradient(theta, [2, 5])[[0, 3]])

    def test_linear_objective(self):
        obj = LinearObjective([3.0, 4.0])
        assert obj.dim == 2
        assert obj.sample_count == 1
        assert obj.value([1.0, 1.0]) == 7.0
        assert obj.gradient([5.0, -2.0]).tolist() == [3.0, 4.0]
        assert obj.stochastic_gradient([0.0, 0.0], [0]).tolist() == [3.0, 4.0]
        assert obj.per_sample_gradients([0.0, 0.0], [0, 0]).tolist() == [[3.0, 4.0], [3.0, 4.0]]
        with pytest.raises(IndexError):
            obj.stochastic_gradient([0.0, 0.0], [1])

    def test_value_and_gradient(self):
        obj = LeastSquares(np.eye(2), [1.0, 2.0])
        value, grad = obj.value_and_gradient([0.0, 0.0])
        assert value == 5.0
        assert grad.tolist() == [-2.0, -4.0]

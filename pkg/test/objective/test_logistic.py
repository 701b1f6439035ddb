import numpy as np
import pytest

from acdckit.data import gaussian_blobs
from acdckit.numeric import SeededRng
from acdckit.objective import LogisticMulti, Mlp
from .gradcheck import numeric_gradient, relative_gap


def _objective(l2=0.0, seed=0):
    data = gaussian_blobs(5, 3, 24, 1.0, SeededRng(seed))
    return LogisticMulti(data.X, data.y, data.classes, l2=l2), data


@pytest.mark.unittest
class TestObjectiveLogistic:
    def test_basic(self):
        obj = LogisticMulti(np.ones((4, 3)), [0, 1, 1, 0], 2)
        assert obj.dim == 8
        assert obj.features == 3
        assert obj.value(np.zeros(8)) == pytest.approx(np.log(2))
        assert obj.template().names == ['layer0.weight', 'layer0.bias']
        assert obj.template().prunable_count == 6

    @pytest.mark.parametrize('l2', [0.0, 0.1])
    def test_finite_difference(self, l2):
        obj, _ = _objective(l2)
        theta = SeededRng(1).normal(obj.dim, 0.5)
        assert relative_gap(obj.gradient(theta), numeric_gradient(obj.value, theta)) <= 1e-5

    def test_partition_average(self):
        obj, _ = _objective(0.05)
        rng = SeededRng(2)
        theta = rng.normal(obj.dim)
        batches = np.split(rng.permutation(obj.sample_count), 6)
        mean = np.mean([obj.stochastic_gradient(theta, b) for b in batches], axis=0)
        assert np.allclose(mean, obj.gradient(theta), rtol=0.0, atol=1e-12)

        rows = obj.per_sample_gradients(theta, np.arange(obj.sample_count))
        assert np.allclose(rows.mean(axis=0), obj.gradient(theta), rtol=0.0, atol=1e-12)

    def test_same_as_linear_mlp(self):
        obj, data = _objective(0.1)
        theta = SeededRng(3).normal(obj.dim)
        model = Mlp([data.features, data.classes], l2=0.1)
        loss, grad = model.value_grad_flat(theta, data.X, data.y)
        assert loss == pytest.approx(obj.value(theta), abs=1e-12)
        assert np.allclose(grad, obj.gradient(theta), rtol=0.0, atol=1e-12)

    def test_separable_blobs(self):
        data = gaussian_blobs(20, 5, 100, 0.0, SeededRng(4))
        obj = LogisticMulti(data.X, data.y, data.classes)
        theta = np.zeros(obj.dim)
        for _ in range(2000):
            theta = theta - 0.05 * obj.gradient(theta)
        model = Mlp([20, 5])
        params = model.template().with_flat(theta)
        assert model.accuracy(params, data) == 1.0

    def test_invalid(self):
        with pytest.raises(ValueError):
            LogisticMulti(np.ones((4, 3)), [0, 1, 1], 2)
        with pytest.raises(ValueError):
            LogisticMulti(np.ones((4, 3)), [0, 1, 1, 0], 1)
        with pytest.raises(ValueError):
            LogisticMulti(np.ones((4, 3)), [0, 1, 2, 0], 2)
        with pytest.raises(ValueError):
            LogisticMulti(np.ones((4, 3)), [0, 1, 1, 0], 2, l2=-1.0)

    def test_repr(self):
        assert repr(LogisticMulti(np.ones((4, 3)), [0, 1, 1, 0], 2)) == \
               '<LogisticMulti samples: 4, features: 3, classes: 2>'
        assert repr(LogisticMulti(np.ones((4, 3)), [0, 1, 1, 0], 2, 0.5)) == \
               '<LogisticMulti samples: 4, features: 3, classes: 2, l2: 0.5>'

"""
Overview:
    Feed-forward ReLU network with softmax cross-entropy loss.

    Parameters are stored as a :class:`acdckit.numeric.ParamSet` with segments \
    ``layer{i}.weight`` (shape ``(in, out)``, prunable) and ``layer{i}.bias`` (shape ``(out,)``, not prunable).
"""
from typing import List, Sequence, Tuple

import numpy as np
from hbutils.model import get_repr_info

from .base import Objective
from ..data import Dataset
from ..numeric import ParamSet, Segment, SeededRng, assert_finite

__all__ = [
    'Mlp', 'ModelObjective',
    'log_softmax', 'mlp_value_grad',
]


def log_softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max(axis=1, keepdims=True)
    return shifted - np.log(np.exp(shifted).sum(axis=1, keepdims=True))


class Mlp:
    """
    Overview:
        Multi-layer perceptron with ReLU hidden layers. The subgradient of ReLU at ``0`` is ``0``.

    Examples::
        >>> from acdckit.objective import Mlp
        >>> model = Mlp([20, 64, 5])
        >>> model.template().names
        ['layer0.weight', 'layer0.bias', 'layer1.weight', 'layer1.bias']
    """

    def __init__(self, widths: Sequence[int], l2: float = 0.0):
        """
        Constructor of :class:`Mlp`.

        :param widths: Layer widths, from input features to class count. At least 2 items.
        :param l2: Coefficient of the ``l2 / 2 * |W|^2`` penalty on weights.
        """
        widths = [int(w) for w in widths]
        if len(widths) < 2 or any(w < 1 for w in widths):
            raise ValueError(f'At least 2 positive widths expected but {widths!r} found.')
        if widths[-1] < 2:
            raise ValueError(f'At least 2 classes expected but {widths[-1]!r} found.')
        if not l2 >= 0:
            raise ValueError(f'Non-negative l2 coefficient expected but {l2!r} found.')
        self.__widths = tuple(widths)
        self.__l2 = float(l2)

    @property
    def widths(self) -> List[int]:
        return list(self.__widths)

    @property
    def l2(self) -> float:
        return self.__l2

    @property
    def features(self) -> int:
        return self.__widths[0]

    @property
    def classes(self) -> int:
        return self.__widths[-1]

    @property
    def depth(self) -> int:
        return len(self.__widths) - 1

    def _shapes(self) -> List[Tuple[str, Tuple[int, ...], bool]]:
        shapes = []
        for i, (n_in, n_out) in enumerate(zip(self.__widths[:-1], self.__widths[1:])):
            shapes.append((f'layer{i}.weight', (n_in, n_out), True))
            shapes.append((f'layer{i}.bias', (n_out,), False))
        return shapes

    @property
    def dim(self) -> int:
        return sum(int(np.prod(shape)) for _, shape, _ in self._shapes())

    def template(self) -> ParamSet:
        """
        Overview:
            All-zero parameter set with the layout of this model.
        """
        return ParamSet([Segment(name, np.zeros(shape), prunable) for name, shape, prunable in self._shapes()])

    def init_params(self, rng: SeededRng) -> ParamSet:
        """
        Overview:
            Gaussian scaled initialization, weights ``N(0, 2 / fan_in)`` and zero biases.
        """
        segments = []
        for name, shape, prunable in self._shapes():
            if prunable:
                segments.append(Segment(name, rng.normal(shape, np.sqrt(2.0 / shape[0])), True))
            else:
                segments.append(Segment(name, np.zeros(shape), False))
        return ParamSet(segments)

    def _unpack(self, flat: np.ndarray) -> List[Tuple[np.ndarray, np.ndarray]]:
        if flat.shape != (self.dim,):
            raise ValueError(f'Parameter vector of length {self.dim!r} expected but shape {flat.shape!r} found.')
        layers, offset = [], 0
        for n_in, n_out in zip(self.__widths[:-1], self.__widths[1:]):
            W = flat[offset:offset + n_in * n_out].reshape(n_in, n_out)
            offset += n_in * n_out
            b = flat[offset:offset + n_out]
            offset += n_out
            layers.append((W, b))
        return layers

    def _check_inputs(self, X, y=None):
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != self.features:
            raise ValueError(f'Inputs of shape (n, {self.features!r}) expected but {X.shape!r} found.')
        if y is not None:
            y = np.asarray(y, dtype=np.int64)
            if y.shape != (X.shape[0],):
                raise ValueError(f'Labels of shape {(X.shape[0],)!r} expected but {y.shape!r} found.')
            if X.shape[0] == 0:
                raise ValueError('Non-empty batch expected but empty batch found.')
            if y.min() < 0 or y.max() >= self.classes:
                raise ValueError(f'Labels in [0, {self.classes!r}) expected but '
                                 f'[{int(y.min())!r}, {int(y.max())!r}] found.')
        return X, y

    def logits_flat(self, flat: np.ndarray, X) -> np.ndarray:
        X, _ = self._check_inputs(X)
        a = X
        layers = self._unpack(flat)
        for i, (W, b) in enumerate(layers):
            z = a @ W + b
            a = np.maximum(z, 0.0) if i < len(layers) - 1 else z
        return a

    def value_grad_flat(self, flat: np.ndarray, X, y) -> Tuple[float, np.ndarray]:
        """
        Overview:
            Mean cross-entropy plus weight penalty, and its gradient, over a flat parameter vector.
        """
        X, y = self._check_inputs(X, y)
        n = X.shape[0]
        layers = self._unpack(flat)

        activations, pre_activations = [X], []
        a = X
        for i, (W, b) in enumerate(layers):
            z = a @ W + b
            pre_activations.append(z)
            a = np.maximum(z, 0.0) if i < len(layers) - 1 else z
            activations.append(a)

        log_p = log_softmax(activations[-1])
        loss = -float(log_p[np.arange(n), y].mean())
        if self.__l2:
            loss += 0.5 * self.__l2 * sum(float(np.sum(W * W)) for W, _ in layers)

        delta = np.exp(log_p)
        delta[np.arange(n), y] -= 1.0
        delta /= n

        grads = []
        for i in range(len(layers) - 1, -1, -1):
            W, _ = layers[i]
            gW = activations[i].T @ delta
            if self.__l2:
                gW = gW + self.__l2 * W
            gb = delta.sum(axis=0)
            grads.append((gW, gb))
            if i > 0:
                delta = (delta @ W.T) * (pre_activations[i - 1] > 0.0)

        grad = np.concatenate([part.reshape(-1) for gW, gb in reversed(grads) for part in (gW, gb)])
        return float(assert_finite(loss, 'loss')), assert_finite(grad, 'gradient')

    def value_grad(self, params: ParamSet, X, y) -> Tuple[float, ParamSet]:
        self._check_params(params)
        loss, grad = self.value_grad_flat(params.flat(), X, y)
        return loss, params.with_flat(grad)

    def _check_params(self, params: ParamSet):
        if not params.same_layout(self.template()):
            raise ValueError(f'Parameters with layout of {self!r} expected but {params!r} found.')

    def predict_proba(self, params: ParamSet, X) -> np.ndarray:
        self._check_params(params)
        return np.exp(log_softmax(self.logits_flat(params.flat(), X)))

    def predict(self, params: ParamSet, X) -> np.ndarray:
        self._check_params(params)
        return np.argmax(self.logits_flat(params.flat(), X), axis=1)

    def accuracy(self, params: ParamSet, data: Dataset) -> float:
        if len(data) == 0:
            raise ValueError('Non-empty dataset expected but empty dataset found.')
        return float(np.mean(self.predict(params, data.X) == data.y))

    def __eq__(self, other):
        return isinstance(other, Mlp) and (self.__widths, self.__l2) == (other.__widths, other.__l2)

    def __hash__(self):
        return hash((self.__widths, self.__l2))

    def __repr__(self):
        return get_repr_info(
            cls=self.__class__,
            args=[
                ('widths', lambda: list(self.__widths)),
                ('l2', lambda: self.__l2, lambda: bool(self.__l2)),
            ]
        )


def mlp_value_grad(model: Mlp, params: ParamSet, batch: Dataset) -> Tuple[float, ParamSet]:
    """
    Overview:
        Loss and exact gradient of ``model`` on a dataset slice.

    Examples::
        >>> import numpy as np
        >>> from acdckit.data import Dataset
        >>> from acdckit.objective import Mlp, mlp_value_grad
        >>> model = Mlp([2, 3])
        >>> loss, _ = mlp_value_grad(model, model.template(), Dataset(np.ones((4, 2)), [0, 1, 2, 0], 3))
        >>> round(loss, 12) == round(float(np.log(3)), 12)
        True
    """
    return model.value_grad(params, batch.X, batch.y)


class ModelObjective(Objective):
    """
    Overview:
        Objective view of a model bound to a dataset, over the full flat parameter vector.
    """

    def __init__(self, model: Mlp, data: Dataset):
        if data.features != model.features:
            raise ValueError(f'Dataset with {model.features!r} features expected but {data.features!r} found.')
        if data.classes > model.classes:
            raise ValueError(f'Dataset with at most {model.classes!r} classes expected '
                             f'but {data.classes!r} found.')
        self.__model = model
        self.__data = data

    @property
    def model(self) -> Mlp:
        return self.__model

    @property
    def data(self) -> Dataset:
        return self.__data

    @property
    def dim(self) -> int:
        return self.__model.dim

    @property
    def sample_count(self) -> int:
        return len(self.__data)

    def _value(self, theta: np.ndarray) -> float:
        return self.__model.value_grad_flat(theta, self.__data.X, self.__data.y)[0]

    def _gradient(self, theta: np.ndarray) -> np.ndarray:
        return self.__model.value_grad_flat(theta, self.__data.X, self.__data.y)[1]

    def _batch_gradient(self, theta: np.ndarray, batch: np.ndarray) -> np.ndarray:
        return self.__model.value_grad_flat(theta, self.__data.X[batch], self.__data.y[batch])[1]

    def _per_sample_gradients(self, theta: np.ndarray, batch: np.ndarray) -> np.ndarray:
        return np.stack([self._batch_gradient(theta, batch[i:i + 1]) for i in range(batch.shape[0])])

    def __repr__(self):
        return get_repr_info(
            cls=self.__class__,
            args=[
                ('model', lambda: self.__model),
                ('samples', lambda: self.sample_count),
            ]
        )

"""
Overview:
    Multinomial logistic regression.
"""
import numpy as np
from hbutils.model import get_repr_info

from .base import Objective
from .mlp import log_softmax
from ..numeric import ParamSet, Segment, as_matrix

__all__ = [
    'LogisticMulti',
]


class LogisticMulti(Objective):
    """
    Overview:
        Mean softmax cross-entropy of a linear classifier plus ``l2 / 2 * |W|^2``. \
        The flat parameter vector is ``W`` (shape ``(features, classes)``, row-major) followed by \
        the bias ``b`` (shape ``(classes,)``), the same layout as a :class:`Mlp` without hidden layers.

    Examples::
        >>> import numpy as np
        >>> from acdckit.objective import LogisticMulti
        >>> obj = LogisticMulti(np.ones((4, 3)), [0, 1, 1, 0], 2)
        >>> obj.dim
        8
    """

    def __init__(self, X, y, classes: int, l2: float = 0.0):
        X = as_matrix(X, name='features')
        y = np.asarray(y, dtype=np.int64)
        if y.shape != (X.shape[0],):
            raise ValueError(f'Labels of shape {(X.shape[0],)!r} expected but {y.shape!r} found.')
        if classes < 2:
            raise ValueError(f'At least 2 classes expected but {classes!r} found.')
        if y.size and (y.min() < 0 or y.max() >= classes):
            raise ValueError(f'Labels in [0, {classes!r}) expected.')
        if not l2 >= 0:
            raise ValueError(f'Non-negative l2 coefficient expected but {l2!r} found.')
        X.setflags(write=False)
        y.setflags(write=False)
        self.__X = X
        self.__y = y
        self.__classes = int(classes)
        self.__l2 = float(l2)

    @property
    def X(self) -> np.ndarray:
        return self.__X

    @property
    def y(self) -> np.ndarray:
        return self.__y

    @property
    def classes(self) -> int:
        return self.__classes

    @property
    def l2(self) -> float:
        return self.__l2

    @property
    def features(self) -> int:
        return int(self.__X.shape[1])

    @property
    def dim(self) -> int:
        return (self.features + 1) * self.__classes

    @property
    def sample_count(self) -> int:
        return int(self.__X.shape[0])

    def template(self) -> ParamSet:
        return ParamSet([
            Segment('layer0.weight', np.zeros((self.features, self.__classes)), True),
            Segment('layer0.bias', np.zeros(self.__classes), False),
        ])

    def _split(self, theta: np.ndarray):
        d, c = self.features, self.__classes
        return theta[:d * c].reshape(d, c), theta[d * c:]

    def _terms(self, theta: np.ndarray, rows: np.ndarray):
        W, b = self._split(theta)
        X, y = self.__X[rows], self.__y[rows]
        log_p = log_softmax(X @ W + b)
        ce = -log_p[np.arange(rows.shape[0]), y]
        residual = np.exp(log_p)
        residual[np.arange(rows.shape[0]), y] -= 1.0
        return W, X, ce, residual

    def _penalty(self, W: np.ndarray) -> float:
        return 0.5 * self.__l2 * float(np.sum(W * W))

    def _value(self, theta: np.ndarray) -> float:
        W, _, ce, _ = self._terms(theta, np.arange(self.sample_count))
        return float(ce.mean()) + self._penalty(W)

    def _batch_gradient(self, theta: np.ndarray, batch: np.ndarray) -> np.ndarray:
        W, X, _, residual = self._terms(theta, batch)
        gW = X.T @ residual / batch.shape[0] + self.__l2 * W
        gb = residual.mean(axis=0)
        return np.concatenate([gW.reshape(-1), gb])

    def _gradient(self, theta: np.ndarray) -> np.ndarray:
        return self._batch_gradient(theta, np.arange(self.sample_count))

    def _per_sample_gradients(self, theta: np.ndarray, batch: np.ndarray) -> np.ndarray:
        W, X, _, residual = self._terms(theta, batch)
        gW = X[:, :, None] * residual[:, None, :] + self.__l2 * W[None, :, :]
        return np.concatenate([gW.reshape(batch.shape[0], -1), residual], axis=1)

    def __repr__(self):
        return get_repr_info(
            cls=self.__class__,
            args=[
                ('samples', lambda: self.sample_count),
                ('features', lambda: self.features),
                ('classes', lambda: self.__classes),
                ('l2', lambda: self.__l2, lambda: bool(self.__l2)),
            ]
        )

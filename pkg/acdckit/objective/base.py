"""
Overview:
    Objective interface with full and mini-batch stochastic gradient oracles.

    Every objective is a mean over its samples, ``f = mean_i f_i``, so the mini-batch gradient \
    is an unbiased estimate of the full gradient.
"""
from abc import ABCMeta, abstractmethod
from typing import Optional, Tuple

import numpy as np

from ..numeric import assert_finite
from ..sparsity import Mask, apply_mask

__all__ = [
    'Objective',
    'stochastic_gradient', 'restricted_gradient',
]


class Objective(metaclass=ABCMeta):
    """
    Overview:
        Base class of objectives over flat parameter vectors.
    """

    @property
    @abstractmethod
    def dim(self) -> int:
        raise NotImplementedError  # pragma: no cover

    @property
    @abstractmethod
    def sample_count(self) -> int:
        raise NotImplementedError  # pragma: no cover

    @property
    def optimum_value(self) -> Optional[float]:
        """
        Minimal value ``f*`` when known analytically, otherwise ``None``.
        """
        return None

    @abstractmethod
    def _value(self, theta: np.ndarray) -> float:
        raise NotImplementedError  # pragma: no cover

    @abstractmethod
    def _gradient(self, theta: np.ndarray) -> np.ndarray:
        raise NotImplementedError  # pragma: no cover

    @abstractmethod
    def _per_sample_gradients(self, theta: np.ndarray, batch: np.ndarray) -> np.ndarray:
        raise NotImplementedError  # pragma: no cover

    def _batch_gradient(self, theta: np.ndarray, batch: np.ndarray) -> np.ndarray:
        return self._per_sample_gradients(theta, batch).mean(axis=0)

    def _check_theta(self, theta) -> np.ndarray:
        theta = np.asarray(theta, dtype=np.float64)
        if theta.shape != (self.dim,):
            raise ValueError(f'Parameter vector of length {self.dim!r} expected but shape {theta.shape!r} found.')
        return theta

    def _check_batch(self, batch) -> np.ndarray:
        batch = np.asarray(batch, dtype=np.int64).reshape(-1)
        if batch.shape[0] == 0:
            raise ValueError('Non-empty batch expected but empty batch found.')
        if batch.min() < 0 or batch.max() >= self.sample_count:
            raise IndexError(f'Batch indices in [0, {self.sample_count!r}) expected '
                             f'but range [{int(batch.min())!r}, {int(batch.max())!r}] found.')
        return batch

    def value(self, theta) -> float:
        return float(assert_finite(self._value(self._check_theta(theta)), 'objective value'))

    def gradient(self, theta) -> np.ndarray:
        return assert_finite(self._gradient(self._check_theta(theta)), 'gradient')

    def value_and_gradient(self, theta) -> Tuple[float, np.ndarray]:
        theta = self._check_theta(theta)
        return self.value(theta), self.gradient(theta)

    def stochastic_gradient(self, theta, batch) -> np.ndarray:
        """
        Overview:
            Mean of the per-sample gradients over ``batch``.
        """
        return assert_finite(
            self._batch_gradient(self._check_theta(theta), self._check_batch(batch)),
            'stochastic gradient'
        )

    def per_sample_gradients(self, theta, batch) -> np.ndarray:
        """
        Overview:
            Gradients of ``f_i`` for every ``i`` in ``batch``, one row per sample.
        """
        return assert_finite(
            self._per_sample_gradients(self._check_theta(theta), self._check_batch(batch)),
            'per-sample gradients'
        )


def stochastic_gradient(obj: Objective, theta, batch) -> np.ndarray:
    """
    Overview:
        Mini-batch stochastic gradient, see :meth:`Objective.stochastic_gradient`.
    """
    return obj.stochastic_gradient(theta, batch)


def restricted_gradient(obj: Objective, theta, m: Mask, batch=None) -> np.ndarray:
    """
    Overview:
        Gradient restricted to the support of ``m``, coordinates off the mask are exactly ``0``.

    :param obj: Objective.
    :param theta: Parameter vector.
    :param m: Mask over all coordinates of ``theta``.
    :param batch: Sample indices, ``None`` means the full gradient.
    :return: Restricted gradient.
    """
    if batch is None:
        g = obj.gradient(theta)
    else:
        g = obj.stochastic_gradient(theta, batch)
    return apply_mask(g, m)

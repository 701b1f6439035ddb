"""
Overview:
    Linear objective ``f(theta) = c^T theta``, mostly useful as a probe for landscape estimates.
"""
import numpy as np

from .base import Objective
from ..numeric import as_vector

__all__ = [
    'LinearObjective',
]


class LinearObjective(Objective):
    """
    Overview:
        Single-sample linear function with constant gradient ``c``.
    """

    def __init__(self, c):
        c = as_vector(c, name='coefficients')
        c.setflags(write=False)
        self.__c = c

    @property
    def c(self) -> np.ndarray:
        return self.__c

    @property
    def dim(self) -> int:
        return int(self.__c.shape[0])

    @property
    def sample_count(self) -> int:
        return 1

    def _value(self, theta: np.ndarray) -> float:
        return float(np.dot(self.__c, theta))

    def _gradient(self, theta: np.ndarray) -> np.ndarray:
        return self.__c.copy()

    def _per_sample_gradients(self, theta: np.ndarray, batch: np.ndarray) -> np.ndarray:
        return np.tile(self.__c, (batch.shape[0], 1))

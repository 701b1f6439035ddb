"""
Overview:
    Least squares objective ``f(theta) = |b - A theta|^2``.
"""
from typing import Tuple

import numpy as np
from hbutils.model import get_repr_info

from .base import Objective
from ..numeric import as_matrix, as_vector

__all__ = [
    'LeastSquares',
    'ls_value_grad',
]


class LeastSquares(Objective):
    """
    Overview:
        Least squares over ``m`` samples. Per-sample terms are ``f_i = m * (b_i - A_i theta)^2``, \
        so that their mean is ``f``.

    Examples::
        >>> import numpy as np
        >>> from acdckit.objective import LeastSquares
        >>> obj = LeastSquares(np.eye(2), [1, 2])
        >>> obj.value(np.zeros(2)), obj.gradient(np.zeros(2)).tolist()
        (5.0, [-2.0, -4.0])
    """

    def __init__(self, A, b, optimum_value=None):
        """
        Constructor of :class:`LeastSquares`.

        :param A: Matrix of shape ``(m, N)``.
        :param b: Vector of length ``m``.
        :param optimum_value: Known minimal value, ``None`` means unknown.
        """
        A = as_matrix(A, name='A')
        b = as_vector(b, A.shape[0], name='b')
        A.setflags(write=False)
        b.setflags(write=False)
        self.__A = A
        self.__b = b
        self.__optimum_value = float(optimum_value) if optimum_value is not None else None

    @property
    def A(self) -> np.ndarray:
        return self.__A

    @property
    def b(self) -> np.ndarray:
        return self.__b

    @property
    def dim(self) -> int:
        return int(self.__A.shape[1])

    @property
    def sample_count(self) -> int:
        return int(self.__A.shape[0])

    @property
    def optimum_value(self):
        return self.__optimum_value

    def residual(self, theta) -> np.ndarray:
        return self.__b - self.__A @ self._check_theta(theta)

    def _value(self, theta: np.ndarray) -> float:
        r = self.__b - self.__A @ theta
        return float(np.dot(r, r))

    def _gradient(self, theta: np.ndarray) -> np.ndarray:
        return -2.0 * (self.__A.T @ (self.__b - self.__A @ theta))

    def _batch_gradient(self, theta: np.ndarray, batch: np.ndarray) -> np.ndarray:
        A_b = self.__A[batch]
        r_b = self.__b[batch] - A_b @ theta
        return -(2.0 * self.sample_count / batch.shape[0]) * (A_b.T @ r_b)

    def _per_sample_gradients(self, theta: np.ndarray, batch: np.ndarray) -> np.ndarray:
        A_b = self.__A[batch]
        r_b = self.__b[batch] - A_b @ theta
        return -(2.0 * self.sample_count) * (A_b * r_b[:, None])

    def smoothness_bound(self) -> float:
        """
        Overview:
            Global smoothness constant ``2 * lambda_max(A^T A)``.
        """
        return 2.0 * float(np.linalg.norm(self.__A, 2)) ** 2

    def __repr__(self):
        return get_repr_info(
            cls=self.__class__,
            args=[
                ('samples', lambda: self.sample_count),
                ('dim', lambda: self.dim),
            ]
        )


def ls_value_grad(obj: LeastSquares, theta) -> Tuple[float, np.ndarray]:
    """
    Overview:
        Exact value and gradient of a least squares objective.
    """
    return obj.value_and_gradient(theta)

"""
Overview:
    Planted sparse regression instances ``b = A theta* + noise``.
"""
import json
from typing import Optional

import numpy as np
from hbutils.model import get_repr_info

from ..numeric import SeededRng, as_matrix, as_vector, gaussian_matrix
from ..objective import LeastSquares

__all__ = [
    'PlantedProblem',
    'planted_problem',
]


class PlantedProblem:
    """
    Overview:
        Sparse regression instance with known ``k*``-sparse ``theta*``.
    """

    def __init__(self, A, b, theta_star, k_star: int, noise_sigma: float):
        A = as_matrix(A, name='A')
        b = as_vector(b, A.shape[0], name='b')
        theta_star = as_vector(theta_star, A.shape[1], name='theta*')
        if int(np.count_nonzero(theta_star)) != k_star:
            raise ValueError(f'{k_star!r} nonzeros in theta* expected but '
                             f'{int(np.count_nonzero(theta_star))!r} found.')
        if not noise_sigma >= 0:
            raise ValueError(f'Non-negative noise level expected but {noise_sigma!r} found.')
        for arr in (A, b, theta_star):
            arr.setflags(write=False)
        self.__A = A
        self.__b = b
        self.__theta_star = theta_star
        self.__k_star = int(k_star)
        self.__noise_sigma = float(noise_sigma)

    @property
    def A(self) -> np.ndarray:
        return self.__A

    @property
    def b(self) -> np.ndarray:
        return self.__b

    @property
    def theta_star(self) -> np.ndarray:
        return self.__theta_star

    @property
    def k_star(self) -> int:
        return self.__k_star

    @property
    def noise_sigma(self) -> float:
        return self.__noise_sigma

    @property
    def dim(self) -> int:
        return int(self.__A.shape[1])

    @property
    def samples(self) -> int:
        return int(self.__A.shape[0])

    def support(self) -> np.ndarray:
        return np.flatnonzero(self.__theta_star)

    def support_recovered(self, theta, rtol: float = 1e-6) -> bool:
        """
        Overview:
            Whether the entries of ``theta`` above ``rtol * max|theta*|`` sit exactly on the support of ``theta*``.
        """
        theta = as_vector(theta, self.dim, name='theta')
        scale = float(np.max(np.abs(self.__theta_star), initial=0.0))
        return bool(np.array_equal(np.flatnonzero(np.abs(theta) > rtol * scale), self.support()))

    def reference_value(self) -> float:
        """
        Overview:
            Least squares value of the best fit on the true support. Equals ``0`` without noise.
        """
        support = self.support()
        if self.__noise_sigma == 0.0:
            return 0.0
        A_s = self.__A[:, support]
        coef, *_ = np.linalg.lstsq(A_s, self.__b, rcond=None)
        r = self.__b - A_s @ coef
        return float(np.dot(r, r))

    def objective(self) -> LeastSquares:
        """
        Overview:
            Least squares objective of this instance. Its known optimum is ``0`` when noiseless.
        """
        return LeastSquares(self.__A, self.__b, 0.0 if self.__noise_sigma == 0.0 else None)

    def relative_error(self, theta) -> float:
        return float(np.linalg.norm(np.asarray(theta) - self.__theta_star) / np.linalg.norm(self.__theta_star))

    def to_json(self) -> dict:
        return {
            'A': self.__A.tolist(),
            'b': self.__b.tolist(),
            'theta_star': self.__theta_star.tolist(),
            'k_star': self.__k_star,
            'noise_sigma': self.__noise_sigma,
        }

    @classmethod
    def from_json(cls, data: dict) -> 'PlantedProblem':
        return cls(data['A'], data['b'], data['theta_star'], data['k_star'], data['noise_sigma'])

    def save(self, path: str):
        with open(path, 'w', encoding='utf-8') as f:
            json.dump(self.to_json(), f)

    @classmethod
    def load(cls, path: str) -> 'PlantedProblem':
        with open(path, 'r', encoding='utf-8') as f:
            return cls.from_json(json.load(f))

    def __repr__(self):
        return get_repr_info(
            cls=self.__class__,
            args=[
                ('dim', lambda: self.dim),
                ('samples', lambda: self.samples),
                ('k_star', lambda: self.__k_star),
                ('noise_sigma', lambda: self.__noise_sigma),
            ]
        )


def planted_problem(dim: int, samples: int, k_star: int, noise_sigma: float, rng: SeededRng,
                    scale: Optional[float] = None) -> PlantedProblem:
    """
    Overview:
        Random planted instance. ``A`` has i.i.d. ``N(0, scale^2)`` entries (default ``scale = 1 / sqrt(samples)``, \
        giving columns of unit norm on average), the support of ``theta*`` is uniform and its values are \
        standard normal, and ``b = A theta* + N(0, noise_sigma^2)``.

    Examples::
        >>> from acdckit.iht import planted_problem
        >>> from acdckit.numeric import SeededRng
        >>> planted_problem(1000, 400, 20, 0.0, SeededRng(7))
        <PlantedProblem dim: 1000, samples: 400, k_star: 20, noise_sigma: 0.0>
    """
    if not 1 <= k_star <= dim:
        raise ValueError(f'Sparsity in [1, {dim!r}] expected but {k_star!r} found.')
    if not noise_sigma >= 0:
        raise ValueError(f'Non-negative noise level expected but {noise_sigma!r} found.')
    scale = samples ** -0.5 if scale is None else scale

    A = gaussian_matrix(samples, dim, scale, rng.spawn(0))
    values_rng = rng.spawn(1)
    theta_star = np.zeros(dim)
    support = np.sort(values_rng.choice(dim, k_star))
    values = values_rng.normal(k_star)
    values[values == 0.0] = 1.0
    theta_star[support] = values

    b = A @ theta_star
    if noise_sigma > 0:
        b = b + rng.spawn(2).normal(samples, noise_sigma)
    return PlantedProblem(A, b, theta_star, k_star, noise_sigma)

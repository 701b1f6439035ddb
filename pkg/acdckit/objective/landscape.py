"""
Overview:
    Empirical estimates of landscape constants, the restricted smoothness ``beta``, \
    the concentrated Polyak-Lojasiewicz constant ``alpha``, the stochastic gradient \
    variance ``sigma^2`` and the Lipschitz constant ``L``.
"""
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .base import Objective
from ..numeric import SeededRng, assert_finite
from ..sparsity import Mask, top_k_indices, truncate

__all__ = [
    'LandscapeEstimates',
    'cpl_estimate', 'smoothness_estimate', 'lipschitz_estimate', 'box_sampler',
    'variance_estimate', 'exact_variance', 'estimate_landscape',
]


@dataclass(frozen=True)
class LandscapeEstimates:
    """
    Overview:
        Estimated landscape constants, all non-negative.
    """
    beta_hat: float
    alpha_hat: float
    sigma2_hat: float
    lipschitz_hat: float

    def __post_init__(self):
        for name in ('beta_hat', 'alpha_hat', 'sigma2_hat', 'lipschitz_hat'):
            value = getattr(self, name)
            if not value >= 0:
                raise ValueError(f'Non-negative {name} expected but {value!r} found.')

    @property
    def kappa(self) -> float:
        """
        Condition number ``beta / alpha``.
        """
        return self.beta_hat / self.alpha_hat if self.alpha_hat > 0 else math.inf

    def to_json(self) -> dict:
        return {
            'beta_hat': self.beta_hat,
            'alpha_hat': self.alpha_hat,
            'sigma2_hat': self.sigma2_hat,
            'lipschitz_hat': self.lipschitz_hat,
        }


def cpl_estimate(obj: Objective, theta, r: int, f_star: float, squared: bool = True) -> float:
    """
    Overview:
        Largest ``alpha`` certified at ``theta`` by the concentrated Polyak-Lojasiewicz condition, \
        ``2 * |T_r(grad f)|^2 / (f - f*)``. With ``squared=False`` the norm is not squared.

    :param obj: Objective.
    :param theta: Point of evaluation.
    :param r: Concentration count, in ``[1, dim]``.
    :param f_star: Minimal value.
    :param squared: Use the squared norm, default is ``True``.
    :return: Estimated ``alpha``.

    Examples::
        >>> import numpy as np
        >>> from acdckit.objective import LeastSquares, cpl_estimate
        >>> obj = LeastSquares(np.eye(3), [1.0, 2.0, 3.0])
        >>> cpl_estimate(obj, np.zeros(3), 3, 0.0)
        8.0
    """
    if not 1 <= r <= obj.dim:
        raise ValueError(f'Concentration count in [1, {obj.dim!r}] expected but {r!r} found.')
    f, g = obj.value_and_gradient(theta)
    if not f > f_star:
        raise ValueError(f'Value above optimum {f_star!r} expected but {f!r} found.')
    norm = float(np.linalg.norm(truncate(g, r)))
    numerator = norm ** 2 if squared else norm
    return float(assert_finite(2.0 * numerator / (f - f_star), 'cpl estimate'))


def _sparse_direction(rng: SeededRng, allowed: np.ndarray, t: int, radius: float, dim: int) -> np.ndarray:
    delta = np.zeros(dim)
    coords = allowed[rng.choice(allowed.shape[0], t)]
    delta[coords] = rng.normal(t)
    norm = np.linalg.norm(delta)
    if norm == 0.0:
        delta[coords[0]] = 1.0
        norm = 1.0
    return delta * (radius / norm)


def smoothness_estimate(obj: Objective, theta, t: int, trials: int, rng: SeededRng,
                        power_steps: int = 0, radius: float = 1.0, support: Optional[Mask] = None) -> float:
    """
    Overview:
        Restricted smoothness estimate, the largest ``|grad f(theta + delta) - grad f(theta)| / |delta|`` \
        over sampled ``t``-sparse directions ``delta``.

    :param obj: Objective.
    :param theta: Point of evaluation.
    :param t: Sparsity of directions, at least 1.
    :param trials: Count of sampled directions, at least 1.
    :param rng: Random generator.
    :param power_steps: Count of truncated power refinements of each direction. Every refined direction \
        is still ``t``-sparse, so for quadratics the estimate never exceeds the true restricted constant.
    :param radius: Norm of directions.
    :param support: Directions are drawn inside this mask when given.
    :return: Estimated ``beta``.

    Examples::
        >>> import numpy as np
        >>> from acdckit.numeric import SeededRng
        >>> from acdckit.objective import LeastSquares, smoothness_estimate
        >>> obj = LeastSquares(np.eye(4), np.ones(4))
        >>> round(smoothness_estimate(obj, np.zeros(4), 2, 10, SeededRng(0)), 10)
        2.0
    """
    if t < 1:
        raise ValueError(f'Positive direction sparsity expected but {t!r} found.')
    if trials < 1:
        raise ValueError(f'Positive trial count expected but {trials!r} found.')
    if not radius > 0:
        raise ValueError(f'Positive radius expected but {radius!r} found.')
    theta = np.asarray(theta, dtype=np.float64)
    allowed = support.support() if support is not None else np.arange(obj.dim)
    if allowed.shape[0] == 0:
        return 0.0
    t = min(t, allowed.shape[0])

    g0 = obj.gradient(theta)
    best = 0.0
    for _ in range(trials):
        delta = _sparse_direction(rng, allowed, t, radius, obj.dim)
        for step in range(power_steps + 1):
            diff = obj.gradient(theta + delta) - g0
            best = max(best, float(np.linalg.norm(diff) / np.linalg.norm(delta)))
            if step == power_steps:
                break

            restricted = np.zeros(obj.dim)
            restricted[allowed] = diff[allowed]
            kept = top_k_indices(restricted, t)
            refined = np.zeros(obj.dim)
            refined[kept] = restricted[kept]
            norm = np.linalg.norm(refined)
            if norm == 0.0:
                break
            delta = refined * (radius / norm)

    return float(assert_finite(best, 'smoothness estimate'))


def box_sampler(dim: int, radius: float) -> Callable[[SeededRng], np.ndarray]:
    """
    Overview:
        Sampler of uniform points in the box ``[-radius, radius]^dim``.
    """
    if not radius >= 0:
        raise ValueError(f'Non-negative radius expected but {radius!r} found.')

    def _sample(rng: SeededRng) -> np.ndarray:
        return rng.uniform(dim, -radius, radius)

    return _sample


def lipschitz_estimate(obj: Objective, sampler: Callable[[SeededRng], np.ndarray], trials: int,
                       rng: SeededRng) -> float:
    """
    Overview:
        Largest gradient norm over sampled points.

    Examples::
        >>> from acdckit.numeric import SeededRng
        >>> from acdckit.objective import LinearObjective, box_sampler, lipschitz_estimate
        >>> lipschitz_estimate(LinearObjective([3.0, 4.0]), box_sampler(2, 1.0), 5, SeededRng(0))
        5.0
    """
    if trials < 1:
        raise ValueError(f'Positive trial count expected but {trials!r} found.')
    best = 0.0
    for _ in range(trials):
        best = max(best, float(np.linalg.norm(obj.gradient(sampler(rng)))))
    return float(assert_finite(best, 'lipschitz estimate'))


def variance_estimate(obj: Objective, theta, batch_size: int, trials: int, rng: SeededRng) -> float:
    """
    Overview:
        Monte-Carlo estimate of ``E |g_B - grad f|^2`` over uniformly drawn batches of ``batch_size`` \
        distinct samples.
    """
    if not 1 <= batch_size <= obj.sample_count:
        raise ValueError(f'Batch size in [1, {obj.sample_count!r}] expected but {batch_size!r} found.')
    if trials < 1:
        raise ValueError(f'Positive trial count expected but {trials!r} found.')
    g = obj.gradient(theta)
    total = 0.0
    for _ in range(trials):
        diff = obj.stochastic_gradient(theta, rng.choice(obj.sample_count, batch_size)) - g
        total += float(np.dot(diff, diff))
    return float(assert_finite(total / trials, 'variance estimate'))


def exact_variance(obj: Objective, theta, chunk: int = 1024) -> float:
    """
    Overview:
        Exact variance of size-1 stochastic gradients, ``mean_i |grad f_i - grad f|^2``.
    """
    g = obj.gradient(theta)
    total = 0.0
    for start in range(0, obj.sample_count, chunk):
        rows = obj.per_sample_gradients(theta, np.arange(start, min(start + chunk, obj.sample_count)))
        total += float(np.sum((rows - g) ** 2))
    return float(assert_finite(total / obj.sample_count, 'variance'))


def estimate_landscape(obj: Objective, theta, r: int, t: int, f_star: float, rng: SeededRng,
                       trials: int = 20, power_steps: int = 10, batch_size: int = 1,
                       radius: float = 1.0, squared: bool = True) -> LandscapeEstimates:
    """
    Overview:
        All four landscape estimates around ``theta``. The Lipschitz estimate samples \
        the box of half-width ``radius`` around ``theta``.
    """
    theta = np.asarray(theta, dtype=np.float64)
    f = obj.value(theta)
    alpha = cpl_estimate(obj, theta, r, f_star, squared) if f > f_star else 0.0
    beta = smoothness_estimate(obj, theta, t, trials, rng, power_steps=power_steps, radius=radius)
    sigma2 = variance_estimate(obj, theta, batch_size, trials, rng)
    box = box_sampler(obj.dim, radius)
    lipschitz = lipschitz_estimate(obj, lambda rng_: theta + box(rng_), trials, rng)
    return LandscapeEstimates(beta, alpha, sigma2, lipschitz)

"""
Overview:
    Gradient descent restricted to a fixed support.
"""
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..numeric import SeededRng
from ..objective import Objective, restricted_gradient, smoothness_estimate
from ..sparsity import Mask

__all__ = [
    'PolishResult',
    'iht_polish',
]

_LOGGER = logging.getLogger(__name__)

_MAX_HALVINGS = 40
_ROUNDING = 1e-12


@dataclass
class PolishResult:
    """
    Overview:
        Outcome of :func:`iht_polish`. ``converged`` is ``False`` when ``max_inner`` ran out first.
    """
    theta: np.ndarray
    steps: int
    converged: bool
    f_value: float
    grad_norm_inf: float
    grad_norm_l2: float


def iht_polish(obj: Objective, theta, m: Mask, eps: float, max_inner: int,
               step_size: Optional[float] = None, rng: Optional[SeededRng] = None,
               safety: float = 1.1, trials: int = 5, power_steps: int = 20) -> PolishResult:
    """
    Overview:
        Gradient steps on the support of ``m`` until the infinity norm of the restricted gradient \
        is at most ``eps``. A step that would increase ``f`` is retried with half the step size, \
        and the step grows back by doubling (up to the initial one) after each accepted step. \
        ``f`` never increases beyond floating point rounding and the support never grows.

    :param obj: Objective.
    :param theta: Starting point, supported on ``m``.
    :param m: Support mask over all coordinates.
    :param eps: Tolerance on the infinity norm of the restricted gradient.
    :param max_inner: Maximal count of inner steps.
    :param step_size: Step size, ``None`` means ``1 / (safety * beta)`` with ``beta`` estimated on the support.
    :param rng: Random generator for the smoothness estimate.
    :param safety: Safety factor on the estimate.
    :param trials: Sampled directions of the estimate.
    :param power_steps: Power refinements of the estimate.
    :return: Polish result, both norms of the final restricted gradient are kept.
    """
    theta = np.array(theta, dtype=np.float64)
    if theta.shape != (m.size,):
        raise ValueError(f'Iterate of length {m.size!r} expected but shape {theta.shape!r} found.')
    if np.any(theta[~m.bits] != 0.0):
        raise ValueError('Iterate supported on the mask expected but nonzeros outside the mask found.')
    if not eps > 0:
        raise ValueError(f'Positive tolerance expected but {eps!r} found.')

    f = obj.value(theta)
    g = restricted_gradient(obj, theta, m)
    steps = 0
    if float(np.max(np.abs(g), initial=0.0)) > eps and max_inner > 0:
        if step_size is None:
            beta = smoothness_estimate(obj, theta, m.popcount, trials, rng or SeededRng(0),
                                       power_steps=power_steps, support=m)
            eta = 1.0 / (safety * beta) if beta > 0 else 1.0
        else:
            eta = float(step_size)

        eta_max = eta
        while steps < max_inner and float(np.max(np.abs(g))) > eps:
            if steps:
                eta = min(2.0 * eta, eta_max)
            g_candidate = None
            for _ in range(_MAX_HALVINGS):
                candidate = theta - eta * g
                f_candidate = obj.value(candidate)
                if f_candidate <= f:
                    break
                if f_candidate - f <= _ROUNDING * max(1.0, abs(f)):
                    # change lost in rounding, accept while the slope along -g is still downhill
                    g_candidate = restricted_gradient(obj, candidate, m)
                    if float(np.dot(g_candidate, g)) >= 0.0:
                        break
                    g_candidate = None
                eta *= 0.5
            else:
                _LOGGER.debug('Polish stalled after %d steps, no decreasing step found.', steps)
                break

            theta, f = candidate, f_candidate
            g = g_candidate if g_candidate is not None else restricted_gradient(obj, theta, m)
            steps += 1

    norm_inf = float(np.max(np.abs(g), initial=0.0))
    return PolishResult(
        theta=theta,
        steps=steps,
        converged=norm_inf <= eps,
        f_value=f,
        grad_norm_inf=norm_inf,
        grad_norm_l2=float(np.linalg.norm(g)),
    )

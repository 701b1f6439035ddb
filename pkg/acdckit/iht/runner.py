"""
Overview:
    Deterministic and stochastic iterative hard thresholding.
"""
import logging
import math
from typing import Optional

import numpy as np

from .batch import BatchSampler
from .config import IhtConfig
from .polish import iht_polish
from .step import DivergenceError, hard_threshold
from .trajectory import IterationRecord, Trajectory
from ..numeric import ParamSet, SeededRng, as_vector
from ..objective import Objective, cpl_estimate, smoothness_estimate
from ..sparsity import Mask

__all__ = [
    'resolve_step_size', 'run_iht',
]

_LOGGER = logging.getLogger(__name__)


def _smoothness_support(obj: Objective, cfg: IhtConfig) -> int:
    # 3k covers the joint support 2k + 3k* when k = 3k*
    return max(1, min(obj.dim, 3 * cfg.pattern.cardinality(ParamSet.from_vector(np.zeros(obj.dim)))))


def resolve_step_size(obj: Objective, cfg: IhtConfig, theta, rng: SeededRng) -> dict:
    """
    Overview:
        Step size of a run, estimating the restricted smoothness when the configured step is ``'auto'``.

    :return: Mapping with ``step_size`` and, when estimated, ``beta_hat`` and ``smoothness_support``.
    """
    if cfg.step_size != 'auto':
        return {'step_size': float(cfg.step_size)}

    t = _smoothness_support(obj, cfg)
    beta_hat = smoothness_estimate(obj, theta, t, cfg.smoothness_trials, rng, power_steps=cfg.power_steps)
    if not beta_hat > 0:
        raise ValueError(f'Positive smoothness estimate expected for automatic step size but {beta_hat!r} found.')
    return {
        'step_size': cfg.step_from_smoothness(beta_hat),
        'beta_hat': beta_hat,
        'smoothness_support': t,
    }


def _log_theory(obj: Objective, cfg: IhtConfig, theta: np.ndarray, meta: dict,
                f_star: Optional[float], k_star: Optional[int]):
    if f_star is None or 'beta_hat' not in meta:
        return
    k = cfg.pattern.cardinality(ParamSet.from_vector(theta))
    r = max(1, min(obj.dim, k + (k_star or 0)))
    try:
        alpha_hat = cpl_estimate(obj, theta, r, f_star)
    except ValueError:
        return
    meta['alpha_hat'] = alpha_hat
    if alpha_hat > 0:
        kappa = meta['beta_hat'] / alpha_hat
        meta['kappa_hat'] = kappa
        _LOGGER.info('Estimated beta %.6g, alpha %.6g, kappa %.6g.', meta['beta_hat'], alpha_hat, kappa)
        if k_star is not None:
            implied = int(math.ceil(k_star * (cfg.multiplier * kappa ** 2 + 1)))
            meta['implied_k'] = implied
            _LOGGER.info('Theoretical sparsity k* (C kappa^2 + 1) = %d with C = %g, configured k = %d.',
                         implied, cfg.multiplier, k)


def run_iht(obj: Objective, cfg: IhtConfig, theta0=None, rng: Optional[SeededRng] = None,
            theta_star=None, f_star: Optional[float] = None, k_star: Optional[int] = None) -> Trajectory:
    """
    Overview:
        Iterative hard thresholding ``theta <- T(theta - eta g)``, with ``g`` the full gradient \
        in deterministic mode and a mini-batch gradient in stochastic mode.

    :param obj: Objective.
    :param cfg: Run configuration.
    :param theta0: Starting point, default is all zeros.
    :param rng: Random generator, required in stochastic mode and for automatic step sizes.
    :param theta_star: Planted solution, enables distance tracking.
    :param f_star: Minimal value, enables condition number logging. Default is the objective's known optimum.
    :param k_star: Sparsity of the planted solution, enables logging of the theoretical sparsity.
    :return: Trajectory with the starting point as record ``0``. Its ``meta`` holds the step size, \
        the estimates, the stop reason and the final iterate under ``theta``.
    :raises DivergenceError: When ``f`` exceeds ``divergence_factor`` times its initial value.
    """
    theta = np.zeros(obj.dim) if theta0 is None else as_vector(theta0, obj.dim, name='starting point')
    rng = rng or SeededRng(0)
    if theta_star is not None:
        theta_star = as_vector(theta_star, obj.dim, name='theta*')
    if f_star is None:
        f_star = obj.optimum_value
    cfg.pattern.validate(ParamSet.from_vector(theta))

    meta = resolve_step_size(obj, cfg, theta, rng.spawn(1))
    eta = meta['step_size']
    meta['mode'] = cfg.mode.name.lower()
    _LOGGER.info('Hard thresholding with step size %.6g in %s mode.', eta, meta['mode'])
    _log_theory(obj, cfg, theta, meta, f_star, k_star)

    sampler = BatchSampler(obj.sample_count, min(cfg.batch_size, obj.sample_count), cfg.batch_scheme,
                           rng.spawn(2)) if cfg.stochastic else None
    polish_rng = rng.spawn(3)

    f0, g = obj.value_and_gradient(theta)
    limit = cfg.divergence_factor * max(abs(f0), np.finfo(np.float64).tiny)
    max_abs = float(np.max(np.abs(theta), initial=0.0))

    def _record(iteration: int, f: float, grad: np.ndarray, mask: Mask, extras: dict) -> IterationRecord:
        return IterationRecord(
            iteration=iteration,
            f_value=f,
            grad_norm=float(np.linalg.norm(grad)),
            support_hash=mask.digest(),
            max_abs=max_abs,
            distance=float(np.linalg.norm(theta - theta_star)) if theta_star is not None else None,
            extras=extras,
        )

    trajectory = Trajectory(meta=meta)
    trajectory.append(_record(0, f0, g, Mask.from_nonzero(theta), {}))
    meta['stop_reason'] = 'max_iters'
    for iteration in range(1, cfg.max_iters + 1):
        step_grad = obj.stochastic_gradient(theta, sampler.next_batch()) if sampler is not None else g
        theta, mask = hard_threshold(theta - eta * step_grad, cfg.pattern)

        extras = {}
        if cfg.polish is not None:
            result = iht_polish(
                obj, theta, mask, cfg.polish.eps, cfg.polish.max_inner,
                step_size=None if cfg.polish.step_size == 'auto' else cfg.polish.step_size,
                rng=polish_rng, safety=cfg.safety,
            )
            theta = result.theta
            extras = {
                'polish_steps': result.steps,
                'polish_converged': float(result.converged),
                'polish_grad_inf': result.grad_norm_inf,
                'polish_grad_l2': result.grad_norm_l2,
            }

        if not np.all(np.isfinite(theta)):
            raise DivergenceError(f'Non-finite iterate at iteration {iteration!r}, step size {eta!r} too large.',
                                  {'iteration': iteration, 'step_size': eta, 'f_initial': f0})
        f, g = obj.value_and_gradient(theta)
        if f > limit:
            raise DivergenceError(
                f'Objective {f!r} exceeds {cfg.divergence_factor!r} times its initial value {f0!r} '
                f'at iteration {iteration!r}, step size {eta!r} too large.',
                {'iteration': iteration, 'step_size': eta, 'f_initial': f0, 'f_value': f},
            )
        max_abs = max(max_abs, float(np.max(np.abs(theta), initial=0.0)))
        trajectory.append(_record(iteration, f, g, mask, extras))

        if cfg.stop_tol > 0 and iteration >= cfg.stop_window:
            f_before = trajectory[iteration - cfg.stop_window].f_value
            decrease = (f_before - f) / max(abs(f_before), np.finfo(np.float64).tiny)
            if decrease < cfg.stop_tol:
                meta['stop_reason'] = 'stop_tol'
                break

    meta['theta'] = theta
    _LOGGER.info('Hard thresholding finished after %d iterations (%s), f = %.6g.',
                 len(trajectory) - 1, meta['stop_reason'], trajectory.final.f_value)
    return trajectory

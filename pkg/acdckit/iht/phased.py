"""
Overview:
    Phased dense/sparse stochastic hard thresholding.

    Every round makes ``dense_passes`` full passes of dense mini-batch steps over a fixed partition \
    of the samples, compresses with the pattern, then makes ``sparse_passes`` passes restricted to the mask. \
    This is the optimization-level counterpart of alternating compressed/decompressed training.
"""
import logging
from typing import Optional

import numpy as np

from .batch import partition
from .config import IhtConfig
from .runner import resolve_step_size
from .step import DivergenceError, hard_threshold
from .trajectory import IterationRecord, Trajectory
from ..numeric import ParamSet, SeededRng, as_vector
from ..sparsity import Mask, apply_mask

__all__ = [
    'run_phased_iht',
]

_LOGGER = logging.getLogger(__name__)


def _dense_step_size(obj, cfg: IhtConfig, theta: np.ndarray, batches, rng: SeededRng) -> dict:
    """
    Overview:
        Automatic step size of the dense passes. Each pass steps along mini-batch gradients over all \
        coordinates, so the estimate is the largest smoothness of a mini-batch gradient on the full support, \
        found by power iteration on gradient differences.
    """
    beta_hat = 0.0
    for batch in batches:
        g0 = obj.stochastic_gradient(theta, batch)
        delta = rng.normal(obj.dim)
        delta /= np.linalg.norm(delta)
        for _ in range(max(cfg.power_steps, 1) + 1):
            diff = obj.stochastic_gradient(theta + delta, batch) - g0
            norm = float(np.linalg.norm(diff))
            beta_hat = max(beta_hat, norm)
            if norm == 0.0:
                break
            delta = diff / norm
    if not beta_hat > 0:
        raise ValueError(f'Positive smoothness estimate expected for automatic step size but {beta_hat!r} found.')
    return {
        'step_size': cfg.step_from_smoothness(beta_hat),
        'beta_hat': beta_hat,
        'smoothness_support': obj.dim,
    }


def run_phased_iht(obj, cfg: IhtConfig, rounds: int, dense_passes: int, sparse_passes: int = 0,
                   theta0=None, rng: Optional[SeededRng] = None, theta_star=None) -> Trajectory:
    """
    Overview:
        Run phased hard thresholding.

    :param obj: Objective.
    :param cfg: Configuration, its pattern, step size, batch size and divergence factor are used.
    :param rounds: Count of dense/compress/sparse rounds, at least 1.
    :param dense_passes: Dense passes per round, at least 1.
    :param sparse_passes: Sparse passes per round after compression.
    :param theta0: Starting point, default is all zeros.
    :param rng: Random generator, fixes the partition.
    :param theta_star: Planted solution, enables distance tracking.
    :return: Trajectory with one record per round. Extras hold ``dense_value`` (before compression) \
        and ``pruned_value`` (right after compression).
    """
    if rounds < 1 or dense_passes < 1 or sparse_passes < 0:
        raise ValueError(f'Positive rounds and dense passes, non-negative sparse passes expected '
                         f'but {(rounds, dense_passes, sparse_passes)!r} found.')
    theta = np.zeros(obj.dim) if theta0 is None else as_vector(theta0, obj.dim, name='starting point')
    rng = rng or SeededRng(0)
    theta_star = as_vector(theta_star, obj.dim, name='theta*') if theta_star is not None else None
    cfg.pattern.validate(ParamSet.from_vector(theta))

    batches = partition(rng.spawn(2).permutation(obj.sample_count), min(cfg.batch_size, obj.sample_count))
    if cfg.step_size == 'auto':
        meta = _dense_step_size(obj, cfg, theta, batches, rng.spawn(1))
    else:
        meta = resolve_step_size(obj, cfg, theta, rng.spawn(1))
    meta['mode'] = 'phased'
    eta = meta['step_size']

    f0 = obj.value(theta)
    limit = cfg.divergence_factor * max(abs(f0), np.finfo(np.float64).tiny)
    max_abs = float(np.max(np.abs(theta), initial=0.0))
    trajectory = Trajectory(meta=meta)
    trajectory.append(IterationRecord(
        iteration=0, f_value=f0, grad_norm=float(np.linalg.norm(obj.gradient(theta))),
        support_hash=Mask.from_nonzero(theta).digest(), max_abs=max_abs,
        distance=float(np.linalg.norm(theta - theta_star)) if theta_star is not None else None,
    ))

    def _check(stage: str, round_: int) -> float:
        f = obj.value(theta) if np.all(np.isfinite(theta)) else np.inf
        if f > limit:
            raise DivergenceError(f'Objective {f!r} exceeds {cfg.divergence_factor!r} times its initial value '
                                  f'{f0!r} during {stage} phase of round {round_!r}.',
                                  {'round': round_, 'stage': stage, 'step_size': eta, 'f_initial': f0})
        return f

    for round_ in range(1, rounds + 1):
        for _ in range(dense_passes):
            for batch in batches:
                theta = theta - eta * obj.stochastic_gradient(theta, batch)
            max_abs = max(max_abs, float(np.max(np.abs(theta), initial=0.0)))
        dense_value = _check('dense', round_)

        theta, mask = hard_threshold(theta, cfg.pattern)
        pruned_value = _check('compression', round_)
        for _ in range(sparse_passes):
            for batch in batches:
                theta = theta - eta * apply_mask(obj.stochastic_gradient(theta, batch), mask)
        f = _check('sparse', round_)
        max_abs = max(max_abs, float(np.max(np.abs(theta), initial=0.0)))

        trajectory.append(IterationRecord(
            iteration=round_, f_value=f, grad_norm=float(np.linalg.norm(obj.gradient(theta))),
            support_hash=mask.digest(), max_abs=max_abs,
            distance=float(np.linalg.norm(theta - theta_star)) if theta_star is not None else None,
            extras={'dense_value': dense_value, 'pruned_value': pruned_value},
        ))
        _LOGGER.debug('Round %d: dense %.6g, pruned %.6g, sparse %.6g.', round_, dense_value, pruned_value, f)

    meta['theta'] = theta
    return trajectory

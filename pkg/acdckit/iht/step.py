"""
Overview:
    Single hard thresholding step.
"""
from typing import Optional, Tuple

import numpy as np

from ..numeric import assert_finite
from ..sparsity import Mask, SparsityPattern, apply_mask

__all__ = [
    'DivergenceError',
    'hard_threshold', 'iht_step',
]


class DivergenceError(RuntimeError):
    """
    Overview:
        Raised when an iterative run blows up, ``diagnostic`` describes the state at abort.
    """

    def __init__(self, message: str, diagnostic: Optional[dict] = None):
        RuntimeError.__init__(self, message)
        self.diagnostic = dict(diagnostic or {})


def hard_threshold(v, pattern: SparsityPattern) -> Tuple[np.ndarray, Mask]:
    """
    Overview:
        Compress vector ``v`` with ``pattern``.

    :return: Tuple of truncated vector and the mask used.
    """
    mask = pattern.mask_vector(v)
    return apply_mask(v, mask), mask


def iht_step(theta, g, eta: float, pattern: SparsityPattern) -> np.ndarray:
    """
    Overview:
        Hard thresholding step ``T(theta - eta * g)``.

    :param theta: Current iterate.
    :param g: Gradient or stochastic gradient at ``theta``.
    :param eta: Positive step size.
    :param pattern: Truncation pattern.
    :return: Next iterate.

    Examples::
        >>> from acdckit.iht import iht_step
        >>> from acdckit.sparsity import GlobalTopK
        >>> iht_step([1.0, 1.0], [-2.0, 2.0], 0.25, GlobalTopK(k=1)).tolist()
        [1.5, 0.0]
    """
    theta = np.asarray(theta, dtype=np.float64)
    g = np.asarray(g, dtype=np.float64)
    if theta.ndim != 1 or theta.shape != g.shape:
        raise ValueError(f'Gradient of shape {theta.shape!r} expected but {g.shape!r} found.')
    if not eta > 0:
        raise ValueError(f'Positive step size expected but {eta!r} found.')
    truncated, _ = hard_threshold(theta - eta * g, pattern)
    return assert_finite(truncated, 'iterate')

"""
Overview:
    Magnitude top-k truncation.
"""
import numpy as np

from .mask import Mask, apply_mask
from ..numeric import assert_finite

__all__ = [
    'top_k_indices', 'top_k_global', 'truncate', 'projection_gap',
]


def top_k_indices(v, k: int) -> np.ndarray:
    """
    Overview:
        Indices of the ``k`` largest-magnitude entries, ties broken by lowest index.
    """
    v = np.asarray(v, dtype=np.float64).reshape(-1)
    n = v.shape[0]
    if not 0 <= k <= n:
        raise ValueError(f'Count in [0, {n!r}] expected but {k!r} found.')
    order = np.argsort(-np.abs(v), kind='stable')
    return np.sort(order[:k])


def top_k_global(v, k: int) -> Mask:
    """
    Overview:
        Mask selecting the ``k`` largest-magnitude entries of ``v``.

    :param v: Vector.
    :param k: Kept count, in ``[0, len(v)]``.
    :return: Mask with popcount ``k``.

    Examples::
        >>> from acdckit.sparsity import top_k_global
        >>> top_k_global([3, -5, 1, 4], 2).support().tolist()
        [1, 3]
        >>> top_k_global([2, 2, 1], 1).support().tolist()
        [0]
    """
    v = np.asarray(v, dtype=np.float64).reshape(-1)
    return Mask.from_indices(v.shape[0], top_k_indices(v, k))


def truncate(v, k: int) -> np.ndarray:
    """
    Overview:
        Truncation operator, keeps the ``k`` largest-magnitude entries and zeros the rest.
    """
    return apply_mask(v, top_k_global(v, k))


def projection_gap(x, k: int) -> float:
    """
    Overview:
        Normalized truncation error ``|T_k(x) - x|^2 / (n - k)`` where ``n`` is the count of nonzeros in ``x``.

    :param x: Vector.
    :param k: Kept count, in ``[0, n)``.
    :return: Non-negative gap.

    Examples::
        >>> from acdckit.sparsity import projection_gap
        >>> projection_gap([1, 2], 1)
        1.0
        >>> projection_gap([1, 2], 0)
        2.5
    """
    x = np.asarray(x, dtype=np.float64).reshape(-1)
    n = int(np.count_nonzero(x))
    if not 0 <= k < n:
        raise ValueError(f'Count in [0, {n!r}) expected for vector with {n!r} nonzeros but {k!r} found.')
    residual = truncate(x, k) - x
    return float(assert_finite(np.dot(residual, residual) / (n - k), 'projection gap'))

"""
Overview:
    Random matrix generation.
"""
import numpy as np

from .rng import SeededRng
from .vector import assert_finite

__all__ = [
    'gaussian_matrix',
]


def gaussian_matrix(rows: int, cols: int, scale: float, rng: SeededRng) -> np.ndarray:
    """
    Overview:
        Matrix of i.i.d. normal entries with mean 0 and standard deviation ``scale``.

    :param rows: Row count, should be at least 1.
    :param cols: Column count, should be at least 1.
    :param scale: Standard deviation, should be positive.
    :param rng: Random generator.
    :return: Row-major ``rows x cols`` matrix.

    Examples::
        >>> from acdckit.numeric import gaussian_matrix, SeededRng
        >>> gaussian_matrix(400, 50, 400 ** -0.5, SeededRng(0)).shape
        (400, 50)
    """
    if rows < 1 or cols < 1:
        raise ValueError(f'Positive dimensions expected but {(rows, cols)!r} found.')
    if not scale > 0:
        raise ValueError(f'Positive scale expected but {scale!r} found.')
    return assert_finite(np.ascontiguousarray(rng.normal((rows, cols), scale)), 'gaussian matrix')

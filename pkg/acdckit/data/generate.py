"""
Overview:
    Synthetic classification data.
"""
import numpy as np

from .dataset import Dataset
from ..numeric import SeededRng

__all__ = [
    'gaussian_blobs',
]


def gaussian_blobs(features: int, classes: int, samples: int, spread: float, rng: SeededRng,
                   center_scale: float = 1.0) -> Dataset:
    """
    Overview:
        Isotropic Gaussian clusters, one per class. Cluster centers are drawn from \
        ``N(0, center_scale^2)`` and samples from ``N(center, spread^2)``. \
        With ``spread = 0`` every sample sits on its center.

    :param features: Feature count.
    :param classes: Class count, at least 2.
    :param samples: Sample count. Labels are balanced, then shuffled.
    :param spread: Standard deviation inside clusters, non-negative.
    :param rng: Random generator.
    :param center_scale: Standard deviation of the centers.
    :return: Generated dataset.

    Examples::
        >>> from acdckit.data import gaussian_blobs
        >>> from acdckit.numeric import SeededRng
        >>> gaussian_blobs(20, 5, 100, 1.0, SeededRng(0))
        <Dataset samples: 100, features: 20, classes: 5>
    """
    if features < 1:
        raise ValueError(f'Positive feature count expected but {features!r} found.')
    if classes < 2:
        raise ValueError(f'At least 2 classes expected but {classes!r} found.')
    if samples < 1:
        raise ValueError(f'Positive sample count expected but {samples!r} found.')
    if not spread >= 0:
        raise ValueError(f'Non-negative spread expected but {spread!r} found.')
    if not center_scale > 0:
        raise ValueError(f'Positive center scale expected but {center_scale!r} found.')

    centers = rng.normal((classes, features), center_scale)
    y = (np.arange(samples) % classes)[rng.permutation(samples)]
    X = centers[y]
    if spread > 0:
        X = X + rng.normal((samples, features), spread)
    return Dataset(X, y, classes)

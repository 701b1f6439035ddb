"""
Overview:
    Inactive weights of dense models.
"""
import numpy as np

from ..numeric import ParamSet

__all__ = [
    'dead_weights',
]


def dead_weights(theta: ParamSet) -> float:
    """
    Overview:
        Fraction of prunable coordinates exactly equal to ``0``. Without prunable coordinates it is ``0``.

    Examples::
        >>> from acdckit.numeric import ParamSet, Segment
        >>> from acdckit.diagnostics import dead_weights
        >>> dead_weights(ParamSet([Segment('w', [0.0, 1.0, 0.0, 2.0], True), Segment('b', [0.0], False)]))
        0.5
    """
    count = theta.prunable_count
    if not count:
        return 0.0
    zeros = sum(int(s.size - np.count_nonzero(s.values)) for s in theta.prunable_segments)
    return zeros / count

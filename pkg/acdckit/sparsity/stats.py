"""
Overview:
    Sparsity measurement, over prunable coordinates and over the whole parameter set.
"""
from dataclasses import dataclass, field
from typing import Dict

import numpy as np

from ..numeric import ParamSet

__all__ = [
    'SparsityStats',
    'sparsity_stats', 'segment_densities',
]


@dataclass(frozen=True)
class SparsityStats:
    """
    Overview:
        Measured sparsity. ``prunable_sparsity`` counts only prunable coordinates \
        (the number usually quoted as "sparsity"), ``overall_sparsity`` counts all of them.
    """
    prunable_sparsity: float
    overall_sparsity: float
    prunable_nonzeros: int
    prunable_count: int
    total_nonzeros: int
    total_count: int
    segment_density: Dict[str, float] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            'prunable_sparsity': self.prunable_sparsity,
            'overall_sparsity': self.overall_sparsity,
            'prunable_nonzeros': self.prunable_nonzeros,
            'prunable_count': self.prunable_count,
            'total_nonzeros': self.total_nonzeros,
            'total_count': self.total_count,
            'segment_density': dict(self.segment_density),
        }


def segment_densities(p: ParamSet) -> Dict[str, float]:
    """
    Overview:
        Nonzero fraction of every prunable segment.
    """
    return {
        s.name: (float(np.count_nonzero(s.values)) / s.size if s.size else 1.0)
        for s in p.prunable_segments
    }


def sparsity_stats(p: ParamSet) -> SparsityStats:
    """
    Overview:
        Measure sparsity of ``p``.

    Examples::
        >>> from acdckit.numeric import ParamSet, Segment
        >>> from acdckit.sparsity import sparsity_stats
        >>> s = sparsity_stats(ParamSet([Segment('w', [0, 0, 1, 2], True), Segment('b', [1], False)]))
        >>> s.prunable_sparsity, s.overall_sparsity
        (0.5, 0.4)
    """
    prunable_nnz = sum(int(np.count_nonzero(s.values)) for s in p.prunable_segments)
    total_nnz = sum(int(np.count_nonzero(s.values)) for s in p.segments)
    prunable, total = p.prunable_count, p.total_count
    return SparsityStats(
        prunable_sparsity=1.0 - prunable_nnz / prunable if prunable else 0.0,
        overall_sparsity=1.0 - total_nnz / total if total else 0.0,
        prunable_nonzeros=prunable_nnz,
        prunable_count=prunable,
        total_nonzeros=total_nnz,
        total_count=total,
        segment_density=segment_densities(p),
    )

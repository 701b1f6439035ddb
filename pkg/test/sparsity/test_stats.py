import pytest

from acdckit.numeric import ParamSet, Segment
from acdckit.sparsity import segment_densities, sparsity_stats


@pytest.mark.unittest
class TestSparsityStats:
    def test_sparsity_stats(self):
        p = ParamSet([Segment('w', [0, 0, 1, 2], True), Segment('b', [1], False), Segment('v', [0, 3], True)])
        s = sparsity_stats(p)
        assert s.prunable_sparsity == pytest.approx(0.5)
        assert s.overall_sparsity == pytest.approx(3 / 7)
        assert s.prunable_nonzeros == 3
        assert s.total_count == 7
        assert s.segment_density == {'w': 0.5, 'v': 0.5}
        assert s.to_json()['prunable_count'] == 6

    def test_no_prunable(self):
        s = sparsity_stats(ParamSet([Segment('b', [0.0, 1.0], False)]))
        assert s.prunable_sparsity == 0.0
        assert s.overall_sparsity == 0.5
        assert segment_densities(ParamSet([])) == {}

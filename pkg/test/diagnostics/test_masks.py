import pytest

from acdckit.diagnostics import MaskHistory, mask_change, symmetric_mask_change
from acdckit.sparsity import Mask


@pytest.mark.unittest
class TestDiagnosticsMasks:
    def test_mask_change(self):
        assert mask_change(Mask([1, 1, 0, 0]), Mask([0, 1, 1, 0])) == 0.5
        assert mask_change(Mask([1, 1, 0, 0]), Mask([1, 1, 0, 0])) == 0.0
        assert mask_change(Mask([1, 1, 0, 0]), Mask([0, 0, 1, 1])) == 1.0
        assert mask_change(Mask([1, 1, 1, 0]), Mask([1, 0, 0, 0])) == 0.0
        assert mask_change(Mask([1, 0]), Mask([0, 0])) == 0.0
        with pytest.raises(ValueError):
            mask_change(Mask([1, 0]), Mask([1, 0, 0]))

    def test_symmetric_change(self):
        assert symmetric_mask_change(Mask([1, 1, 0, 0]), Mask([0, 1, 1, 0])) == 0.5
        assert symmetric_mask_change(Mask([1, 1, 1, 0]), Mask([1, 0, 0, 0])) == 0.5
        assert symmetric_mask_change(Mask([0, 0]), Mask([0, 0])) == 0.0
        with pytest.raises(ValueError):
            symmetric_mask_change(Mask([1]), Mask([1, 0]))

    def test_history(self):
        history = MaskHistory()
        assert len(history) == 0
        assert history.changes() == []
        history.append(10, Mask([1, 1, 0, 0]))
        history.append(20, Mask([0, 1, 1, 0]))
        history.append(30, Mask([0, 1, 1, 0]))
        assert history.epochs == [10, 20, 30]
        assert history.masks[1] == Mask([0, 1, 1, 0])
        assert history[0] == (10, Mask([1, 1, 0, 0]))
        assert list(history)[2][0] == 30
        assert history.changes() == [0.5, 0.0]
        assert history.changes(symmetric=True) == [0.5, 0.0]
        assert repr(history) == '<MaskHistory epochs: [10, 20, 30]>'

        with pytest.raises(ValueError):
            history.append(30, Mask([1, 1, 0, 0]))
        with pytest.raises(ValueError):
            history.append(40, Mask([1, 1, 0]))
        assert len(history) == 3

    def test_json(self):
        history = MaskHistory([(0, Mask([1, 0, 1])), (5, Mask([0, 1, 1]))])
        assert MaskHistory.from_json(history.to_json()) == history
        assert history.to_json()[1]['epoch'] == 5
        assert history != MaskHistory([(0, Mask([1, 0, 1]))])
        assert history != [(0, Mask([1, 0, 1])), (5, Mask([0, 1, 1]))]

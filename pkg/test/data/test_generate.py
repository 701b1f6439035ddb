import numpy as np
import pytest

from acdckit.data import gaussian_blobs
from acdckit.numeric import SeededRng


@pytest.mark.unittest
class TestDataGenerate:
    def test_gaussian_blobs(self):
        d = gaussian_blobs(20, 5, 100, 1.0, SeededRng(0))
        assert len(d) == 100
        assert d.features == 20
        assert d.classes == 5
        assert np.bincount(d.y, minlength=5).tolist() == [20] * 5

    def test_deterministic(self):
        assert gaussian_blobs(4, 3, 30, 0.5, SeededRng(7)) == gaussian_blobs(4, 3, 30, 0.5, SeededRng(7))
        assert gaussian_blobs(4, 3, 30, 0.5, SeededRng(7)) != gaussian_blobs(4, 3, 30, 0.5, SeededRng(8))

    def test_zero_spread(self):
        d = gaussian_blobs(6, 4, 80, 0.0, SeededRng(1), center_scale=2.0)
        for c in range(4):
            rows = d.X[d.y == c]
            assert np.all(rows == rows[0])
        centers = np.stack([d.X[d.y == c][0] for c in range(4)])
        assert len({tuple(row) for row in centers.tolist()}) == 4

    def test_invalid(self):
        rng = SeededRng(0)
        with pytest.raises(ValueError):
            gaussian_blobs(0, 2, 10, 1.0, rng)
        with pytest.raises(ValueError):
            gaussian_blobs(2, 1, 10, 1.0, rng)
        with pytest.raises(ValueError):
            gaussian_blobs(2, 2, 0, 1.0, rng)
        with pytest.raises(ValueError):
            gaussian_blobs(2, 2, 10, -1.0, rng)
        with pytest.raises(ValueError):
            gaussian_blobs(2, 2, 10, 1.0, rng, center_scale=0.0)

import numpy as np
import pytest

from acdckit.numeric import SeededRng, gaussian_matrix


@pytest.mark.unittest
class TestNumericMatrix:
    def test_gaussian_matrix(self):
        A = gaussian_matrix(400, 50, 400 ** -0.5, SeededRng(0))
        assert A.shape == (400, 50)
        assert A.flags.c_contiguous
        assert np.all(np.isfinite(A))
        assert np.mean(A) == pytest.approx(0.0, abs=0.01)
        assert np.std(A) == pytest.approx(0.05, rel=0.05)
        assert np.array_equal(A, gaussian_matrix(400, 50, 400 ** -0.5, SeededRng(0)))
        assert not np.array_equal(A, gaussian_matrix(400, 50, 400 ** -0.5, SeededRng(1)))

    def test_invalid(self):
        with pytest.raises(ValueError):
            gaussian_matrix(0, 3, 1.0, SeededRng(0))
        with pytest.raises(ValueError):
            gaussian_matrix(3, 0, 1.0, SeededRng(0))
        with pytest.raises(ValueError):
            gaussian_matrix(3, 3, 0.0, SeededRng(0))
        with pytest.raises(ValueError):
            gaussian_matrix(3, 3, float('nan'), SeededRng(0))

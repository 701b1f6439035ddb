import numpy as np
import pytest

from acdckit.numeric import NonFiniteError, as_matrix, as_vector, assert_finite


@pytest.mark.unittest
class TestNumericVector:
    def test_assert_finite(self):
        assert assert_finite(1.5) == 1.5
        arr = np.array([1.0, 2.0])
        assert assert_finite(arr) is arr
        with pytest.raises(NonFiniteError):
            assert_finite(float('inf'))
        with pytest.raises(NonFiniteError, match='position 2'):
            assert_finite([1.0, 2.0, float('nan')], 'gradient')
        with pytest.raises(ArithmeticError):
            assert_finite([float('-inf')])

    def test_as_vector(self):
        v = as_vector([1, 2, 3])
        assert v.dtype == np.float64
        assert v.tolist() == [1.0, 2.0, 3.0]

        source = np.array([1.0, 2.0])
        copied = as_vector(source)
        copied[0] = 10.0
        assert source[0] == 1.0

        assert as_vector([], 0).shape == (0,)
        with pytest.raises(ValueError):
            as_vector([[1, 2]])
        with pytest.raises(ValueError):
            as_vector([1, 2], 3)
        with pytest.raises(NonFiniteError):
            as_vector([1.0, float('nan')])

    def test_as_matrix(self):
        m = as_matrix([[1, 2], [3, 4]], 2, 2)
        assert m.flags['C_CONTIGUOUS']
        assert m.dtype == np.float64
        with pytest.raises(ValueError):
            as_matrix([1, 2])
        with pytest.raises(ValueError):
            as_matrix([[1, 2]], rows=2)
        with pytest.raises(ValueError):
            as_matrix([[1, 2]], cols=3)
        with pytest.raises(NonFiniteError):
            as_matrix([[float('inf')]])

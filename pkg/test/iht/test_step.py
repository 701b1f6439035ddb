import pickle

import numpy as np
import pytest

from acdckit.iht import DivergenceError, hard_threshold, iht_step
from acdckit.numeric import NonFiniteError, SeededRng
from acdckit.sparsity import GlobalTopK, SemiStructuredNM


@pytest.mark.unittest
class TestIhtStep:
    def test_iht_step(self):
        assert iht_step([1.0, 1.0], [-2.0, 2.0], 0.25, GlobalTopK(k=1)).tolist() == [1.5, 0.0]

    def test_identity_truncation(self):
        rng = SeededRng(0)
        theta, g = rng.normal(9), rng.normal(9)
        assert np.array_equal(iht_step(theta, g, 0.3, GlobalTopK(k=9)), theta - 0.3 * g)

    def test_fixed_point(self):
        theta, g = np.array([5.0, 4.0, 0.0, 0.0]), np.array([0.0, 0.0, 1.0, 1.0])
        pattern = GlobalTopK(k=2)
        assert np.array_equal(iht_step(theta, g, 0.1, pattern), theta)
        again = iht_step(iht_step(theta, g, 0.1, pattern), g, 0.1, pattern)
        assert again.tobytes() == theta.tobytes()

    @pytest.mark.parametrize('seed', range(5))
    def test_pattern_preserved(self, seed):
        rng = SeededRng(seed)
        out = iht_step(rng.normal(40), rng.normal(40), 0.5, GlobalTopK(k=7))
        assert np.count_nonzero(out) == 7

        out = iht_step(rng.normal(40), rng.normal(40), 0.5, SemiStructuredNM(2, 4))
        assert np.all(np.count_nonzero(out.reshape(10, 4), axis=1) == 2)

    def test_hard_threshold(self):
        truncated, mask = hard_threshold(np.array([0.1, -3.0, 2.0, 0.5]), GlobalTopK(k=2))
        assert truncated.tolist() == [0.0, -3.0, 2.0, 0.0]
        assert mask.support().tolist() == [1, 2]

    def test_invalid(self):
        with pytest.raises(ValueError):
            iht_step([1.0, 1.0], [1.0], 0.1, GlobalTopK(k=1))
        with pytest.raises(ValueError):
            iht_step([1.0, 1.0], [1.0, 1.0], 0.0, GlobalTopK(k=1))
        with pytest.raises(NonFiniteError):
            iht_step([1e308, 1.0], [-1e308, 0.0], 10.0, GlobalTopK(k=2))

    def test_divergence_error(self):
        err = DivergenceError('blown up', {'iteration': 3, 'step_size': 10.0})
        assert isinstance(err, RuntimeError)
        assert err.diagnostic == {'iteration': 3, 'step_size': 10.0}
        assert DivergenceError('no diagnostic').diagnostic == {}

        restored = pickle.loads(pickle.dumps(err))
        assert str(restored) == 'blown up'
        assert restored.diagnostic == {'iteration': 3, 'step_size': 10.0}

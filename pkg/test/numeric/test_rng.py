import numpy as np
import pytest

from acdckit.numeric import RNG_ALGORITHM, SeededRng, gaussian_matrix


@pytest.mark.unittest
class TestNumericRng:
    def test_determinism(self):
        a, b = SeededRng(7), SeededRng(7)
        assert a.normal(5).tolist() == b.normal(5).tolist()
        assert a.uniform(3).tolist() == b.uniform(3).tolist()
        assert a.permutation(10).tolist() == b.permutation(10).tolist()
        assert a.choice(10, 4).tolist() == b.choice(10, 4).tolist()
        assert SeededRng(7).normal(5).tolist() != SeededRng(8).normal(5).tolist()

    def test_spawn(self):
        root = SeededRng(3)
        child = root.spawn(1)
        assert child.key == (1,)
        assert child.seed == 3

        consumed = SeededRng(3)
        consumed.normal(100)
        assert consumed.spawn(1).normal(4).tolist() == child.normal(4).tolist()
        assert SeededRng(3).spawn(1).normal(4).tolist() != SeededRng(3).spawn(2).normal(4).tolist()
        assert SeededRng(3).spawn(1, 2).key == (1, 2)

    def test_invalid_seed(self):
        with pytest.raises(TypeError):
            SeededRng(1.5)
        with pytest.raises(TypeError):
            SeededRng(True)
        with pytest.raises(ValueError):
            SeededRng(-1)
        with pytest.raises(ValueError):
            SeededRng(2 ** 64)
        SeededRng(2 ** 64 - 1)

    def test_choice(self):
        picked = SeededRng(0).choice(10, 10)
        assert sorted(picked.tolist()) == list(range(10))
        with pytest.raises(ValueError):
            SeededRng(0).choice(3, 4)
        assert SeededRng(0).choice(3, 5, replace=True).shape == (5,)

    def test_state_and_repr(self):
        assert SeededRng(5).algorithm == RNG_ALGORITHM == 'philox'
        assert SeededRng(5).spawn(2).state_dict() == {'algorithm': 'philox', 'seed': 5, 'key': [2]}
        assert repr(SeededRng(5)) == '<SeededRng seed: 5, algorithm: philox>'
        assert isinstance(SeededRng(5).generator, np.random.Generator)

    def test_gaussian_matrix(self):
        m = gaussian_matrix(2000, 50, 0.5, SeededRng(0))
        assert m.shape == (2000, 50)
        assert m.std() == pytest.approx(0.5, rel=0.02)
        assert np.array_equal(m, gaussian_matrix(2000, 50, 0.5, SeededRng(0)))
        with pytest.raises(ValueError):
            gaussian_matrix(0, 3, 1.0, SeededRng(0))
        with pytest.raises(ValueError):
            gaussian_matrix(3, 3, 0.0, SeededRng(0))

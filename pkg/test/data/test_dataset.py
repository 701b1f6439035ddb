import numpy as np
import pytest

from acdckit.data import Dataset
from acdckit.numeric import NonFiniteError, SeededRng


@pytest.mark.unittest
class TestDataDataset:
    def test_dataset(self):
        d = Dataset([[0.0, 1.0], [1.0, 0.0], [2.0, 2.0]], [0, 1, 1], 3, ['a', 'b', 'c'])
        assert len(d) == 3
        assert d.features == 2
        assert d.classes == 3
        assert d.label_names == ('a', 'b', 'c')
        assert d.y.dtype == np.int64
        assert repr(d) == '<Dataset samples: 3, features: 2, classes: 3>'
        with pytest.raises(ValueError):
            d.X[0, 0] = 5.0

    def test_dataset_classes_inferred(self):
        assert Dataset(np.zeros((4, 1)), [0, 2, 1, 2]).classes == 3
        assert Dataset(np.zeros((0, 3)), []).classes == 0

    def test_dataset_invalid(self):
        with pytest.raises(ValueError):
            Dataset(np.zeros((3, 2)), [0, 1])
        with pytest.raises(ValueError):
            Dataset(np.zeros((2, 2)), [0.5, 1])
        with pytest.raises(ValueError):
            Dataset(np.zeros((2, 2)), [0, 2], 2)
        with pytest.raises(ValueError):
            Dataset(np.zeros((2, 2)), [-1, 0], 2)
        with pytest.raises(ValueError):
            Dataset(np.zeros((2, 2)), [0, 1], 2, ['only-one'])
        with pytest.raises(NonFiniteError):
            Dataset([[np.nan, 0.0]], [0])

    def test_subset_and_labels(self):
        d = Dataset(np.arange(10, dtype=float).reshape(5, 2), [0, 1, 0, 1, 0], 2)
        s = d.subset([4, 1])
        assert np.array_equal(s.X, [[8.0, 9.0], [2.0, 3.0]])
        assert s.y.tolist() == [0, 1]
        assert s.classes == 2

        flipped = d.with_labels([1, 0, 1, 0, 1])
        assert flipped.y.tolist() == [1, 0, 1, 0, 1]
        assert np.array_equal(flipped.X, d.X)
        assert flipped != d

    def test_split(self):
        d = Dataset(np.arange(200, dtype=float).reshape(100, 2), np.arange(100) % 4, 4)
        train, eval_ = d.split(0.2, SeededRng(3))
        assert len(train) == 80
        assert len(eval_) == 20
        rows = sorted(train.X[:, 0].tolist() + eval_.X[:, 0].tolist())
        assert rows == d.X[:, 0].tolist()

        again, _ = d.split(0.2, SeededRng(3))
        assert again == train

        with pytest.raises(ValueError):
            d.split(0.0, SeededRng(3))
        with pytest.raises(ValueError):
            d.split(1.0, SeededRng(3))

    def test_eq(self):
        d = Dataset([[1.0]], [0], 2)
        assert d == d
        assert d == Dataset([[1.0]], [0], 2)
        assert d != Dataset([[1.0]], [0], 3)
        assert d != Dataset([[1.0]], [0], 2, ['x', 'y'])
        assert d != 'dataset'
        assert hash(d) == hash(Dataset([[1.0]], [0], 2))

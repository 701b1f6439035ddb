import numpy as np
import pytest

from acdckit.numeric import SeededRng
from acdckit.sparsity import Mask, apply_mask


@pytest.mark.unittest
class TestSparsityMask:
    def test_basic(self):
        m = Mask([1, 0, 1, 1])
        assert m.size == len(m) == 4
        assert m.popcount == 3
        assert m.density == 0.75
        assert m.support().tolist() == [0, 2, 3]
        assert m.as_float().tolist() == [1.0, 0.0, 1.0, 1.0]
        assert not m.bits.flags.writeable
        assert repr(m) == '<Mask size: 4, popcount: 3>'

    def test_constructors(self):
        assert Mask.ones(3).popcount == 3
        assert Mask.zeros(3).popcount == 0
        assert Mask.zeros(0).density == 1.0
        assert Mask.from_indices(5, [4, 0]).support().tolist() == [0, 4]
        assert Mask.from_nonzero([0.0, -1.0, 0.0, 2.0]).support().tolist() == [1, 3]
        with pytest.raises(IndexError):
            Mask.from_indices(3, [3])

    def test_algebra(self):
        a, b = Mask([1, 1, 0, 0]), Mask([0, 1, 1, 0])
        assert (a & b).support().tolist() == [1]
        assert (a | b).support().tolist() == [0, 1, 2]
        assert (a - b).support().tolist() == [0]
        assert (a ^ b).support().tolist() == [0, 2]
        with pytest.raises(ValueError):
            a & Mask([1, 0])
        with pytest.raises(TypeError):
            a | [1, 0, 0, 0]

    def test_equality_and_digest(self):
        assert Mask([1, 0, 1]) == Mask([True, False, True])
        assert Mask([1, 0, 1]) != Mask([1, 1, 0])
        assert Mask([1, 0, 1]).digest() == Mask([1, 0, 1]).digest()
        assert Mask([1, 0, 1]).digest() != Mask([1, 0, 1, 0]).digest()
        assert len(Mask([1]).digest()) == 16
        assert hash(Mask([0, 1])) == hash(Mask([0, 1]))

    @pytest.mark.parametrize('size', [0, 1, 7, 8, 9, 100])
    def test_json(self, size):
        bits = np.arange(size) % 3 == 0
        data = Mask(bits).to_json()
        assert data['count'] == size
        assert Mask.from_json(data) == Mask(bits)

    def test_json_invalid(self):
        with pytest.raises(ValueError):
            Mask.from_json({'count': 20, 'bits': Mask.ones(8).to_json()['bits']})

    def test_apply_mask(self):
        v = apply_mask([1.0, -2.0, 3.0], Mask([0, 1, 0]))
        assert v.tolist() == [0.0, -2.0, 0.0]
        with pytest.raises(ValueError):
            apply_mask([1.0, 2.0], Mask([1, 0, 1]))

    def test_apply_mask_idempotent(self):
        rng = SeededRng(31)
        for _ in range(1000):
            n = int(rng.integers(0, 20))
            v = rng.normal(n)
            m = Mask(rng.uniform(n) < 0.5)
            once = apply_mask(v, m)
            assert np.array_equal(apply_mask(once, m), once)
            assert np.all(once[~m.bits] == 0.0)
            assert np.array_equal(once[m.bits], v[m.bits])

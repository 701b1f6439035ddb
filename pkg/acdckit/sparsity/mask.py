"""
Overview:
    Boolean support masks over prunable coordinates.
"""
import base64
from typing import Iterable, Mapping

import numpy as np
from hbutils.encoding import sha1
from hbutils.model import get_repr_info

__all__ = [
    'Mask',
    'apply_mask',
]


class Mask:
    """
    Overview:
        One bit per prunable coordinate, with cached popcount.

    Examples::
        >>> from acdckit.sparsity import Mask
        >>> m = Mask.from_indices(4, [1, 3])
        >>> m.popcount, m.support().tolist()
        (2, [1, 3])
        >>> m
        <Mask size: 4, popcount: 2>
    """

    def __init__(self, bits):
        bits = np.array(bits, dtype=bool).reshape(-1)
        bits.setflags(write=False)
        self.__bits = bits
        self.__popcount = int(np.count_nonzero(bits))

    @classmethod
    def ones(cls, size: int) -> 'Mask':
        return cls(np.ones(size, dtype=bool))

    @classmethod
    def zeros(cls, size: int) -> 'Mask':
        return cls(np.zeros(size, dtype=bool))

    @classmethod
    def from_indices(cls, size: int, indices: Iterable[int]) -> 'Mask':
        bits = np.zeros(size, dtype=bool)
        indices = np.asarray(list(indices), dtype=np.int64)
        if indices.size and (indices.min() < 0 or indices.max() >= size):
            raise IndexError(f'Indices in [0, {size!r}) expected but {indices.tolist()!r} found.')
        bits[indices] = True
        return cls(bits)

    @classmethod
    def from_nonzero(cls, values) -> 'Mask':
        """
        Overview:
            Mask of nonzero entries of ``values``.
        """
        return cls(np.asarray(values).reshape(-1) != 0)

    @property
    def bits(self) -> np.ndarray:
        """
        Read-only boolean array.
        """
        return self.__bits

    @property
    def size(self) -> int:
        return int(self.__bits.shape[0])

    @property
    def popcount(self) -> int:
        return self.__popcount

    @property
    def density(self) -> float:
        return self.__popcount / self.size if self.size else 1.0

    def support(self) -> np.ndarray:
        return np.flatnonzero(self.__bits)

    def as_float(self) -> np.ndarray:
        return self.__bits.astype(np.float64)

    def digest(self) -> str:
        """
        Overview:
            Short hash of the support set, stable across runs.
        """
        return sha1(np.int64(self.size).tobytes() + np.packbits(self.__bits).tobytes())[:16]

    def to_json(self) -> dict:
        """
        Overview:
            Bit-packed form, ``count`` is the coordinate count and ``bits`` is base64 of the packed bytes.
        """
        return {
            'count': self.size,
            'bits': base64.b64encode(np.packbits(self.__bits).tobytes()).decode('ascii'),
        }

    @classmethod
    def from_json(cls, data: Mapping) -> 'Mask':
        count = int(data['count'])
        packed = np.frombuffer(base64.b64decode(data['bits']), dtype=np.uint8)
        if packed.shape[0] != (count + 7) // 8:
            raise ValueError(f'{(count + 7) // 8!r} packed bytes expected for {count!r} bits '
                             f'but {packed.shape[0]!r} found.')
        return cls(np.unpackbits(packed, count=count).astype(bool))

    def __and__(self, other: 'Mask') -> 'Mask':
        self._check_size(other)
        return Mask(self.__bits & other.__bits)

    def __or__(self, other: 'Mask') -> 'Mask':
        self._check_size(other)
        return Mask(self.__bits | other.__bits)

    def __sub__(self, other: 'Mask') -> 'Mask':
        self._check_size(other)
        return Mask(self.__bits & ~other.__bits)

    def __xor__(self, other: 'Mask') -> 'Mask':
        self._check_size(other)
        return Mask(self.__bits ^ other.__bits)

    def _check_size(self, other: 'Mask'):
        if not isinstance(other, Mask):
            raise TypeError(f'Mask expected but {type(other).__name__!r} found.')
        if other.size != self.size:
            raise ValueError(f'Mask of size {self.size!r} expected but {other.size!r} found.')

    def __len__(self):
        return self.size

    def __eq__(self, other):
        if self is other:
            return True
        elif isinstance(other, Mask):
            return np.array_equal(self.__bits, other.__bits)
        else:
            return False

    def __hash__(self):
        return hash(self.digest())

    def __repr__(self):
        return get_repr_info(
            cls=self.__class__,
            args=[
                ('size', lambda: self.size),
                ('popcount', lambda: self.__popcount),
            ]
        )


def apply_mask(v, m: Mask) -> np.ndarray:
    """
    Overview:
        Elementwise product ``v * m``, masked-out entries become exactly ``0``.

    Examples::
        >>> from acdckit.sparsity import Mask, apply_mask
        >>> apply_mask([1, 2, 3], Mask([0, 1, 0]))
        array([0., 2., 0.])
    """
    v = np.asarray(v, dtype=np.float64)
    if v.ndim != 1 or v.shape[0] != m.size:
        raise ValueError(f'Vector of length {m.size!r} expected but shape {v.shape!r} found.')
    return np.where(m.bits, v, 0.0)

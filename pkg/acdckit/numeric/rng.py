"""
Overview:
    Seeded random generation based on the counter-based ``Philox`` bit generator.
"""
from typing import Optional, Sequence, Union

import numpy as np
from hbutils.model import get_repr_info

__all__ = [
    'RNG_ALGORITHM',
    'SeededRng',
]

#: Name of the bit generator, recorded in checkpoint headers.
RNG_ALGORITHM = 'philox'

_MAX_SEED = 2 ** 64 - 1


class SeededRng:
    """
    Overview:
        Seeded random generator. Identical seed and identical call sequence produce identical outputs.

    Examples::
        >>> from acdckit.numeric import SeededRng
        >>> SeededRng(7).normal(3).tolist() == SeededRng(7).normal(3).tolist()
        True
        >>> SeededRng(7)
        <SeededRng seed: 7, algorithm: philox>
    """

    def __init__(self, seed: int, key: Sequence[int] = ()):
        """
        Constructor of :class:`SeededRng`.

        :param seed: 64-bit unsigned seed.
        :param key: Spawn key of this generator, empty for the root generator.
        """
        if not isinstance(seed, (int, np.integer)) or isinstance(seed, bool):
            raise TypeError(f'Integer seed expected but {seed!r} found.')
        if not 0 <= int(seed) <= _MAX_SEED:
            raise ValueError(f'Seed in [0, 2**64) expected but {seed!r} found.')

        self.__seed = int(seed)
        self.__key = tuple(int(k) for k in key)
        sequence = np.random.SeedSequence(self.__seed, spawn_key=self.__key)
        self.__generator = np.random.Generator(np.random.Philox(sequence))

    @property
    def seed(self) -> int:
        return self.__seed

    @property
    def key(self) -> tuple:
        return self.__key

    @property
    def algorithm(self) -> str:
        return RNG_ALGORITHM

    @property
    def generator(self) -> np.random.Generator:
        """
        Underlying :class:`numpy.random.Generator`.
        """
        return self.__generator

    def spawn(self, *key: int) -> 'SeededRng':
        """
        Overview:
            Create an independent child generator identified by ``key``. \
            The child does not depend on how much the parent has been consumed.
        """
        return SeededRng(self.__seed, self.__key + tuple(key))

    def normal(self, size: Union[int, Sequence[int]], scale: float = 1.0) -> np.ndarray:
        return self.__generator.normal(0.0, scale, size=size)

    def uniform(self, size: Union[int, Sequence[int]], low: float = 0.0, high: float = 1.0) -> np.ndarray:
        return self.__generator.uniform(low, high, size=size)

    def integers(self, low: int, high: int, size: Optional[Union[int, Sequence[int]]] = None):
        return self.__generator.integers(low, high, size=size)

    def permutation(self, n: int) -> np.ndarray:
        return self.__generator.permutation(n)

    def choice(self, n: int, count: int, replace: bool = False) -> np.ndarray:
        """
        Overview:
            Choose ``count`` indices from ``range(n)``.
        """
        if not replace and count > n:
            raise ValueError(f'Choice without replacement, count must be no more than {n!r} but {count!r} found.')
        return self.__generator.choice(n, size=count, replace=replace)

    def state_dict(self) -> dict:
        """
        Overview:
            Header information for checkpoints.
        """
        return {'algorithm': RNG_ALGORITHM, 'seed': self.__seed, 'key': list(self.__key)}

    def __repr__(self):
        return get_repr_info(
            cls=self.__class__,
            args=[
                ('seed', lambda: self.__seed),
                ('key', lambda: self.__key, lambda: bool(self.__key)),
                ('algorithm', lambda: RNG_ALGORITHM),
            ]
        )

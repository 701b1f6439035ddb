"""
Overview:
    Mini-batch index sampling.
"""
from typing import Iterator, List

import numpy as np

from .config import BatchScheme
from ..numeric import SeededRng

__all__ = [
    'BatchSampler',
    'partition',
]


def partition(order: np.ndarray, batch_size: int) -> List[np.ndarray]:
    """
    Overview:
        Split ``order`` into consecutive batches of ``batch_size``, the last one may be shorter.
    """
    return [order[i:i + batch_size] for i in range(0, order.shape[0], batch_size)]


class BatchSampler:
    """
    Overview:
        Endless source of mini-batches over ``sample_count`` samples.

    Examples::
        >>> from acdckit.iht import BatchSampler
        >>> from acdckit.numeric import SeededRng
        >>> sampler = BatchSampler(10, 4, 'shuffled_partition', SeededRng(0))
        >>> [len(b) for b in sampler.epoch()]
        [4, 4, 2]
    """

    def __init__(self, sample_count: int, batch_size: int, scheme, rng: SeededRng):
        if sample_count < 1:
            raise ValueError(f'Positive sample count expected but {sample_count!r} found.')
        if not 1 <= batch_size <= sample_count:
            raise ValueError(f'Batch size in [1, {sample_count!r}] expected but {batch_size!r} found.')
        self.__sample_count = sample_count
        self.__batch_size = batch_size
        self.__scheme = BatchScheme.loads(scheme)
        self.__rng = rng
        self.__pending: List[np.ndarray] = []
        self.__epochs = 0

    @property
    def batch_size(self) -> int:
        return self.__batch_size

    @property
    def epochs(self) -> int:
        """
        Count of started epochs.
        """
        return self.__epochs

    @property
    def batches_per_epoch(self) -> int:
        return -(-self.__sample_count // self.__batch_size)

    def epoch(self) -> List[np.ndarray]:
        """
        Overview:
            Batches of one full epoch.
        """
        self.__epochs += 1
        if self.__scheme == BatchScheme.SHUFFLED_PARTITION:
            return partition(self.__rng.permutation(self.__sample_count), self.__batch_size)
        else:
            return [self.__rng.integers(0, self.__sample_count, self.__batch_size)
                    for _ in range(self.batches_per_epoch)]

    def next_batch(self) -> np.ndarray:
        if not self.__pending:
            self.__pending = list(reversed(self.epoch()))
        return self.__pending.pop()

    def __iter__(self) -> Iterator[np.ndarray]:
        while True:
            yield self.next_batch()

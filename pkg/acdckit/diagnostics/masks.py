"""
Overview:
    Dynamics of compression masks across phases.
"""
from typing import Iterator, List, Mapping, Tuple

from hbutils.model import get_repr_info

from ..sparsity import Mask

__all__ = [
    'MaskHistory',
    'mask_change', 'symmetric_mask_change',
]


def _check_sizes(prev: Mask, next_: Mask):
    if prev.size != next_.size:
        raise ValueError(f'Masks of equal length expected but {prev.size!r} and {next_.size!r} found.')


def mask_change(prev: Mask, next_: Mask) -> float:
    """
    Overview:
        Fraction of the new mask that is newly included, ``|next \\ prev| / max(1, |next|)``.

    Examples::
        >>> from acdckit.sparsity import Mask
        >>> from acdckit.diagnostics import mask_change
        >>> mask_change(Mask([1, 1, 0, 0]), Mask([0, 1, 1, 0]))
        0.5
    """
    _check_sizes(prev, next_)
    return (next_ - prev).popcount / max(1, next_.popcount)


def symmetric_mask_change(prev: Mask, next_: Mask) -> float:
    """
    Overview:
        Size of the symmetric difference relative to both supports, ``|prev ^ next| / (|prev| + |next|)``. \
        Two empty masks have change ``0``.
    """
    _check_sizes(prev, next_)
    total = prev.popcount + next_.popcount
    return (prev ^ next_).popcount / total if total else 0.0


class MaskHistory:
    """
    Overview:
        Masks captured at every compressed-phase entry, by epoch.
    """

    def __init__(self, entries: List[Tuple[int, Mask]] = None):
        self.__entries: List[Tuple[int, Mask]] = []
        for epoch, mask in (entries or []):
            self.append(epoch, mask)

    def append(self, epoch: int, mask: Mask):
        if self.__entries:
            last_epoch, last_mask = self.__entries[-1]
            if epoch <= last_epoch:
                raise ValueError(f'Epoch after {last_epoch!r} expected but {epoch!r} found.')
            _check_sizes(last_mask, mask)
        self.__entries.append((int(epoch), mask))

    @property
    def epochs(self) -> List[int]:
        return [epoch for epoch, _ in self.__entries]

    @property
    def masks(self) -> List[Mask]:
        return [mask for _, mask in self.__entries]

    def changes(self, symmetric: bool = False) -> List[float]:
        """
        Overview:
            Change between every two consecutive masks, one item less than the history.
        """
        func = symmetric_mask_change if symmetric else mask_change
        masks = self.masks
        return [func(a, b) for a, b in zip(masks[:-1], masks[1:])]

    def __iter__(self) -> Iterator[Tuple[int, Mask]]:
        return iter(self.__entries)

    def __len__(self):
        return len(self.__entries)

    def __getitem__(self, index: int) -> Tuple[int, Mask]:
        return self.__entries[index]

    def to_json(self) -> List[dict]:
        return [{'epoch': epoch, 'mask': mask.to_json()} for epoch, mask in self.__entries]

    @classmethod
    def from_json(cls, data: List[Mapping]) -> 'MaskHistory':
        return cls([(item['epoch'], Mask.from_json(item['mask'])) for item in data])

    def __eq__(self, other):
        return isinstance(other, MaskHistory) and self.__entries == other.__entries

    def __repr__(self):
        return get_repr_info(
            cls=self.__class__,
            args=[
                ('epochs', lambda: self.epochs),
            ]
        )

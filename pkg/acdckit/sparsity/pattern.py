"""
Overview:
    Sparsity patterns and their compression operators.

    Three patterns are supported:

    - :class:`GlobalTopK`, magnitude top-k over the whole flat prunable view.
    - :class:`UniformPerLayer`, independent top-k inside every non-exempt prunable segment.
    - :class:`SemiStructuredNM`, ``n`` kept weights inside every block of ``m`` consecutive weights.
"""
from abc import ABCMeta, abstractmethod
from typing import Mapping, Optional, Sequence, Union

import numpy as np
from hbutils.model import get_repr_info

from .mask import Mask
from .topk import top_k_global, top_k_indices
from ..numeric import ParamSet

__all__ = [
    'PatternError',
    'SparsityPattern', 'GlobalTopK', 'UniformPerLayer', 'SemiStructuredNM',
    'apply_pattern', 'pattern_from_json',
]


class PatternError(ValueError):
    """
    Overview:
        Raised when a pattern is invalid, or invalid for a given parameter set.
    """
    pass


def _check_fraction(fraction, name: str = 'fraction') -> float:
    if isinstance(fraction, bool) or not isinstance(fraction, (int, float, np.floating)):
        raise PatternError(f'Numeric {name} expected but {fraction!r} found.')
    fraction = float(fraction)
    if not 0.0 < fraction <= 1.0:
        raise PatternError(f'{name.capitalize()} in (0, 1] expected but {fraction!r} found.')
    return fraction


class SparsityPattern(metaclass=ABCMeta):
    """
    Overview:
        Base class of sparsity patterns.
    """

    @abstractmethod
    def validate(self, p: ParamSet):
        """
        Overview:
            Raise :class:`PatternError` when this pattern cannot be applied to ``p``.
        """
        raise NotImplementedError  # pragma: no cover

    @abstractmethod
    def cardinality(self, p: ParamSet) -> int:
        """
        Overview:
            Exact count of kept prunable coordinates.
        """
        raise NotImplementedError  # pragma: no cover

    @abstractmethod
    def _mask(self, p: ParamSet) -> Mask:
        raise NotImplementedError  # pragma: no cover

    @abstractmethod
    def to_json(self) -> dict:
        raise NotImplementedError  # pragma: no cover

    def mask(self, p: ParamSet) -> Mask:
        """
        Overview:
            Compression mask over the prunable coordinates of ``p``.
        """
        self.validate(p)
        return self._mask(p)

    def mask_vector(self, v) -> Mask:
        """
        Overview:
            Compression mask of a flat vector, seen as a single prunable segment.
        """
        return self.mask(ParamSet.from_vector(v))

    def satisfied_by(self, p: ParamSet, m: Mask) -> bool:
        """
        Overview:
            Whether mask ``m`` has the structure this pattern produces on ``p``.
        """
        return m.size == p.prunable_count and m.popcount == self.cardinality(p)


class GlobalTopK(SparsityPattern):
    """
    Overview:
        Global magnitude top-k. Either ``k`` (an exact count) or ``fraction`` \
        (kept fraction, converted with ``round(fraction * prunable_count)``) is given.

    Examples::
        >>> from acdckit.sparsity import GlobalTopK
        >>> GlobalTopK(fraction=0.1)
        <GlobalTopK fraction: 0.1>
        >>> GlobalTopK.from_sparsity(0.9).fraction
        0.09999999999999998
    """

    def __init__(self, k: Optional[int] = None, fraction: Optional[float] = None):
        if (k is None) == (fraction is None):
            raise PatternError(f'Exactly one of k and fraction expected but {(k, fraction)!r} found.')
        if k is not None and (isinstance(k, bool) or not isinstance(k, (int, np.integer)) or k < 0):
            raise PatternError(f'Non-negative integer k expected but {k!r} found.')
        self.__k = int(k) if k is not None else None
        self.__fraction = _check_fraction(fraction) if fraction is not None else None

    @classmethod
    def from_sparsity(cls, sparsity: float) -> 'GlobalTopK':
        return cls(fraction=1.0 - float(sparsity))

    @property
    def k(self) -> Optional[int]:
        return self.__k

    @property
    def fraction(self) -> Optional[float]:
        return self.__fraction

    def validate(self, p: ParamSet):
        if self.__k is not None and self.__k > p.prunable_count:
            raise PatternError(f'Kept count no more than {p.prunable_count!r} expected but {self.__k!r} found.')

    def cardinality(self, p: ParamSet) -> int:
        if self.__k is not None:
            return self.__k
        else:
            return int(round(self.__fraction * p.prunable_count))

    def _mask(self, p: ParamSet) -> Mask:
        vector, _ = p.flatten_prunable()
        return top_k_global(vector, self.cardinality(p))

    def to_json(self) -> dict:
        if self.__k is not None:
            return {'kind': 'global', 'k': self.__k}
        else:
            return {'kind': 'global', 'fraction': self.__fraction}

    def __eq__(self, other):
        return type(other) is type(self) and (self.__k, self.__fraction) == (other.__k, other.__fraction)

    def __hash__(self):
        return hash((self.__k, self.__fraction))

    def __repr__(self):
        return get_repr_info(
            cls=self.__class__,
            args=[
                ('k', lambda: self.__k, lambda: self.__k is not None),
                ('fraction', lambda: self.__fraction, lambda: self.__fraction is not None),
            ]
        )


class UniformPerLayer(SparsityPattern):
    """
    Overview:
        Uniform per-segment top-k. Every non-exempt prunable segment keeps \
        ``floor(fraction * size)`` entries, exempt segments stay dense.

    Examples::
        >>> import numpy as np
        >>> from acdckit.numeric import ParamSet, Segment
        >>> from acdckit.sparsity import UniformPerLayer
        >>> p = ParamSet([Segment('a', np.arange(1, 5), True), Segment('b', np.arange(1, 7), True)])
        >>> UniformPerLayer(0.5).mask(p).popcount
        5
    """

    def __init__(self, fraction: Union[float, Mapping[str, float]], exempt: Sequence[str] = ()):
        if isinstance(fraction, Mapping):
            self.__fraction = {str(name): _check_fraction(value) for name, value in fraction.items()}
        else:
            self.__fraction = _check_fraction(fraction)
        self.__exempt = tuple(exempt)

    @property
    def fraction(self) -> Union[float, Mapping[str, float]]:
        return self.__fraction

    @property
    def exempt(self) -> tuple:
        return self.__exempt

    def _fraction_of(self, name: str) -> float:
        if isinstance(self.__fraction, dict):
            return self.__fraction[name]
        else:
            return self.__fraction

    def validate(self, p: ParamSet):
        prunable = {s.name for s in p.prunable_segments}
        missing = [name for name in self.__exempt if name not in prunable]
        if missing:
            raise PatternError(f'Exempt segments should be prunable segments of {sorted(prunable)!r} '
                               f'but {missing!r} found.')
        if isinstance(self.__fraction, dict):
            uncovered = [s.name for s in p.prunable_segments
                         if s.name not in self.__exempt and s.name not in self.__fraction]
            if uncovered:
                raise PatternError(f'Fractions for segments {uncovered!r} expected but not found.')

    def _kept_of(self, name: str, size: int) -> int:
        if name in self.__exempt:
            return size
        else:
            return int(np.floor(self._fraction_of(name) * size))

    def cardinality(self, p: ParamSet) -> int:
        return sum(self._kept_of(s.name, s.size) for s in p.prunable_segments)

    def _mask(self, p: ParamSet) -> Mask:
        bits = np.zeros(p.prunable_count, dtype=bool)
        for name, start, stop, _ in p.index_map:
            local = top_k_indices(p[name].reshape(-1), self._kept_of(name, stop - start))
            bits[start + local] = True
        return Mask(bits)

    def satisfied_by(self, p: ParamSet, m: Mask) -> bool:
        if m.size != p.prunable_count:
            return False
        for name, start, stop, _ in p.index_map:
            if int(np.count_nonzero(m.bits[start:stop])) != self._kept_of(name, stop - start):
                return False
        return True

    def to_json(self) -> dict:
        return {'kind': 'uniform', 'fraction': self.__fraction, 'exempt': list(self.__exempt)}

    def __eq__(self, other):
        return type(other) is type(self) and (self.__fraction, self.__exempt) == (other.__fraction, other.__exempt)

    def __hash__(self):
        return hash((str(self.__fraction), self.__exempt))

    def __repr__(self):
        return get_repr_info(
            cls=self.__class__,
            args=[
                ('fraction', lambda: self.__fraction),
                ('exempt', lambda: list(self.__exempt), lambda: bool(self.__exempt)),
            ]
        )


class SemiStructuredNM(SparsityPattern):
    """
    Overview:
        N:M semi-structured sparsity. Inside each segment (flattened row-major), every block of ``m`` \
        consecutive weights keeps its ``n`` largest-magnitude entries. A trailing remainder block \
        of size ``r`` keeps ``min(n, r)`` entries.

    Examples::
        >>> from acdckit.sparsity import SemiStructuredNM
        >>> SemiStructuredNM(2, 4).mask_vector([0.1, -0.5, 0.3, 0.05]).support().tolist()
        [1, 2]
    """

    def __init__(self, n: int, m: int):
        for name, value in [('n', n), ('m', m)]:
            if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
                raise PatternError(f'Integer {name} expected but {value!r} found.')
        if not 1 <= n <= m:
            raise PatternError(f'1 <= n <= m expected but {(n, m)!r} found.')
        self.__n = int(n)
        self.__m = int(m)

    @property
    def n(self) -> int:
        return self.__n

    @property
    def m(self) -> int:
        return self.__m

    def validate(self, p: ParamSet):
        pass

    def _kept_of(self, size: int) -> int:
        full, rest = divmod(size, self.__m)
        return full * self.__n + min(self.__n, rest)

    def cardinality(self, p: ParamSet) -> int:
        return sum(self._kept_of(s.size) for s in p.prunable_segments)

    def _segment_bits(self, values: np.ndarray) -> np.ndarray:
        w = np.abs(values.reshape(-1))
        bits = np.zeros(w.shape[0], dtype=bool)
        full = w.shape[0] // self.__m
        if full:
            blocks = w[:full * self.__m].reshape(full, self.__m)
            kept = np.argsort(-blocks, axis=1, kind='stable')[:, :self.__n]
            rows = np.repeat(np.arange(full), self.__n)
            bits[rows * self.__m + kept.reshape(-1)] = True
        rest = w.shape[0] - full * self.__m
        if rest:
            local = top_k_indices(w[full * self.__m:], min(self.__n, rest))
            bits[full * self.__m + local] = True
        return bits

    def _mask(self, p: ParamSet) -> Mask:
        parts = [self._segment_bits(s.values) for s in p.prunable_segments]
        return Mask(np.concatenate(parts) if parts else np.zeros(0, dtype=bool))

    def satisfied_by(self, p: ParamSet, m: Mask) -> bool:
        if m.size != p.prunable_count:
            return False
        for _, start, stop, _ in p.index_map:
            bits = m.bits[start:stop]
            full = bits.shape[0] // self.__m
            counts = bits[:full * self.__m].reshape(full, self.__m).sum(axis=1)
            if np.any(counts != self.__n):
                return False
            rest = bits.shape[0] - full * self.__m
            if rest and int(bits[full * self.__m:].sum()) != min(self.__n, rest):
                return False
        return True

    def to_json(self) -> dict:
        return {'kind': 'nm', 'n': self.__n, 'm': self.__m}

    def __eq__(self, other):
        return type(other) is type(self) and (self.__n, self.__m) == (other.__n, other.__m)

    def __hash__(self):
        return hash((self.__n, self.__m))

    def __repr__(self):
        return get_repr_info(
            cls=self.__class__,
            args=[
                ('n', lambda: self.__n),
                ('m', lambda: self.__m),
            ]
        )


def apply_pattern(p: ParamSet, pattern: SparsityPattern) -> Mask:
    """
    Overview:
        Apply the compression operator of ``pattern`` to the weights of ``p``.

    :param p: Parameter set.
    :param pattern: Sparsity pattern, should be valid for ``p``.
    :return: Mask over the prunable coordinates of ``p``.

    Examples::
        >>> from acdckit.numeric import ParamSet
        >>> from acdckit.sparsity import GlobalTopK, apply_pattern
        >>> apply_pattern(ParamSet.from_vector([3, -5, 1, 4]), GlobalTopK(k=2)).support().tolist()
        [1, 3]
    """
    if not isinstance(pattern, SparsityPattern):
        raise PatternError(f'Sparsity pattern expected but {type(pattern).__name__!r} found.')
    return pattern.mask(p)


def pattern_from_json(data: Mapping) -> SparsityPattern:
    """
    Overview:
        Load pattern from its json form. ``sparsity`` may be given instead of ``fraction``, \
        meaning ``fraction = 1 - sparsity``.

    Examples::
        >>> from acdckit.sparsity import pattern_from_json
        >>> pattern_from_json({'kind': 'nm', 'n': 2, 'm': 4})
        <SemiStructuredNM n: 2, m: 4>
        >>> pattern_from_json({'kind': 'global', 'k': 60})
        <GlobalTopK k: 60>
    """
    if not isinstance(data, Mapping):
        raise PatternError(f'Pattern mapping expected but {data!r} found.')
    kind = data.get('kind')
    keys = set(data.keys()) - {'kind'}

    def _fraction():
        if 'fraction' in data and 'sparsity' in data:
            raise PatternError('Only one of fraction and sparsity expected but both found.')
        elif 'sparsity' in data:
            sparsity = data['sparsity']
            if isinstance(sparsity, Mapping):
                return {name: 1.0 - float(value) for name, value in sparsity.items()}
            return 1.0 - float(sparsity)
        elif 'fraction' in data:
            return data['fraction']
        else:
            raise PatternError(f'Fraction or sparsity expected but {sorted(keys)!r} found.')

    if kind == 'global':
        unknown = keys - {'k', 'fraction', 'sparsity'}
        if unknown:
            raise PatternError(f'Unknown global pattern fields {sorted(unknown)!r}.')
        if 'k' in data:
            return GlobalTopK(k=data['k'])
        else:
            return GlobalTopK(fraction=_fraction())
    elif kind == 'uniform':
        unknown = keys - {'fraction', 'sparsity', 'exempt'}
        if unknown:
            raise PatternError(f'Unknown uniform pattern fields {sorted(unknown)!r}.')
        return UniformPerLayer(_fraction(), data.get('exempt', ()))
    elif kind == 'nm':
        unknown = keys - {'n', 'm'}
        if unknown:
            raise PatternError(f'Unknown n:m pattern fields {sorted(unknown)!r}.')
        return SemiStructuredNM(data.get('n'), data.get('m'))
    else:
        raise PatternError(f'Pattern kind in {["global", "uniform", "nm"]!r} expected but {kind!r} found.')

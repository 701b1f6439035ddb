"""
Overview:
    Named parameter segments with per-segment prunable flags.

    The prunable view of a :class:`ParamSet` is the concatenation of its prunable segments \
    in declaration order, the full view is the concatenation of all segments.
"""
from typing import Callable, Iterator, List, Mapping, Optional, Sequence, Tuple

import numpy as np
from hbutils.model import get_repr_info

from .vector import assert_finite

__all__ = [
    'Segment', 'IndexMap', 'ParamSet',
    'flatten_prunable', 'scatter_prunable',
]


class Segment:
    """
    Overview:
        A single named parameter tensor.
    """

    def __init__(self, name: str, values, prunable: bool, shape: Optional[Sequence[int]] = None):
        """
        Constructor of :class:`Segment`.

        :param name: Name of segment.
        :param values: Array-like values, copied.
        :param prunable: Whether the segment takes part in pruning.
        :param shape: Shape of segment, default is the shape of ``values``.
        """
        if not isinstance(name, str) or not name:
            raise ValueError(f'Non-empty segment name expected but {name!r} found.')
        arr = np.array(values, dtype=np.float64)
        if shape is not None:
            shape = tuple(int(s) for s in shape)
            if any(s < 0 for s in shape):
                raise ValueError(f'Non-negative shape expected but {shape!r} found.')
            if arr.size != int(np.prod(shape, dtype=np.int64)):
                raise ValueError(f'Segment {name!r} needs {int(np.prod(shape))!r} values '
                                 f'for shape {shape!r} but {arr.size!r} found.')
            arr = arr.reshape(shape)

        self.__name = name
        self.__values = np.ascontiguousarray(assert_finite(arr, f'segment {name!r}'))
        self.__prunable = bool(prunable)

    @property
    def name(self) -> str:
        return self.__name

    @property
    def values(self) -> np.ndarray:
        return self.__values

    @property
    def shape(self) -> Tuple[int, ...]:
        return self.__values.shape

    @property
    def size(self) -> int:
        return int(self.__values.size)

    @property
    def prunable(self) -> bool:
        return self.__prunable

    def with_values(self, values) -> 'Segment':
        return Segment(self.__name, values, self.__prunable, self.shape)

    def __eq__(self, other):
        if self is other:
            return True
        elif isinstance(other, Segment):
            return self.__name == other.__name and self.__prunable == other.__prunable and \
                self.shape == other.shape and np.array_equal(self.__values, other.__values)
        else:
            return False

    def __hash__(self):
        return hash((self.__name, self.shape, self.__prunable))

    def __repr__(self):
        return get_repr_info(
            cls=self.__class__,
            args=[
                ('name', lambda: repr(self.__name)),
                ('shape', lambda: self.shape),
                ('prunable', lambda: self.__prunable),
            ]
        )


class IndexMap:
    """
    Overview:
        Position of every prunable segment inside the flat prunable view.
    """

    def __init__(self, entries: Sequence[Tuple[str, int, int, Tuple[int, ...]]]):
        self.__entries = tuple((name, int(start), int(stop), tuple(shape)) for name, start, stop, shape in entries)

    @property
    def entries(self) -> Tuple[Tuple[str, int, int, Tuple[int, ...]], ...]:
        """
        Tuples of ``(name, start, stop, shape)`` in declaration order.
        """
        return self.__entries

    @property
    def size(self) -> int:
        return self.__entries[-1][2] if self.__entries else 0

    def slice_of(self, name: str) -> slice:
        for n, start, stop, _ in self.__entries:
            if n == name:
                return slice(start, stop)
        raise KeyError(f'Prunable segment {name!r} not found.')

    def __iter__(self):
        return iter(self.__entries)

    def __len__(self):
        return len(self.__entries)

    def __eq__(self, other):
        return isinstance(other, IndexMap) and self.__entries == other.__entries

    def __hash__(self):
        return hash(self.__entries)

    def __repr__(self):
        return get_repr_info(
            cls=self.__class__,
            args=[
                ('segments', lambda: len(self.__entries)),
                ('size', lambda: self.size),
            ]
        )


class ParamSet:
    """
    Overview:
        Ordered collection of uniquely named :class:`Segment` objects.

    Examples::
        >>> from acdckit.numeric import ParamSet, Segment
        >>> p = ParamSet([Segment('w', [1, 2, 3], True), Segment('b', [9], False)])
        >>> p.prunable_count, p.total_count
        (3, 4)
        >>> p.flatten_prunable()[0]
        array([1., 2., 3.])
    """

    def __init__(self, segments: Sequence[Segment]):
        segments = tuple(segments)
        for s in segments:
            if not isinstance(s, Segment):
                raise TypeError(f'Segment expected but {type(s).__name__!r} found.')
        names = [s.name for s in segments]
        if len(set(names)) != len(names):
            duplicated = sorted({n for n in names if names.count(n) > 1})
            raise ValueError(f'Unique segment names expected but duplicated {duplicated!r} found.')

        self.__segments = segments
        self.__by_name = {s.name: s for s in segments}

        entries, offset = [], 0
        for s in segments:
            if s.prunable:
                entries.append((s.name, offset, offset + s.size, s.shape))
                offset += s.size
        self.__index_map = IndexMap(entries)

        prunable_positions, offset = [], 0
        for s in segments:
            if s.prunable:
                prunable_positions.append(np.arange(offset, offset + s.size))
            offset += s.size
        self.__prunable_index = np.concatenate(prunable_positions) if prunable_positions \
            else np.zeros(0, dtype=np.int64)

    @classmethod
    def from_vector(cls, vector, name: str = 'theta') -> 'ParamSet':
        """
        Overview:
            Single prunable segment holding the given vector.
        """
        return cls([Segment(name, vector, True)])

    @property
    def segments(self) -> Tuple[Segment, ...]:
        return self.__segments

    @property
    def names(self) -> List[str]:
        return [s.name for s in self.__segments]

    @property
    def prunable_segments(self) -> List[Segment]:
        return [s for s in self.__segments if s.prunable]

    @property
    def prunable_count(self) -> int:
        return self.__index_map.size

    @property
    def total_count(self) -> int:
        return sum(s.size for s in self.__segments)

    @property
    def index_map(self) -> IndexMap:
        return self.__index_map

    @property
    def prunable_index(self) -> np.ndarray:
        """
        Positions of the prunable coordinates inside the full flat view.
        """
        return self.__prunable_index

    def __getitem__(self, name: str) -> np.ndarray:
        return self.__by_name[name].values

    def __contains__(self, name: str) -> bool:
        return name in self.__by_name

    def __iter__(self) -> Iterator[Segment]:
        return iter(self.__segments)

    def __len__(self):
        return len(self.__segments)

    def segment(self, name: str) -> Segment:
        return self.__by_name[name]

    def flatten_prunable(self) -> Tuple[np.ndarray, IndexMap]:
        """
        Overview:
            Concatenate prunable segments in declaration order.

        :return: Tuple of flat prunable vector and its index map.
        """
        parts = [s.values.reshape(-1) for s in self.__segments if s.prunable]
        vector = np.concatenate(parts) if parts else np.zeros(0, dtype=np.float64)
        return vector, self.__index_map

    def scatter_prunable(self, vector, index_map: Optional[IndexMap] = None) -> 'ParamSet':
        """
        Overview:
            New parameter set with prunable segments replaced by values from ``vector``.
        """
        index_map = index_map or self.__index_map
        if index_map != self.__index_map:
            raise ValueError(f'Index map {index_map!r} does not belong to this parameter set.')
        vector = np.asarray(vector, dtype=np.float64)
        if vector.shape != (self.prunable_count,):
            raise ValueError(f'Prunable vector of length {self.prunable_count!r} expected '
                             f'but shape {vector.shape!r} found.')

        segments = []
        for s in self.__segments:
            if s.prunable:
                segments.append(s.with_values(vector[index_map.slice_of(s.name)]))
            else:
                segments.append(s)
        return ParamSet(segments)

    def flat(self) -> np.ndarray:
        """
        Overview:
            Concatenation of all segments in declaration order.
        """
        if not self.__segments:
            return np.zeros(0, dtype=np.float64)
        return np.concatenate([s.values.reshape(-1) for s in self.__segments])

    def with_flat(self, vector) -> 'ParamSet':
        """
        Overview:
            New parameter set with the same layout and values from a full flat vector.
        """
        vector = np.asarray(vector, dtype=np.float64)
        if vector.shape != (self.total_count,):
            raise ValueError(f'Flat vector of length {self.total_count!r} expected but shape {vector.shape!r} found.')
        segments, offset = [], 0
        for s in self.__segments:
            segments.append(s.with_values(vector[offset:offset + s.size]))
            offset += s.size
        return ParamSet(segments)

    def map(self, func: Callable[[np.ndarray], np.ndarray]) -> 'ParamSet':
        return ParamSet([s.with_values(func(s.values)) for s in self.__segments])

    def zeros_like(self) -> 'ParamSet':
        return self.map(np.zeros_like)

    def same_layout(self, other: 'ParamSet') -> bool:
        return [(s.name, s.shape, s.prunable) for s in self.__segments] == \
            [(s.name, s.shape, s.prunable) for s in other.segments]

    def to_json(self) -> List[Mapping]:
        return [
            {'name': s.name, 'shape': list(s.shape), 'prunable': s.prunable, 'values': s.values.tolist()}
            for s in self.__segments
        ]

    @classmethod
    def from_json(cls, data: Sequence[Mapping]) -> 'ParamSet':
        return cls([Segment(item['name'], item['values'], item['prunable'], item['shape']) for item in data])

    def __eq__(self, other):
        if self is other:
            return True
        elif isinstance(other, ParamSet):
            return self.__segments == other.__segments
        else:
            return False

    def __hash__(self):
        return hash(self.__segments)

    def __repr__(self):
        return get_repr_info(
            cls=self.__class__,
            args=[
                ('segments', lambda: self.names),
                ('prunable', lambda: self.prunable_count),
                ('total', lambda: self.total_count),
            ]
        )


def flatten_prunable(p: ParamSet) -> Tuple[np.ndarray, IndexMap]:
    """
    Overview:
        Flat prunable view of ``p``, see :meth:`ParamSet.flatten_prunable`.

    Examples::
        >>> from acdckit.numeric import ParamSet, Segment, flatten_prunable
        >>> flatten_prunable(ParamSet([Segment('b', [9], False)]))[0]
        array([], dtype=float64)
    """
    return p.flatten_prunable()


def scatter_prunable(p: ParamSet, vector, index_map: IndexMap) -> ParamSet:
    """
    Overview:
        Inverse of :func:`flatten_prunable`.
    """
    return p.scatter_prunable(vector, index_map)

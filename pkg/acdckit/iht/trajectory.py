"""
Overview:
    Per-iteration instrumentation of iterative runs, and contraction analysis.
"""
import json
import math
from dataclasses import asdict, dataclass, field
from typing import Dict, Iterator, List, Optional

import numpy as np
from hbutils.model import get_repr_info

__all__ = [
    'IterationRecord', 'Trajectory',
    'contraction_rate', 'geometric_mean_rate',
]


@dataclass
class IterationRecord:
    """
    Overview:
        State after one iteration. ``max_abs`` is the running maximum of ``|theta|_inf``.
    """
    iteration: int
    f_value: float
    grad_norm: float
    support_hash: str
    max_abs: float
    distance: Optional[float] = None
    extras: Dict[str, float] = field(default_factory=dict)

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, data: dict) -> 'IterationRecord':
        return cls(**data)


class Trajectory:
    """
    Overview:
        Ordered iteration records with run metadata. ``meta`` is kept by reference, \
        so writes made by the producer after construction stay visible.
    """

    def __init__(self, records: Optional[List[IterationRecord]] = None, meta: Optional[dict] = None):
        self.__records: List[IterationRecord] = []
        self.__meta = meta if meta is not None else {}
        for record in records or []:
            self.append(record)

    @property
    def records(self) -> List[IterationRecord]:
        return list(self.__records)

    @property
    def meta(self) -> dict:
        return self.__meta

    def append(self, record: IterationRecord):
        if self.__records:
            last = self.__records[-1]
            if record.iteration <= last.iteration:
                raise ValueError(f'Iteration after {last.iteration!r} expected but {record.iteration!r} found.')
            if record.max_abs < last.max_abs:
                raise ValueError(f'Running maximum no less than {last.max_abs!r} expected '
                                 f'but {record.max_abs!r} found.')
        self.__records.append(record)

    def __len__(self):
        return len(self.__records)

    def __iter__(self) -> Iterator[IterationRecord]:
        return iter(self.__records)

    def __getitem__(self, index) -> IterationRecord:
        return self.__records[index]

    @property
    def final(self) -> IterationRecord:
        if not self.__records:
            raise ValueError('Non-empty trajectory expected but empty trajectory found.')
        return self.__records[-1]

    def f_values(self) -> np.ndarray:
        return np.array([r.f_value for r in self.__records], dtype=np.float64)

    def tail_mean(self, window: int) -> float:
        """
        Overview:
            Mean objective value over the last ``window`` records.
        """
        if not self.__records:
            raise ValueError('Non-empty trajectory expected but empty trajectory found.')
        return float(np.mean(self.f_values()[-window:]))

    def to_jsonl(self, path: str):
        with open(path, 'w', encoding='utf-8') as f:
            for record in self.__records:
                print(json.dumps(record.to_json(), sort_keys=True), file=f)

    @classmethod
    def from_jsonl(cls, path: str) -> 'Trajectory':
        records = []
        with open(path, 'r', encoding='utf-8') as f:
            for line in f:
                if line.strip():
                    records.append(IterationRecord.from_json(json.loads(line)))
        return cls(records)

    def __repr__(self):
        return get_repr_info(
            cls=self.__class__,
            args=[
                ('records', lambda: len(self.__records)),
                ('final_f', lambda: self.__records[-1].f_value, lambda: bool(self.__records)),
            ]
        )


def contraction_rate(t: Trajectory, f_star: float, atol: float = 1e-12) -> np.ndarray:
    """
    Overview:
        Per-iteration ratios ``(f_{t+1} - f*) / (f_t - f*)``. Gaps within ``atol`` below zero count as zero, \
        and two consecutive zero gaps give ratio ``1``.

    :param t: Trajectory.
    :param f_star: Minimal value.
    :param atol: Tolerance for gaps below zero, relative to ``max(1, |f*|)``.
    :return: Ratio series, one shorter than the trajectory.

    Examples::
        >>> from acdckit.iht import IterationRecord, Trajectory, contraction_rate
        >>> t = Trajectory([IterationRecord(i, 0.5 ** i, 0.0, '', 0.0) for i in range(4)])
        >>> contraction_rate(t, 0.0).tolist()
        [0.5, 0.5, 0.5]
    """
    if len(t) == 0:
        raise ValueError('Non-empty trajectory expected but empty trajectory found.')
    gaps = t.f_values() - f_star
    tolerance = atol * max(1.0, abs(f_star))
    if np.any(gaps < -tolerance):
        index = int(np.flatnonzero(gaps < -tolerance)[0])
        raise ValueError(f'Values no less than f* = {f_star!r} expected but {gaps[index] + f_star!r} found '
                         f'at record {index!r}.')
    gaps = np.maximum(gaps, 0.0)

    ratios = []
    for prev, curr in zip(gaps[:-1], gaps[1:]):
        if prev > 0:
            ratios.append(curr / prev)
        elif curr == 0:
            ratios.append(1.0)
        else:
            raise ValueError(f'Gap rising from zero to {curr!r} found, f* = {f_star!r} is not a lower bound.')
    return np.array(ratios, dtype=np.float64)


def geometric_mean_rate(ratios, start: int = 0, stop: Optional[int] = None) -> float:
    """
    Overview:
        Geometric mean of ``ratios[start:stop]``. A zero ratio gives ``0``.
    """
    window = np.asarray(ratios, dtype=np.float64)[start:stop]
    if window.size == 0:
        raise ValueError(f'Non-empty ratio window expected but [{start!r}:{stop!r}] is empty.')
    if np.any(window == 0):
        return 0.0
    return float(math.exp(np.mean(np.log(window))))

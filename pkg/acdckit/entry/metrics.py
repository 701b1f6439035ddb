"""
Overview:
    Metrics streams, one json object per line and per step, and their summaries across seeds.
"""
import json
import math
import os
from typing import Dict, Iterator, List, Mapping, Optional, Sequence

import numpy as np
from hbutils.model import get_repr_info
from packaging.version import Version

__all__ = [
    'METRICS_SCHEMA_VERSION',
    'MetricsRecord', 'MetricsWriter',
    'read_metrics', 'final_values', 'summarize', 'check_summary',
]

METRICS_SCHEMA_VERSION = '1.0'


class MetricsRecord:
    """
    Overview:
        Named numeric values of one step of one run. ``None`` values are left out.

    Examples::
        >>> from acdckit.entry import MetricsRecord
        >>> MetricsRecord('train-acdc', 0, 3, {'loss': 0.5, 'eval_accuracy': None}).values
        {'loss': 0.5}
    """

    def __init__(self, run_id: str, seed: int, step: int, values: Mapping[str, Optional[float]]):
        if isinstance(step, bool) or not isinstance(step, int) or step < 0:
            raise ValueError(f'Non-negative integer step expected but {step!r} found.')
        checked = {}
        for name, value in values.items():
            if value is None:
                continue
            if isinstance(value, bool) or not isinstance(value, (int, float, np.integer, np.floating)):
                raise TypeError(f'Numeric value of {name!r} expected but {value!r} found.')
            if not math.isfinite(value):
                raise ValueError(f'Finite value of {name!r} expected but {value!r} found.')
            checked[name] = float(value)
        self.__run_id = run_id
        self.__seed = int(seed)
        self.__step = step
        self.__values = checked

    @property
    def run_id(self) -> str:
        return self.__run_id

    @property
    def seed(self) -> int:
        return self.__seed

    @property
    def step(self) -> int:
        return self.__step

    @property
    def values(self) -> Dict[str, float]:
        return dict(self.__values)

    def __getitem__(self, name: str) -> float:
        return self.__values[name]

    def __contains__(self, name: str) -> bool:
        return name in self.__values

    def to_json(self) -> dict:
        return {
            'schema_version': METRICS_SCHEMA_VERSION,
            'run_id': self.__run_id,
            'seed': self.__seed,
            'step': self.__step,
            'values': dict(self.__values),
        }

    @classmethod
    def from_json(cls, data: Mapping) -> 'MetricsRecord':
        version = Version(str(data['schema_version']))
        if version.major != Version(METRICS_SCHEMA_VERSION).major:
            raise ValueError(f'Metrics schema 1.x expected but {data["schema_version"]!r} found.')
        return cls(data['run_id'], data['seed'], data['step'], data['values'])

    def __eq__(self, other):
        return isinstance(other, MetricsRecord) and self.to_json() == other.to_json()

    def __hash__(self):
        return hash((self.__run_id, self.__seed, self.__step))

    def __repr__(self):
        return get_repr_info(
            cls=self.__class__,
            args=[
                ('run_id', lambda: self.__run_id),
                ('seed', lambda: self.__seed),
                ('step', lambda: self.__step),
            ]
        )


class MetricsWriter:
    """
    Overview:
        Appends the records of one run to a jsonl file, steps strictly increasing.

    Examples::
        >>> from acdckit.entry import MetricsWriter
        >>> with MetricsWriter('metrics.jsonl', 'run-iht', 7) as writer:  # doctest: +SKIP
        ...     writer.write(0, {'loss': 1.0})
    """

    def __init__(self, path: str, run_id: str, seed: int):
        self.__path = path
        self.__run_id = run_id
        self.__seed = seed
        self.__last: Optional[int] = None
        self.__count = 0
        self.__file = None

    @property
    def path(self) -> str:
        return self.__path

    @property
    def count(self) -> int:
        return self.__count

    def open(self):
        directory = os.path.dirname(os.path.abspath(self.__path))
        os.makedirs(directory, exist_ok=True)
        self.__file = open(self.__path, 'w')
        return self

    def close(self):
        if self.__file is not None:
            self.__file.close()
            self.__file = None

    def __enter__(self):
        return self.open()

    def __exit__(self, exc_type, exc_val, exc_tb):
        self.close()

    def write(self, step: int, values: Mapping[str, Optional[float]]) -> MetricsRecord:
        if self.__file is None:
            raise RuntimeError(f'Open metrics file expected but {self.__path!r} is closed.')
        if self.__last is not None and step <= self.__last:
            raise ValueError(f'Step after {self.__last!r} expected but {step!r} found.')
        record = MetricsRecord(self.__run_id, self.__seed, step, values)
        self.__file.write(json.dumps(record.to_json(), sort_keys=True) + '\n')
        self.__last = step
        self.__count += 1
        return record


def read_metrics(path: str) -> List[MetricsRecord]:
    """
    Overview:
        Read and check a jsonl metrics file, steps must increase within every run.
    """
    records, last = [], {}
    with open(path, 'r') as f:
        for lineno, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                record = MetricsRecord.from_json(json.loads(line))
            except (KeyError, TypeError, ValueError) as err:
                raise ValueError(f'Metrics record expected at line {lineno} of {path!r} but {err} found.')
            key = (record.run_id, record.seed)
            if key in last and record.step <= last[key]:
                raise ValueError(f'Step after {last[key]!r} expected at line {lineno} of {path!r} '
                                 f'but {record.step!r} found.')
            last[key] = record.step
            records.append(record)
    return records


def final_values(records: Sequence[MetricsRecord]) -> Dict[str, float]:
    """
    Overview:
        Last recorded value of every field.
    """
    values = {}
    for record in records:
        values.update(record.values)
    return values


def _iter_fields(per_seed: Mapping[int, Mapping[str, float]]) -> Iterator[str]:
    seen = []
    for values in per_seed.values():
        for name in values:
            if name not in seen:
                seen.append(name)
    return iter(seen)


def summarize(task: str, records: Mapping[int, Sequence[MetricsRecord]],
              extra: Optional[Mapping[int, Mapping[str, float]]] = None) -> dict:
    """
    Overview:
        Summary of a multi-seed run, final values per seed and their medians over the seeds \
        that recorded each field.

    :param task: Task name.
    :param records: Metrics records of every seed.
    :param extra: Additional final values per seed, e.g. accuracies of models evaluated after training.
    :return: Json summary.

    Examples::
        >>> from acdckit.entry import MetricsRecord, summarize
        >>> summary = summarize('run-iht', {s: [MetricsRecord('r', s, 0, {'loss': float(s)})] for s in (0, 1, 5)})
        >>> summary['median']
        {'loss': 1.0}
    """
    per_seed = {}
    for seed, items in records.items():
        values = final_values(items)
        values.update((extra or {}).get(seed, {}))
        per_seed[int(seed)] = values

    median = {}
    for name in _iter_fields(per_seed):
        column = [values[name] for values in per_seed.values() if name in values]
        median[name] = float(np.median(column))
    return {
        'task': task,
        'schema_version': METRICS_SCHEMA_VERSION,
        'seeds': sorted(per_seed),
        'per_seed': {str(seed): per_seed[seed] for seed in sorted(per_seed)},
        'median': median,
    }


def check_summary(summary: Mapping, records: Mapping[int, Sequence[MetricsRecord]], rtol: float = 1e-12) -> List[str]:
    """
    Overview:
        Fields whose summary median differs from a recomputation from the raw records.
    """
    per_seed = {int(seed): dict(values) for seed, values in summary['per_seed'].items()}
    for seed, items in records.items():
        per_seed.setdefault(int(seed), {}).update(final_values(items))
    mismatches = []
    for name, expected in summary['median'].items():
        column = [values[name] for values in per_seed.values() if name in values]
        actual = float(np.median(column)) if column else math.nan
        if not math.isclose(actual, expected, rel_tol=rtol, abs_tol=rtol):
            mismatches.append(name)
    return mismatches

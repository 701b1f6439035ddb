"""
Overview:
    Corrupted label experiments, tracking whether a model memorizes wrong labels \
    or keeps predicting the true ones.
"""
from dataclasses import dataclass
from typing import List, Mapping, Optional, Tuple, Union

import numpy as np

from ..data import Dataset
from ..numeric import SeededRng

__all__ = [
    'MissingSnapshotError',
    'CorruptionRecord', 'MemorizationReport',
    'corrupt_labels', 'memorization_track',
]


class MissingSnapshotError(ValueError):
    """
    Overview:
        Raised when per-epoch predictions of the corrupted samples are not available.
    """
    pass


@dataclass(frozen=True)
class CorruptionRecord:
    """
    Overview:
        Corrupted sample indices (sorted) with their original and replacement labels.
    """
    indices: Tuple[int, ...]
    original: Tuple[int, ...]
    replacement: Tuple[int, ...]
    seed: Optional[int] = None

    def __post_init__(self):
        if not len(self.indices) == len(self.original) == len(self.replacement):
            raise ValueError(f'Equal lengths of indices and labels expected but '
                             f'{(len(self.indices), len(self.original), len(self.replacement))!r} found.')
        for index, a, b in zip(self.indices, self.original, self.replacement):
            if a == b:
                raise ValueError(f'Changed label expected for sample {index!r} but {a!r} kept.')

    def __len__(self):
        return len(self.indices)

    def to_json(self) -> dict:
        return {
            'indices': list(self.indices),
            'original': list(self.original),
            'replacement': list(self.replacement),
            'seed': self.seed,
        }

    @classmethod
    def from_json(cls, data: Mapping) -> 'CorruptionRecord':
        return cls(tuple(data['indices']), tuple(data['original']), tuple(data['replacement']), data.get('seed'))


def corrupt_labels(data: Dataset, count: int, classes: int, rng: SeededRng) -> Tuple[Dataset, CorruptionRecord]:
    """
    Overview:
        Replace the labels of ``count`` uniformly chosen samples by labels drawn uniformly \
        from the other classes.

    :param data: Dataset.
    :param count: Count of corrupted samples.
    :param classes: Class count, at least 2.
    :param rng: Random generator.
    :return: Tuple of corrupted dataset and corruption record.

    Examples::
        >>> import numpy as np
        >>> from acdckit.data import Dataset
        >>> from acdckit.diagnostics import corrupt_labels
        >>> from acdckit.numeric import SeededRng
        >>> data = Dataset(np.zeros((6, 1)), [0, 1, 2, 0, 1, 2], 3)
        >>> corrupted, record = corrupt_labels(data, 2, 3, SeededRng(0))
        >>> len(record), all(a != b for a, b in zip(record.original, record.replacement))
        (2, True)
    """
    if classes < 2:
        raise ValueError(f'At least 2 classes expected but {classes!r} found.')
    if not 0 <= count <= len(data):
        raise ValueError(f'Corrupted count in [0, {len(data)!r}] expected but {count!r} found.')
    if data.classes > classes:
        raise ValueError(f'Dataset with at most {classes!r} classes expected but {data.classes!r} found.')

    indices = np.sort(rng.choice(len(data), count, replace=False)) if count else np.zeros(0, dtype=np.int64)
    original = data.y[indices]
    replacement = rng.integers(0, classes, count)
    while True:
        same = replacement == original
        if not np.any(same):
            break
        replacement[same] = rng.integers(0, classes, int(np.count_nonzero(same)))

    y = np.array(data.y)
    y[indices] = replacement
    corrupted = Dataset(data.X, y, classes, data.label_names if data.classes == classes else None)
    record = CorruptionRecord(
        indices=tuple(int(i) for i in indices),
        original=tuple(int(v) for v in original),
        replacement=tuple(int(v) for v in replacement),
        seed=rng.seed,
    )
    return corrupted, record


@dataclass(frozen=True)
class MemorizationReport:
    """
    Overview:
        Per-epoch accuracy on the corrupted samples, against the corrupted labels and against the true ones.
    """
    epochs: Tuple[int, ...]
    acc_corrupted: Tuple[float, ...]
    acc_true: Tuple[float, ...]

    def rows(self) -> List[dict]:
        return [
            {'epoch': epoch, 'acc_corrupted': c, 'acc_true': t}
            for epoch, c, t in zip(self.epochs, self.acc_corrupted, self.acc_true)
        ]

    def to_json(self) -> dict:
        return {
            'epochs': list(self.epochs),
            'acc_corrupted': list(self.acc_corrupted),
            'acc_true': list(self.acc_true),
        }


def memorization_track(predictions: Union[np.ndarray, Mapping[int, np.ndarray], None],
                       record: CorruptionRecord) -> MemorizationReport:
    """
    Overview:
        Accuracy series of the corrupted samples.

    :param predictions: Predicted classes of the corrupted samples, in the order of ``record.indices``. \
        Either a matrix with one row per epoch, or a mapping from epoch to row.
    :param record: Corruption record.
    :return: Memorization report.
    :raises MissingSnapshotError: When predictions are absent or do not cover the corrupted samples.

    Examples::
        >>> from acdckit.diagnostics import CorruptionRecord, memorization_track
        >>> record = CorruptionRecord((1, 4), (0, 2), (1, 0))
        >>> memorization_track([[0, 2], [1, 2]], record).rows()
        [{'epoch': 0, 'acc_corrupted': 0.0, 'acc_true': 1.0}, {'epoch': 1, 'acc_corrupted': 0.5, 'acc_true': 0.5}]
    """
    if predictions is None:
        raise MissingSnapshotError('Per-epoch predictions of the corrupted samples expected but none found.')
    if isinstance(predictions, Mapping):
        epochs = sorted(int(e) for e in predictions.keys())
        rows = [np.asarray(predictions[e]) for e in epochs]
    else:
        rows = [np.asarray(row) for row in predictions]
        epochs = list(range(len(rows)))
    if not rows:
        raise MissingSnapshotError('At least one epoch of predictions expected but none found.')

    original = np.asarray(record.original, dtype=np.int64)
    replacement = np.asarray(record.replacement, dtype=np.int64)
    acc_corrupted, acc_true = [], []
    for epoch, row in zip(epochs, rows):
        if row.shape != (len(record),):
            raise MissingSnapshotError(f'Predictions of {len(record)!r} corrupted samples expected at epoch '
                                       f'{epoch!r} but shape {row.shape!r} found.')
        if len(record):
            acc_corrupted.append(float(np.mean(row == replacement)))
            acc_true.append(float(np.mean(row == original)))
        else:
            acc_corrupted.append(0.0)
            acc_true.append(0.0)
    return MemorizationReport(tuple(epochs), tuple(acc_corrupted), tuple(acc_true))

"""
Overview:
    Csv ingestion and export of classification datasets.

    Files have a header row and one sample per row. Labels live in a named column, \
    every other column is a numeric feature.
"""
import csv
import io
import math
from typing import List, Optional, Sequence

import numpy as np
from hbutils.encoding import auto_decode

from .dataset import Dataset

__all__ = [
    'CsvFormatError',
    'ingest_csv', 'export_csv', 'label_mapping',
]


class CsvFormatError(ValueError):
    """
    Overview:
        Malformed csv content, ``row`` (1-based, header is row 1) and ``column`` locate the problem.
    """

    def __init__(self, message: str, row: Optional[int] = None, column: Optional[str] = None):
        ValueError.__init__(self, message)
        self.row = row
        self.column = column


def label_mapping(raw_labels: Sequence[str]) -> List[str]:
    """
    Overview:
        Sorted unique labels, compared as plain strings, so ``'10'`` comes before ``'2'``.

    Examples::
        >>> from acdckit.data import label_mapping
        >>> label_mapping(['b', 'a', 'b'])
        ['a', 'b']
        >>> label_mapping(['10', '2', '1'])
        ['1', '10', '2']
    """
    return sorted(set(raw_labels))


def ingest_csv(path: str, label_column: str, encoding: Optional[str] = None) -> Dataset:
    """
    Overview:
        Load dataset from csv file. Labels become class indices through :func:`label_mapping`, \
        which is kept as :attr:`Dataset.label_names`.

    :param path: Path of csv file.
    :param label_column: Name of label column.
    :param encoding: Text encoding, ``None`` means auto detection.
    :return: Loaded dataset.
    :raises CsvFormatError: Missing label column, ragged rows or non-numeric feature cells.
    """
    with open(path, 'rb') as f:
        text = auto_decode(f.read(), encoding)

    rows = list(csv.reader(io.StringIO(text)))
    if not rows:
        raise CsvFormatError(f'Header row expected in {path!r} but empty file found.', row=1)
    header = [name.strip() for name in rows[0]]
    if label_column not in header:
        raise CsvFormatError(f'Label column {label_column!r} expected in header {header!r} but not found.',
                             row=1, column=label_column)
    label_index = header.index(label_column)
    feature_columns = [(i, name) for i, name in enumerate(header) if i != label_index]

    features, raw_labels = [], []
    for row_no, row in enumerate(rows[1:], start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != len(header):
            raise CsvFormatError(f'{len(header)!r} cells expected at row {row_no!r} but {len(row)!r} found.',
                                 row=row_no)
        values = []
        for i, name in feature_columns:
            try:
                value = float(row[i])
            except ValueError:
                raise CsvFormatError(f'Numeric value expected at row {row_no!r}, column {name!r} '
                                     f'but {row[i]!r} found.', row=row_no, column=name)
            if not math.isfinite(value):
                raise CsvFormatError(f'Finite value expected at row {row_no!r}, column {name!r} '
                                     f'but {row[i]!r} found.', row=row_no, column=name)
            values.append(value)
        features.append(values)
        raw_labels.append(row[label_index].strip())

    names = label_mapping(raw_labels)
    index_of = {name: i for i, name in enumerate(names)}
    X = np.array(features, dtype=np.float64).reshape(len(features), len(feature_columns))
    y = np.array([index_of[label] for label in raw_labels], dtype=np.int64)
    return Dataset(X, y, len(names), names)


def export_csv(data: Dataset, path: str, label_column: str = 'label',
               feature_names: Optional[Sequence[str]] = None):
    """
    Overview:
        Save dataset as csv. Floats are written in shortest round-trip form, \
        labels are written with their names when known. Unnamed labels are zero-padded indices, \
        so their string order matches the index order on ingestion.
    """
    if feature_names is None:
        feature_names = [f'x{i}' for i in range(data.features)]
    elif len(feature_names) != data.features:
        raise ValueError(f'{data.features!r} feature names expected but {len(feature_names)!r} found.')
    if label_column in feature_names:
        raise ValueError(f'Label column {label_column!r} clashes with feature names.')

    width = len(str(max(data.classes - 1, 0)))
    names = data.label_names or [f'{i:0{width}d}' for i in range(data.classes)]
    with open(path, 'w', newline='', encoding='utf-8') as f:
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow([*feature_names, label_column])
        for x, y in zip(data.X, data.y):
            writer.writerow([*(repr(float(v)) for v in x), names[int(y)]])

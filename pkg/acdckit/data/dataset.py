"""
Overview:
    In-memory classification dataset.
"""
from typing import Optional, Sequence, Tuple

import numpy as np
from hbutils.model import get_repr_info

from ..numeric import SeededRng, as_matrix

__all__ = [
    'Dataset',
]


class Dataset:
    """
    Overview:
        Feature matrix with integer class labels.

    Examples::
        >>> from acdckit.data import Dataset
        >>> d = Dataset([[0.0, 1.0], [1.0, 0.0], [2.0, 2.0]], [0, 1, 1], 2)
        >>> len(d), d.features
        (3, 2)
        >>> d
        <Dataset samples: 3, features: 2, classes: 2>
    """

    def __init__(self, X, y, classes: Optional[int] = None, label_names: Optional[Sequence[str]] = None):
        X = as_matrix(X, name='features')
        y = np.asarray(y)
        if y.ndim != 1 or y.shape[0] != X.shape[0]:
            raise ValueError(f'Labels of shape {(X.shape[0],)!r} expected but {y.shape!r} found.')
        if y.size and not np.all(np.equal(np.mod(y, 1), 0)):
            raise ValueError(f'Integer labels expected but {y[np.mod(y, 1) != 0][:5].tolist()!r} found.')
        y = y.astype(np.int64)
        if classes is None:
            classes = int(y.max()) + 1 if y.size else 0
        if y.size and (y.min() < 0 or y.max() >= classes):
            raise ValueError(f'Labels in [0, {classes!r}) expected but range '
                             f'[{int(y.min())!r}, {int(y.max())!r}] found.')
        if label_names is not None and len(label_names) != classes:
            raise ValueError(f'{classes!r} label names expected but {len(label_names)!r} found.')

        X.setflags(write=False)
        y.setflags(write=False)
        self.__X = X
        self.__y = y
        self.__classes = int(classes)
        self.__label_names = tuple(str(name) for name in label_names) if label_names is not None else None

    @property
    def X(self) -> np.ndarray:
        return self.__X

    @property
    def y(self) -> np.ndarray:
        return self.__y

    @property
    def classes(self) -> int:
        return self.__classes

    @property
    def features(self) -> int:
        return int(self.__X.shape[1])

    @property
    def label_names(self) -> Optional[Tuple[str, ...]]:
        return self.__label_names

    def __len__(self):
        return int(self.__X.shape[0])

    def subset(self, indices) -> 'Dataset':
        indices = np.asarray(indices, dtype=np.int64)
        return Dataset(self.__X[indices], self.__y[indices], self.__classes, self.__label_names)

    def with_labels(self, y) -> 'Dataset':
        return Dataset(self.__X, y, self.__classes, self.__label_names)

    def split(self, eval_fraction: float, rng: SeededRng) -> Tuple['Dataset', 'Dataset']:
        """
        Overview:
            Random split into training and evaluation parts.

        :param eval_fraction: Fraction of samples moved to the evaluation part, in ``(0, 1)``.
        :param rng: Random generator.
        :return: Tuple of training and evaluation datasets.
        """
        if not 0.0 < eval_fraction < 1.0:
            raise ValueError(f'Evaluation fraction in (0, 1) expected but {eval_fraction!r} found.')
        order = rng.permutation(len(self))
        n_eval = max(1, int(round(eval_fraction * len(self))))
        return self.subset(np.sort(order[n_eval:])), self.subset(np.sort(order[:n_eval]))

    def __eq__(self, other):
        if self is other:
            return True
        elif isinstance(other, Dataset):
            return self.__classes == other.__classes and self.__label_names == other.__label_names and \
                np.array_equal(self.__X, other.__X) and np.array_equal(self.__y, other.__y)
        else:
            return False

    def __hash__(self):
        return hash((self.__X.shape, self.__classes))

    def __repr__(self):
        return get_repr_info(
            cls=self.__class__,
            args=[
                ('samples', lambda: len(self)),
                ('features', lambda: self.features),
                ('classes', lambda: self.__classes),
            ]
        )

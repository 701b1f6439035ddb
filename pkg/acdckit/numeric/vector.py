"""
Overview:
    Vector and matrix coercion with finiteness checks.

    All numerics inside ``acdckit`` are 64-bit real :class:`numpy.ndarray` objects, \
    vectors are 1-dimensional and matrices are 2-dimensional in row-major order.
"""
from typing import Optional

import numpy as np

__all__ = [
    'NonFiniteError',
    'assert_finite', 'as_vector', 'as_matrix',
]


class NonFiniteError(ArithmeticError):
    """
    Overview:
        Raised when a numeric result contains ``NaN`` or ``Inf``.
    """
    pass


def assert_finite(values, name: str = 'value') -> np.ndarray:
    """
    Overview:
        Assert that every entry of ``values`` is finite.

    :param values: Scalar or array to be checked.
    :param name: Name used in the error message.
    :return: The given values, unchanged.
    :raises NonFiniteError: When any entry is ``NaN`` or ``Inf``.

    Examples::
        >>> from acdckit.numeric import assert_finite
        >>> assert_finite(1.0)
        1.0
        >>> assert_finite(float('nan'), 'loss')
        Traceback (most recent call last):
            ...
        acdckit.numeric.vector.NonFiniteError: Finite loss expected but nan found.
    """
    arr = np.asarray(values)
    if not np.all(np.isfinite(arr)):
        if arr.ndim == 0:
            raise NonFiniteError(f'Finite {name} expected but {arr.item()!r} found.')
        else:
            bad = int(np.flatnonzero(~np.isfinite(arr.reshape(-1)))[0])
            raise NonFiniteError(f'Finite {name} expected but {arr.reshape(-1)[bad]!r} found at position {bad!r}.')
    return values


def as_vector(values, length: Optional[int] = None, name: str = 'vector') -> np.ndarray:
    """
    Overview:
        Copy ``values`` into a fresh 1-dimensional ``float64`` array.

    :param values: Array-like values.
    :param length: Expected length, ``None`` means any length.
    :param name: Name used in error messages.
    :return: New vector.

    Examples::
        >>> from acdckit.numeric import as_vector
        >>> as_vector([1, 2, 3])
        array([1., 2., 3.])
    """
    arr = np.array(values, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError(f'1-dimensional {name} expected but shape {arr.shape!r} found.')
    if length is not None and arr.shape[0] != length:
        raise ValueError(f'Length of {name} should be {length!r} but {arr.shape[0]!r} found.')
    return assert_finite(arr, name)


def as_matrix(values, rows: Optional[int] = None, cols: Optional[int] = None, name: str = 'matrix') -> np.ndarray:
    """
    Overview:
        Copy ``values`` into a fresh row-major 2-dimensional ``float64`` array.

    :param values: Array-like values.
    :param rows: Expected row count, ``None`` means any.
    :param cols: Expected column count, ``None`` means any.
    :param name: Name used in error messages.
    :return: New matrix.
    """
    arr = np.array(values, dtype=np.float64, order='C')
    if arr.ndim != 2:
        raise ValueError(f'2-dimensional {name} expected but shape {arr.shape!r} found.')
    if rows is not None and arr.shape[0] != rows:
        raise ValueError(f'Row count of {name} should be {rows!r} but {arr.shape[0]!r} found.')
    if cols is not None and arr.shape[1] != cols:
        raise ValueError(f'Column count of {name} should be {cols!r} but {arr.shape[1]!r} found.')
    return assert_finite(arr, name)

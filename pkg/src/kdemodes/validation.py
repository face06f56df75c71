"""Input validation helpers shared by the library and the estimator facades."""

from __future__ import annotations

import numpy as np

__all__ = [
    "check_data_1d",
    "check_positive",
    "check_probability",
    "check_grid",
]


def check_data_1d(X, *, min_len: int = 1, name: str = "X") -> np.ndarray:
    """Coerce to a 1-d float array of finite values.

    Accepts lists, tuples, 1-d arrays and (n, 1) column arrays, the latter
    for compatibility with fit(X) conventions.
    """
    arr = np.asarray(X, dtype=float)
    if arr.ndim == 2 and arr.shape[1] == 1:
        arr = arr[:, 0]
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if arr.size < min_len:
        raise ValueError(f"{name} needs at least {min_len} value(s), got {arr.size}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite values")
    return arr


def check_positive(value: float, name: str) -> float:
    value = float(value)
    if not value > 0:
        raise ValueError(f"{name} must be positive, got {value}")
    return value


def check_probability(value: float, name: str) -> float:
    value = float(value)
    if not 0.0 < value < 1.0:
        raise ValueError(f"{name} must lie strictly between 0 and 1, got {value}")
    return value


def check_grid(values, *, name: str = "grid", descending: bool = False) -> np.ndarray:
    """Validate a strictly monotone grid of positive bandwidths."""
    arr = check_data_1d(values, min_len=1, name=name)
    if np.any(arr <= 0):
        raise ValueError(f"{name} values must be positive")
    diffs = np.diff(arr)
    if descending:
        if np.any(diffs >= 0):
            raise ValueError(f"{name} must be strictly decreasing")
    elif np.any(diffs <= 0):
        raise ValueError(f"{name} must be strictly increasing")
    return arr

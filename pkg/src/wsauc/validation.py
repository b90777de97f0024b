"""Input validation helpers used across the package."""

from __future__ import annotations

import math

import numpy as np

from .errors import InputError

# Guard against binary-fraction artifacts in quantile counts:
# (1 - 1/3) * 3 evaluates to 1.9999999999999998 and would floor to 1.
_COUNT_EPS = 1e-9


def as_feature_matrix(x, name: str = "X") -> np.ndarray:
    """Coerce to a finite float64 2-D array of shape (n, d)."""
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    if arr.ndim != 2:
        raise InputError(f"{name} must be 2-D (n, d), got shape {arr.shape}")
    if arr.size and not np.all(np.isfinite(arr)):
        raise InputError(f"{name} contains non-finite values")
    return arr


def as_score_vector(x, name: str = "scores", allow_empty: bool = False) -> np.ndarray:
    arr = np.asarray(x, dtype=np.float64).ravel()
    if not allow_empty and arr.size == 0:
        raise InputError(f"{name} must be non-empty")
    if arr.size and not np.all(np.isfinite(arr)):
        raise InputError(f"{name} contains non-finite values")
    return arr


def check_finite_scalar(z, name: str = "z") -> float:
    z = float(z)
    if not math.isfinite(z):
        raise InputError(f"{name} must be finite, got {z!r}")
    return z


def check_fraction(value, name: str, *, closed_low=True, closed_high=True) -> float:
    value = float(value)
    low_ok = value >= 0.0 if closed_low else value > 0.0
    high_ok = value <= 1.0 if closed_high else value < 1.0
    if not (math.isfinite(value) and low_ok and high_ok):
        lo = "[" if closed_low else "("
        hi = "]" if closed_high else ")"
        raise InputError(f"{name} must be in {lo}0, 1{hi}, got {value!r}")
    return value


def check_positive_int(value, name: str) -> int:
    if int(value) != value or int(value) < 1:
        raise InputError(f"{name} must be a positive integer, got {value!r}")
    return int(value)


def floor_count(fraction: float, n: int) -> int:
    """floor(fraction * n) with a tolerance for inexact binary fractions."""
    return int(math.floor(fraction * n + _COUNT_EPS))


def ceil_count(fraction: float, n: int) -> int:
    """ceil(fraction * n) with a tolerance for inexact binary fractions."""
    return int(math.ceil(fraction * n - _COUNT_EPS))

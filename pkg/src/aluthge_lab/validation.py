"""Input validation helpers shared by the functional API and the estimators."""

import numbers

import numpy as np

from .exceptions import InvalidWeight

#: Absolute floor used when a relative tolerance is taken against a zero norm.
NORM_FLOOR = 1e-14


def check_matrix(X, *, name="T", square=True):
    """Return ``X`` as a finite complex128 2-D array.

    Parameters
    ----------
    X : array_like
        Candidate matrix.
    name : str
        Used in error messages.
    square : bool
        Require ``X.shape[0] == X.shape[1]``.
    """
    A = np.asarray(X)
    if A.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got shape {A.shape}")
    if A.shape[0] == 0 or A.shape[1] == 0:
        raise ValueError(f"{name} must be non-empty")
    if square and A.shape[0] != A.shape[1]:
        raise ValueError(f"{name} must be square, got shape {A.shape}")
    A = A.astype(np.complex128, copy=False)
    if not np.all(np.isfinite(A)):
        raise ValueError(f"{name} has non-finite entries")
    return A


def check_matrix_batch(X, *, name="X"):
    """Accept a single ``(m, m)`` matrix or a stack ``(n, m, m)``.

    Returns the stack and a flag telling whether the input was a single matrix.
    """
    A = np.asarray(X)
    if A.ndim == 2:
        return check_matrix(A, name=name)[None], True
    if A.ndim != 3:
        raise ValueError(f"{name} must have shape (m, m) or (n, m, m), got {A.shape}")
    return np.stack([check_matrix(a, name=f"{name}[{i}]") for i, a in enumerate(A)]), False


def check_weight(weight, *, open_interval=False):
    if not isinstance(weight, numbers.Real) or not np.isfinite(weight):
        raise InvalidWeight(f"weight must be a real number, got {weight!r}")
    weight = float(weight)
    if open_interval:
        if not 0.0 < weight < 1.0:
            raise InvalidWeight(f"weight must lie in (0, 1), got {weight}")
    elif not 0.0 <= weight <= 1.0:
        raise InvalidWeight(f"weight must lie in [0, 1], got {weight}")
    return weight


def check_nonnegative(values, *, name="s", strict=False):
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError(f"{name} must be a non-empty 1-D array")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} has non-finite entries")
    if strict and np.any(arr <= 0):
        raise ValueError(f"{name} must be strictly positive")
    if np.any(arr < 0):
        raise ValueError(f"{name} must be non-negative")
    return arr


def scale(norm):
    """Scale used for relative tolerances, floored for zero-norm inputs."""
    return max(float(norm), NORM_FLOOR)

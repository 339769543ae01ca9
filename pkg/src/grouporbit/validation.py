"""Input validation helpers shared by the functional layer and the estimators."""

from __future__ import annotations

import numpy as np


def as_matrix(x, allow_complex: bool = True, name: str = "x") -> np.ndarray:
    """Coerce to a finite 2-D float or complex array."""
    a = np.asarray(x)
    if a.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got shape {a.shape}")
    if a.size == 0:
        raise ValueError(f"{name} is empty")
    if np.iscomplexobj(a):
        if not allow_complex:
            raise ValueError(f"{name} must be real for this operation")
        a = a.astype(np.complex128)
    else:
        a = a.astype(np.float64)
    if not np.all(np.isfinite(np.abs(a))):
        raise ValueError("non-finite data")
    return a


def as_tensor(x, name: str = "t") -> np.ndarray:
    """Coerce to a finite float or complex array of any order >= 1."""
    a = np.asarray(x)
    if a.size == 0:
        raise ValueError(f"{name} is empty")
    a = a.astype(np.complex128 if np.iscomplexobj(a) else np.float64)
    if not np.all(np.isfinite(np.abs(a))):
        raise ValueError("non-finite data")
    return a


def as_points(x, name: str = "points") -> np.ndarray:
    """Coerce to a finite real (n, d) point cloud with d in {2, 3}."""
    a = np.asarray(x, dtype=float)
    if a.ndim != 2 or a.shape[1] not in (2, 3):
        raise ValueError(f"{name} must be an (n, 2) or (n, 3) array, got shape {a.shape}")
    if a.shape[0] < 3:
        raise ValueError(f"{name} needs at least 3 points")
    if not np.all(np.isfinite(a)):
        raise ValueError("non-finite data")
    return a

"""Dense kernels shared by the orbit solvers.

All vectorization in this package is column-major: ``vec`` stacks matrix
columns, and for higher-order tensors the first index varies fastest.
Index groupings for unfolding are 0-based ordered partitions of the modes.
"""

from __future__ import annotations

from typing import Callable, Sequence

import numpy as np
import scipy.linalg


def vec(a: np.ndarray) -> np.ndarray:
    """Flatten a matrix or tensor with the first index fastest."""
    return np.asarray(a).ravel(order="F")


def unvec(v: np.ndarray, shape: Sequence[int]) -> np.ndarray:
    """Inverse of :func:`vec` for the given shape."""
    v = np.asarray(v)
    size = int(np.prod(shape))
    if v.size != size:
        raise ValueError(f"vector of length {v.size} cannot fill shape {tuple(shape)}")
    return v.reshape(tuple(shape), order="F")


def _check_grouping(groups: Sequence[Sequence[int]], order: int) -> list[list[int]]:
    flat: list[int] = []
    cleaned = []
    for g in groups:
        g = [int(i) for i in g]
        if not g:
            raise ValueError("bad index grouping: empty group")
        cleaned.append(g)
        flat.extend(g)
    if sorted(flat) != list(range(order)):
        raise ValueError(
            f"bad index grouping: {groups!r} is not an ordered partition of 0..{order - 1}"
        )
    return cleaned

def unfold(t: np.ndarray, groups: Sequence[Sequence[int]]) -> np.ndarray:
    """Regroup tensor modes into a lower-order tensor.

    ``groups`` is an ordered partition of the modes (0-based); axis ``o`` of
    the result merges the modes ``groups[o]`` in ascending order, first listed
    mode fastest.  With contiguous ascending groups this is a pure reshape of
    ``vec(t)``; otherwise the mode permutation induced by the grouping is
    applied first.
    """
    t = np.asarray(t)
    cleaned = _check_grouping(groups, t.ndim)
    axes = [i for g in cleaned for i in sorted(g)]
    merged = [int(np.prod([t.shape[i] for i in sorted(g)])) for g in cleaned]
    return np.transpose(t, axes).reshape(tuple(merged), order="F")


def fold(a: np.ndarray, groups: Sequence[Sequence[int]], shape: Sequence[int]) -> np.ndarray:
    """Inverse of :func:`unfold` back to a tensor of the given shape."""
    a = np.asarray(a)
    shape = tuple(int(n) for n in shape)
    cleaned = _check_grouping(groups, len(shape))
    axes = [i for g in cleaned for i in sorted(g)]
    grouped_shape = tuple(shape[i] for i in axes)
    t = a.reshape(grouped_shape, order="F")
    return np.transpose(t, np.argsort(axes))


def mode_product(t: np.ndarray, u: np.ndarray, mode: int) -> np.ndarray:
    """Multiply tensor ``t`` along ``mode`` by the matrix ``u``.

    Index convention: ``(t x_k u)[..., i_k, ...] = sum_j u[i_k, j] t[..., j, ...]``.
    """
    t = np.asarray(t)
    u = np.asarray(u)
    if u.ndim != 2 or u.shape[1] != t.shape[mode]:
        raise ValueError(
            f"mode-{mode} product needs a matrix with {t.shape[mode]} columns, got {u.shape}"
        )
    moved = np.tensordot(u, t, axes=(1, mode))
    return np.moveaxis(moved, 0, mode)


def multi_mode_product(t: np.ndarray, mats: Sequence[np.ndarray]) -> np.ndarray:
    """Apply one matrix per mode: ``t x_0 mats[0] x_1 mats[1] ...``."""
    t = np.asarray(t)
    if len(mats) != t.ndim:
        raise ValueError(f"need {t.ndim} matrices, got {len(mats)}")
    out = t
    for mode, u in enumerate(mats):
        out = mode_product(out, u, mode)
    return out


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product."""
    return np.kron(np.asarray(a), np.asarray(b))


def kron_sum(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker sum ``a (+) b = a kron I_n + I_m kron b`` for square a (m) and b (n)."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or b.ndim != 2 or b.shape[0] != b.shape[1]:
        raise ValueError("kron_sum requires square matrices")
    return np.kron(a, np.eye(b.shape[0])) + np.kron(np.eye(a.shape[0]), b)


def mat_exp(a: np.ndarray) -> np.ndarray:
    """Matrix exponential (scaling-and-squaring with Pade approximants)."""
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("mat_exp requires a square matrix")
    return scipy.linalg.expm(a)


def entrywise_cost(m: np.ndarray, f: Callable[[float], float]) -> float:
    """Sum a scalar cost over entry magnitudes: ``sum_ij f(|m_ij|)``."""
    mags = np.abs(np.asarray(m)).ravel()
    if not np.all(np.isfinite(mags)):
        raise ValueError("non-finite data")
    return float(sum(f(x) for x in mags))


def lp_cost(m: np.ndarray, p: float) -> float:
    """Unrooted entrywise power sum ``sum |m_ij|^p``."""
    mags = np.abs(np.asarray(m))
    return float(np.sum(mags**p))


def lp_norm(m: np.ndarray, p: float) -> float:
    """Rooted entrywise p-norm ``(sum |m_ij|^p)^(1/p)`` (quasi-norm for p < 1)."""
    return lp_cost(m, p) ** (1.0 / p)


def schatten_norm(s: np.ndarray, p: float) -> float:
    """Rooted Schatten p-norm from a vector of singular values."""
    s = np.abs(np.asarray(s, dtype=float))
    return float(np.sum(s**p) ** (1.0 / p))


def convex_hull(points: np.ndarray) -> np.ndarray:
    """Convex hull of 2-D points by monotone chain, counter-clockwise, no repeats.

    Collinear input collapses to its extreme segment (or a single point).
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValueError("convex_hull expects an (n, 2) array")
    uniq = np.unique(pts, axis=0)
    order = np.lexsort((uniq[:, 1], uniq[:, 0]))
    uniq = uniq[order]
    if len(uniq) <= 2:
        return uniq

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower: list[np.ndarray] = []
    for p in uniq:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[np.ndarray] = []
    for p in uniq[::-1]:
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    if len(hull) < 3:
        # All points collinear: keep the extreme pair.
        return np.vstack([uniq[0], uniq[-1]])
    return np.vstack(hull)


def hull_area(points: np.ndarray) -> float:
    """Area of the convex hull of 2-D points (shoelace; 0 for degenerate input)."""
    hull = convex_hull(points)
    if len(hull) < 3:
        return 0.0
    x = hull[:, 0]
    y = hull[:, 1]
    return 0.5 * abs(float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1))))

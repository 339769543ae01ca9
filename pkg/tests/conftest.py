"""Shared fixtures: the pinned example matrix and cached default-budget solves.

The heavy orbit solves run once per session; unit tests and the acceptance
suite assert against the same results.
"""

from __future__ import annotations

import time

import numpy as np
import pytest

from grouporbit import NmOptions, recover, tucker_goo
from grouporbit.costs import EntrywisePow
from grouporbit.groups import GroupSpec

# 3x3 example matrix used across the golden tests.
PINNED_M = np.array(
    [
        [0.17658, 0.517888, 0.448587],
        [0.214066, 0.718154, 0.849892],
        [0.796042, 0.197801, 0.233489],
    ]
)


@pytest.fixture(scope="session")
def pinned_m() -> np.ndarray:
    return PINNED_M.copy()


def _timed_recover(kind: str, m: np.ndarray):
    start = time.perf_counter()
    result = recover(kind, m, NmOptions())
    return result, time.perf_counter() - start


@pytest.fixture(scope="session")
def svd_solution():
    return _timed_recover("svd", PINNED_M)


@pytest.fixture(scope="session")
def qr_solution():
    return _timed_recover("qr", PINNED_M)


@pytest.fixture(scope="session")
def lu_solution():
    return _timed_recover("lu", PINNED_M)


@pytest.fixture(scope="session")
def cholesky_solution():
    return _timed_recover("cholesky", PINNED_M.T @ PINNED_M)


@pytest.fixture(scope="session")
def schur_solution():
    return _timed_recover("schur", PINNED_M)


@pytest.fixture(scope="session")
def equivalence_solution():
    return _timed_recover("equivalence", PINNED_M)


def kolda_tensor() -> np.ndarray:
    # vec = [1,0,0,0,0,0,3,2] in column-major order, shape (2,2,2).
    t = np.zeros((2, 2, 2))
    t[0, 0, 0] = 1.0
    t[0, 1, 1] = 3.0
    t[1, 1, 1] = 2.0
    return t


def nonsuperdiagonal_tensor() -> np.ndarray:
    # vec = [1,0,0,1,0,0,0,0,0,0,0,0,1,0,0,1], shape (2,2,2,2).
    vec = np.array([1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 1], dtype=float)
    return vec.reshape((2, 2, 2, 2), order="F")


@pytest.fixture(scope="session")
def kolda() -> np.ndarray:
    return kolda_tensor()


@pytest.fixture(scope="session")
def nonsuper() -> np.ndarray:
    return nonsuperdiagonal_tensor()


@pytest.fixture(scope="session")
def so_tucker_solution(kolda):
    return tucker_goo(kolda, [GroupSpec("so", 2)] * 3, EntrywisePow(1.0), NmOptions())


@pytest.fixture(scope="session")
def sl_tucker_solution(kolda):
    return tucker_goo(kolda, [GroupSpec("sl", 2)] * 3, EntrywisePow(1.0), NmOptions())


@pytest.fixture(scope="session")
def sl4_tucker_solution(nonsuper):
    return tucker_goo(nonsuper, [GroupSpec("sl", 2)] * 4, EntrywisePow(1.0), NmOptions())


def grid_square(points_per_side: int = 20) -> np.ndarray:
    side = np.linspace(-1.0, 1.0, points_per_side)
    gx, gy = np.meshgrid(side, side)
    return np.column_stack([gx.ravel(), gy.ravel()])

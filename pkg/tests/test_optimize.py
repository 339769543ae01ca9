"""Tests for the seeded multi-start simplex minimizer."""

import numpy as np
import pytest
import scipy.optimize
from numpy.testing import assert_array_equal

from grouporbit.optimize import NmOptions, multi_start, nelder_mead

# Global minimum of sum(cos(3x) + 0.1 x^2), precomputed by dense grid scan
# plus local refinement; the minimizer sits near (+-1.02441, +-1.02441).
TRAP_MIN = -1.7854451980201693


def quadratic(x):
    return float(np.sum(x * x))


def trap(x):
    return float(np.sum(np.cos(3.0 * x) + 0.1 * x * x))


def test_quadratic_reaches_zero():
    res = multi_start(quadratic, 3, NmOptions(restarts=2))
    assert res.value <= 1e-8
    assert res.converged


def test_rosenbrock_from_standard_start():
    res = nelder_mead(scipy.optimize.rosen, np.array([-1.2, 1.0]), NmOptions(max_iters=2000))
    assert res.value <= 1e-6


def test_constant_objective_converges_immediately():
    x0 = np.zeros(3)
    res = nelder_mead(lambda x: 7.0, x0)
    assert res.converged
    assert res.value == 7.0


def test_zero_dimensional_problem():
    res = nelder_mead(lambda x: 3.0, np.zeros(0))
    assert res.value == 3.0
    assert res.converged


def test_non_finite_at_origin_rejected():
    with pytest.raises(ValueError, match="not finite at x0"):
        nelder_mead(lambda x: float("nan"), np.zeros(2))


def test_non_finite_mid_search_tolerated():
    # An infinite wall away from the minimum must not crash the descent.
    def walled(x):
        if x[0] > 0.4:
            return float("inf")
        return float(np.sum((x + 1.0) ** 2))

    res = nelder_mead(walled, np.zeros(2))
    assert np.isfinite(res.value)
    assert res.value <= 1e-8


def test_x0_must_be_flat():
    with pytest.raises(ValueError, match="flat vector"):
        nelder_mead(quadratic, np.zeros((2, 2)))


def test_restart_count_validation():
    with pytest.raises(ValueError, match="at least one restart"):
        multi_start(quadratic, 2, NmOptions(restarts=0))


def test_iteration_budget_default():
    assert NmOptions().iters_for(5) == 2000
    assert NmOptions(max_iters=7).iters_for(5) == 7


def test_single_restart_equals_descent_from_zero():
    opts = NmOptions(restarts=1)
    ms = multi_start(trap, 2, opts)
    single = nelder_mead(trap, np.zeros(2), opts)
    assert ms.value == single.value
    assert_array_equal(ms.params, single.params)
    assert ms.restart_index == 0


def test_trap_multistart_matches_grid_scan():
    res = multi_start(trap, 2, NmOptions(restarts=16))
    assert res.value == pytest.approx(TRAP_MIN, abs=1e-6)
    # A dense grid scan can only sit above the true minimum.
    axis = np.linspace(-3.0, 3.0, 317)
    gx, gy = np.meshgrid(axis, axis)
    grid_min = float(np.min(np.cos(3 * gx) + 0.1 * gx**2 + np.cos(3 * gy) + 0.1 * gy**2))
    assert res.value <= grid_min + 1e-6


def test_same_seed_is_bitwise_identical():
    opts = NmOptions(restarts=8, seed=5)
    a = multi_start(trap, 2, opts)
    b = multi_start(trap, 2, opts)
    assert a.value == b.value
    assert_array_equal(a.params, b.params)
    assert a.evals == b.evals
    assert a.restart_index == b.restart_index


def test_thread_count_does_not_change_result(monkeypatch):
    opts = NmOptions(restarts=6, seed=3)
    monkeypatch.setenv("GOO_THREADS", "1")
    serial = multi_start(trap, 2, opts)
    monkeypatch.setenv("GOO_THREADS", "4")
    threaded = multi_start(trap, 2, opts)
    assert serial.value == threaded.value
    assert_array_equal(serial.params, threaded.params)
    assert serial.restart_index == threaded.restart_index


def test_value_is_objective_reevaluated_at_params():
    res = multi_start(trap, 2, NmOptions(restarts=4))
    assert res.value == trap(res.params)


def test_zero_start_anchors_the_reduction():
    # Restart 0 begins at the zero vector, so the reduction can never return
    # anything worse than a descent from zero allows.
    res = multi_start(quadratic, 4, NmOptions(restarts=3))
    assert res.value <= quadratic(np.zeros(4))
    assert res.evals > 0

"""Derivative-free minimization: Nelder-Mead descents under a seeded multi-start.

The orbit objectives are continuous but nonsmooth (l1-type costs), so the
inner solver is a simplex method with standard coefficients (reflect 1,
expand 2, contract 0.5, shrink 0.5).  A single simplex tends to collapse
before the off-pattern mass is fully drained, so each descent re-seeds a
fresh simplex at its incumbent best until the improvement drops below f_tol
or the iteration budget runs out.  A descent counts as converged when its
final simplex collapsed to the f_tol/x_tol tolerances; only a descent cut
off mid-pass by max_iters reports converged=False.

Determinism: restart k draws its origin from ``default_rng((seed, k))``,
restart 0 always starts at the zero vector (the group identity), and the
reduction over restarts breaks value ties toward the lower restart index.
The environment variable ``GOO_THREADS`` caps how many restarts may run
concurrently; the reduction is order-independent by construction.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np
import scipy.optimize


@dataclass(frozen=True)
class NmOptions:
    """Simplex and multi-start controls.

    ``max_iters=None`` means ``400 * dim`` per descent.  ``init_scale`` is the
    initial simplex edge length; ``init_sigma`` the Gaussian spread of restart
    origins.
    """

    max_iters: int | None = None
    f_tol: float = 1e-12
    x_tol: float = 1e-10
    init_scale: float = 0.25
    restarts: int = 32
    seed: int = 0
    init_sigma: float = 0.8

    def iters_for(self, dim: int) -> int:
        return self.max_iters if self.max_iters is not None else 400 * max(dim, 1)


@dataclass
class OptResult:
    """Best point found by a descent or a multi-start reduction."""

    params: np.ndarray
    value: float
    evals: int
    restart_index: int
    converged: bool


def _guarded(objective: Callable[[np.ndarray], float]):
    count = [0]

    def wrapped(x: np.ndarray) -> float:
        count[0] += 1
        val = objective(x)
        if not math.isfinite(val):
            return math.inf
        return float(val)

    return wrapped, count


def nelder_mead(
    objective: Callable[[np.ndarray], float],
    x0: np.ndarray,
    options: NmOptions | None = None,
) -> OptResult:
    """Minimize from a single origin; raises ValueError if objective(x0) is not finite."""
    opts = options or NmOptions()
    x0 = np.asarray(x0, dtype=float)
    if x0.ndim != 1:
        raise ValueError("x0 must be a flat vector")
    dim = x0.size
    first = objective(x0)
    if not math.isfinite(first):
        raise ValueError(f"objective is not finite at x0 (got {first})")
    if dim == 0:
        return OptResult(params=x0.copy(), value=float(first), evals=1, restart_index=0, converged=True)

    wrapped, count = _guarded(objective)
    budget = opts.iters_for(dim)
    best_x = x0.copy()
    best_f = float(first)
    used = 0
    scale = opts.init_scale
    converged = False
    while used < budget:
        simplex = np.tile(best_x, (dim + 1, 1))
        for i in range(dim):
            simplex[i + 1, i] += scale
        res = scipy.optimize.minimize(
            wrapped,
            best_x,
            method="Nelder-Mead",
            options={
                "initial_simplex": simplex,
                "maxiter": budget - used,
                "fatol": opts.f_tol,
                "xatol": opts.x_tol,
                "disp": False,
            },
        )
        used += max(int(res.nit), 1)
        improved = best_f - float(res.fun)
        if float(res.fun) < best_f:
            best_f = float(res.fun)
            best_x = np.asarray(res.x, dtype=float)
        # Converged means the incumbent comes from a simplex that collapsed to
        # f_tol/x_tol.  A pass cut off by the budget voids that only if it was
        # still improving by more than f_tol when it ran out.
        if res.status == 0:
            converged = True
            if improved <= opts.f_tol:
                break
            scale = max(scale * 0.25, 1e-8)
        else:
            if improved > opts.f_tol:
                converged = False
            break
    value = wrapped(best_x)  # stored value is the objective re-evaluated at params
    return OptResult(params=best_x, value=value, evals=count[0] + 1, restart_index=0, converged=converged)


def multi_start(
    objective: Callable[[np.ndarray], float],
    dim: int,
    options: NmOptions | None = None,
) -> OptResult:
    """Run seeded independent descents and return the best, ties to the lower index."""
    opts = options or NmOptions()
    if opts.restarts < 1:
        raise ValueError("need at least one restart")

    def origin(k: int) -> np.ndarray:
        if k == 0:
            return np.zeros(dim)
        rng = np.random.default_rng((opts.seed, k))
        return rng.normal(0.0, opts.init_sigma, dim)

    def run(k: int) -> OptResult:
        res = nelder_mead(objective, origin(k), opts)
        res.restart_index = k
        return res

    threads = int(os.environ.get("GOO_THREADS", "1") or "1")
    if threads > 1 and opts.restarts > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run, range(opts.restarts)))
    else:
        results = [run(k) for k in range(opts.restarts)]

    best = min(results, key=lambda r: (r.value, r.restart_index))
    total_evals = sum(r.evals for r in results)
    return OptResult(
        params=best.params,
        value=best.value,
        evals=total_evals,
        restart_index=best.restart_index,
        converged=best.converged,
    )

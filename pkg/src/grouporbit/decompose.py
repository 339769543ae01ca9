"""Matrix decompositions induced by cost minimization over group orbits.

Each supported kind binds an orbit action and a sparsifying cost; the
decomposition is whatever structure the minimizing orbit point exposes
(pseudo-diagonal or triangular core), with the group elements reported as
factors.  Inverses of factors are always exact exponentials ``exp(-Z)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .costs import Cost, Entropy, EntrywisePow, MaskedPow
from .groups import (
    GroupSpec,
    LeftOnly,
    OrbitAction,
    Similarity,
    TensorModes,
    TwoSided,
    embed,
    embed_inverse,
)
from .linalg import lp_norm, schatten_norm
from .optimize import NmOptions, multi_start
from .oracles import oracle_svd
from .validation import as_matrix

DIAGONAL_KINDS = ("svd", "svd_complex", "qr", "equivalence")
TRIANGULAR_KINDS = ("lu", "cholesky", "schur")
KINDS = DIAGONAL_KINDS + TRIANGULAR_KINDS


@dataclass
class GooSolution:
    """Raw outcome of one orbit minimization."""

    params: np.ndarray
    core: np.ndarray
    objective: float
    evals: int
    restart_index: int
    converged: bool


def goo_solve(
    data: np.ndarray,
    action: OrbitAction,
    cost: Cost,
    options: NmOptions | None = None,
) -> GooSolution:
    """Minimize ``cost(action(params, data))`` over the action's chart."""
    data = np.asarray(data)
    if not np.all(np.isfinite(np.abs(data))):
        raise ValueError("non-finite data")
    opts = options or NmOptions()

    def objective(p: np.ndarray) -> float:
        return cost.evaluate(action.apply(p, data))

    res = multi_start(objective, action.dim, opts)
    core = action.apply(res.params, data)
    return GooSolution(
        params=res.params,
        core=core,
        objective=res.value,
        evals=res.evals,
        restart_index=res.restart_index,
        converged=res.converged,
    )


@dataclass
class CanonicalCore:
    """Sorted nonnegative diagonal view of a pseudo-diagonal core.

    Slot ``i`` of the canonical diagonal pulls
    ``core[row_permutation[i], col_permutation[i]] = signs[i] * canon[i, i]``.
    ``off_pattern_residual`` is the relative Frobenius mass outside the
    assigned entries.
    """

    canon: np.ndarray
    row_permutation: np.ndarray
    col_permutation: np.ndarray
    signs: np.ndarray
    off_pattern_residual: float


def canonicalize_pseudo_diagonal(core: np.ndarray) -> CanonicalCore:
    """Reduce a pseudo-diagonal matrix to descending nonnegative diagonal form.

    Assignment of diagonal slots to entries is exhaustive for square cores up
    to 4x4 and greedy max-magnitude otherwise.
    """
    core = np.asarray(core)
    if core.ndim != 2:
        raise ValueError("canonicalize_pseudo_diagonal expects a matrix")
    m, n = core.shape
    k = min(m, n)
    mags = np.abs(core)

    pairs: list[tuple[int, int]]
    if m == n and n <= 4:
        best = max(
            itertools.permutations(range(n)),
            key=lambda sigma: sum(mags[sigma[j], j] for j in range(n)),
        )
        pairs = [(best[j], j) for j in range(n)]
    else:
        work = mags.copy()
        pairs = []
        for _ in range(k):
            i, j = np.unravel_index(np.argmax(work), work.shape)
            pairs.append((int(i), int(j)))
            work[i, :] = -1.0
            work[:, j] = -1.0

    pairs.sort(key=lambda ij: -mags[ij])
    rows = np.array([i for i, _ in pairs], dtype=int)
    cols = np.array([j for _, j in pairs], dtype=int)
    values = core[rows, cols]
    signs = np.ones(k, dtype=complex)
    nz = np.abs(values) > 0
    signs[nz] = values[nz] / np.abs(values[nz])

    canon = np.zeros((m, n))
    canon[np.arange(k), np.arange(k)] = np.abs(values)

    total = float(np.linalg.norm(core))
    captured = float(np.linalg.norm(values))
    off = 0.0
    if total > 0.0:
        off = float(np.sqrt(max(total**2 - captured**2, 0.0)) / total)
    return CanonicalCore(
        canon=canon,
        row_permutation=rows,
        col_permutation=cols,
        signs=signs,
        off_pattern_residual=off,
    )


def fold_canonical(canonical: CanonicalCore) -> np.ndarray:
    """Rebuild the pseudo-diagonal core (minus off-pattern dust) from its canonical view."""
    m, n = canonical.canon.shape
    k = min(m, n)
    out = np.zeros((m, n), dtype=complex)
    diag = np.diag(canonical.canon)[:k]
    out[canonical.row_permutation, canonical.col_permutation] = canonical.signs * diag
    if np.max(np.abs(np.imag(out))) == 0.0:
        out = np.real(out)
    return out


@dataclass
class DecompositionResult:
    """Factors, core, and quality measures for one induced decomposition.

    ``core`` is the raw orbit output (the optimizer's D-hat or triangular
    Z-hat); ``canonical_core`` is its sign-permutation cleanup for the
    diagonal-core kinds, with the bookkeeping in ``row_permutation`` /
    ``col_permutation`` / ``signs``.  ``reconstruct`` reassembles the input
    from factors and the raw core.
    """

    kind: str
    factors: dict[str, np.ndarray]
    core: np.ndarray
    objective: float
    reconstruction_residual: float
    off_pattern_residual: float
    converged: bool
    evals: int
    restart_index: int
    options: NmOptions
    params: np.ndarray
    action: OrbitAction
    canonical_core: np.ndarray | None = None
    row_permutation: np.ndarray | None = None
    col_permutation: np.ndarray | None = None
    signs: np.ndarray | None = None

    def reconstruct(self) -> np.ndarray:
        return _reassemble(self.action, self.params, self.core)


def _reassemble(action: OrbitAction, params: np.ndarray, core: np.ndarray) -> np.ndarray:
    if isinstance(action, TwoSided):
        pl, pr = action.split(params)
        left = embed_inverse(action.left, pl)
        if action.right_op == "transpose":
            right = embed_inverse(action.right, pr).T
        elif action.right_op == "conj_transpose":
            right = embed_inverse(action.right, pr).conj().T
        else:
            right = embed(action.right, pr)
        return left @ core @ right
    if isinstance(action, Similarity):
        (p,) = action.split(params)
        return embed(action.spec, p) @ core @ embed_inverse(action.spec, p)
    if isinstance(action, LeftOnly):
        (p,) = action.split(params)
        return embed(action.spec, p) @ core
    if isinstance(action, TensorModes):
        from .linalg import multi_mode_product

        return multi_mode_product(core, list(action.inverse_element_matrices(params)))
    raise TypeError(f"unknown action {type(action).__name__}")


def _binding(kind: str, m: np.ndarray) -> tuple[OrbitAction, Cost, tuple[str, ...]]:
    rows, cols = m.shape
    complex_input = np.iscomplexobj(m)
    if kind == "svd":
        return (
            TwoSided(GroupSpec("so", rows), GroupSpec("so", cols), "transpose"),
            EntrywisePow(1.0),
            ("U", "V"),
        )
    if kind == "svd_complex":
        return (
            TwoSided(GroupSpec("u", rows), GroupSpec("u", cols), "conj_transpose"),
            EntrywisePow(1.0),
            ("U", "V"),
        )
    if kind == "qr":
        left = GroupSpec("u" if complex_input else "so", rows)
        return (
            TwoSided(left, GroupSpec("uut", cols), "inverse"),
            EntrywisePow(1.0),
            ("Q", "R"),
        )
    if kind == "equivalence":
        return (
            TwoSided(GroupSpec("sl", rows), GroupSpec("sl", cols), "inverse"),
            EntrywisePow(1.0),
            ("A", "B"),
        )
    if kind in ("lu", "cholesky"):
        return LeftOnly(GroupSpec("lut", rows)), MaskedPow(1.0, "lower"), ("L",)
    if kind == "schur":
        return Similarity(GroupSpec("u", rows)), MaskedPow(1.0, "lower"), ("Q",)
    raise ValueError(f"unknown decomposition kind {kind!r}")


def _factor_matrices(kind: str, action: OrbitAction, params: np.ndarray) -> dict[str, np.ndarray]:
    if kind in ("svd", "svd_complex"):
        left_inv, right_inv = action.inverse_element_matrices(params)
        return {"U": left_inv, "V": right_inv}
    if kind == "qr":
        pl, pr = action.split(params)
        return {"Q": embed_inverse(action.left, pl), "R": embed(action.right, pr)}
    if kind == "equivalence":
        pl, pr = action.split(params)
        return {"A": embed_inverse(action.left, pl), "B": embed(action.right, pr)}
    if kind in ("lu", "cholesky"):
        (g,) = action.element_matrices(params)
        return {"L": g}
    if kind == "schur":
        (g,) = action.element_matrices(params)
        return {"Q": g}
    raise ValueError(f"unknown decomposition kind {kind!r}")


def normalize_kind(kind: str) -> str:
    k = kind.strip().lower().replace("-", "_")
    if k not in KINDS:
        raise ValueError(f"unknown decomposition kind {kind!r}; choose from {', '.join(KINDS)}")
    return k


def recover(kind: str, m: np.ndarray, options: NmOptions | None = None) -> DecompositionResult:
    """Run the bound orbit minimization for ``kind`` and package the factors.

    Kinds: svd (real), svd_complex, qr, equivalence, lu, cholesky, schur.
    lu/cholesky/schur/equivalence require square input; cholesky additionally
    requires symmetric positive definite, equivalence invertible input.
    """
    kind = normalize_kind(kind)
    want_complex = kind in ("svd_complex", "schur")
    m = as_matrix(m, allow_complex=want_complex or kind == "qr", name="m")
    rows, cols = m.shape
    if kind in ("lu", "cholesky", "schur", "equivalence", "qr") and rows != cols:
        raise ValueError(f"{kind} requires a square matrix, got {m.shape}")
    scale = float(np.max(np.abs(m))) if m.size else 0.0
    if kind == "cholesky":
        if np.max(np.abs(m - m.conj().T)) > 1e-10 * max(scale, 1e-300):
            raise ValueError("not Hermitian")
        try:
            np.linalg.cholesky(np.real(m))
        except np.linalg.LinAlgError as exc:
            raise ValueError("not positive definite") from exc
    if kind == "equivalence":
        if abs(np.linalg.det(m)) <= 1e-12 * max(scale, 1e-300) ** rows:
            raise ValueError("singular matrix: equivalence needs invertible input")

    action, cost, _ = _binding(kind, m)
    sol = goo_solve(m, action, cost, options)
    factors = _factor_matrices(kind, action, sol.params)

    canonical = None
    if kind in DIAGONAL_KINDS:
        canonical = canonicalize_pseudo_diagonal(sol.core)
        off = canonical.off_pattern_residual
    else:
        denom = max(float(np.linalg.norm(sol.core)), 1e-300)
        off = float(np.linalg.norm(np.tril(sol.core, -1)) / denom)

    recon = _reassemble(action, sol.params, sol.core)
    denom = max(float(np.linalg.norm(m)), 1e-300)
    recon_res = float(np.linalg.norm(recon - m) / denom)

    return DecompositionResult(
        kind=kind,
        factors=factors,
        core=sol.core,
        objective=sol.objective,
        reconstruction_residual=recon_res,
        off_pattern_residual=off,
        converged=sol.converged,
        evals=sol.evals,
        restart_index=sol.restart_index,
        options=options or NmOptions(),
        params=sol.params,
        action=action,
        canonical_core=None if canonical is None else canonical.canon,
        row_permutation=None if canonical is None else canonical.row_permutation,
        col_permutation=None if canonical is None else canonical.col_permutation,
        signs=None if canonical is None else canonical.signs,
    )


@dataclass(frozen=True)
class InequalityRow:
    """One entrywise-vs-Schatten comparison at a given p."""

    p: float
    lp: float
    schatten: float
    slack: float
    holds: bool


@dataclass(frozen=True)
class DualityChain:
    """``||M||_p >= ||D||_p >= ||D||_q >= ||M||_q`` for p < 2 < q."""

    p: float
    q: float
    lp: float
    schatten_p: float
    schatten_q: float
    lq: float
    slacks: tuple[float, float, float]
    holds: bool


@dataclass(frozen=True)
class EntropyBound:
    """Von Neumann entropy vs entrywise Shannon entropy for a density matrix."""

    von_neumann: float
    entrywise: float
    slack: float
    holds: bool


@dataclass
class InequalityReport:
    rows: list[InequalityRow]
    duality: DualityChain | None
    entropy: EntropyBound | None

    @property
    def all_hold(self) -> bool:
        ok = all(r.holds for r in self.rows)
        if self.duality is not None:
            ok = ok and self.duality.holds
        if self.entropy is not None:
            ok = ok and self.entropy.holds
        return ok


def verify_inequalities(
    m: np.ndarray,
    ps: Sequence[float] = (0.5, 1.0, 1.5, 3.0),
    duality: tuple[float, float] | None = (1.0, 3.0),
    tol: float = 1e-9,
) -> InequalityReport:
    """Check the orbit-infimum corollaries on one matrix.

    Entrywise p-cost dominates the Schatten p-norm for 0 < p < 2 and is
    dominated by it for p > 2 (rooted forms compared; singular values from the
    Jacobi oracle).  When the input is Hermitian PSD with unit trace, the von
    Neumann entropy is also compared against the entrywise Shannon entropy.
    """
    m = as_matrix(m, allow_complex=True, name="m")
    _, s, _ = oracle_svd(m)
    rows = []
    for p in ps:
        lp = lp_norm(m, p)
        sp = schatten_norm(s, p)
        if p < 2.0:
            slack = lp - sp
        elif p == 2.0:
            slack = -abs(lp - sp)
        else:
            slack = sp - lp
        rows.append(InequalityRow(p=float(p), lp=lp, schatten=sp, slack=slack, holds=slack >= -tol))

    chain = None
    if duality is not None:
        p, q = duality
        if not (0 < p < 2 < q):
            raise ValueError(f"duality pair needs 0 < p < 2 < q, got {duality}")
        lp = lp_norm(m, p)
        dp = schatten_norm(s, p)
        dq = schatten_norm(s, q)
        lq = lp_norm(m, q)
        slacks = (lp - dp, dp - dq, dq - lq)
        chain = DualityChain(
            p=float(p),
            q=float(q),
            lp=lp,
            schatten_p=dp,
            schatten_q=dq,
            lq=lq,
            slacks=slacks,
            holds=all(x >= -tol for x in slacks),
        )

    entropy = None
    hermitian = m.shape[0] == m.shape[1] and np.max(np.abs(m - m.conj().T)) <= 1e-10 * max(
        float(np.max(np.abs(m))), 1e-300
    )
    psd = False
    if hermitian and abs(np.real(np.trace(m)) - 1.0) <= 1e-8:
        try:
            np.linalg.cholesky(m + 1e-12 * np.eye(m.shape[0]))
            psd = True
        except np.linalg.LinAlgError:
            psd = False
    if psd:
        ent = Entropy()
        vn = float(sum(ent.scalar(x) for x in s))
        ew = ent.evaluate(m)
        entropy = EntropyBound(von_neumann=vn, entrywise=ew, slack=ew - vn, holds=ew - vn >= -tol)

    return InequalityReport(rows=rows, duality=chain, entropy=entropy)


class GroupOrbitDecomposition(BaseEstimator):
    """Estimator facade over :func:`recover`.

    Parameters mirror :class:`NmOptions`; ``fit`` runs the orbit minimization
    on the matrix and exposes factors and residuals as fitted attributes.
    """

    def __init__(
        self,
        kind: str = "svd",
        restarts: int = 32,
        seed: int = 0,
        max_iters: int | None = None,
        f_tol: float = 1e-12,
        x_tol: float = 1e-10,
        init_scale: float = 0.25,
        init_sigma: float = 0.8,
    ) -> None:
        self.kind = kind
        self.restarts = restarts
        self.seed = seed
        self.max_iters = max_iters
        self.f_tol = f_tol
        self.x_tol = x_tol
        self.init_scale = init_scale
        self.init_sigma = init_sigma

    def _options(self) -> NmOptions:
        return NmOptions(
            max_iters=self.max_iters,
            f_tol=self.f_tol,
            x_tol=self.x_tol,
            init_scale=self.init_scale,
            restarts=self.restarts,
            seed=self.seed,
            init_sigma=self.init_sigma,
        )

    def fit(self, X: np.ndarray, y: None = None) -> "GroupOrbitDecomposition":
        result = recover(self.kind, X, self._options())
        self.result_ = result
        self.factors_ = result.factors
        self.core_ = result.core
        self.canonical_core_ = result.canonical_core
        self.objective_ = result.objective
        self.converged_ = result.converged
        self.reconstruction_residual_ = result.reconstruction_residual
        self.off_pattern_residual_ = result.off_pattern_residual
        return self

    def reconstruct(self) -> np.ndarray:
        if not hasattr(self, "result_"):
            raise NotFittedError("GroupOrbitDecomposition is not fitted yet")
        return self.result_.reconstruct()

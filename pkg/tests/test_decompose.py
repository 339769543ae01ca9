"""Tests for orbit-induced matrix decompositions and the inequality checks."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from grouporbit.costs import EntrywisePow
from grouporbit.decompose import (
    canonicalize_pseudo_diagonal,
    fold_canonical,
    goo_solve,
    recover,
    verify_inequalities,
)
from grouporbit.groups import GroupSpec, TwoSided, is_member
from grouporbit.optimize import NmOptions
from grouporbit.oracles import oracle_chol, oracle_lu

from conftest import PINNED_M

SVD_GOLDEN = (1.43557, 0.66535, 0.0910448)
QR_GOLDEN = (0.843023, 0.771339, 0.133735)
EQUIV_GOLDEN = 0.44304
# Eigenvalues of the pinned matrix, precomputed from its characteristic
# polynomial.
SCHUR_EIGS = np.array(
    [
        -0.13060438302725969 - 0.21337909868148033j,
        -0.13060438302725969 + 0.21337909868148033j,
        1.3894317660545181 + 0.0j,
    ]
)
CHOL_COL0 = (0.8430229027256615, 0.4776132647691871, 0.5302483745396743)
CHOL_DIAG = (0.8430229027256615, 0.7713390649886199, 0.1337348517713296)

# Pseudo-diagonal core printed for the orthogonal two-sided solve of the
# pinned matrix: mass sits at (0,2), (2,0), and a negative (1,1).
PRINTED_CORE = np.array(
    [
        [9.16351e-10, -8.52198e-9, 1.43557],
        [-4.58791e-7, -9.10448e-2, 4.36886e-9],
        [6.6535e-1, 8.13893e-8, 2.67077e-10],
    ]
)


# ---------------------------------------------------------------- golden runs


def test_svd_golden(svd_solution):
    result, _ = svd_solution
    assert result.kind == "svd"
    assert set(result.factors) == {"U", "V"}
    assert_allclose(np.diag(result.canonical_core), SVD_GOLDEN, atol=1e-3)
    assert result.off_pattern_residual <= 1e-5
    assert result.reconstruction_residual <= 1e-6
    u, v = result.factors["U"], result.factors["V"]
    assert is_member(GroupSpec("so", 3), u)
    assert is_member(GroupSpec("so", 3), v)
    assert_allclose(u @ result.core @ v.T, PINNED_M, atol=1e-10)
    assert_allclose(result.reconstruct(), PINNED_M, atol=1e-10)


def test_qr_golden(qr_solution):
    result, _ = qr_solution
    assert set(result.factors) == {"Q", "R"}
    assert_allclose(np.diag(result.canonical_core), QR_GOLDEN, atol=1e-3)
    q, r = result.factors["Q"], result.factors["R"]
    assert is_member(GroupSpec("so", 3), q)
    assert is_member(GroupSpec("uut", 3), r)
    assert np.linalg.norm(q @ result.core @ r - PINNED_M) <= 1e-6


def test_lu_matches_elimination_oracle(lu_solution):
    result, _ = lu_solution
    l_oracle, u_oracle = oracle_lu(PINNED_M)
    assert_allclose(result.factors["L"], l_oracle, atol=1e-4)
    assert_allclose(result.core, u_oracle, atol=1e-4)
    assert is_member(GroupSpec("lut", 3), result.factors["L"])
    assert result.off_pattern_residual <= 1e-8


def test_cholesky_matches_oracle(cholesky_solution):
    result, _ = cholesky_solution
    spd = PINNED_M.T @ PINNED_M
    l_oracle, d_oracle = oracle_chol(spd)
    assert_allclose(result.factors["L"], l_oracle, atol=1e-4)
    assert_allclose(result.core, np.diag(d_oracle) @ l_oracle.T, atol=1e-4)
    # Scaling the unit factor by the square roots of the core diagonal gives
    # the classical Cholesky column.
    chol = result.factors["L"] @ np.diag(np.sqrt(np.diag(result.core)))
    assert_allclose(chol[:, 0], CHOL_COL0, atol=1e-4)
    assert_allclose(np.diag(chol), CHOL_DIAG, atol=1e-4)


def test_schur_golden(schur_solution):
    result, _ = schur_solution
    assert result.off_pattern_residual <= 1e-5
    assert_allclose(np.sort_complex(np.diag(result.core)), SCHUR_EIGS, atol=1e-6)
    q = result.factors["Q"]
    assert is_member(GroupSpec("u", 3), q)
    assert_allclose(q @ result.core @ q.conj().T, PINNED_M, atol=1e-10)


def test_equivalence_golden(equivalence_solution):
    result, _ = equivalence_solution
    assert set(result.factors) == {"A", "B"}
    assert_allclose(np.diag(result.canonical_core), [EQUIV_GOLDEN] * 3, atol=1e-3)
    assert result.off_pattern_residual <= 1e-5
    for name in ("A", "B"):
        assert abs(np.linalg.det(result.factors[name]) - 1.0) <= 1e-9


def test_svd_complex_smoke():
    rng = np.random.default_rng(3)
    m = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    result = recover("svd-complex", m, NmOptions(restarts=4))
    assert result.kind == "svd_complex"
    u = result.factors["U"]
    assert is_member(GroupSpec("u", 2), u)
    assert result.reconstruction_residual <= 1e-8
    assert result.canonical_core is not None


# ------------------------------------------------------------------- anchors


def test_identity_anchor_on_diagonal_input():
    result = recover("svd", np.diag([3.0, 2.0, 1.0]), NmOptions(restarts=1))
    assert result.objective == pytest.approx(6.0, abs=1e-9)
    assert_allclose(np.diag(result.canonical_core), [3.0, 2.0, 1.0], atol=1e-6)
    assert_allclose(result.factors["U"], np.eye(3), atol=1e-5)
    assert_allclose(result.factors["V"], np.eye(3), atol=1e-5)


def test_zero_matrix_costs_nothing():
    action = TwoSided(GroupSpec("so", 3), GroupSpec("so", 3))
    sol = goo_solve(np.zeros((3, 3)), action, EntrywisePow(1.0), NmOptions(restarts=1))
    assert sol.objective == 0.0
    assert sol.converged


# ----------------------------------------------------------------- validation


def test_cholesky_rejects_bad_inputs():
    with pytest.raises(ValueError, match="not positive definite"):
        recover("cholesky", np.diag([1.0, -1.0]))
    with pytest.raises(ValueError, match="not Hermitian"):
        recover("cholesky", np.array([[1.0, 2.0], [0.0, 1.0]]))


def test_equivalence_rejects_singular_input():
    with pytest.raises(ValueError, match="singular matrix"):
        recover("equivalence", np.array([[1.0, 2.0], [2.0, 4.0]]))


def test_square_only_kinds():
    with pytest.raises(ValueError, match="square matrix"):
        recover("lu", np.ones((2, 3)))


def test_unknown_kind():
    with pytest.raises(ValueError, match="unknown decomposition kind"):
        recover("polar", np.eye(2))


def test_non_finite_data_rejected():
    with pytest.raises(ValueError, match="non-finite"):
        recover("svd", np.array([[np.nan, 0.0], [0.0, 1.0]]))


# ------------------------------------------------------------ canonical cores


def test_canonicalize_ascending_diagonal():
    canonical = canonicalize_pseudo_diagonal(np.diag([1.0, 2.0, 3.0]))
    assert_allclose(np.diag(canonical.canon), [3.0, 2.0, 1.0])
    assert list(canonical.row_permutation) == [2, 1, 0]
    assert list(canonical.col_permutation) == [2, 1, 0]
    assert_allclose(canonical.signs, np.ones(3))
    assert canonical.off_pattern_residual == 0.0
    assert_allclose(fold_canonical(canonical), np.diag([1.0, 2.0, 3.0]))


def test_canonicalize_printed_core():
    canonical = canonicalize_pseudo_diagonal(PRINTED_CORE)
    assert_allclose(np.diag(canonical.canon), SVD_GOLDEN, atol=1e-5)
    assert list(canonical.row_permutation) == [0, 2, 1]
    assert list(canonical.col_permutation) == [2, 0, 1]
    assert_allclose(canonical.signs, [1.0, 1.0, -1.0])
    assert canonical.off_pattern_residual <= 1e-5


def test_canonicalize_signs_and_fold():
    core = np.array([[0.0, -5.0], [3.0, 0.0]])
    canonical = canonicalize_pseudo_diagonal(core)
    assert_allclose(np.diag(canonical.canon), [5.0, 3.0])
    assert_allclose(canonical.signs, [-1.0, 1.0])
    assert_allclose(fold_canonical(canonical), core)


def test_canonicalize_rectangular_greedy():
    core = np.array([[0.0, 2.0, 0.0], [1.0, 0.0, 0.0]])
    canonical = canonicalize_pseudo_diagonal(core)
    assert_allclose(np.diag(canonical.canon), [2.0, 1.0])
    assert list(canonical.row_permutation) == [0, 1]
    assert list(canonical.col_permutation) == [1, 0]


def test_canonicalize_tie_break_is_deterministic():
    core = np.array([[0.0, 1.0], [1.0, 0.0]])
    first = canonicalize_pseudo_diagonal(core)
    second = canonicalize_pseudo_diagonal(core)
    assert list(first.row_permutation) == list(second.row_permutation) == [1, 0]
    assert list(first.col_permutation) == list(second.col_permutation) == [0, 1]


def test_canonicalize_rejects_non_matrix():
    with pytest.raises(ValueError, match="expects a matrix"):
        canonicalize_pseudo_diagonal(np.ones(3))


# -------------------------------------------------------- norm inequalities


def test_inequalities_tight_on_diagonal():
    report = verify_inequalities(np.diag([2.0, 1.0, 0.5]))
    for row in report.rows:
        assert row.holds
        if row.p != 2.0:
            assert row.slack == 0.0
    assert report.duality is not None
    assert report.duality.slacks[0] == 0.0
    assert report.duality.slacks[2] == 0.0
    assert report.all_hold


def test_inequalities_pinned_matrix():
    report = verify_inequalities(PINNED_M, ps=(1.0,))
    (row,) = report.rows
    assert row.lp == pytest.approx(4.152499)
    assert row.schatten == pytest.approx(2.1919610245553858)
    assert row.holds and report.all_hold


def test_inequalities_random_directions():
    rng = np.random.default_rng(7)
    m = rng.normal(size=(4, 4))
    report = verify_inequalities(m, ps=(0.5, 1.0, 1.5, 2.0, 3.0))
    by_p = {row.p: row for row in report.rows}
    for p in (0.5, 1.0, 1.5):
        assert by_p[p].lp >= by_p[p].schatten
        assert by_p[p].holds
    assert by_p[3.0].schatten >= by_p[3.0].lp
    assert by_p[3.0].holds
    assert by_p[2.0].holds
    assert report.duality.holds


def test_duality_pair_validation():
    with pytest.raises(ValueError, match="duality pair"):
        verify_inequalities(np.eye(2), duality=(3.0, 1.0))


def test_entropy_bound_on_density_matrix():
    rng = np.random.default_rng(8)
    a = rng.normal(size=(3, 3))
    rho = a @ a.T
    rho /= np.trace(rho)
    report = verify_inequalities(rho)
    assert report.entropy is not None
    assert report.entropy.holds
    assert report.entropy.entrywise >= report.entropy.von_neumann - 1e-9


def test_entropy_section_absent_for_generic_matrix():
    report = verify_inequalities(np.array([[1.0, 2.0], [3.0, 4.0]]))
    assert report.entropy is None

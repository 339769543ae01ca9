"""Classical reference factorizations used to cross-check the orbit solvers.

These never call the optimizer; they exist so every induced decomposition can
be compared against an independent route.
"""

from __future__ import annotations

import numpy as np


def oracle_svd(
    m: np.ndarray, max_sweeps: int = 100, tol: float = 1e-14
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Singular value decomposition by one-sided Jacobi rotations.

    Returns ``(u, s, v)`` with ``m = u @ diag(s) @ v.conj().T`` and ``s``
    nonnegative descending.  ``tol`` is relative: a column pair counts as
    orthogonal once |<a_p, a_q>| <= tol * ||a_p|| * ||a_q||.

    Raises:
        ValueError: if the sweep cap is hit before convergence.
    """
    m = np.asarray(m)
    if m.ndim != 2:
        raise ValueError("oracle_svd expects a matrix")
    if m.shape[0] < m.shape[1]:
        v, s, u = oracle_svd(m.conj().T, max_sweeps=max_sweeps, tol=tol)
        return u, s, v

    a = m.astype(np.complex128 if np.iscomplexobj(m) else np.float64, copy=True)
    n = a.shape[1]
    v = np.eye(n, dtype=a.dtype)
    floor = tol * max(np.linalg.norm(a), 1e-300) ** 2

    for _ in range(max_sweeps):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                ap = a[:, p]
                aq = a[:, q]
                g = np.vdot(ap, aq)
                alpha = np.real(np.vdot(ap, ap))
                beta = np.real(np.vdot(aq, aq))
                if abs(g) <= max(tol * np.sqrt(alpha * beta), floor * 1e-2):
                    continue
                rotated = True
                phase = g / abs(g)
                # Rotate (a_p, a_q * conj(phase)) so <a_p, a_q> becomes real.
                theta = 0.5 * np.arctan2(2.0 * abs(g), beta - alpha)
                c = np.cos(theta)
                s = np.sin(theta)
                w = aq * np.conj(phase)
                new_p = c * ap - s * w
                new_q = (s * ap + c * w) * phase
                a[:, p] = new_p
                a[:, q] = new_q
                vp = v[:, p].copy()
                vq = v[:, q] * np.conj(phase)
                v[:, p] = c * vp - s * vq
                v[:, q] = (s * vp + c * vq) * phase
        if not rotated:
            break
    else:
        resid = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                resid = max(resid, abs(np.vdot(a[:, p], a[:, q])))
        raise ValueError(f"oracle_svd did not converge in {max_sweeps} sweeps (residual {resid:.3e})")

    norms = np.linalg.norm(a, axis=0)
    order = np.argsort(-norms)
    s_vals = norms[order]
    a = a[:, order]
    v = v[:, order]
    u = np.zeros((m.shape[0], n), dtype=a.dtype)
    for j in range(n):
        if s_vals[j] > floor:
            u[:, j] = a[:, j] / s_vals[j]
    # Complete zero-norm columns of u to an orthonormal set.
    for j in range(n):
        if s_vals[j] <= floor:
            s_vals[j] = 0.0
            for k in range(m.shape[0]):
                cand = np.zeros(m.shape[0], dtype=a.dtype)
                cand[k] = 1.0
                cand -= u @ (u.conj().T @ cand)
                nrm = np.linalg.norm(cand)
                if nrm > 1e-8:
                    u[:, j] = cand / nrm
                    break
    return u, s_vals.astype(float), v


def oracle_lu(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Doolittle LU without pivoting: ``m = l @ u`` with unit lower-triangular l.

    Raises:
        ValueError: on a (near-)zero pivot; this factorization never pivots.
    """
    m = np.asarray(m)
    n = m.shape[0]
    if m.ndim != 2 or m.shape[1] != n:
        raise ValueError("oracle_lu expects a square matrix")
    scale = max(float(np.max(np.abs(m))), 1e-300)
    u = m.astype(np.complex128 if np.iscomplexobj(m) else np.float64, copy=True)
    l = np.eye(n, dtype=u.dtype)
    for k in range(n - 1):
        pivot = u[k, k]
        if abs(pivot) <= 1e-14 * scale:
            raise ValueError(f"zero pivot at position {k} (no pivoting performed)")
        for i in range(k + 1, n):
            l[i, k] = u[i, k] / pivot
            u[i, k:] = u[i, k:] - l[i, k] * u[k, k:]
            u[i, k] = 0.0
    if abs(u[n - 1, n - 1]) <= 1e-14 * scale:
        raise ValueError(f"zero pivot at position {n - 1} (no pivoting performed)")
    return l, u


def oracle_qr(m: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """QR in the form ``m = q @ diag(d) @ r`` with unit upper-triangular r.

    For real input q has determinant +1 (signs absorbed into d).

    Raises:
        ValueError: if m is singular (zero diagonal in R).
    """
    m = np.asarray(m)
    n = m.shape[0]
    if m.ndim != 2 or m.shape[1] != n:
        raise ValueError("oracle_qr expects a square matrix")
    q, r = np.linalg.qr(m)
    if not np.iscomplexobj(m) and np.linalg.det(q) < 0:
        q = q.copy()
        r = r.copy()
        q[:, -1] *= -1.0
        r[-1, :] *= -1.0
    d = np.diag(r).copy()
    if np.min(np.abs(d)) <= 1e-14 * max(float(np.max(np.abs(m))), 1e-300):
        raise ValueError("singular matrix: QR has a zero diagonal entry")
    r_unit = r / d[:, None]
    return q, d, r_unit


def oracle_chol(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Cholesky in the form ``m = l @ diag(d) @ l.conj().T`` with unit lower l.

    Raises:
        ValueError: if m is not Hermitian or not positive definite.
    """
    m = np.asarray(m)
    n = m.shape[0]
    if m.ndim != 2 or m.shape[1] != n:
        raise ValueError("oracle_chol expects a square matrix")
    scale = max(float(np.max(np.abs(m))), 1e-300)
    if np.max(np.abs(m - m.conj().T)) > 1e-10 * scale:
        raise ValueError("not Hermitian")
    try:
        c = np.linalg.cholesky(m)
    except np.linalg.LinAlgError as exc:
        raise ValueError("not positive definite") from exc
    diag = np.real(np.diag(c)).copy()
    l = c / diag[None, :]
    return l, diag**2


def charpoly_eigenvalues(m: np.ndarray) -> np.ndarray:
    """Eigenvalues via characteristic-polynomial roots (Faddeev-LeVerrier), n <= 4.

    Independent of any similarity-based eigensolver; intended as a cross-check
    for the orbit Schur route on desk-size matrices.
    """
    m = np.asarray(m)
    n = m.shape[0]
    if m.ndim != 2 or m.shape[1] != n:
        raise ValueError("charpoly_eigenvalues expects a square matrix")
    if n > 4:
        raise ValueError("charpoly_eigenvalues supports n <= 4")
    # p(x) = x^n + c[1] x^(n-1) + ... + c[n]
    coeffs = [1.0 + 0.0j]
    mk = np.zeros_like(m, dtype=np.complex128)
    eye = np.eye(n)
    a = m.astype(np.complex128)
    for k in range(1, n + 1):
        mk = a @ (mk + coeffs[-1] * eye) if k > 1 else a.copy()
        coeffs.append(-np.trace(mk) / k)
    roots = np.roots(np.array(coeffs))
    if not np.iscomplexobj(m) and np.max(np.abs(np.imag(roots))) < 1e-300:
        roots = np.real(roots)
    return roots

"""Dense eigen/solve kernels used by the plate and 3D solvers.

Thin wrappers over LAPACK (via scipy): symmetric-definite problems go
through Cholesky reduction to a standard symmetric problem, general real
pencils through the QZ algorithm, and linear solves through partial-pivot
LU.  The wrappers add the contract checks the callers rely on (definiteness,
regularity, residual-friendly ordering, infinite-eigenvalue handling).
"""
from __future__ import annotations

import numpy as np
import scipy.linalg as sla

__all__ = ["sym_def_eig", "general_eig", "dense_solve", "PencilError"]


class PencilError(np.linalg.LinAlgError):
    pass


def sym_def_eig(A: np.ndarray, B: np.ndarray, sym_tol: float = 1e-10):
    """Eigenpairs of A v = lambda B v with A symmetric and B SPD.

    Returns (w, V): eigenvalues ascending, eigenvectors B-orthonormal
    (V.T @ B @ V = I).  Reduction: Cholesky of B, then a standard symmetric
    solve by orthogonal similarity (LAPACK *sygvd).
    """
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    nrm = np.linalg.norm(A)
    if nrm and np.linalg.norm(A - A.T) > sym_tol * nrm:
        raise PencilError("A is not symmetric to tolerance")
    try:
        sla.cholesky(B)
    except sla.LinAlgError as e:
        raise PencilError("B is not positive definite") from e
    w, V = sla.eigh(A, B)
    return w, V


def general_eig(A: np.ndarray, B: np.ndarray, right: bool = False,
                inf_threshold: float = 1e300):
    """Full eigenvalue set of the real pencil (A, B) via QZ.

    Infinite eigenvalues (zero beta in the generalized Schur form) are
    reported as +/- inf with the sign of alpha; they arise from structurally
    singular rows of B such as boundary-condition rows.  Raises PencilError
    for a (numerically) singular pencil, i.e. det(A - lambda B) == 0 for
    all lambda.
    """
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    out = sla.eig(A, B, right=right, homogeneous_eigvals=True)
    if right:
        (alpha, beta), V = out
    else:
        alpha, beta = out
        V = None
    scale = max(np.linalg.norm(A), np.linalg.norm(B), 1.0)
    both_zero = (np.abs(alpha) <= 1e-14 * scale) & (np.abs(beta) <= 1e-14)
    if np.all(both_zero):
        raise PencilError("singular pencil: det(A - lambda B) vanishes identically")
    with np.errstate(divide="ignore", invalid="ignore"):
        w = alpha / beta
    infmask = (np.abs(beta) <= 1e-14 * np.maximum(np.abs(alpha), 1.0)) \
        | (np.abs(w) > inf_threshold)
    if np.any(infmask):
        signs = np.where(alpha.real[infmask] < 0, -1.0, 1.0)
        w[infmask] = signs * np.inf
    if V is not None:
        return w, V
    return w


def dense_solve(Mmat: np.ndarray, rhs: np.ndarray, cond_limit: float = 1e14):
    """Solve M x = rhs by partial-pivot LU; raise on (near-)singularity.

    Returns (x, cond_estimate); the 1-norm condition estimate is computed
    from the LU factors.
    """
    Mmat = np.asarray(Mmat, dtype=float)
    rhs = np.asarray(rhs, dtype=float)
    lu, piv = sla.lu_factor(Mmat)
    diag = np.abs(np.diag(lu))
    anorm = np.linalg.norm(Mmat, 1)
    if np.any(diag == 0.0):
        raise PencilError("singular matrix (zero pivot)")
    rcond = sla.lapack.dgecon(lu, anorm, norm="1")[0]
    cond = np.inf if rcond == 0 else 1.0 / rcond
    if cond > cond_limit:
        raise PencilError(f"matrix ill-conditioned (cond ~ {cond:.2e})")
    x = sla.lu_solve((lu, piv), rhs)
    return x, cond

import numpy as np
import pytest

from cosseratplate import numeig


def charpoly_roots(A, B):
    """Brute-force oracle: roots of det(A - lambda B) via the companion
    linearization of the polynomial coefficients (numpy poly root finder)."""
    n = A.shape[0]
    # sample det at n+1 points and interpolate the degree-n polynomial
    pts = np.linspace(-3.7, 4.1, n + 1)
    vals = [np.linalg.det(A - t * B) for t in pts]
    coeffs = np.polyfit(pts, vals, n)
    # drop (numerically) zero leading coefficients: infinite eigenvalues
    scale = np.max(np.abs(coeffs)) or 1.0
    while len(coeffs) > 1 and abs(coeffs[0]) < 1e-12 * scale:
        coeffs = coeffs[1:]
    return np.roots(coeffs)


def test_sym_def_trivial():
    w, V = numeig.sym_def_eig(np.diag([1.0, 4.0]), np.eye(2))
    assert np.allclose(w, [1.0, 4.0])
    assert np.allclose(np.abs(V), np.eye(2))


def test_sym_def_equal_matrices():
    A = np.array([[2.0, 0.5], [0.5, 1.0]])
    w, _ = numeig.sym_def_eig(A, A)
    assert np.allclose(w, 1.0)


def test_sym_def_requires_spd_and_symmetry():
    with pytest.raises(numeig.PencilError):
        numeig.sym_def_eig(np.eye(2), -np.eye(2))
    with pytest.raises(numeig.PencilError):
        numeig.sym_def_eig(np.array([[0.0, 1.0], [0.0, 0.0]]), np.eye(2))


def test_sym_def_b_orthonormal_and_residual():
    rng = np.random.default_rng(3)
    n = 6
    X = rng.normal(size=(n, n))
    A = X + X.T
    Y = rng.normal(size=(n, n))
    B = Y @ Y.T + n * np.eye(n)
    w, V = numeig.sym_def_eig(A, B)
    assert np.allclose(V.T @ B @ V, np.eye(n), atol=1e-10)
    for j in range(n):
        r = A @ V[:, j] - w[j] * (B @ V[:, j])
        assert np.linalg.norm(r) <= 1e-10 * np.linalg.norm(A) * np.linalg.norm(V[:, j])


def test_sym_def_matches_cubic_oracle():
    rng = np.random.default_rng(11)
    for _ in range(20):
        X = rng.normal(size=(3, 3))
        A = X + X.T
        Y = rng.normal(size=(3, 3))
        B = Y @ Y.T + 3 * np.eye(3)
        w, _ = numeig.sym_def_eig(A, B)
        ref = np.sort(charpoly_roots(A, B).real)
        assert np.allclose(np.sort(w), ref, rtol=1e-9, atol=1e-9)


def test_general_eig_rotation():
    A = np.array([[0.0, -1.0], [1.0, 0.0]])
    w = numeig.general_eig(A, np.eye(2))
    assert np.allclose(np.sort_complex(w), [-1j, 1j])


def test_general_eig_reports_infinite():
    A = np.diag([1.0, 2.0])
    B = np.diag([1.0, 0.0])     # BC-style zero row
    w = numeig.general_eig(A, B)
    finite = w[np.isfinite(w)]
    assert np.allclose(finite, [1.0])
    assert np.sum(~np.isfinite(w)) == 1


def test_general_eig_singular_pencil():
    Z = np.zeros((2, 2))
    with pytest.raises(numeig.PencilError):
        numeig.general_eig(Z, Z)


def match_sets(w, ref):
    """Optimal pairing of two complex spectra (conjugate ordering is
    ambiguous when real parts agree to roundoff)."""
    from scipy.optimize import linear_sum_assignment
    D = np.abs(w[:, None] - ref[None, :])
    r, c = linear_sum_assignment(D)
    return D[r, c]


def test_general_matches_companion_oracle():
    rng = np.random.default_rng(5)
    for _ in range(25):
        A = rng.normal(size=(4, 4))
        B = rng.normal(size=(4, 4)) + 4 * np.eye(4)
        w = numeig.general_eig(A, B)
        w = w[np.isfinite(w)]
        ref = charpoly_roots(A, B)
        assert len(w) == len(ref)
        d = match_sets(w, ref)
        assert np.all(d <= 1e-8 * (np.abs(ref) + 1.0))


def test_agreement_on_symmetric_definite_inputs():
    rng = np.random.default_rng(9)
    X = rng.normal(size=(5, 5))
    A = X + X.T
    Y = rng.normal(size=(5, 5))
    B = Y @ Y.T + 5 * np.eye(5)
    w1, _ = numeig.sym_def_eig(A, B)
    w2 = numeig.general_eig(A, B)
    w2 = np.sort(w2[np.isfinite(w2)].real)
    assert np.allclose(np.sort(w1), w2, rtol=1e-9)


def test_eigenvalue_continuity_under_perturbation():
    rng = np.random.default_rng(13)
    X = rng.normal(size=(4, 4))
    A = X + X.T + np.diag([1.0, 2.0, 4.0, 8.0]) * 5
    B = np.eye(4)
    w0, _ = numeig.sym_def_eig(A, B)
    A1 = A + 1e-10 * np.linalg.norm(A) * rng.normal(size=(4, 4))
    A1 = 0.5 * (A1 + A1.T)
    w1, _ = numeig.sym_def_eig(A1, B)
    assert np.max(np.abs(w1 - w0) / np.abs(w0)) <= 1e-6


def test_dense_solve():
    x, _ = numeig.dense_solve(np.eye(3), np.array([1.0, 2.0, 3.0]))
    assert np.allclose(x, [1.0, 2.0, 3.0])
    x, _ = numeig.dense_solve(np.diag([2.0] * 4), np.full(4, 4.0))
    assert np.allclose(x, 2.0)
    rng = np.random.default_rng(1)
    M = rng.normal(size=(50, 50)) + 50 * np.eye(50)
    b = rng.normal(size=50)
    x, cond = numeig.dense_solve(M, b)
    assert np.linalg.norm(M @ x - b) <= 1e-10 * np.linalg.norm(M) * np.linalg.norm(x)
    assert cond < 1e4
    with pytest.raises(numeig.PencilError):
        numeig.dense_solve(np.zeros((2, 2)), np.ones(2))

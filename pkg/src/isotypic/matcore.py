"""Complex matrix kernel: eigendecompositions, minors, tensor powers, sampling.

All matrices are dense numpy arrays with dtype complex128.  Tolerances follow
the two-tier convention used throughout the package: 1e-12 for input
validation, 1e-10 for reconstruction checks.
"""

import numpy as np

VALIDATION_TOL = 1e-12
RECONSTRUCTION_TOL = 1e-10


def as_matrix(X):
    """Coerce input to a 2-d complex array without copying when possible."""
    X = np.asarray(X, dtype=complex)
    if X.ndim != 2:
        raise ValueError(f"expected a matrix, got array of ndim {X.ndim}")
    return X


def check_square(X):
    X = as_matrix(X)
    if X.shape[0] != X.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {X.shape}")
    return X


def check_hermitian(H, tol=VALIDATION_TOL):
    H = check_square(H)
    if np.abs(H - H.conj().T).max() > tol:
        raise ValueError("matrix is not Hermitian within tolerance")
    return H


def check_unitary(U, tol=VALIDATION_TOL):
    U = check_square(U)
    d = U.shape[0]
    if np.abs(U.conj().T @ U - np.eye(d)).max() > 100 * tol:
        raise ValueError("matrix is not unitary within tolerance")
    return U


def check_density(rho, tol=VALIDATION_TOL):
    """Validate a density matrix: Hermitian, PSD, unit trace."""
    rho = check_hermitian(rho, tol)
    w = np.linalg.eigvalsh(rho)
    if w.min() < -100 * tol:
        raise ValueError("matrix is not positive semidefinite")
    if abs(np.trace(rho).real - 1.0) > 100 * tol:
        raise ValueError("matrix does not have unit trace")
    return rho


def check_psd(X, tol=VALIDATION_TOL):
    X = check_hermitian(X, tol)
    if np.linalg.eigvalsh(X).min() < -100 * tol:
        raise ValueError("matrix is not positive semidefinite")
    return X


def hermitian_eig(H):
    """Eigendecomposition of a Hermitian matrix, eigenvalues descending.

    Returns (w, V) with H = V diag(w) V^dag and w sorted descending.  Ties are
    left in the order produced by the underlying solver.
    """
    H = check_hermitian(H)
    w, V = np.linalg.eigh(H)
    # eigh sorts ascending; reverse for the descending convention
    return w[::-1].copy(), V[:, ::-1].copy()


def leading_principal_minor(X, k):
    """det of the top-left k x k submatrix; k = 0 gives 1 by convention."""
    X = check_square(X)
    if not 0 <= k <= X.shape[0]:
        raise ValueError(f"minor order {k} out of range for dim {X.shape[0]}")
    if k == 0:
        return complex(1.0)
    return complex(np.linalg.det(X[:k, :k]))


def haar_unitary(d, seed):
    """Haar-distributed d x d unitary, deterministic per seed.

    QR of a complex Ginibre matrix with the R-diagonal phase fix, so the
    distribution is exactly Haar.
    """
    if d < 1:
        raise ValueError("dimension must be positive")
    rng = np.random.default_rng(seed)
    G = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    Q, R = np.linalg.qr(G)
    ph = np.diagonal(R).copy()
    ph /= np.abs(ph)
    return Q * ph


def random_density(d, seed, rank=None):
    """Random density matrix of the given rank (default full rank).

    Wishart construction: G G^dag / tr with G a d x rank complex Ginibre
    matrix, deterministic per seed.
    """
    if rank is None:
        rank = d
    if not 1 <= rank <= d:
        raise ValueError(f"rank {rank} out of range for dimension {d}")
    rng = np.random.default_rng(seed)
    G = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    rho = G @ G.conj().T
    return rho / np.trace(rho).real


def tensor_power_apply(X, n, v):
    """Apply X^(tensor n) to a vector of length d^n without forming the matrix.

    Mode-by-mode contraction: cost n * d^(n+1) instead of d^(2n).
    """
    X = check_square(X)
    d = X.shape[0]
    v = np.asarray(v, dtype=complex)
    if v.shape != (d**n,):
        raise ValueError(f"vector length {v.shape} does not match d^n = {d**n}")
    w = v.reshape((d,) * n)
    for mode in range(n):
        w = np.moveaxis(np.tensordot(X, w, axes=([1], [mode])), 0, mode)
    return w.reshape(-1)

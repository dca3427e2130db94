"""Shared dense linear algebra: minimum-norm solves and spectral quantities."""

from __future__ import annotations

import numpy as np

from .errors import SingularSystemError

DEFAULT_RCOND = 1e-10


def min_norm_solve(A: np.ndarray, b: np.ndarray, rcond: float = DEFAULT_RCOND) -> np.ndarray:
    """Minimum Euclidean norm solution of the underdetermined system A x = b.

    Uses the economy SVD of A (n, p) with n <= p, so the cost is O(n^2 p)
    and widths p in the hundreds of thousands stay tractable.  Raises
    SingularSystemError when the smallest singular value of A falls at or
    below rcond times the largest, since the pseudoinverse solution then
    stops being a reliable interpolant.
    """
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    n, p = A.shape
    if b.shape != (n,):
        raise ValueError(f"expected b of shape ({n},), got {b.shape}")
    if n > p:
        raise ValueError(f"system must be underdetermined or square, got shape {A.shape}")
    U, s, Vt = np.linalg.svd(A, full_matrices=False)
    cutoff = rcond * s[0] if s.size else 0.0
    if s.size == 0 or s[-1] <= cutoff:
        raise SingularSystemError(
            f"smallest singular value {s[-1]:.3e} is at or below cutoff {cutoff:.3e}",
            smallest=float(s[-1]) if s.size else 0.0,
            cutoff=float(cutoff),
        )
    return Vt.T @ ((U.T @ b) / s)


def smallest_eigenvalue(K: np.ndarray) -> float:
    """Smallest eigenvalue of a symmetric matrix (full symmetric eigensolve)."""
    K = np.asarray(K, dtype=float)
    return float(np.linalg.eigvalsh(K)[0])


def eigenvalues(K: np.ndarray) -> np.ndarray:
    """All eigenvalues of a symmetric matrix, ascending."""
    return np.linalg.eigvalsh(np.asarray(K, dtype=float))


def spectral_norm(M: np.ndarray) -> float:
    """Largest singular value."""
    return float(np.linalg.norm(np.asarray(M, dtype=float), ord=2))


def smallest_singular_value(M: np.ndarray) -> float:
    """Smallest singular value of a rectangular matrix."""
    s = np.linalg.svd(np.asarray(M, dtype=float), compute_uv=False)
    return float(s[-1])

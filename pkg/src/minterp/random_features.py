"""Random feature maps, kernel matrices, and the minimum-l2-norm interpolant.

Two bounded feature families are shipped: ReLU ridge features with
parameters uniform on the l1 sphere, and cosine features with Gaussian
frequencies.  The exact kernel k(x, x') = E_w[phi(x;w) phi(x';w)] has no
closed form in general; it is computed once by a large fixed Monte Carlo
quadrature and treated as ground truth thereafter.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import SingularSystemError, UnderParametrizedError
from .linalg import (
    DEFAULT_RCOND,
    min_norm_solve,
    smallest_eigenvalue,
    spectral_norm,
)
from .sampling import sample_l1_sphere
from .seeding import derive_seed, rng_from

RELU_L1SPHERE = "relu_l1sphere"
RANDOM_FOURIER = "random_fourier"

_SYM_TOL = 1e-10


@dataclass(frozen=True)
class FeatureFamily:
    """Bounded feature family phi(x; w) with |phi| <= 1 on the input box.

    relu_l1sphere: phi(x; w) = relu(w . (x, 1)) with w uniform on the unit
    l1 sphere of R^(d+1); the l1 constraint caps |phi| at 1.
    random_fourier: phi(x; (w, b)) = cos(w . x + b) with w ~ N(0, gamma^2 I)
    and b uniform on [0, 2pi); gamma sets the kernel bandwidth.
    """

    tag: str
    gamma: float = 1.0

    def __post_init__(self):
        if self.tag not in (RELU_L1SPHERE, RANDOM_FOURIER):
            raise ValueError(f"unknown feature family {self.tag!r}")
        if not self.gamma > 0:
            raise ValueError(f"gamma must be positive, got {self.gamma}")

    def sample_params(self, d: int, m: int, seed: int) -> np.ndarray:
        """Draw m parameter vectors of length d+1."""
        if d < 1 or m < 1:
            raise ValueError(f"d and m must be >= 1, got d={d}, m={m}")
        if self.tag == RELU_L1SPHERE:
            return sample_l1_sphere(d, m, seed)
        rng = rng_from(seed)
        w = rng.normal(0.0, self.gamma, size=(m, d))
        b = rng.uniform(0.0, 2.0 * np.pi, size=m)
        return np.concatenate([w, b[:, None]], axis=1)

    def features(self, W: np.ndarray, X: np.ndarray) -> np.ndarray:
        """Feature matrix Phi with Phi[i, j] = phi(x_i; w_j), shape (n, m)."""
        W = np.asarray(W, dtype=float)
        X = np.asarray(X, dtype=float)
        if W.ndim != 2 or X.ndim != 2 or W.shape[1] != X.shape[0] + 1:
            raise ValueError(
                f"incompatible shapes: params {W.shape} vs inputs {X.shape}"
            )
        pre = W[:, :-1] @ X + W[:, -1][:, None]
        if self.tag == RELU_L1SPHERE:
            return np.maximum(pre, 0.0).T
        return np.cos(pre).T


@dataclass(frozen=True)
class RandomFeatureModel:
    """Fixed random features with trained output coefficients.

    Prediction is f_m(x; a) = (1/m) sum_j a_j phi(x; w_j), so by
    Cauchy-Schwarz |f_m| <= ||a||/sqrt(m) on the input box.
    """

    family: FeatureFamily
    params: np.ndarray
    coefficients: np.ndarray

    def __post_init__(self):
        W = np.asarray(self.params, dtype=float)
        a = np.asarray(self.coefficients, dtype=float)
        if W.ndim != 2 or a.shape != (W.shape[0],):
            raise ValueError(
                f"expected params (m, d+1) and coefficients (m,), got {W.shape} and {a.shape}"
            )
        object.__setattr__(self, "params", W)
        object.__setattr__(self, "coefficients", a)

    @property
    def m(self) -> int:
        return self.params.shape[0]

    @property
    def d(self) -> int:
        return self.params.shape[1] - 1

    @property
    def norm_radius(self) -> float:
        """||a|| / sqrt(m), the radius of the coefficient ball containing the model."""
        return float(np.linalg.norm(self.coefficients) / math.sqrt(self.m))

    def predict(self, X: np.ndarray, chunk_size: int = 1024) -> np.ndarray:
        """Evaluate at every column of X, chunked so n_test * m never materializes."""
        X = np.asarray(X, dtype=float)
        n = X.shape[1]
        out = np.empty(n)
        for start in range(0, n, chunk_size):
            stop = min(start + chunk_size, n)
            Phi = self.family.features(self.params, X[:, start:stop])
            out[start:stop] = Phi @ self.coefficients / self.m
        return out


@dataclass(frozen=True)
class ConcentrationCheck:
    """Hoeffding deviation audit of the empirical kernel against the exact one."""

    bound: float
    observed: float
    holds: bool
    eigen_margin: float
    observed_frobenius: float
    lambda_min_exact: float
    lambda_min_empirical: float


def feature_matrix(family: FeatureFamily, W: np.ndarray, X: np.ndarray) -> np.ndarray:
    """Phi[i, j] = phi(x_i; w_j) for inputs X (d, n) and parameters W (m, d+1)."""
    return family.features(W, X)


def kernel_exact(
    family: FeatureFamily,
    X: np.ndarray,
    quadrature_size: int = 1_000_000,
    seed: int = 0,
    chunk_size: int = 65536,
) -> np.ndarray:
    """Monte Carlo quadrature estimate of K[i, j] = E_w[phi(x_i;w) phi(x_j;w)].

    Accumulates Gram blocks over quadrature chunks, so the result is
    positive semidefinite by construction and the full quadrature sample
    never lives in memory.  Fix the seed per experiment and treat the
    result as the reference kernel.
    """
    X = np.asarray(X, dtype=float)
    if quadrature_size < 1:
        raise ValueError(f"quadrature_size must be >= 1, got {quadrature_size}")
    d, n = X.shape
    K = np.zeros((n, n))
    done = 0
    while done < quadrature_size:
        c = min(chunk_size, quadrature_size - done)
        W = family.sample_params(d, c, derive_seed(seed, done))
        F = family.features(W, X)
        K += F @ F.T
        done += c
    K /= quadrature_size
    return (K + K.T) / 2.0


def kernel_empirical(Phi: np.ndarray) -> np.ndarray:
    """K^m = Phi Phi^T / m for a feature matrix Phi of shape (n, m)."""
    Phi = np.asarray(Phi, dtype=float)
    if Phi.ndim != 2 or Phi.size == 0:
        raise ValueError(f"expected a nonempty (n, m) matrix, got shape {Phi.shape}")
    K = Phi @ Phi.T / Phi.shape[1]
    return (K + K.T) / 2.0


def min_l2_interpolant(
    Phi: np.ndarray, y: np.ndarray, rcond: float | None = None
) -> np.ndarray:
    """Coefficients of minimum Euclidean norm with (1/m) Phi a = y.

    Closed form m Phi^T (Phi Phi^T)^-1 y, computed through the SVD of Phi
    with relative cutoff rcond (default 1e-10 * max(n, m)).
    """
    Phi = np.asarray(Phi, dtype=float)
    y = np.asarray(y, dtype=float)
    if Phi.ndim != 2:
        raise ValueError(f"expected Phi of shape (n, m), got {Phi.shape}")
    n, m = Phi.shape
    if m < n:
        raise UnderParametrizedError(m, n)
    if rcond is None:
        rcond = DEFAULT_RCOND * max(n, m)
    return min_norm_solve(Phi, m * y, rcond=rcond)


def _check_symmetric(K: np.ndarray) -> np.ndarray:
    K = np.asarray(K, dtype=float)
    if K.ndim != 2 or K.shape[0] != K.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {K.shape}")
    scale = max(1.0, float(np.abs(K).max())) if K.size else 1.0
    asym = float(np.abs(K - K.T).max()) if K.size else 0.0
    if asym > _SYM_TOL * scale:
        raise ValueError(f"matrix is asymmetric: max |K - K^T| = {asym:.3e}")
    return K


def eigen_min(K: np.ndarray) -> float:
    """Smallest eigenvalue of a symmetric matrix."""
    return smallest_eigenvalue(_check_symmetric(K))


def _inverse_apply(K: np.ndarray, y: np.ndarray, rcond: float | None) -> np.ndarray:
    """K^-1 y through the symmetric eigendecomposition, guarding near-singularity."""
    K = _check_symmetric(K)
    y = np.asarray(y, dtype=float)
    if y.shape != (K.shape[0],):
        raise ValueError(f"expected y of shape ({K.shape[0]},), got {y.shape}")
    if rcond is None:
        rcond = DEFAULT_RCOND
    lam, V = np.linalg.eigh(K)
    cutoff = rcond * lam[-1]
    if lam[0] <= cutoff:
        raise SingularSystemError(
            f"smallest eigenvalue {lam[0]:.3e} is at or below cutoff {cutoff:.3e}",
            smallest=float(lam[0]),
            cutoff=float(cutoff),
        )
    return V @ ((V.T @ y) / lam)


def ridgeless_coefficients(
    K: np.ndarray, y: np.ndarray, rcond: float | None = None
) -> np.ndarray:
    """Coefficients beta = K^-1 y of the kernel ridgeless interpolant."""
    return _inverse_apply(K, y, rcond)


def rkhs_norm_bound(K: np.ndarray, y: np.ndarray, rcond: float | None = None) -> float:
    """y^T K^-1 y, the squared kernel-space norm of the ridgeless interpolant.

    This is a computable lower bound on the squared kernel-space norm of
    any function interpolating the data, hence a usable surrogate for the
    unknown norm of the target.
    """
    y = np.asarray(y, dtype=float)
    return float(y @ _inverse_apply(K, y, rcond))


def concentration_width(n: int, delta: float, lam: float, factor: float = 2.0) -> float:
    """Feature count factor * n^2 ln(2 n^2 / delta) / lam^2.

    With factor 2 this is the width at which the Hoeffding deviation bound
    drops below lam / 2, guaranteeing the empirical kernel keeps half the
    smallest eigenvalue; factor 8 tightens the deviation to lam / 4.
    """
    if not 0 < delta < 1:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    if not lam > 0:
        raise ValueError(f"lam must be positive, got {lam}")
    return factor * n * n * math.log(2.0 * n * n / delta) / (lam * lam)


def concentration_check(
    K: np.ndarray, Km: np.ndarray, m: int, delta: float
) -> ConcentrationCheck:
    """Compare ||K - K^m|| against the Hoeffding bound sqrt(n^2 ln(2n^2/delta) / 2m).

    Also records the eigenvalue margin lambda_min(K^m) - lambda_min(K)/2,
    which is nonnegative on the concentration event by Weyl's inequality.
    """
    K = _check_symmetric(K)
    Km = _check_symmetric(Km)
    if K.shape != Km.shape:
        raise ValueError(f"shape mismatch: {K.shape} vs {Km.shape}")
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    if not 0 < delta < 1:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    n = K.shape[0]
    bound = math.sqrt(n * n * math.log(2.0 * n * n / delta) / (2.0 * m))
    diff = K - Km
    observed = spectral_norm(diff)
    frob = float(np.linalg.norm(diff))
    lam_exact = smallest_eigenvalue(K)
    lam_emp = smallest_eigenvalue(Km)
    return ConcentrationCheck(
        bound=bound,
        observed=observed,
        holds=observed <= bound,
        eigen_margin=lam_emp - lam_exact / 2.0,
        observed_frobenius=frob,
        lambda_min_exact=lam_exact,
        lambda_min_empirical=lam_emp,
    )


def fourier_kernel_closed_form(X: np.ndarray, gamma: float) -> np.ndarray:
    """Closed form for the cosine family: (1/2) exp(-gamma^2 ||x - x'||^2 / 2).

    Serves as an independent oracle for the Monte Carlo quadrature.
    """
    X = np.asarray(X, dtype=float)
    sq = ((X[:, :, None] - X[:, None, :]) ** 2).sum(axis=0)
    return 0.5 * np.exp(-(gamma ** 2) * sq / 2.0)


@dataclass(frozen=True)
class RandomFeatureFit:
    """A fitted minimum-norm random feature interpolant plus its audit numbers."""

    model: RandomFeatureModel
    coeff_norm: float
    norm_radius: float
    interp_error: float


def fit_random_features(
    X: np.ndarray,
    y: np.ndarray,
    family: FeatureFamily,
    m: int,
    seed: int,
    rcond: float | None = None,
) -> RandomFeatureFit:
    """Sample m features, solve the minimum-norm interpolation, report the fit."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    W = family.sample_params(X.shape[0], m, seed)
    Phi = family.features(W, X)
    a = min_l2_interpolant(Phi, y, rcond=rcond)
    model = RandomFeatureModel(family=family, params=W, coefficients=a)
    resid = Phi @ a / m - y
    return RandomFeatureFit(
        model=model,
        coeff_norm=float(np.linalg.norm(a)),
        norm_radius=model.norm_radius,
        interp_error=float(np.abs(resid).max()),
    )

"""Two-layer ReLU networks, the path norm, and the norm-certified constructions.

The two constructions here mirror the two halves of building a
near-minimum-path-norm interpolant: approximate the teacher by
subsampling its atoms, then fit the leftover residual with randomly
drawn inner weights and a minimum-norm outer solve whose coefficient
norm is certified by the empirical kernel's smallest eigenvalue.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConcentrationFailureError, UnderParametrizedError
from .linalg import DEFAULT_RCOND, min_norm_solve, smallest_singular_value
from .random_features import (
    FeatureFamily,
    RELU_L1SPHERE,
    eigen_min,
    kernel_empirical,
    kernel_exact,
)
from .sampling import (
    Dataset,
    TeacherFunction,
    barron_norm_upper,
    sample_l1_sphere,
    teacher_eval_batch,
)
from .seeding import derive_seed, rng_from


@dataclass(frozen=True)
class TwoLayerNet:
    """Width-m ReLU network f(x) = (1/m) sum_j a_j relu(b_j . x + c_j)."""

    a: np.ndarray
    B: np.ndarray
    c: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.a, dtype=float)
        B = np.asarray(self.B, dtype=float)
        c = np.asarray(self.c, dtype=float)
        if a.ndim != 1 or c.shape != a.shape or B.ndim != 2 or B.shape[0] != a.shape[0]:
            raise ValueError(
                f"expected a (m,), B (m, d), c (m,), got {a.shape}, {B.shape}, {c.shape}"
            )
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "c", c)

    @property
    def m(self) -> int:
        return self.a.shape[0]

    @property
    def d(self) -> int:
        return self.B.shape[1]


def two_layer_eval(theta: TwoLayerNet, x: np.ndarray) -> float:
    """Evaluate at a single point."""
    x = np.asarray(x, dtype=float)
    if x.shape != (theta.d,):
        raise ValueError(f"expected x of shape ({theta.d},), got {x.shape}")
    pre = theta.B @ x + theta.c
    return float(theta.a @ np.maximum(pre, 0.0) / theta.m)


def two_layer_eval_batch(theta: TwoLayerNet, X: np.ndarray) -> np.ndarray:
    """Evaluate at every column of X (shape (d, n))."""
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[0] != theta.d:
        raise ValueError(f"expected X of shape ({theta.d}, n), got {X.shape}")
    pre = theta.B @ X + theta.c[:, None]
    return theta.a @ np.maximum(pre, 0.0) / theta.m


def path_norm(theta: TwoLayerNet) -> float:
    """(1/m) sum_j |a_j| (||b_j||_1 + |c_j|)."""
    return float(
        np.mean(np.abs(theta.a) * (np.abs(theta.B).sum(axis=1) + np.abs(theta.c)))
    )


def concat_neurons(theta1: TwoLayerNet, theta2: TwoLayerNet) -> TwoLayerNet:
    """Plain neuron-list concatenation; the (1/m) prefactor re-averages, so the
    result's function is the width-weighted average of the parts, not their sum."""
    if theta1.d != theta2.d:
        raise ValueError(f"dimension mismatch: {theta1.d} vs {theta2.d}")
    return TwoLayerNet(
        a=np.concatenate([theta1.a, theta2.a]),
        B=np.concatenate([theta1.B, theta2.B], axis=0),
        c=np.concatenate([theta1.c, theta2.c]),
    )


def scale_outer(theta: TwoLayerNet, t: float) -> TwoLayerNet:
    """Scale every outer coefficient a_j by t."""
    return TwoLayerNet(a=theta.a * t, B=theta.B, c=theta.c)


def sum_networks(theta1: TwoLayerNet, theta2: TwoLayerNet) -> TwoLayerNet:
    """Width-(m1+m2) network computing f1 + f2 exactly.

    Because evaluation carries a 1/(m1+m2) prefactor, each part's
    coefficients are scaled by (m1+m2)/m_i so its contribution is
    preserved; the same bookkeeping makes the path norm exactly additive.
    """
    total = theta1.m + theta2.m
    return concat_neurons(
        scale_outer(theta1, total / theta1.m),
        scale_outer(theta2, total / theta2.m),
    )


@dataclass(frozen=True)
class ResidualFit:
    """fit_residual_net output: the network plus its norm certificate.

    certificate = ||r|| / sigma_min(Psi / sqrt(m)) is the provable upper
    bound on the outer coefficient norm ||a_hat||; the path norm is in
    turn at most ||a_hat||, giving path_norm <= sqrt(2 / lambda_target) ||r||
    whenever the eigenvalue floor lambda_emp >= lambda_target / 2 holds.
    """

    net: TwoLayerNet
    lambda_target: float
    lambda_emp: float
    resamples_used: int
    coeff_norm: float
    sigma_min_scaled: float
    certificate: float
    path_norm: float
    interp_error: float
    residual_norm: float


def fit_residual_net(
    X: np.ndarray,
    r: np.ndarray,
    m: int,
    lambda_target: float,
    max_resamples: int = 16,
    seed: int = 0,
    rcond: float | None = None,
) -> ResidualFit:
    """Fit r at the columns of X with random inner weights and min-norm outer weights.

    Inner weights (b_j, c_j) are drawn uniformly from the l1 sphere and
    re-drawn (up to max_resamples times) until the empirical kernel keeps
    half the target eigenvalue.  The outer solve is
    argmin ||a|| subject to (1/sqrt(m)) Psi a = r, and the stored network
    carries coefficients sqrt(m) * a_hat so that the standard (1/m)
    evaluation reproduces r.  The sqrt(m) scaling is what makes the chain
    path_norm <= (1/m) sum |sqrt(m) a_hat_j| <= ||a_hat|| valid.
    """
    X = np.asarray(X, dtype=float)
    r = np.asarray(r, dtype=float)
    if X.ndim != 2:
        raise ValueError(f"expected X of shape (d, n), got {X.shape}")
    d, n = X.shape
    if r.shape != (n,):
        raise ValueError(f"expected r of shape ({n},), got {r.shape}")
    if not np.all(np.isfinite(r)):
        raise ValueError("residual vector contains non-finite entries")
    if m < n:
        raise UnderParametrizedError(m, n)
    if not lambda_target > 0:
        raise ValueError(f"lambda_target must be positive, got {lambda_target}")
    if max_resamples < 1:
        raise ValueError(f"max_resamples must be >= 1, got {max_resamples}")

    family = FeatureFamily(tag=RELU_L1SPHERE)
    best_lam = -math.inf
    chosen = None
    attempts = 0
    for attempt in range(max_resamples):
        attempts = attempt + 1
        W = sample_l1_sphere(d, m, derive_seed(seed, attempt))
        Psi = family.features(W, X)
        lam_emp = eigen_min(kernel_empirical(Psi))
        if lam_emp > best_lam:
            best_lam = lam_emp
        if lam_emp >= lambda_target / 2.0:
            chosen = (W, Psi, lam_emp)
            break
    if chosen is None:
        raise ConcentrationFailureError(lambda_target, best_lam, attempts)
    W, Psi, lam_emp = chosen

    if rcond is None:
        rcond = DEFAULT_RCOND * max(n, m)
    sqm = math.sqrt(m)
    a_hat = min_norm_solve(Psi, sqm * r, rcond=rcond)
    net = TwoLayerNet(a=sqm * a_hat, B=W[:, :-1], c=W[:, -1])

    sigma_scaled = smallest_singular_value(Psi) / sqm
    r_norm = float(np.linalg.norm(r))
    fitted = two_layer_eval_batch(net, X)
    return ResidualFit(
        net=net,
        lambda_target=float(lambda_target),
        lambda_emp=float(lam_emp),
        resamples_used=attempts,
        coeff_norm=float(np.linalg.norm(a_hat)),
        sigma_min_scaled=float(sigma_scaled),
        certificate=r_norm / sigma_scaled if sigma_scaled > 0 else math.inf,
        path_norm=path_norm(net),
        interp_error=float(np.abs(fitted - r).max()),
        residual_norm=r_norm,
    )


@dataclass(frozen=True)
class TeacherFit:
    """approximate_teacher output: the subsampled network and its fit report."""

    net: TwoLayerNet
    empirical_risk: float
    path_norm: float
    draw_index: int


def approximate_teacher(
    f: TeacherFunction,
    m1: int,
    X: np.ndarray,
    seed: int,
    n_retry_draws: int = 32,
    draw: str = "iid",
) -> TeacherFit:
    """Width-m1 network built by resampling the teacher's atoms.

    draw="iid" samples atoms with replacement (coefficients carried over),
    repeats for n_retry_draws seeds, and keeps the draw with the smallest
    empirical risk on X; the risk decays like 1/m1.  draw="stratified"
    requires m1 to be a multiple of the atom count and repeats every atom
    equally often, reproducing the teacher exactly.
    """
    X = np.asarray(X, dtype=float)
    if m1 < 1:
        raise ValueError(f"m1 must be >= 1, got {m1}")
    if X.ndim != 2 or X.shape[0] != f.d:
        raise ValueError(f"expected X of shape ({f.d}, n), got {X.shape}")
    targets = teacher_eval_batch(f, X)
    K = f.n_atoms

    def build(idx: np.ndarray) -> TwoLayerNet:
        return TwoLayerNet(
            a=f.coefficients[idx],
            B=f.directions[idx, :-1],
            c=f.directions[idx, -1],
        )

    if draw == "stratified":
        if m1 % K != 0:
            raise ValueError(f"stratified draw needs m1 divisible by {K}, got {m1}")
        net = build(np.repeat(np.arange(K), m1 // K))
        risk = 0.5 * float(np.mean((two_layer_eval_batch(net, X) - targets) ** 2))
        return TeacherFit(net=net, empirical_risk=risk, path_norm=path_norm(net), draw_index=0)
    if draw != "iid":
        raise ValueError(f"draw must be 'iid' or 'stratified', got {draw!r}")
    if n_retry_draws < 1:
        raise ValueError(f"n_retry_draws must be >= 1, got {n_retry_draws}")

    best = None
    for t in range(n_retry_draws):
        idx = rng_from(derive_seed(seed, t)).integers(0, K, size=m1)
        net = build(idx)
        risk = 0.5 * float(np.mean((two_layer_eval_batch(net, X) - targets) ** 2))
        if best is None or risk < best[0]:
            best = (risk, net, t)
    risk, net, t = best
    return TeacherFit(net=net, empirical_risk=risk, path_norm=path_norm(net), draw_index=t)


@dataclass(frozen=True)
class CompositeFit:
    """interpolate_two_layer output: the interpolant plus the norm audit."""

    net: TwoLayerNet
    path_norm: float
    teacher_norm_upper: float
    norm_ratio: float
    interp_error: float
    lambda_target: float
    lambda_emp: float
    resamples_used: int
    approx_risk: float
    residual_norm: float
    m1: int
    m2: int


def interpolate_two_layer(
    data: Dataset,
    f: TeacherFunction,
    m1: int,
    m2: int,
    seed: int,
    lambda_target: float | None = None,
    max_resamples: int = 16,
    n_retry_draws: int = 32,
    draw: str = "iid",
    rcond: float | None = None,
    lambda_quadrature: int = 1_000_000,
) -> CompositeFit:
    """Interpolate the dataset with a width-(m1+m2) two-layer network.

    First block: teacher-atom subsample of width m1.  Second block: a
    residual fit of width m2 with certified coefficient norm.  The two are
    summed exactly via width-ratio rescaling, so the composite's path norm
    is the sum of the parts'.  When lambda_target is not given it defaults
    to the smallest eigenvalue of the reference kernel computed on the
    data by Monte Carlo quadrature.
    """
    X, y = data.X, data.y
    if lambda_target is None:
        ref = kernel_exact(
            FeatureFamily(tag=RELU_L1SPHERE),
            X,
            quadrature_size=lambda_quadrature,
            seed=derive_seed(seed, 0),
        )
        lambda_target = eigen_min(ref)
    fit1 = approximate_teacher(
        f, m1, X, derive_seed(seed, 1), n_retry_draws=n_retry_draws, draw=draw
    )
    r = y - two_layer_eval_batch(fit1.net, X)
    fit2 = fit_residual_net(
        X, r, m2, lambda_target, max_resamples=max_resamples,
        seed=derive_seed(seed, 2), rcond=rcond,
    )
    net = sum_networks(fit1.net, fit2.net)
    teacher_upper = barron_norm_upper(f)
    total = path_norm(net)
    interp = float(np.abs(two_layer_eval_batch(net, X) - y).max())
    return CompositeFit(
        net=net,
        path_norm=total,
        teacher_norm_upper=teacher_upper,
        norm_ratio=total / teacher_upper if teacher_upper > 0 else math.inf,
        interp_error=interp,
        lambda_target=float(lambda_target),
        lambda_emp=fit2.lambda_emp,
        resamples_used=fit2.resamples_used,
        approx_risk=fit1.empirical_risk,
        residual_norm=fit2.residual_norm,
        m1=m1,
        m2=m2,
    )

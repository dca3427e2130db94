"""Rademacher complexity estimators and the generalization-bound calculator.

The coefficient-ball estimator computes its per-draw supremum exactly in
closed form.  The path-norm ball has no exact supremum (piecewise-linear
nonconvex maximization), so it is sandwiched: a multi-start heuristic
gives a certified lower estimate, the closed-form theory value an upper
one, and both are labeled as such.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .sampling import TeacherFunction, teacher_eval_batch
from .seeding import derive_seed, rng_from

RF_L2_BALL_EXACT_SUP = "rf_l2_ball_exact_sup"
PATH_BALL_HEURISTIC_SUP = "path_ball_heuristic_sup"
THEORETICAL_UPPER = "theoretical_upper"


@dataclass(frozen=True)
class RadEstimate:
    """Monte Carlo Rademacher complexity estimate (or a closed-form upper value)."""

    mean: float
    std_error: float
    n_sign_draws: int
    kind: str

    def __post_init__(self):
        if self.kind not in (RF_L2_BALL_EXACT_SUP, PATH_BALL_HEURISTIC_SUP, THEORETICAL_UPPER):
            raise ValueError(f"unknown estimate kind {self.kind!r}")
        if self.mean < 0 or self.std_error < 0:
            raise ValueError("mean and std_error must be nonnegative")


@dataclass(frozen=True)
class PathBallResult:
    """Lower heuristic estimate together with the closed-form upper value."""

    estimate: RadEstimate
    upper: float


def _mean_se(values: np.ndarray) -> tuple[float, float]:
    values = np.asarray(values, dtype=float)
    mean = float(values.mean())
    if values.size > 1:
        se = float(values.std(ddof=1) / math.sqrt(values.size))
    else:
        se = 0.0
    return mean, se


def rad_rf_ball(
    Phi: np.ndarray, C: float, n_draws: int = 256, seed: int = 0
) -> RadEstimate:
    """Rademacher complexity of the coefficient ball ||a|| <= C sqrt(m).

    Per sign vector xi the supremum of (1/n) sum_i xi_i f(x_i) over the
    ball is exact: (C / (n sqrt(m))) ||Phi^T xi||.  Monte Carlo averages
    over n_draws sign vectors.
    """
    Phi = np.asarray(Phi, dtype=float)
    if Phi.ndim != 2:
        raise ValueError(f"expected Phi of shape (n, m), got {Phi.shape}")
    if not C > 0:
        raise ValueError(f"C must be positive, got {C}")
    if n_draws < 1:
        raise ValueError(f"n_draws must be >= 1, got {n_draws}")
    n, m = Phi.shape
    rng = rng_from(seed)
    vals = np.empty(n_draws)
    chunk = max(1, min(n_draws, (1 << 22) // max(m, 1)))
    done = 0
    while done < n_draws:
        c = min(chunk, n_draws - done)
        Xi = rng.integers(0, 2, size=(n, c)) * 2.0 - 1.0
        vals[done : done + c] = np.linalg.norm(Phi.T @ Xi, axis=0)
        done += c
    vals *= C / (n * math.sqrt(m))
    mean, se = _mean_se(vals)
    return RadEstimate(mean=mean, std_error=se, n_sign_draws=n_draws, kind=RF_L2_BALL_EXACT_SUP)


def rf_ball_upper(C: float, n: int) -> RadEstimate:
    """Closed-form upper value C / sqrt(n) for the coefficient ball."""
    if not C >= 0:
        raise ValueError(f"C must be nonnegative, got {C}")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return RadEstimate(
        mean=C / math.sqrt(n), std_error=0.0, n_sign_draws=1, kind=THEORETICAL_UPPER
    )


def _augment(X: np.ndarray) -> np.ndarray:
    return np.vstack([X, np.ones((1, X.shape[1]))])


def _refine_sphere_max(A: np.ndarray, xi_over_n: np.ndarray, w0: np.ndarray,
                       n_steps: int = 60) -> float:
    """Projected subgradient ascent of |xi . relu(w A) / n| over the l1 sphere.

    ReLU is positively homogeneous, so renormalizing w to the sphere after
    each step just rescales the objective; tracking the best normalized
    value keeps the iteration a valid lower-bound search.
    """
    w = w0.copy()
    g0 = float(xi_over_n @ np.maximum(w @ A, 0.0))
    best = abs(g0)
    sense = 1.0 if g0 >= 0 else -1.0
    for k in range(n_steps):
        active = (w @ A) > 0.0
        grad = sense * (A @ (xi_over_n * active))
        gnorm = float(np.abs(grad).max())
        if gnorm == 0.0:
            break
        w = w + (0.5 / (k + 2.0)) * grad / gnorm
        w = w / np.abs(w).sum()
        val = float(xi_over_n @ np.maximum(w @ A, 0.0))
        if abs(val) > best:
            best = abs(val)
        sense = 1.0 if val >= 0 else -1.0
    return best


def rad_path_ball(
    X: np.ndarray,
    C: float,
    n_draws: int = 256,
    n_starts: int = 8,
    seed: int = 0,
) -> PathBallResult:
    """Rademacher complexity of the unit-path-norm ball, scaled by C.

    Per sign draw the supremum of |(1/n) sum_i xi_i relu(w . (x_i, 1))|
    over the l1 sphere is approached from below by multi-start local
    search: all signed coordinate vertices plus n_starts random sphere
    points, each refined by projected subgradient ascent.  The returned
    estimate is a certified lower value; the closed-form upper value
    2 C sqrt(2 ln(2d) / n) is attached for sandwiching.
    """
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise ValueError(f"expected X of shape (d, n), got {X.shape}")
    if C < 0:
        raise ValueError(f"C must be nonnegative, got {C}")
    if n_draws < 1 or n_starts < 0:
        raise ValueError("n_draws must be >= 1 and n_starts >= 0")
    d, n = X.shape
    upper = 2.0 * C * math.sqrt(2.0 * math.log(2.0 * d) / n)
    if C == 0.0:
        est = RadEstimate(mean=0.0, std_error=0.0, n_sign_draws=n_draws,
                          kind=PATH_BALL_HEURISTIC_SUP)
        return PathBallResult(estimate=est, upper=upper)

    A = _augment(X)
    vertices = np.vstack([np.eye(d + 1), -np.eye(d + 1)])
    rng = rng_from(derive_seed(seed, 0))
    sign_rng = rng_from(derive_seed(seed, 1))
    vals = np.empty(n_draws)
    for t in range(n_draws):
        xi = sign_rng.integers(0, 2, size=n) * 2.0 - 1.0
        xi_over_n = xi / n
        starts = [vertices]
        if n_starts > 0:
            g = rng.exponential(size=(n_starts, d + 1))
            s = g / g.sum(axis=1, keepdims=True)
            starts.append(s * (rng.integers(0, 2, size=(n_starts, d + 1)) * 2 - 1))
        cands = np.vstack(starts)
        best = 0.0
        for w0 in cands:
            best = max(best, _refine_sphere_max(A, xi_over_n, w0))
        vals[t] = C * best
    mean, se = _mean_se(vals)
    est = RadEstimate(mean=mean, std_error=se, n_sign_draws=n_draws,
                      kind=PATH_BALL_HEURISTIC_SUP)
    return PathBallResult(estimate=est, upper=upper)


def rad_weighted_path_upper(C: float, d: int, n: int) -> RadEstimate:
    """Closed-form upper value 3 C sqrt(2 log(2d) / n) for the weighted-path ball."""
    if d < 1 or n < 1:
        raise ValueError(f"d and n must be >= 1, got d={d}, n={n}")
    if C < 0:
        raise ValueError(f"C must be nonnegative, got {C}")
    value = 3.0 * C * math.sqrt(2.0 * math.log(2.0 * d) / n)
    return RadEstimate(mean=value, std_error=0.0, n_sign_draws=1, kind=THEORETICAL_UPPER)


def generalization_bound(
    emp_risk: float, Q: float, C_loss: float, rad: float, delta: float, n: int
) -> float:
    """emp_risk + 2 Q rad + 4 C_loss sqrt(2 ln(2/delta) / n).

    Q is the Lipschitz constant of the loss on the hypothesis ball and
    C_loss its sup bound; for the squared loss on a ball of norm radius C
    these are Q = C + 1 and C_loss = (C + 1)^2 / 2.
    """
    if min(emp_risk, Q, C_loss, rad) < 0:
        raise ValueError("emp_risk, Q, C_loss, rad must be nonnegative")
    if not 0 < delta < 2:
        raise ValueError(f"delta must lie in (0, 2) for ln(2/delta) >= 0, got {delta}")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return emp_risk + 2.0 * Q * rad + 4.0 * C_loss * math.sqrt(2.0 * math.log(2.0 / delta) / n)


@dataclass(frozen=True)
class RiskEstimate:
    """Monte Carlo population risk under the squared loss."""

    risk: float
    std_error: float
    n_test: int


def population_risk(
    model_eval,
    f: TeacherFunction,
    N_test: int = 10_000,
    seed: int = 0,
) -> RiskEstimate:
    """Monte Carlo average of (1/2)(model(x) - f*(x))^2 over fresh uniform inputs.

    model_eval must map a (d, N) matrix of inputs to a length-N vector of
    predictions (vectorized evaluation; every model class here provides
    one).
    """
    if N_test < 1:
        raise ValueError(f"N_test must be >= 1, got {N_test}")
    rng = rng_from(seed)
    X = rng.uniform(-1.0, 1.0, size=(f.d, N_test))
    losses = 0.5 * (np.asarray(model_eval(X), dtype=float) - teacher_eval_batch(f, X)) ** 2
    mean, se = _mean_se(losses)
    return RiskEstimate(risk=mean, std_error=se, n_test=N_test)

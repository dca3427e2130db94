"""Experiment harness: lemma verification suites, scale studies, bound audits.

Every run is a pure function of (config, master seed).  Each trial draws
its randomness from a seed derived from its index, trials execute in a
thread pool, and rows are merged in trial order, so output bytes are
identical across runs and across thread counts.  A failed trial records
its error in the row instead of aborting the run; summaries use only the
successful rows and report the failure count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from ._version import VERSION
from .complexity import (
    generalization_bound,
    population_risk,
    rad_path_ball,
    rad_rf_ball,
    rad_weighted_path_upper,
    rf_ball_upper,
)
from .linalg import smallest_singular_value
from .random_features import (
    RANDOM_FOURIER,
    RELU_L1SPHERE,
    FeatureFamily,
    RandomFeatureModel,
    concentration_check,
    concentration_width,
    eigen_min,
    kernel_empirical,
    kernel_exact,
    min_l2_interpolant,
    ridgeless_coefficients,
    rkhs_norm_bound,
)
from .resnet import (
    embed_two_layer,
    interpolate_resnet,
    random_resnet,
    resnet_add,
    resnet_eval_batch,
    weighted_path_norm,
)
from .sampling import (
    Dataset,
    make_teacher,
    rescale_teacher,
    sample_dataset,
    teacher_eval_batch,
)
from .seeding import derive_seed, rng_from
from .two_layer import (
    approximate_teacher,
    fit_residual_net,
    interpolate_two_layer,
    path_norm,
    two_layer_eval_batch,
)

KINDS = ("verify-lemma", "scale-study", "bound-audit")
MODELS = ("rf", "two-layer", "resnet")
VERIFY_SELECTORS = (
    "kernel-approx",
    "krr-bound",
    "min-norm-rf",
    "fit-rand-label",
    "two-layer-composite",
    "resnet-add",
    "embedding",
)

DEFAULT_M_GRID = tuple(2 ** k for k in range(6, 15))

_GRID_KEYS = ("n_grid", "m_grid", "L_grid", "d_grid")

# Disjoint seed-index bases for the scale-study engine; grid_index * trials
# + trial stays far below the 2^20 stride at desk scale.
_TEACHER_BASE = 1 << 20
_DATA_BASE = 2 << 20
_FIT_BASE = 3 << 20
_TEST_BASE = 4 << 20
_RAD_BASE = 5 << 20
_BOOT_BASE = 6 << 20


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything that defines an experiment; the master seed is part of it.

    m_grid may be empty: verify-lemma substitutes DEFAULT_M_GRID where a
    width grid is needed, and scale studies derive m = m_per_n * n unless
    m_grid is given with one entry per n.  `out` is a destination, not an
    experiment parameter, and is excluded from the config echo.
    """

    kind: str = "verify-lemma"
    lemma: str | None = None
    model: str = "rf"
    n_grid: tuple = (32,)
    m_grid: tuple = ()
    L_grid: tuple = (8,)
    d_grid: tuple = (4,)
    trials: int = 20
    delta: float = 0.1
    seed: int = 0
    out: str | None = None
    rcond: float | None = None
    C_universal: float = 1.0
    family: str = RELU_L1SPHERE
    gamma: float = 1.0
    n_atoms: int = 64
    quadrature: int = 200_000
    m1: int = 512
    m2: int = 16384
    m_per_n: int = 64
    n_test: int = 8192
    lambda_target: float | None = None
    max_resamples: int = 16
    n_retry_draws: int = 32
    width_factor: float = 8.0
    m_cap: int = 131072
    L_cap: int = 256
    rad_draws: int = 32
    probe_points: int = 1000

    def __post_init__(self):
        for key in _GRID_KEYS:
            raw = getattr(self, key)
            grid = (raw,) if isinstance(raw, (int, np.integer)) else tuple(int(v) for v in raw)
            object.__setattr__(self, key, grid)
            if any(v < 1 for v in grid):
                raise ValueError(f"{key} entries must be >= 1, got {grid}")
            if key != "m_grid" and not grid:
                raise ValueError(f"{key} must be nonempty")
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")
        if self.model not in MODELS:
            raise ValueError(f"model must be one of {MODELS}, got {self.model!r}")
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if not 0.0 < self.delta < 1.0:
            raise ValueError(f"delta must lie in (0, 1), got {self.delta}")
        if self.seed < 0:
            raise ValueError(f"seed must be nonnegative, got {self.seed}")
        for key in ("n_atoms", "quadrature", "m1", "m2", "m_per_n", "n_test",
                    "max_resamples", "n_retry_draws", "m_cap", "L_cap",
                    "rad_draws", "probe_points"):
            if getattr(self, key) < 1:
                raise ValueError(f"{key} must be >= 1, got {getattr(self, key)}")
        if not self.width_factor > 0:
            raise ValueError(f"width_factor must be positive, got {self.width_factor}")
        if not self.C_universal > 0:
            raise ValueError(f"C_universal must be positive, got {self.C_universal}")
        if self.rcond is not None and not self.rcond > 0:
            raise ValueError(f"rcond must be positive or None, got {self.rcond}")
        if self.lambda_target is not None and not self.lambda_target > 0:
            raise ValueError(
                f"lambda_target must be positive or None, got {self.lambda_target}"
            )

    @classmethod
    def from_dict(cls, obj: dict) -> "ExperimentConfig":
        names = {f.name for f in fields(cls)}
        unknown = sorted(set(obj) - names)
        if unknown:
            raise ValueError(f"unknown config keys: {', '.join(unknown)}")
        return cls(**obj)

    def echo(self) -> dict:
        """The experiment-defining fields, JSON-ready; excludes `out`."""
        echoed = {}
        for f in fields(self):
            if f.name == "out":
                continue
            value = getattr(self, f.name)
            echoed[f.name] = list(value) if isinstance(value, tuple) else value
        return echoed


@dataclass(frozen=True)
class StudyResult:
    """Per-trial rows plus summary statistics for one experiment run."""

    columns: tuple
    rows: tuple
    summary: dict
    config: ExperimentConfig

    @property
    def failures(self) -> int:
        return self.summary["failures"]

    @property
    def pass_fraction(self) -> float | None:
        return self.summary.get("pass_fraction")

    @property
    def slope(self) -> float | None:
        return self.summary.get("slope")


def _family(config: ExperimentConfig) -> FeatureFamily:
    return FeatureFamily(tag=config.family, gamma=config.gamma)


def _errmsg(exc: Exception) -> str:
    return f"{type(exc).__name__}: {exc}".replace("\n", " ").replace(",", ";")


def _run_trials(worker, count: int, threads: int) -> list:
    if threads <= 1:
        return [worker(i) for i in range(count)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(worker, range(count)))


def _base_summary(rows: list, with_pass: bool = True) -> dict:
    failures = sum(1 for r in rows if r.get("error"))
    summary = {"rows": len(rows), "failures": failures}
    if with_pass:
        summary["pass_fraction"] = (
            sum(1 for r in rows if r.get("holds") is True) / len(rows) if rows else 0.0
        )
    return summary


def _verify_kernel_approx(config: ExperimentConfig, threads: int):
    d, n = config.d_grid[0], config.n_grid[0]
    m_grid = config.m_grid or DEFAULT_M_GRID
    family = _family(config)
    X = rng_from(derive_seed(config.seed, 0)).uniform(-1.0, 1.0, size=(d, n))
    K = kernel_exact(
        family, X, quadrature_size=config.quadrature, seed=derive_seed(config.seed, 1)
    )
    lam_exact = eigen_min(K)
    jobs = [(mi, m, t) for mi, m in enumerate(m_grid) for t in range(config.trials)]

    def worker(j):
        mi, m, t = jobs[j]
        row = {"trial": t, "n": n, "m": m, "delta": config.delta, "error": ""}
        try:
            seed = derive_seed(config.seed, 2 + mi * config.trials + t)
            W = family.sample_params(d, m, seed)
            check = concentration_check(K, kernel_empirical(family.features(W, X)), m, config.delta)
            row.update(
                bound=check.bound,
                observed_spectral=check.observed,
                observed_frobenius=check.observed_frobenius,
                lambda_min_K=check.lambda_min_exact,
                lambda_min_Km=check.lambda_min_empirical,
                holds=check.holds,
            )
        except Exception as exc:
            row["error"] = _errmsg(exc)
        return row

    rows = _run_trials(worker, len(jobs), threads)
    columns = ("trial", "n", "m", "delta", "bound", "observed_spectral",
               "observed_frobenius", "lambda_min_K", "lambda_min_Km", "holds", "error")
    summary = _base_summary(rows)
    eigen_width = concentration_width(n, config.delta, lam_exact, factor=2.0) if lam_exact > 0 else math.inf
    per_m, per_m_eigen = {}, {}
    for m in m_grid:
        group = [r for r in rows if r["m"] == m]
        per_m[str(m)] = sum(1 for r in group if r.get("holds") is True) / len(group)
        if m >= eigen_width:
            hits = sum(
                1 for r in group
                if not r["error"] and r["lambda_min_Km"] >= r["lambda_min_K"] / 2.0
            )
            per_m_eigen[str(m)] = hits / len(group)
    summary.update(
        lambda_min_K=lam_exact,
        eigen_threshold_width=eigen_width,
        per_m_pass=per_m,
        min_per_m_pass=min(per_m.values()),
        per_m_eigen_pass=per_m_eigen,
    )
    return columns, rows, summary


def _verify_krr_bound(config: ExperimentConfig, threads: int):
    d, n = config.d_grid[0], config.n_grid[0]
    family = _family(config)

    def worker(t):
        row = {"trial": t, "n": n, "d": d, "quadrature": config.quadrature, "error": ""}
        try:
            teacher = rescale_teacher(
                make_teacher(d, config.n_atoms, 1.0, derive_seed(config.seed, 3 * t))
            )
            data = sample_dataset(teacher, n, derive_seed(config.seed, 3 * t + 1))
            K = kernel_exact(
                family, data.X,
                quadrature_size=config.quadrature,
                seed=derive_seed(config.seed, 3 * t + 2),
            )
            beta = ridgeless_coefficients(K, data.y, rcond=config.rcond)
            surrogate = rkhs_norm_bound(K, data.y, rcond=config.rcond)
            denom = max(float(np.abs(data.y).max()), 1e-300)
            reproduce = float(np.abs(K @ beta - data.y).max()) / denom
            row.update(
                surrogate_norm=surrogate,
                lambda_min_K=eigen_min(K),
                reproduce_error=reproduce,
                holds=surrogate >= 0.0 and reproduce <= 1e-8,
            )
        except Exception as exc:
            row["error"] = _errmsg(exc)
        return row

    rows = _run_trials(worker, config.trials, threads)
    columns = ("trial", "n", "d", "quadrature", "surrogate_norm", "lambda_min_K",
               "reproduce_error", "holds", "error")
    return columns, rows, _base_summary(rows)


def _verify_min_norm_rf(config: ExperimentConfig, threads: int):
    d, n = config.d_grid[0], config.n_grid[0]
    family = _family(config)

    def worker(t):
        row = {"trial": t, "n": n, "delta": config.delta, "error": ""}
        try:
            teacher = rescale_teacher(
                make_teacher(d, config.n_atoms, 1.0, derive_seed(config.seed, 4 * t))
            )
            data = sample_dataset(teacher, n, derive_seed(config.seed, 4 * t + 1))
            K = kernel_exact(
                family, data.X,
                quadrature_size=config.quadrature,
                seed=derive_seed(config.seed, 4 * t + 2),
            )
            lam = eigen_min(K)
            surrogate = rkhs_norm_bound(K, data.y, rcond=config.rcond)
            s = math.sqrt(max(surrogate, 0.0))
            threshold = math.ceil(
                concentration_width(n, config.delta, lam, factor=config.width_factor)
            )
            m = min(threshold, config.m_cap)
            W = family.sample_params(d, m, derive_seed(config.seed, 4 * t + 3))
            Phi = family.features(W, data.X)
            a = min_l2_interpolant(Phi, data.y, rcond=config.rcond)
            radius = float(np.linalg.norm(a)) / math.sqrt(m)
            row.update(
                m=m,
                lambda_min_K=lam,
                threshold_m=threshold,
                threshold_met=threshold <= config.m_cap,
                norm_radius=radius,
                surrogate_norm=surrogate,
                holds=radius <= 2.0 * s,
            )
        except Exception as exc:
            row["error"] = _errmsg(exc)
        return row

    rows = _run_trials(worker, config.trials, threads)
    columns = ("trial", "n", "m", "delta", "lambda_min_K", "threshold_m",
               "threshold_met", "norm_radius", "surrogate_norm", "holds", "error")
    summary = _base_summary(rows)
    summary["threshold_met_fraction"] = (
        sum(1 for r in rows if r.get("threshold_met") is True) / len(rows) if rows else 0.0
    )
    return columns, rows, summary


def _verify_fit_rand_label(config: ExperimentConfig, threads: int):
    d, n = config.d_grid[0], config.n_grid[0]
    relu = FeatureFamily(tag=RELU_L1SPHERE)

    def worker(t):
        row = {"trial": t, "n": n, "m1": 0, "m2": config.m2, "error": ""}
        try:
            X = rng_from(derive_seed(config.seed, 5 * t)).uniform(-1.0, 1.0, size=(d, n))
            r = rng_from(derive_seed(config.seed, 5 * t + 1)).standard_normal(n)
            r /= np.linalg.norm(r)
            lam_ref = config.lambda_target
            if lam_ref is None:
                lam_ref = eigen_min(kernel_exact(
                    relu, X,
                    quadrature_size=config.quadrature,
                    seed=derive_seed(config.seed, 5 * t + 2),
                ))
            fit = fit_residual_net(
                X, r, config.m2, lam_ref,
                max_resamples=config.max_resamples,
                seed=derive_seed(config.seed, 5 * t + 3),
                rcond=config.rcond,
            )
            norm_bound = math.sqrt(2.0 / (lam_ref / 2.0)) * fit.residual_norm
            row.update(
                lambda_ref=lam_ref,
                lambda_emp=fit.lambda_emp,
                resamples_used=fit.resamples_used,
                path_norm=fit.path_norm,
                teacher_norm=fit.residual_norm,
                interp_error=fit.interp_error,
                holds=fit.interp_error <= 1e-8 and fit.path_norm <= norm_bound,
            )
        except Exception as exc:
            row["error"] = _errmsg(exc)
        return row

    rows = _run_trials(worker, config.trials, threads)
    columns = ("trial", "n", "m1", "m2", "lambda_ref", "lambda_emp",
               "resamples_used", "path_norm", "teacher_norm", "interp_error",
               "holds", "error")
    return columns, rows, _base_summary(rows)


def _verify_two_layer_composite(config: ExperimentConfig, threads: int):
    d, n = config.d_grid[0], config.n_grid[0]

    def worker(t):
        row = {"trial": t, "n": n, "m1": config.m1, "m2": config.m2, "error": ""}
        try:
            teacher = rescale_teacher(
                make_teacher(d, config.n_atoms, 1.0, derive_seed(config.seed, 3 * t))
            )
            data = sample_dataset(teacher, n, derive_seed(config.seed, 3 * t + 1))
            fit = interpolate_two_layer(
                data, teacher, config.m1, config.m2,
                derive_seed(config.seed, 3 * t + 2),
                lambda_target=config.lambda_target,
                max_resamples=config.max_resamples,
                n_retry_draws=config.n_retry_draws,
                rcond=config.rcond,
                lambda_quadrature=config.quadrature,
            )
            row.update(
                lambda_ref=fit.lambda_target,
                lambda_emp=fit.lambda_emp,
                resamples_used=fit.resamples_used,
                path_norm=fit.path_norm,
                teacher_norm=fit.teacher_norm_upper,
                interp_error=fit.interp_error,
                holds=fit.path_norm <= 3.0 * fit.teacher_norm_upper,
            )
        except Exception as exc:
            row["error"] = _errmsg(exc)
        return row

    rows = _run_trials(worker, config.trials, threads)
    columns = ("trial", "n", "m1", "m2", "lambda_ref", "lambda_emp",
               "resamples_used", "path_norm", "teacher_norm", "interp_error",
               "holds", "error")
    return columns, rows, _base_summary(rows)


def _verify_resnet_add(config: ExperimentConfig, threads: int):
    d = config.d_grid[0]
    L_max = config.L_grid[0]

    def worker(t):
        row = {"trial": t, "error": ""}
        try:
            rng = rng_from(derive_seed(config.seed, 3 * t + 2))
            L1, L2 = (int(v) for v in rng.integers(1, L_max + 1, size=2))
            D1, D2 = (int(v) for v in rng.integers(d + 1, d + 5, size=2))
            m1, m2 = (int(v) for v in rng.integers(1, 7, size=2))
            net1 = random_resnet(d, L1, D1, m1, seed=derive_seed(config.seed, 3 * t))
            net2 = random_resnet(d, L2, D2, m2, seed=derive_seed(config.seed, 3 * t + 1))
            total = resnet_add(net1, net2)
            X = rng.uniform(-1.0, 1.0, size=(d, config.probe_points))
            want = resnet_eval_batch(net1, X) + resnet_eval_batch(net2, X)
            got = resnet_eval_batch(total, X)
            value_dev = float(np.abs(want - got).max()) / max(1.0, float(np.abs(want).max()))
            norm_sum = weighted_path_norm(net1) + weighted_path_norm(net2)
            norm_total = weighted_path_norm(total)
            norm_dev = abs(norm_total - norm_sum) / max(1.0, norm_sum)
            row.update(
                L=total.L, D=total.D, m=total.m,
                weighted_path_norm=norm_total,
                value_dev=value_dev,
                norm_dev=norm_dev,
                holds=value_dev <= 1e-12 and norm_dev <= 1e-12,
            )
        except Exception as exc:
            row["error"] = _errmsg(exc)
        return row

    rows = _run_trials(worker, config.trials, threads)
    columns = ("trial", "L", "D", "m", "weighted_path_norm", "value_dev",
               "norm_dev", "holds", "error")
    return columns, rows, _base_summary(rows)


def _verify_embedding(config: ExperimentConfig, threads: int):
    from .two_layer import TwoLayerNet

    d = config.d_grid[0]

    def worker(t):
        row = {"trial": t, "d": d, "error": ""}
        try:
            rng = rng_from(derive_seed(config.seed, 2 * t))
            m = int(rng.integers(1, 17))
            theta = TwoLayerNet(
                a=rng.standard_normal(m),
                B=rng.standard_normal((m, d)),
                c=rng.standard_normal(m),
            )
            embedded = embed_two_layer(theta)
            X = rng_from(derive_seed(config.seed, 2 * t + 1)).uniform(
                -1.0, 1.0, size=(d, config.probe_points)
            )
            want = two_layer_eval_batch(theta, X)
            got = resnet_eval_batch(embedded, X)
            value_dev = float(np.abs(want - got).max()) / max(1.0, float(np.abs(want).max()))
            pn = path_norm(theta)
            wpn = weighted_path_norm(embedded)
            ratio_dev = abs(wpn - 3.0 * pn) / max(1e-300, 3.0 * pn)
            row.update(
                m=m,
                path_norm=pn,
                weighted_path_norm=wpn,
                norm_ratio=wpn / pn if pn > 0 else math.inf,
                value_dev=value_dev,
                holds=value_dev <= 1e-12 and ratio_dev <= 1e-12,
            )
        except Exception as exc:
            row["error"] = _errmsg(exc)
        return row

    rows = _run_trials(worker, config.trials, threads)
    columns = ("trial", "d", "m", "path_norm", "weighted_path_norm",
               "norm_ratio", "value_dev", "holds", "error")
    return columns, rows, _base_summary(rows)


_SELECTOR_TABLE = {
    "kernel-approx": _verify_kernel_approx,
    "krr-bound": _verify_krr_bound,
    "min-norm-rf": _verify_min_norm_rf,
    "fit-rand-label": _verify_fit_rand_label,
    "two-layer-composite": _verify_two_layer_composite,
    "resnet-add": _verify_resnet_add,
    "embedding": _verify_embedding,
}


def run_verify_lemma(config: ExperimentConfig, threads: int = 1) -> StudyResult:
    """Run one lemma's verification suite over its grid of trials."""
    if config.kind != "verify-lemma":
        raise ValueError(f"config.kind must be verify-lemma, got {config.kind!r}")
    if config.lemma not in _SELECTOR_TABLE:
        raise ValueError(
            f"unknown lemma selector {config.lemma!r}; expected one of {VERIFY_SELECTORS}"
        )
    columns, rows, summary = _SELECTOR_TABLE[config.lemma](config, threads)
    summary["lemma"] = config.lemma
    return StudyResult(columns=tuple(columns), rows=tuple(rows), summary=summary, config=config)


def _grid_widths(config: ExperimentConfig) -> list:
    """Resolve the per-n width (m for rf / two-layer, added depth for resnet)."""
    source = config.m_grid if config.model != "resnet" else config.L_grid
    if len(source) == len(config.n_grid):
        return [int(v) for v in source]
    return [config.m_per_n * n for n in config.n_grid]


def _fit_slope(ns, medians) -> float:
    coeffs = np.polyfit(np.log(np.asarray(ns, dtype=float)), np.log(np.asarray(medians)), 1)
    return float(coeffs[0])


def _bootstrap_slope_ci(risks_per_n: list, ns: list, seed: int, n_boot: int = 200):
    rng = rng_from(seed)
    slopes = []
    for _ in range(n_boot):
        medians = []
        for risks in risks_per_n:
            idx = rng.integers(0, len(risks), size=len(risks))
            medians.append(float(np.median(np.asarray(risks)[idx])))
        if all(v > 0 for v in medians):
            slopes.append(_fit_slope(ns, medians))
    if len(slopes) < n_boot // 2:
        return None
    return (float(np.percentile(slopes, 2.5)), float(np.percentile(slopes, 97.5)))


def _scale_engine(config: ExperimentConfig, threads: int, audit: bool) -> StudyResult:
    d = config.d_grid[0]
    widths = _grid_widths(config)
    family = _family(config)
    relu = FeatureFamily(tag=RELU_L1SPHERE)
    jobs = [
        (gi, n, widths[gi], t)
        for gi, n in enumerate(config.n_grid)
        for t in range(config.trials)
    ]

    def worker(j):
        gi, n, width, t = jobs[j]
        offset = gi * config.trials + t
        row = {"trial": t, "model_kind": config.model, "n": n, "m_or_L": width, "error": ""}
        try:
            teacher = rescale_teacher(
                make_teacher(d, config.n_atoms, 1.0, derive_seed(config.seed, _TEACHER_BASE + t))
            )
            data = sample_dataset(teacher, n, derive_seed(config.seed, _DATA_BASE + offset))
            fit_seed = derive_seed(config.seed, _FIT_BASE + offset)
            if config.model == "rf":
                W = family.sample_params(d, width, fit_seed)
                Phi = family.features(W, data.X)
                a = min_l2_interpolant(Phi, data.y, rcond=config.rcond)
                model = RandomFeatureModel(family=family, params=W, coefficients=a)
                predict = model.predict
                preds = Phi @ a / width
                radius = model.norm_radius
                lam_ref = smallest_singular_value(Phi) ** 2 / width
                threshold = concentration_width(n, config.delta, lam_ref, config.width_factor)
                threshold_met = width >= threshold
            elif config.model == "two-layer":
                fit = interpolate_two_layer(
                    data, teacher, config.m1, width, fit_seed,
                    lambda_target=config.lambda_target,
                    max_resamples=config.max_resamples,
                    n_retry_draws=config.n_retry_draws,
                    rcond=config.rcond,
                    lambda_quadrature=config.quadrature,
                )
                predict = lambda Xt: two_layer_eval_batch(fit.net, Xt)
                preds = predict(data.X)
                radius = fit.path_norm
                threshold = concentration_width(n, config.delta, fit.lambda_target, 2.0)
                threshold_met = width >= threshold
            else:
                part1 = approximate_teacher(
                    teacher, config.m1, data.X, derive_seed(config.seed, _TEACHER_BASE + offset),
                    n_retry_draws=config.n_retry_draws,
                )
                teacher_net = embed_two_layer(part1.net)
                m2 = min(width, config.L_cap - teacher_net.L)
                row["m_or_L"] = teacher_net.L + m2
                fit = interpolate_resnet(
                    data, teacher_net, teacher_net.L, m2, fit_seed,
                    lambda_target=config.lambda_target,
                    max_resamples=config.max_resamples,
                    rcond=config.rcond,
                    lambda_quadrature=config.quadrature,
                )
                predict = lambda Xt: resnet_eval_batch(fit.net, Xt)
                preds = predict(data.X)
                radius = fit.weighted_norm
                threshold = concentration_width(n, config.delta, fit.lambda_target, 2.0)
                threshold_met = m2 >= width and m2 >= threshold
            emp_risk = 0.5 * float(np.mean((preds - data.y) ** 2))
            test = population_risk(
                predict, teacher, N_test=config.n_test,
                seed=derive_seed(config.seed, _TEST_BASE + offset),
            )
            row.update(
                norm_radius=radius,
                empirical_risk=emp_risk,
                test_risk=test.risk,
                threshold_met=bool(threshold_met),
            )
            if audit:
                if config.model == "rf":
                    lower = rad_rf_ball(
                        Phi, radius, n_draws=config.rad_draws,
                        seed=derive_seed(config.seed, _RAD_BASE + offset),
                    ).mean
                    upper = rf_ball_upper(radius, n).mean
                elif config.model == "two-layer":
                    lower = rad_path_ball(
                        data.X, radius, n_draws=config.rad_draws,
                        seed=derive_seed(config.seed, _RAD_BASE + offset),
                    ).estimate.mean
                    upper = 2.0 * radius * math.sqrt(2.0 * math.log(2.0 * d) / n)
                else:
                    lower = 0.0
                    upper = rad_weighted_path_upper(radius, d, n).mean
                Q = radius + 1.0
                C_loss = (radius + 1.0) ** 2 / 2.0
                bound = generalization_bound(emp_risk, Q, C_loss, upper, config.delta, n)
                row.update(
                    rad_lower=lower,
                    rad_upper=upper,
                    bound=bound,
                    bound_holds=test.risk <= bound,
                )
        except Exception as exc:
            row["error"] = _errmsg(exc)
        return row

    rows = _run_trials(worker, len(jobs), threads)
    columns = ("trial", "model_kind", "n", "m_or_L", "norm_radius", "rad_lower",
               "rad_upper", "empirical_risk", "bound", "test_risk", "bound_holds",
               "threshold_met", "error")
    summary = _base_summary(rows, with_pass=False)
    summary["sub_threshold_rows"] = sum(1 for r in rows if r.get("threshold_met") is False)

    per_n, risks_per_n, ns_ok = {}, [], []
    for n in config.n_grid:
        risks = [r["test_risk"] for r in rows if r["n"] == n and not r["error"]]
        if not risks:
            continue
        arr = np.asarray(risks)
        per_n[str(n)] = {
            "median": float(np.median(arr)),
            "q25": float(np.percentile(arr, 25)),
            "q75": float(np.percentile(arr, 75)),
            "trials": len(risks),
        }
        ns_ok.append(n)
        risks_per_n.append(risks)
    summary["per_n"] = per_n

    medians = [per_n[str(n)]["median"] for n in ns_ok]
    if len(ns_ok) < 4:
        summary["slope_flag"] = "needs at least 4 grid points with successful trials"
    elif any(v <= 0 for v in medians):
        summary["slope_flag"] = "undefined: nonpositive median risk"
    else:
        summary["slope"] = _fit_slope(ns_ok, medians)
        ci = _bootstrap_slope_ci(
            risks_per_n, ns_ok, derive_seed(config.seed, _BOOT_BASE)
        )
        if ci is not None:
            summary["slope_ci"] = [ci[0], ci[1]]

    if audit:
        scored = [r for r in rows if not r["error"]]
        summary["bound_pass_fraction"] = (
            sum(1 for r in scored if r["bound_holds"]) / len(scored) if scored else 0.0
        )
    return StudyResult(columns=columns, rows=tuple(rows), summary=summary, config=config)


def run_scale_study(config: ExperimentConfig, threads: int = 1) -> StudyResult:
    """Risk-vs-n study: interpolate at each grid point, measure held-out risk."""
    if config.kind != "scale-study":
        raise ValueError(f"config.kind must be scale-study, got {config.kind!r}")
    return _scale_engine(config, threads, audit=False)


def run_bound_audit(config: ExperimentConfig, threads: int = 1) -> StudyResult:
    """Scale study plus per-trial complexity estimates and the deviation bound.

    Trial seeds match run_scale_study exactly, so the shared columns of the
    two reports agree row for row under the same config and master seed.
    """
    if config.kind != "bound-audit":
        raise ValueError(f"config.kind must be bound-audit, got {config.kind!r}")
    return _scale_engine(config, threads, audit=True)


def run(config: ExperimentConfig, threads: int = 1) -> StudyResult:
    if config.kind == "verify-lemma":
        return run_verify_lemma(config, threads)
    if config.kind == "scale-study":
        return run_scale_study(config, threads)
    return run_bound_audit(config, threads)


def result_basename(result: StudyResult) -> str:
    if result.config.kind == "verify-lemma":
        return "verify_" + result.config.lemma.replace("-", "_")
    return result.config.kind.replace("-", "_")


def write_study(result: StudyResult, out_dir: str | Path) -> list:
    """Write <name>.csv and <name>_summary.json into out_dir; returns the paths."""
    from .serialize import write_csv, write_json_report

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    name = result_basename(result)
    echo = result.config.echo()
    csv_path = out / f"{name}.csv"
    write_csv(csv_path, list(result.columns), list(result.rows), echo, VERSION)
    json_path = out / f"{name}_summary.json"
    write_json_report(json_path, {"version": VERSION, "config": echo, "summary": result.summary})
    return [csv_path, json_path]

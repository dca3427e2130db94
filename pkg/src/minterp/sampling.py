"""Teacher functions, input sampling, and label generation.

The ground-truth targets are finite mixtures of ReLU ridge functions
f(x) = (1/K) sum_k a_k relu(w_k . (x, 1)) with every direction w_k on the
unit l1 sphere.  That normalization makes |f(x)| <= (1/K) sum_k |a_k|
whenever ||x||_inf <= 1, so the norm of the target and a bound on its
labels are both exactly computable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ContractViolationError
from .seeding import derive_seed, rng_from

_L1_TOL = 1e-12


@dataclass(frozen=True)
class TeacherFunction:
    """Finite-atom target: coefficients (K,) and unit-l1 directions (K, d+1)."""

    coefficients: np.ndarray
    directions: np.ndarray
    d: int

    def __post_init__(self):
        a = np.asarray(self.coefficients, dtype=float)
        w = np.asarray(self.directions, dtype=float)
        if a.ndim != 1 or w.ndim != 2 or w.shape != (a.shape[0], self.d + 1):
            raise ValueError(
                f"expected coefficients (K,) and directions (K, {self.d + 1}), "
                f"got {a.shape} and {w.shape}"
            )
        norms = np.abs(w).sum(axis=1)
        if not np.all(np.abs(norms - 1.0) <= _L1_TOL):
            worst = int(np.argmax(np.abs(norms - 1.0)))
            raise ValueError(
                f"direction {worst} has l1 norm {norms[worst]!r}, expected 1 within {_L1_TOL}"
            )
        object.__setattr__(self, "coefficients", a)
        object.__setattr__(self, "directions", w)

    @property
    def n_atoms(self) -> int:
        return self.coefficients.shape[0]


@dataclass(frozen=True)
class Dataset:
    """Paired samples with inputs in [-1, 1]^d (columns of X) and labels in [-1, 1]."""

    X: np.ndarray
    y: np.ndarray
    seed: int

    def __post_init__(self):
        X = np.asarray(self.X, dtype=float)
        y = np.asarray(self.y, dtype=float)
        if X.ndim != 2 or y.ndim != 1 or X.shape[1] != y.shape[0]:
            raise ValueError(f"expected X (d, n) and y (n,), got {X.shape} and {y.shape}")
        if X.size and np.abs(X).max() > 1.0:
            raise ValueError("inputs must satisfy ||x||_inf <= 1")
        if y.size and np.abs(y).max() > 1.0:
            raise ValueError("labels must satisfy |y| <= 1")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)

    @property
    def d(self) -> int:
        return self.X.shape[0]

    @property
    def n(self) -> int:
        return self.X.shape[1]


def sample_l1_sphere(d: int, count: int, seed: int) -> np.ndarray:
    """Sample ``count`` points uniformly on the unit l1 sphere of R^(d+1).

    Magnitudes come from a uniform draw on the standard simplex (normalized
    exponentials), signs are attached independently per coordinate; together
    these give the exact uniform law on the sphere with no rejection.
    Returns an array of shape (count, d+1) whose rows have unit l1 norm.
    """
    if d < 1:
        raise ValueError(f"d must be >= 1, got {d}")
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    rng = rng_from(seed)
    g = rng.exponential(scale=1.0, size=(count, d + 1))
    simplex = g / g.sum(axis=1, keepdims=True)
    signs = rng.integers(0, 2, size=(count, d + 1)) * 2 - 1
    return simplex * signs


def make_teacher(d: int, n_atoms: int, coeff_scale: float, seed: int) -> TeacherFunction:
    """Build a random finite-atom teacher.

    Directions are uniform on the l1 sphere, coefficients uniform in
    [-coeff_scale, coeff_scale].  Use :func:`sup_norm_upper` (reported
    bound of the teacher over the input box) to rescale labels into
    [-1, 1] before generating data, or call :func:`rescale_teacher`.
    """
    if n_atoms < 1:
        raise ValueError(f"n_atoms must be >= 1, got {n_atoms}")
    if not coeff_scale > 0:
        raise ValueError(f"coeff_scale must be positive, got {coeff_scale}")
    directions = sample_l1_sphere(d, n_atoms, derive_seed(seed, 0))
    rng = rng_from(derive_seed(seed, 1))
    coefficients = rng.uniform(-coeff_scale, coeff_scale, size=n_atoms)
    return TeacherFunction(coefficients=coefficients, directions=directions, d=d)


def barron_norm_upper(f: TeacherFunction) -> float:
    """Computable upper bound on the representation norm: (1/K) sum |a_k|."""
    return float(np.abs(f.coefficients).mean())


def sup_norm_upper(f: TeacherFunction) -> float:
    """Upper bound on sup |f(x)| over ||x||_inf <= 1.

    Per atom the ReLU preactivation maxes out at ||b_k||_1 + c_k, so the
    triangle inequality gives (1/K) sum |a_k| max(0, ||b_k||_1 + c_k).
    """
    b = f.directions[:, :-1]
    c = f.directions[:, -1]
    atom_sup = np.maximum(0.0, np.abs(b).sum(axis=1) + c)
    return float(np.mean(np.abs(f.coefficients) * atom_sup))


def rescale_teacher(f: TeacherFunction, target: float = 1.0) -> TeacherFunction:
    """Divide coefficients so that barron_norm_upper <= target.

    No-op when the bound is already within target; labels generated from
    the result stay in [-target, target] on the input box.
    """
    bound = barron_norm_upper(f)
    if bound <= target:
        return f
    return TeacherFunction(
        coefficients=f.coefficients * (target / bound),
        directions=f.directions,
        d=f.d,
    )


def teacher_eval(f: TeacherFunction, x: np.ndarray) -> float:
    """Evaluate the teacher at a single point x of length d."""
    x = np.asarray(x, dtype=float)
    if x.shape != (f.d,):
        raise ValueError(f"expected x of shape ({f.d},), got {x.shape}")
    pre = f.directions[:, :-1] @ x + f.directions[:, -1]
    return float(f.coefficients @ np.maximum(pre, 0.0) / f.n_atoms)


def teacher_eval_batch(f: TeacherFunction, X: np.ndarray) -> np.ndarray:
    """Evaluate the teacher at every column of X (shape (d, n))."""
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[0] != f.d:
        raise ValueError(f"expected X of shape ({f.d}, n), got {X.shape}")
    pre = f.directions[:, :-1] @ X + f.directions[:, -1][:, None]
    return f.coefficients @ np.maximum(pre, 0.0) / f.n_atoms


def sample_dataset(f: TeacherFunction, n: int, seed: int) -> Dataset:
    """Draw n inputs uniformly from [-1, 1]^d and label them with the teacher.

    The teacher must already be rescaled so labels land in [-1, 1];
    violations raise with the first offending sample index.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    rng = rng_from(seed)
    X = rng.uniform(-1.0, 1.0, size=(f.d, n))
    y = teacher_eval_batch(f, X)
    bad = np.flatnonzero(np.abs(y) > 1.0)
    if bad.size:
        raise ContractViolationError(
            f"label magnitude {abs(y[bad[0]]):.6f} exceeds 1; rescale the teacher first",
            index=bad[0],
        )
    return Dataset(X=X, y=y, seed=seed)

"""Minimum-norm interpolation with random features and its norm certificate.

The coefficient norm of the minimum-l2 interpolant satisfies the exact
identity ||a||^2 / m = y^T (K^m)^{-1} y.  Once the empirical kernel is
close to the exact one, the right-hand side is at most twice the
kernel surrogate y^T K^{-1} y, so ||a|| / sqrt(m) <= 2 sqrt(y^T K^{-1} y)
no matter how large m grows.
"""

import numpy as np

from minterp import (
    RELU_L1SPHERE,
    FeatureFamily,
    fit_random_features,
    kernel_exact,
    make_teacher,
    rescale_teacher,
    rkhs_norm_bound,
    sample_dataset,
)

d, n = 4, 24
family = FeatureFamily(tag=RELU_L1SPHERE)
teacher = rescale_teacher(make_teacher(d, 48, 1.0, seed=0))
data = sample_dataset(teacher, n, seed=1)

K = kernel_exact(family, data.X, quadrature_size=500_000, seed=2)
surrogate = rkhs_norm_bound(K, data.y)
budget = 2.0 * np.sqrt(surrogate)
print(f"kernel surrogate y^T K^-1 y = {surrogate:.4f}")
print(f"norm budget 2 sqrt(surrogate) = {budget:.4f}")
print(f"\n{'m':>7} {'||a||/sqrt(m)':>14} {'interp error':>13} within budget")

for k in range(6, 15):
    m = 2 ** k
    fit = fit_random_features(data.X, data.y, family, m, seed=10 + k)
    flag = fit.norm_radius <= budget
    print(f"{m:>7} {fit.norm_radius:>14.4f} {fit.interp_error:>13.2e} {flag}")

print("\nthe radius stabilizes as m grows: more features never cost norm,")
print("they only bring the empirical kernel closer to its expectation")

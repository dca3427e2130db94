import numpy as np
import pytest
from numpy.testing import assert_allclose

from minterp import (
    SingularSystemError,
    eigenvalues,
    min_norm_solve,
    smallest_eigenvalue,
    smallest_singular_value,
    spectral_norm,
)


class TestMinNormSolve:
    def test_square_invertible(self):
        rng = np.random.default_rng(0)
        A = rng.standard_normal((6, 6)) + 3 * np.eye(6)
        b = rng.standard_normal(6)
        assert_allclose(min_norm_solve(A, b), np.linalg.solve(A, b), rtol=1e-10)

    def test_underdetermined_matches_lstsq(self):
        rng = np.random.default_rng(1)
        A = rng.standard_normal((5, 40))
        b = rng.standard_normal(5)
        x = min_norm_solve(A, b)
        ref, *_ = np.linalg.lstsq(A, b, rcond=None)
        assert_allclose(x, ref, rtol=1e-9, atol=1e-12)

    def test_solution_interpolates(self):
        rng = np.random.default_rng(2)
        A = rng.standard_normal((4, 30))
        b = rng.standard_normal(4)
        assert_allclose(A @ min_norm_solve(A, b), b, rtol=1e-10)

    def test_solution_in_row_space(self):
        # the minimum-norm solution has no null-space component
        rng = np.random.default_rng(3)
        A = rng.standard_normal((3, 12))
        x = min_norm_solve(A, rng.standard_normal(3))
        _, _, Vt = np.linalg.svd(A)
        null_basis = Vt[3:]
        assert np.abs(null_basis @ x).max() < 1e-12

    def test_adding_null_component_grows_norm(self):
        rng = np.random.default_rng(4)
        A = rng.standard_normal((3, 12))
        b = rng.standard_normal(3)
        x = min_norm_solve(A, b)
        _, _, Vt = np.linalg.svd(A)
        perturbed = x + 0.1 * Vt[5]
        assert_allclose(A @ perturbed, b, rtol=1e-10)
        assert np.linalg.norm(perturbed) > np.linalg.norm(x)

    def test_singular_raises(self):
        A = np.array([[1.0, 2.0, 3.0], [2.0, 4.0, 6.0]])  # rank 1
        with pytest.raises(SingularSystemError) as err:
            min_norm_solve(A, np.array([1.0, 2.0]))
        assert err.value.smallest <= err.value.cutoff

    def test_overdetermined_rejected(self):
        with pytest.raises(ValueError):
            min_norm_solve(np.ones((5, 2)), np.ones(5))


class TestSpectralHelpers:
    def test_smallest_eigenvalue(self):
        rng = np.random.default_rng(5)
        M = rng.standard_normal((8, 8))
        K = M @ M.T
        assert smallest_eigenvalue(K) == pytest.approx(np.linalg.eigvalsh(K)[0])

    def test_eigenvalues_sorted(self):
        rng = np.random.default_rng(6)
        M = rng.standard_normal((6, 6))
        vals = eigenvalues((M + M.T) / 2)
        assert np.all(np.diff(vals) >= 0)

    def test_spectral_norm(self):
        rng = np.random.default_rng(7)
        M = rng.standard_normal((5, 9))
        assert spectral_norm(M) == pytest.approx(np.linalg.svd(M, compute_uv=False)[0])

    def test_smallest_singular_value(self):
        rng = np.random.default_rng(8)
        M = rng.standard_normal((4, 20))
        assert smallest_singular_value(M) == pytest.approx(
            np.linalg.svd(M, compute_uv=False)[-1]
        )

import numpy as np
import pytest

from rkls import pseudo_inverse, solve_direct
from rkls.errors import NonFinite, ShapeMismatch, Singular
from tests.conftest import make_system, materialize


class TestPseudoInverse:
    def test_identity(self):
        np.testing.assert_allclose(pseudo_inverse(np.eye(3)), np.eye(3), atol=1e-12)

    def test_rank_deficient_diagonal(self):
        got = pseudo_inverse(np.diag([2.0, 0.0]))
        np.testing.assert_allclose(got, np.diag([0.5, 0.0]), atol=1e-12)

    def test_full_rank_left_inverse(self, rng):
        a = rng.standard_normal((5, 3))
        pinv = pseudo_inverse(a)
        assert np.linalg.norm(pinv @ a - np.eye(3)) < 1e-8
        # Normal-equations oracle on a well-conditioned instance.
        oracle = np.linalg.inv(a.T @ a) @ a.T
        np.testing.assert_allclose(pinv, oracle, atol=1e-8)

    def test_penrose_conditions(self, rng):
        a = rng.standard_normal((6, 4))
        a[:, 3] = a[:, 0]  # force rank deficiency
        p = pseudo_inverse(a, rel_tol=1e-10)
        na, np_ = np.linalg.norm(a), np.linalg.norm(p)
        assert np.linalg.norm(a @ p @ a - a) <= 1e-9 * na
        assert np.linalg.norm(p @ a @ p - p) <= 1e-9 * np_
        assert np.linalg.norm(a @ p - (a @ p).T) <= 1e-9
        assert np.linalg.norm(p @ a - (p @ a).T) <= 1e-9

    def test_double_pinv_recovers(self, rng):
        a = rng.standard_normal((4, 6))
        back = pseudo_inverse(pseudo_inverse(a))
        assert np.linalg.norm(back - a) <= 1e-6 * np.linalg.norm(a)

    def test_transpose_commutes(self, rng):
        a = rng.standard_normal((5, 3))
        np.testing.assert_allclose(
            pseudo_inverse(a.T), pseudo_inverse(a).T, atol=1e-8
        )

    def test_nonfinite_rejected(self):
        with pytest.raises(NonFinite):
            pseudo_inverse(np.array([[1.0, np.nan]]))


class TestSolveDirect:
    def test_identity_system(self, rng):
        z = rng.standard_normal((4, 2))
        np.testing.assert_array_equal(solve_direct(np.eye(4), z), z)

    def test_kernel_system_residual(self):
        op, z = make_system(n=50)
        theta = materialize(op)
        w = solve_direct(theta, z)
        assert np.linalg.norm(theta @ w - z) <= 1e-8 * np.linalg.norm(z)

    def test_duplicate_rows_singular(self, rng):
        theta = rng.standard_normal((5, 5))
        theta[3] = theta[1]
        with pytest.raises(Singular):
            solve_direct(theta, np.ones((5, 1)))

    def test_shape_mismatch(self):
        with pytest.raises(ShapeMismatch):
            solve_direct(np.ones((3, 2)), np.ones((3, 1)))
        with pytest.raises(ShapeMismatch):
            solve_direct(np.eye(3), np.ones((4, 1)))

    def test_matches_pinv_route(self):
        op, z = make_system(n=40)
        theta = materialize(op)
        w_solve = solve_direct(theta, z)
        w_pinv = pseudo_inverse(theta, rel_tol=1e-12) @ z
        assert np.linalg.norm(w_solve - w_pinv) <= 1e-6 * np.linalg.norm(w_solve)

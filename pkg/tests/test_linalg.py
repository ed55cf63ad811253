"""Tridiagonal and conjugate-gradient solvers against dense oracles."""
import numpy as np
import pytest

from fracrom.fom import assemble_stiffness_2d
from fracrom.grid import Grid2D
from fracrom.linalg import SolverError, Tridiagonal, pcg_solve, thomas_solve


def _random_dominant_tridiagonal(n, seed):
    rng = np.random.default_rng(seed)
    lower = rng.standard_normal(n - 1)
    upper = rng.standard_normal(n - 1)
    diag = 3.0 + np.abs(rng.standard_normal(n))
    return Tridiagonal(lower=lower, diag=diag, upper=upper)


def test_thomas_identity_system():
    rhs = np.array([3.0, -1.0, 2.0, 0.5])
    x = thomas_solve(np.zeros(3), np.ones(4), np.zeros(3), rhs)
    np.testing.assert_array_equal(x, rhs)


def test_thomas_known_three_by_three():
    x = thomas_solve(
        np.array([-1.0, -1.0]),
        np.array([2.0, 2.0, 2.0]),
        np.array([-1.0, -1.0]),
        np.array([1.0, 0.0, 0.0]),
    )
    np.testing.assert_allclose(x, [0.75, 0.5, 0.25], rtol=0, atol=1e-15)


def test_thomas_matches_dense_oracle():
    tri = _random_dominant_tridiagonal(50, seed=11)
    rhs = np.random.default_rng(12).standard_normal(50)
    x = thomas_solve(tri.lower, tri.diag, tri.upper, rhs)
    oracle = np.linalg.solve(tri.to_dense(), rhs)
    assert np.max(np.abs(x - oracle)) <= 1e-12


def test_thomas_zero_pivot_raises():
    with pytest.raises(SolverError):
        thomas_solve(np.array([1.0]), np.array([0.0, 1.0]), np.array([1.0]), np.ones(2))


def test_thomas_band_length_mismatch():
    with pytest.raises(ValueError):
        thomas_solve(np.zeros(3), np.ones(3), np.zeros(2), np.ones(3))


def test_tridiagonal_operations_match_dense():
    tri = _random_dominant_tridiagonal(9, seed=4)
    dense = tri.to_dense()
    rng = np.random.default_rng(5)
    v = rng.standard_normal(9)
    mat = rng.standard_normal((9, 3))
    np.testing.assert_allclose(tri.matvec(v), dense @ v, rtol=0, atol=1e-13)
    np.testing.assert_allclose(tri.matmat(mat), dense @ mat, rtol=0, atol=1e-13)
    assert tri.n == 9


def test_tridiagonal_band_validation():
    with pytest.raises(ValueError):
        Tridiagonal(lower=np.zeros(3), diag=np.ones(3), upper=np.zeros(2))


def test_pcg_identity_and_zero_rhs():
    rhs = np.array([1.0, -2.0, 3.0])
    x = pcg_solve(lambda v: v, rhs, tol=1e-14)
    np.testing.assert_allclose(x, rhs, rtol=0, atol=1e-13)
    zero = pcg_solve(lambda v: v, np.zeros(3))
    np.testing.assert_array_equal(zero, np.zeros(3))


def test_pcg_matches_dense_oracle_on_five_point_stencil():
    grid = Grid2D(n=8)
    mat = assemble_stiffness_2d(1.0, grid)
    rng = np.random.default_rng(21)
    rhs = rng.standard_normal(grid.ndof)
    x = pcg_solve(mat, rhs, tol=1e-14, precond=lambda r: r / mat.diagonal())
    oracle = np.linalg.solve(mat.toarray(), rhs)
    assert np.max(np.abs(x - oracle)) <= 1e-12


def test_pcg_residual_obeys_requested_tolerance():
    grid = Grid2D(n=6)
    mat = assemble_stiffness_2d(1.0, grid)
    rhs = np.ones(grid.ndof)
    for tol in (1e-4, 1e-8, 1e-12):
        x = pcg_solve(mat, rhs, tol=tol)
        res = np.linalg.norm(rhs - mat.dot(x))
        assert res <= tol * np.linalg.norm(rhs)


def test_pcg_iteration_cap_raises():
    grid = Grid2D(n=8)
    mat = assemble_stiffness_2d(1.0, grid)
    with pytest.raises(SolverError):
        pcg_solve(mat, np.ones(grid.ndof), tol=1e-14, max_iter=2)


def test_pcg_rejects_indefinite_operator():
    with pytest.raises(SolverError):
        pcg_solve(lambda v: -v, np.ones(4))

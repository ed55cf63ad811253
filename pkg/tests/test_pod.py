"""Snapshot collection and orthonormal basis extraction."""
import numpy as np
import pytest

from fracrom.pod import (
    ReducedBasis,
    SnapshotMatrix,
    collect_snapshots,
    compute_basis,
    energy_rank,
    truncation_error,
)


def _random_orthonormal(rng, n, r):
    q, _ = np.linalg.qr(rng.standard_normal((n, r)))
    return q


def test_single_column_normalizes():
    v = np.array([3.0, 0.0, 4.0])
    basis = compute_basis(v[:, None], 1)
    phi = basis.matrix[:, 0]
    assert np.linalg.norm(phi) == pytest.approx(1.0)
    assert abs(phi @ (v / 5.0)) == pytest.approx(1.0)
    assert basis.singular_values[0] == pytest.approx(5.0)


def test_dominant_direction_wins():
    data = np.array([[3.0, 0.0], [0.0, 2.0], [0.0, 0.0]])
    basis = compute_basis(data, 1)
    phi = basis.matrix[:, 0]
    np.testing.assert_allclose(np.abs(phi), [1.0, 0.0, 0.0], atol=1e-14)
    np.testing.assert_allclose(basis.singular_values, [3.0, 2.0])


def test_matches_gram_eigenproblem_oracle():
    rng = np.random.default_rng(11)
    data = rng.standard_normal((20, 6))
    r = 3
    basis = compute_basis(data, r)

    # independent route: eigen-decompose the 6x6 Gram matrix
    lam, vecs = np.linalg.eigh(data.T @ data)
    order = np.argsort(lam)[::-1]
    lam, vecs = lam[order], vecs[:, order]
    oracle = data @ vecs[:, :r] / np.sqrt(lam[:r])

    p1 = basis.matrix @ basis.matrix.T
    p2 = oracle @ oracle.T
    assert np.linalg.norm(p1 - p2, 2) <= 1e-8
    np.testing.assert_allclose(basis.singular_values, np.sqrt(lam), rtol=1e-10)


def test_orthonormal_over_random_shapes():
    rng = np.random.default_rng(5)
    for _ in range(20):
        n = int(rng.integers(4, 40))
        cols = int(rng.integers(2, 12))
        r = int(rng.integers(1, min(n, cols) + 1))
        basis = compute_basis(rng.standard_normal((n, cols)), r)
        gram = basis.matrix.T @ basis.matrix
        assert np.max(np.abs(gram - np.eye(r))) <= 1e-10


def test_truncation_error_identities():
    rng = np.random.default_rng(3)
    data = rng.standard_normal((20, 6))
    full = compute_basis(data, 6)
    scale = np.sum(data**2)
    assert truncation_error(data, full) <= 1e-12 * scale

    rank1 = np.outer(rng.standard_normal(15), rng.standard_normal(4))
    assert truncation_error(rank1, compute_basis(rank1, 1)) <= 1e-12 * np.sum(rank1**2)

    r = 2
    basis = compute_basis(data, r)
    tail = np.sum(full.singular_values[r:] ** 2)
    assert truncation_error(data, basis) == pytest.approx(tail, rel=1e-8)


def test_projection_beats_random_competitors():
    rng = np.random.default_rng(21)
    # rank-deficient data: 4 independent directions in a 20-dim space
    data = rng.standard_normal((20, 4)) @ rng.standard_normal((4, 6))
    basis = compute_basis(data, 2)
    best = truncation_error(data, basis)
    for _ in range(20):
        competitor = ReducedBasis(
            matrix=_random_orthonormal(rng, 20, 2),
            singular_values=basis.singular_values,
        )
        assert best <= truncation_error(data, competitor) + 1e-12


def test_energy_rank():
    sigma = np.array([10.0, 1.0, 1e-14])
    assert energy_rank(sigma, 0.9) == 1
    assert energy_rank(sigma, 0.999) == 2
    # near-zero trailing value never counts towards the rank
    assert energy_rank(sigma) == 2
    assert energy_rank(np.array([5.0])) == 1
    with pytest.raises(ValueError):
        energy_rank(np.array([]))
    with pytest.raises(ValueError):
        energy_rank(sigma, 0.0)
    with pytest.raises(ValueError):
        energy_rank(sigma, 1.5)


def test_compute_basis_rank_bounds():
    data = np.ones((8, 3))
    with pytest.raises(ValueError):
        compute_basis(data, 0)
    with pytest.raises(ValueError):
        compute_basis(data, 4)


def test_snapshot_matrix_validation():
    with pytest.raises(ValueError):
        SnapshotMatrix(data=np.zeros(5), columns=(), kind="state")
    with pytest.raises(ValueError):
        SnapshotMatrix(data=np.zeros((5, 2)), columns=((0.2, 1),), kind="state")


def test_collect_snapshots_orders_samples_then_levels(test1_model):
    snaps = test1_model.state_snapshots
    assert snaps.data.shape == (63, 4 * 64)
    assert snaps.kind == "state"
    assert snaps.columns[0] == (0.2, 1)
    assert snaps.columns[63] == (0.2, 64)
    assert snaps.columns[64] == (0.4, 1)
    assert snaps.columns[-1] == (0.8, 64)
    # columns really are the trajectory levels, initial value excluded
    beta0, traj0 = test1_model.trajectories[0]
    np.testing.assert_array_equal(snaps.data[:, 0], traj0.states[1])
    np.testing.assert_array_equal(snaps.data[:, 63], traj0.states[64])


def test_collect_snapshots_transform_and_empty(test1_model):
    pairs = test1_model.trajectories[:1]
    doubled = collect_snapshots(pairs, transform=lambda b, m, u: 2.0 * u, kind="state")
    plain = collect_snapshots(pairs)
    np.testing.assert_allclose(doubled.data, 2.0 * plain.data)
    with pytest.raises(ValueError):
        collect_snapshots([])


def test_project_is_basis_transpose(test1_model):
    basis = test1_model.rom.basis
    rng = np.random.default_rng(2)
    x = rng.standard_normal(basis.ndof)
    np.testing.assert_allclose(basis.project(x), basis.matrix.T @ x, atol=1e-14)
    assert basis.dim == 2

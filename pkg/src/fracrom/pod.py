"""Proper orthogonal decomposition of solution snapshots.

Snapshots are the computed time levels ``u^1 .. u^M`` of one or more
full-order trajectories, stacked as columns without mean subtraction or
column weighting.  The POD basis consists of leading left singular vectors;
truncating at rank ``r`` discards exactly ``sum_{i>r} sigma_i^2`` of the
squared projection energy, an identity asserted on every build.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .fom import Trajectory

__all__ = [
    "SnapshotMatrix",
    "ReducedBasis",
    "collect_snapshots",
    "compute_basis",
    "truncation_error",
    "energy_rank",
]

RANK_TOL = 1e-12


@dataclass(frozen=True)
class SnapshotMatrix:
    """Snapshot columns with their (sample, time level) provenance.

    ``columns[k]`` is the ``(beta, time_index)`` pair that produced column
    ``k``; ``kind`` distinguishes state snapshots from nonlinear-term
    snapshots.
    """

    data: np.ndarray
    columns: tuple[tuple[float, int], ...]
    kind: str = "state"

    def __post_init__(self):
        if self.data.ndim != 2:
            raise ValueError("snapshot data must be a 2D array")
        if len(self.columns) != self.data.shape[1]:
            raise ValueError("column metadata does not match the snapshot count")

    @property
    def n_snapshots(self) -> int:
        return int(self.data.shape[1])


@dataclass(frozen=True)
class ReducedBasis:
    """Orthonormal basis ``Phi`` (columns) plus the full singular spectrum."""

    matrix: np.ndarray
    singular_values: np.ndarray

    @property
    def dim(self) -> int:
        return int(self.matrix.shape[1])

    @property
    def ndof(self) -> int:
        return int(self.matrix.shape[0])

    def project(self, v: np.ndarray) -> np.ndarray:
        """Reduced coordinates ``Phi^T v``."""
        return self.matrix.T @ v


def collect_snapshots(
    trajectories: Sequence[tuple[float, Trajectory]],
    transform: Callable[[float, int, np.ndarray], np.ndarray] | None = None,
    kind: str = "state",
) -> SnapshotMatrix:
    """Stack computed time levels of several trajectories into columns.

    Columns are ordered by (sample index, time index); the initial value is
    not a snapshot.  ``transform(beta, m, u)`` optionally maps each state to
    the quantity being sampled (used for nonlinear-term snapshots).
    """
    if not trajectories:
        raise ValueError("at least one trajectory is required")
    cols = []
    meta = []
    for beta, traj in trajectories:
        for m in range(1, traj.states.shape[0]):
            u = traj.states[m]
            cols.append(transform(beta, m, u) if transform is not None else u)
            meta.append((float(beta), m))
    data = np.column_stack(cols)
    return SnapshotMatrix(data=data, columns=tuple(meta), kind=kind)


def compute_basis(snapshots, dim: int) -> ReducedBasis:
    """Leading ``dim`` left singular vectors of the snapshot matrix.

    Accepts a :class:`SnapshotMatrix` or a plain 2D array.  Requesting more
    vectors than ``min(n, n_snapshots)`` raises; singular values below
    ``1e-12`` times the largest are reported but treated as numerically
    zero by :func:`energy_rank`.
    """
    data = snapshots.data if isinstance(snapshots, SnapshotMatrix) else np.asarray(snapshots)
    if data.ndim != 2:
        raise ValueError("snapshots must form a 2D array")
    dim = int(dim)
    if not 1 <= dim <= min(data.shape):
        raise ValueError(
            f"basis dimension must lie in [1, {min(data.shape)}], got {dim}"
        )
    left, sigma, _ = np.linalg.svd(data, full_matrices=False)
    basis = ReducedBasis(matrix=left[:, :dim].copy(), singular_values=sigma.copy())
    if __debug__:
        direct = truncation_error(data, basis)
        tail = float(np.sum(sigma[dim:] ** 2))
        scale = max(float(sigma[0] ** 2), 1.0)
        assert abs(direct - tail) <= 1e-8 * scale, "POD truncation identity violated"
    return basis


def truncation_error(snapshots, basis: ReducedBasis) -> float:
    """Squared projection error ``sum_j ||u_j - Phi Phi^T u_j||^2``, computed directly."""
    data = snapshots.data if isinstance(snapshots, SnapshotMatrix) else np.asarray(snapshots)
    phi = basis.matrix
    residual = data - phi @ (phi.T @ data)
    return float(np.sum(residual**2))


def energy_rank(singular_values: np.ndarray, tau: float = 1.0 - 1e-10) -> int:
    """Smallest rank capturing at least fraction ``tau`` of the squared energy.

    Singular values at or below ``1e-12`` times the largest are treated as
    zero, which caps the returned rank at the numerical rank.
    """
    sigma = np.asarray(singular_values, dtype=np.float64)
    if sigma.size == 0:
        raise ValueError("empty singular value array")
    if not 0.0 < tau <= 1.0:
        raise ValueError(f"energy fraction must lie in (0, 1], got {tau}")
    cutoff = RANK_TOL * sigma[0]
    effective = np.where(sigma > cutoff, sigma, 0.0)
    energy = effective**2
    total = float(energy.sum())
    if total == 0.0:
        return 1
    cumulative = np.cumsum(energy) / total
    rank = int(np.searchsorted(cumulative, tau - 1e-15) + 1)
    return min(rank, int(np.count_nonzero(effective)) or 1)

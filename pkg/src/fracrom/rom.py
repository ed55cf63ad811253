"""Reduced-order time stepping in POD coordinates.

The reduced model replaces the full state by ``u = Phi a`` and projects the
L1 step system onto the basis:

    (I_r + gamma A_r) a^m + gamma Q F(Phi a^m)|_points = history_r

with ``A_r = Phi^T A Phi`` built once per basis (it is independent of the
fractional order, which only enters through ``gamma`` and the L1 weights).
Linear problems factor ``I_r + gamma A_r`` once per solve and project the
source ahead of the time loop, so the marching itself touches only
``r``-sized data.  Nonlinear problems interpolate the reaction-plus-source
term at the DEIM rows, keeping the per-step cost independent of the grid.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .deim import DeimOperator
from .fom import GaussNewtonError, ProblemSpec
from .fractional import gamma_scale, history_rhs, l1_weights
from .grid import Grid1D, Grid2D
from .linalg import Tridiagonal
from .pod import ReducedBasis

__all__ = ["RomOperators", "ReducedTrajectory", "build_rom", "rom_solve", "lift"]


@dataclass(frozen=True)
class RomOperators:
    """Offline-assembled reduced operators.

    ``reduced_stiffness`` is ``Phi^T A Phi``; ``basis_rows_at_points`` caches
    the DEIM rows of the state basis so the online phase never gathers from
    the full basis.
    """

    basis: ReducedBasis
    reduced_stiffness: np.ndarray
    deim: DeimOperator | None = None
    basis_rows_at_points: np.ndarray | None = None

    @property
    def dim(self) -> int:
        return int(self.reduced_stiffness.shape[0])


def build_rom(stiffness, basis: ReducedBasis, deim: DeimOperator | None = None) -> RomOperators:
    """Project the stiffness matrix onto the basis and bundle the DEIM data.

    ``stiffness`` may be a :class:`Tridiagonal`, a scipy sparse matrix, or a
    dense array.  The projection preserves symmetry and, for a symmetric
    positive definite operator, positive definiteness.
    """
    phi = basis.matrix
    if isinstance(stiffness, Tridiagonal):
        a_phi = stiffness.matmat(phi)
    elif hasattr(stiffness, "dot"):
        a_phi = stiffness.dot(phi)
    else:
        a_phi = np.asarray(stiffness) @ phi
    reduced = phi.T @ a_phi
    rows = phi[deim.indices, :].copy() if deim is not None else None
    return RomOperators(
        basis=basis, reduced_stiffness=reduced, deim=deim, basis_rows_at_points=rows
    )


@dataclass
class ReducedTrajectory:
    """Reduced coordinates over time: rows are levels ``a^0 .. a^M``."""

    coefficients: np.ndarray
    basis: ReducedBasis
    grid: Grid1D | Grid2D
    beta: float
    meta: dict = field(default_factory=dict)

    @property
    def steps(self) -> int:
        return self.coefficients.shape[0] - 1


def lift(traj: ReducedTrajectory, level: int = -1) -> np.ndarray:
    """Full-grid state ``Phi a`` at one time level."""
    return traj.basis.matrix @ traj.coefficients[level]


def _newton_reduced(rom, spec, step_mat, gam, hist, t, start, *, tol, cap):
    deim = rom.deim
    rows = rom.basis_rows_at_points
    f_pts = spec.source_at(deim.indices, t)
    a = start.copy()
    identity = np.eye(rom.dim)
    for it in range(1, cap + 1):
        u_pts = rows @ a
        f_nl = spec.reaction(u_pts) - f_pts
        res = step_mat @ a + gam * (deim.projector @ f_nl) - hist
        jac = step_mat + gam * deim.projector @ (spec.reaction_deriv(u_pts)[:, None] * rows)
        d = np.linalg.solve(jac, -res)
        a += d
        if np.linalg.norm(d) <= tol:
            return a, it
    u_pts = rows @ a
    res = step_mat @ a + gam * (deim.projector @ (spec.reaction(u_pts) - f_pts)) - hist
    raise GaussNewtonError(
        f"reduced Gauss-Newton did not converge within {cap} iterations",
        last_iterate=a,
        residual_norm=float(np.linalg.norm(res)),
        iterations=cap,
    )


def rom_solve(
    rom: RomOperators,
    spec: ProblemSpec,
    *,
    newton_tol: float = 1e-11,
    newton_max: int = 50,
) -> ReducedTrajectory:
    """March the reduced model for the given problem instance.

    The problem's grid must match the basis dimension.  Nonlinear problems
    require a DEIM operator; linear problems project the source for all time
    levels before entering the loop.
    """
    grid = spec.grid
    if grid.ndof != rom.basis.ndof:
        raise ValueError(
            f"grid has {grid.ndof} unknowns but the basis expects {rom.basis.ndof}"
        )
    if not spec.is_linear and rom.deim is None:
        raise ValueError("nonlinear problems require a DEIM operator in the reduced model")
    m_steps = grid.steps
    r = rom.dim
    weights = l1_weights(spec.beta, m_steps)
    gam = gamma_scale(spec.beta, grid.dt)
    step_mat = np.eye(r) + gam * rom.reduced_stiffness
    coeffs = np.zeros((m_steps + 1, r))
    coeffs[0] = rom.basis.project(spec.initial_vector())
    newton_total = 0

    if spec.is_linear and rom.deim is None:
        # Everything grid-sized happens here, before the time loop.
        phi = rom.basis.matrix
        if spec.source is None:
            projected_source = np.zeros((m_steps + 1, r))
        else:
            full = np.stack([spec.source_vector(m * grid.dt) for m in range(1, m_steps + 1)])
            projected_source = np.vstack([np.zeros(r), full @ phi])
        lu_piv = scipy.linalg.lu_factor(step_mat)
        for m in range(1, m_steps + 1):
            hist = history_rhs(coeffs[:m], weights.truncate(m))
            coeffs[m] = scipy.linalg.lu_solve(lu_piv, hist + gam * projected_source[m])
    elif spec.is_linear:
        # Linear problem with an interpolated source term.
        lu_piv = scipy.linalg.lu_factor(step_mat)
        deim = rom.deim
        for m in range(1, m_steps + 1):
            hist = history_rhs(coeffs[:m], weights.truncate(m))
            f_pts = spec.source_at(deim.indices, m * grid.dt)
            coeffs[m] = scipy.linalg.lu_solve(lu_piv, hist + gam * (deim.projector @ f_pts))
    else:
        for m in range(1, m_steps + 1):
            hist = history_rhs(coeffs[:m], weights.truncate(m))
            coeffs[m], iters = _newton_reduced(
                rom,
                spec,
                step_mat,
                gam,
                hist,
                m * grid.dt,
                coeffs[m - 1],
                tol=newton_tol,
                cap=newton_max,
            )
            newton_total += iters
    return ReducedTrajectory(
        coefficients=coeffs,
        basis=rom.basis,
        grid=grid,
        beta=spec.beta,
        meta={"newton_iterations": newton_total},
    )

"""Full-order finite-difference model for time-fractional diffusion-reaction.

The spatial operator is the flux form ``-d/dx (mu du/dx)`` discretized with
half-grid diffusion samples (a 3-point stencil in 1D, a 5-point stencil in
2D with a diagonal diffusion tensor).  Time stepping follows the L1 scheme:
at level ``m`` the system

    (I + gamma A) u^m + gamma F(u^m) = history

is solved, where ``F(u) = g(u) - f(., t_m)`` collects the reaction term and
the source, ``gamma`` is the L1 scaling, and ``history`` is the Caputo
memory term.  Linear problems take one direct or PCG solve per level;
nonlinear problems run a damped-free Gauss-Newton iteration warm-started
from the previous level.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np
import scipy.sparse as sp

from .fractional import gamma_scale, history_rhs, l1_weights
from .grid import Grid1D, Grid2D
from .linalg import SolverError, Tridiagonal, pcg_solve, thomas_solve

__all__ = [
    "ProblemSpec",
    "Trajectory",
    "GaussNewtonError",
    "assemble_stiffness_1d",
    "assemble_stiffness_2d",
    "assemble_stiffness",
    "fom_solve",
    "discrete_l2_error",
]


class GaussNewtonError(RuntimeError):
    """Gauss-Newton failed to converge within the iteration cap."""

    def __init__(self, message, *, last_iterate, residual_norm, iterations):
        super().__init__(message)
        self.last_iterate = last_iterate
        self.residual_norm = residual_norm
        self.iterations = iterations


@dataclass(frozen=True)
class ProblemSpec:
    """A single initial-boundary value problem instance.

    Parameters
    ----------
    grid:
        Space-time grid, 1D or 2D.
    beta:
        Fractional order of the time derivative, in (0, 1).
    diffusion:
        1D: a positive constant or callable ``mu(x)``.  2D: a constant, a
        pair ``(mu_x, mu_y)`` of constants or callables ``mu(x, y)``, or a
        diagonal 2x2 matrix.
    source:
        Source ``f(x, t)`` (1D) or ``f(x, y, t)`` (2D), vectorized over the
        spatial arguments; ``None`` means zero.
    initial:
        Initial value ``u0(x)`` or ``u0(x, y)``; ``None`` means zero.
    reaction / reaction_deriv:
        Nonlinear reaction ``g(u)`` and its derivative ``g'(u)``, elementwise
        callables; both ``None`` for a linear problem.
    """

    grid: Grid1D | Grid2D
    beta: float
    diffusion: object = 1.0
    source: Callable | None = None
    initial: Callable | None = None
    reaction: Callable | None = None
    reaction_deriv: Callable | None = None
    label: str = ""

    def __post_init__(self):
        if not 0.0 < self.beta < 1.0:
            raise ValueError(f"fractional order must lie in (0, 1), got {self.beta}")
        if (self.reaction is None) != (self.reaction_deriv is None):
            raise ValueError("reaction and reaction_deriv must be given together")

    @property
    def is_linear(self) -> bool:
        return self.reaction is None

    def with_beta(self, beta: float) -> "ProblemSpec":
        """Same problem data with a different fractional order."""
        return replace(self, beta=float(beta))

    def initial_vector(self) -> np.ndarray:
        if self.initial is None:
            return np.zeros(self.grid.ndof)
        if self.grid.dim == 1:
            return np.asarray(self.initial(self.grid.nodes()), dtype=np.float64)
        x, y = self.grid.mesh()
        return np.asarray(self.initial(x, y), dtype=np.float64)

    def source_vector(self, t: float) -> np.ndarray:
        if self.source is None:
            return np.zeros(self.grid.ndof)
        if self.grid.dim == 1:
            return np.broadcast_to(
                np.asarray(self.source(self.grid.nodes(), t), dtype=np.float64), (self.grid.ndof,)
            ).copy()
        x, y = self.grid.mesh()
        return np.broadcast_to(
            np.asarray(self.source(x, y, t), dtype=np.float64), (self.grid.ndof,)
        ).copy()

    def source_at(self, indices: np.ndarray, t: float) -> np.ndarray:
        """Source values at selected flat node indices only."""
        if self.source is None:
            return np.zeros(len(indices))
        if self.grid.dim == 1:
            xs = self.grid.nodes()[indices]
            return np.broadcast_to(
                np.asarray(self.source(xs, t), dtype=np.float64), (len(indices),)
            ).copy()
        x, y = self.grid.mesh()
        return np.broadcast_to(
            np.asarray(self.source(x[indices], y[indices], t), dtype=np.float64), (len(indices),)
        ).copy()


@dataclass
class Trajectory:
    """Time history of a full-order solve: rows are levels ``u^0 .. u^M``."""

    states: np.ndarray
    grid: Grid1D | Grid2D
    beta: float
    meta: dict = field(default_factory=dict)

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]

    @property
    def steps(self) -> int:
        return self.states.shape[0] - 1


def _as_scalar_field(mu) -> Callable:
    if callable(mu):
        return mu
    value = float(mu)
    if value <= 0.0:
        raise ValueError(f"diffusion coefficient must be positive, got {value}")
    return lambda *args: np.full_like(np.asarray(args[0], dtype=np.float64), value)


def _as_tensor_pair(diffusion) -> tuple[Callable, Callable]:
    if callable(diffusion) or np.isscalar(diffusion):
        f = _as_scalar_field(diffusion)
        return f, f
    arr = np.asarray(diffusion, dtype=object)
    if arr.shape == (2,):
        return _as_scalar_field(arr[0]), _as_scalar_field(arr[1])
    mat = np.asarray(diffusion, dtype=np.float64)
    if mat.shape == (2, 2):
        if mat[0, 1] != 0.0 or mat[1, 0] != 0.0:
            raise ValueError("off-diagonal diffusion tensor entries are not supported")
        return _as_scalar_field(mat[0, 0]), _as_scalar_field(mat[1, 1])
    raise ValueError("2D diffusion must be a scalar, a pair, or a diagonal 2x2 matrix")


def assemble_stiffness_1d(diffusion, grid: Grid1D) -> Tridiagonal:
    """Stiffness matrix of ``-d/dx (mu du/dx)`` on the interior nodes."""
    mu = _as_scalar_field(diffusion)
    eta = np.asarray(mu(grid.half_nodes()), dtype=np.float64) / grid.h**2
    eta = np.broadcast_to(eta, (grid.n + 1,))
    if np.any(eta <= 0.0):
        raise ValueError("diffusion samples must be positive at all half-grid points")
    diag = eta[:-1] + eta[1:]
    off = -eta[1:-1]
    return Tridiagonal(lower=off.copy(), diag=diag, upper=off.copy())


def assemble_stiffness_2d(diffusion, grid: Grid2D) -> sp.csr_matrix:
    """Five-point stiffness matrix with a diagonal diffusion tensor.

    Unknowns are ordered x-fastest; the matrix is symmetric with positive
    diagonal.
    """
    mu_x, mu_y = _as_tensor_pair(diffusion)
    n = grid.n
    xs, ys = grid.x_nodes(), grid.y_nodes()
    xh, yh = grid.x_half(), grid.y_half()
    # ex[k, j] couples (k-1, j)-(k, j); ey[i, k] couples (i, k-1)-(i, k)
    ex = np.broadcast_to(
        np.asarray(mu_x(xh[:, None], ys[None, :]), dtype=np.float64), (n + 1, n)
    ) / grid.hx**2
    ey = np.broadcast_to(
        np.asarray(mu_y(xs[:, None], yh[None, :]), dtype=np.float64), (n, n + 1)
    ) / grid.hy**2
    if np.any(ex <= 0.0) or np.any(ey <= 0.0):
        raise ValueError("diffusion samples must be positive at all half-grid points")

    i = np.tile(np.arange(n), n)
    j = np.repeat(np.arange(n), n)
    p = j * n + i
    diag = ex[i, j] + ex[i + 1, j] + ey[i, j] + ey[i, j + 1]

    rows = [p]
    cols = [p]
    vals = [diag]
    east = i < n - 1
    rows.append(p[east])
    cols.append(p[east] + 1)
    vals.append(-ex[i[east] + 1, j[east]])
    west = i > 0
    rows.append(p[west])
    cols.append(p[west] - 1)
    vals.append(-ex[i[west], j[west]])
    north = j < n - 1
    rows.append(p[north])
    cols.append(p[north] + n)
    vals.append(-ey[i[north], j[north] + 1])
    south = j > 0
    rows.append(p[south])
    cols.append(p[south] - n)
    vals.append(-ey[i[south], j[south]])

    mat = sp.coo_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(n * n, n * n),
    )
    return mat.tocsr()


def assemble_stiffness(spec: ProblemSpec):
    """Stiffness matrix for the spec's grid and diffusion field."""
    if spec.grid.dim == 1:
        return assemble_stiffness_1d(spec.diffusion, spec.grid)
    return assemble_stiffness_2d(spec.diffusion, spec.grid)


def discrete_l2_error(u: np.ndarray, v: np.ndarray, weight: float) -> float:
    """Weighted discrete L2 distance ``sqrt(sum weight * |u_i - v_i|^2)``.

    ``weight`` is the mesh width in 1D and the cell area in 2D
    (``grid.cell_weight``).
    """
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape:
        raise ValueError(f"shape mismatch: {u.shape} vs {v.shape}")
    diff = u - v
    return float(np.sqrt(weight * np.dot(diff, diff)))


def _newton_1d(spec, step_tri, gam, hist, fvec, start, *, tol, cap):
    u = start.copy()
    for it in range(1, cap + 1):
        fval = spec.reaction(u) - fvec
        res = step_tri.matvec(u) + gam * fval - hist
        jac_diag = step_tri.diag + gam * spec.reaction_deriv(u)
        d = thomas_solve(step_tri.lower, jac_diag, step_tri.upper, -res)
        u += d
        if np.linalg.norm(d) <= tol:
            return u, it
    fval = spec.reaction(u) - fvec
    res = step_tri.matvec(u) + gam * fval - hist
    raise GaussNewtonError(
        f"Gauss-Newton did not converge within {cap} iterations",
        last_iterate=u,
        residual_norm=float(np.linalg.norm(res)),
        iterations=cap,
    )


def _newton_2d(spec, step_mat, step_diag, gam, hist, fvec, start, *, tol, cap, pcg_tol, pcg_max):
    u = start.copy()
    for it in range(1, cap + 1):
        fval = spec.reaction(u) - fvec
        res = step_mat.dot(u) + gam * fval - hist
        gp = gam * spec.reaction_deriv(u)
        jac_diag = step_diag + gp
        matvec = lambda v: step_mat.dot(v) + gp * v  # noqa: E731
        d = pcg_solve(
            matvec, -res, tol=pcg_tol, max_iter=pcg_max, precond=lambda r: r / jac_diag
        )
        u += d
        if np.linalg.norm(d) <= tol:
            return u, it
    fval = spec.reaction(u) - fvec
    res = step_mat.dot(u) + gam * fval - hist
    raise GaussNewtonError(
        f"Gauss-Newton did not converge within {cap} iterations",
        last_iterate=u,
        residual_norm=float(np.linalg.norm(res)),
        iterations=cap,
    )


def fom_solve(
    spec: ProblemSpec,
    *,
    newton_tol: float = 1e-10,
    newton_max: int = 50,
    pcg_tol: float = 1e-10,
    pcg_max: int | None = None,
) -> Trajectory:
    """March the full-order model over all time levels.

    Returns a :class:`Trajectory` with ``steps + 1`` rows.  The ``meta``
    dict records the number of linear solves and Gauss-Newton iterations
    for benchmarking.
    """
    grid = spec.grid
    m_steps = grid.steps
    weights = l1_weights(spec.beta, m_steps)
    gam = gamma_scale(spec.beta, grid.dt)
    states = np.zeros((m_steps + 1, grid.ndof))
    states[0] = spec.initial_vector()
    linear_solves = 0
    newton_total = 0

    if grid.dim == 1:
        stiff = assemble_stiffness_1d(spec.diffusion, grid)
        step_tri = Tridiagonal(
            lower=gam * stiff.lower, diag=1.0 + gam * stiff.diag, upper=gam * stiff.upper
        )
        for m in range(1, m_steps + 1):
            t = m * grid.dt
            hist = history_rhs(states[:m], weights.truncate(m))
            fvec = spec.source_vector(t)
            if spec.is_linear:
                states[m] = thomas_solve(
                    step_tri.lower, step_tri.diag, step_tri.upper, hist + gam * fvec
                )
                linear_solves += 1
            else:
                states[m], iters = _newton_1d(
                    spec, step_tri, gam, hist, fvec, states[m - 1], tol=newton_tol, cap=newton_max
                )
                newton_total += iters
                linear_solves += iters
    else:
        stiff = assemble_stiffness_2d(spec.diffusion, grid)
        step_mat = (sp.identity(grid.ndof, format="csr") + gam * stiff).tocsr()
        step_diag = step_mat.diagonal()
        jacobi = lambda r: r / step_diag  # noqa: E731
        for m in range(1, m_steps + 1):
            t = m * grid.dt
            hist = history_rhs(states[:m], weights.truncate(m))
            fvec = spec.source_vector(t)
            if spec.is_linear:
                states[m] = pcg_solve(
                    step_mat, hist + gam * fvec, tol=pcg_tol, max_iter=pcg_max, precond=jacobi
                )
                linear_solves += 1
            else:
                states[m], iters = _newton_2d(
                    spec,
                    step_mat,
                    step_diag,
                    gam,
                    hist,
                    fvec,
                    states[m - 1],
                    tol=newton_tol,
                    cap=newton_max,
                    pcg_tol=pcg_tol,
                    pcg_max=pcg_max,
                )
                newton_total += iters
                linear_solves += iters
    return Trajectory(
        states=states,
        grid=grid,
        beta=spec.beta,
        meta={"linear_solves": linear_solves, "newton_iterations": newton_total},
    )

"""Figure rendering for solver outputs and benchmark reports.

Everything here draws with the Agg backend and writes straight to files, so
the CLI can emit figures next to its CSV output on headless machines.  Each
helper returns the path it wrote.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be pinned first)
import numpy as np

from .grid import Grid1D, Grid2D
from .inverse import IdentificationResult
from .reference import ErrorTable

__all__ = [
    "save_state",
    "save_singular_values",
    "save_basis",
    "save_deim_points",
    "save_identification",
    "save_table_figure",
]

_DPI = 150


def _finish(fig, path) -> str:
    path = str(path)
    fig.savefig(path, dpi=_DPI, bbox_inches="tight")
    plt.close(fig)
    return path


def _as_square(grid: Grid2D, values: np.ndarray) -> np.ndarray:
    # unknowns are x-fastest, so row j of the square array is the line y=y_j
    return np.asarray(values).reshape(grid.n, grid.n)


def save_state(grid, values: np.ndarray, path, *, title: str = "") -> str:
    """Line plot (1D) or filled contour (2D) of a nodal field."""
    values = np.asarray(values)
    if isinstance(grid, Grid1D):
        fig, ax = plt.subplots(figsize=(5.5, 3.5))
        x = np.concatenate(([grid.lo], grid.nodes(), [grid.hi]))
        u = np.concatenate(([0.0], values, [0.0]))
        ax.plot(x, u, lw=1.5)
        ax.set_xlabel("x")
        ax.set_ylabel("u")
    else:
        fig, ax = plt.subplots(figsize=(5.0, 4.2))
        im = ax.pcolormesh(grid.x_nodes(), grid.y_nodes(), _as_square(grid, values), shading="auto")
        fig.colorbar(im, ax=ax)
        ax.set_xlabel("x")
        ax.set_ylabel("y")
        ax.set_aspect("equal")
    if title:
        ax.set_title(title)
    return _finish(fig, path)


def save_singular_values(path, state_sv: np.ndarray, nonlinear_sv: np.ndarray | None = None) -> str:
    """Singular-value decay of the snapshot matrices (semilog)."""
    fig, ax = plt.subplots(figsize=(5.5, 3.5))
    sv = np.asarray(state_sv)
    ax.semilogy(np.arange(1, sv.size + 1), sv, "o-", ms=4, label="state snapshots")
    if nonlinear_sv is not None:
        nsv = np.asarray(nonlinear_sv)
        ax.semilogy(np.arange(1, nsv.size + 1), nsv, "s--", ms=4, label="nonlinear snapshots")
        ax.legend()
    ax.set_xlabel("index")
    ax.set_ylabel("singular value")
    ax.set_title("snapshot spectrum")
    return _finish(fig, path)


def save_basis(grid, basis_matrix: np.ndarray, path, *, count: int = 4, title: str = "") -> str:
    """First few basis vectors: overlaid lines (1D) or a panel grid (2D)."""
    phi = np.asarray(basis_matrix)
    count = min(count, phi.shape[1])
    if isinstance(grid, Grid1D):
        fig, ax = plt.subplots(figsize=(5.5, 3.5))
        x = grid.nodes()
        for k in range(count):
            ax.plot(x, phi[:, k], lw=1.2, label=f"basis {k + 1}")
        ax.set_xlabel("x")
        ax.legend(fontsize=8)
        if title:
            ax.set_title(title)
    else:
        ncols = 2
        nrows = (count + 1) // 2
        fig, axes = plt.subplots(nrows, ncols, figsize=(8.0, 3.4 * nrows), squeeze=False)
        for k in range(nrows * ncols):
            ax = axes[k // ncols][k % ncols]
            if k >= count:
                ax.axis("off")
                continue
            im = ax.pcolormesh(
                grid.x_nodes(), grid.y_nodes(), _as_square(grid, phi[:, k]), shading="auto"
            )
            fig.colorbar(im, ax=ax)
            ax.set_title(f"basis {k + 1}", fontsize=9)
            ax.set_aspect("equal")
        if title:
            fig.suptitle(title)
    return _finish(fig, path)


def save_deim_points(grid, nonlinear_basis: np.ndarray, indices: np.ndarray, path) -> str:
    """Interpolation point locations over the leading nonlinear basis vectors."""
    psi = np.asarray(nonlinear_basis)
    idx = np.asarray(indices)
    if isinstance(grid, Grid1D):
        fig, ax = plt.subplots(figsize=(5.5, 3.5))
        x = grid.nodes()
        for k in range(min(4, psi.shape[1])):
            ax.plot(x, psi[:, k], lw=1.0, alpha=0.8)
        for i in idx:
            ax.axvline(x[i], color="k", ls=":", lw=0.8)
        ax.plot(x[idx], np.zeros(idx.size), "kv", ms=7, label="interpolation points")
        ax.set_xlabel("x")
        ax.legend(fontsize=8)
    else:
        fig, ax = plt.subplots(figsize=(5.0, 4.2))
        im = ax.pcolormesh(
            grid.x_nodes(), grid.y_nodes(), _as_square(grid, psi[:, 0]), shading="auto"
        )
        fig.colorbar(im, ax=ax)
        xs, ys = grid.mesh()
        ax.plot(xs[idx], ys[idx], "k^", ms=8, mfc="w", label="interpolation points")
        ax.legend(fontsize=8)
        ax.set_aspect("equal")
    ax.set_title("interpolation points")
    return _finish(fig, path)


def save_identification(
    path,
    results: dict[str, IdentificationResult],
    beta_star: float | None = None,
) -> str:
    """Error and objective versus iteration for one or more identification runs."""
    fig, (ax_err, ax_obj) = plt.subplots(1, 2, figsize=(9.5, 3.6))
    for label, res in results.items():
        ks = [rec.k for rec in res.trace]
        objs = [rec.objective for rec in res.trace]
        if beta_star is not None:
            errs = [abs(beta_star - rec.beta) for rec in res.trace]
            ax_err.semilogy(ks, np.maximum(errs, 1e-16), "o-", ms=3, label=label)
        ax_obj.semilogy(ks, np.maximum(objs, 1e-30), "o-", ms=3, label=label)
    ax_err.set_xlabel("iteration")
    ax_err.set_ylabel("order error")
    ax_obj.set_xlabel("iteration")
    ax_obj.set_ylabel("objective")
    if beta_star is None:
        ax_err.axis("off")
    if results:
        ax_obj.legend(fontsize=7)
        if beta_star is not None:
            ax_err.legend(fontsize=7)
    return _finish(fig, path)


def save_table_figure(result, path) -> str:
    """Visual diff of a reproduced table against its reference rows."""
    ref = result.artifacts.get("reference")
    if isinstance(ref, ErrorTable):
        fig, ax = plt.subplots(figsize=(5.5, 3.6))
        roms = result.artifacts["rom_errors"]
        foms = result.artifacts["fom_errors"]
        betas = sorted(roms)
        ax.semilogy(betas, [roms[b] for b in betas], "o-", ms=4, label="reduced model")
        ax.semilogy(sorted(foms), [foms[b] for b in sorted(foms)], "s", ms=6, mfc="none", label="full model")
        ref_betas = sorted(ref.rom_errors)
        ax.semilogy(ref_betas, [ref.rom_errors[b] for b in ref_betas], "k:", lw=1, label="reference")
        ax.set_xlabel("fractional order")
        ax.set_ylabel("final-time error")
        ax.legend(fontsize=8)
        ax.set_title(result.title, fontsize=9)
        return _finish(fig, path)

    # identification and comparison tables: plot the stored run traces
    results = result.artifacts.get("results", {})
    beta_star = getattr(ref, "beta_star", None)
    labeled = {}
    for key, res in results.items():
        if isinstance(key, tuple):
            label = ", ".join(str(k) for k in key)
        else:
            label = str(key)
        labeled[label] = res
    return save_identification(path, labeled, beta_star)

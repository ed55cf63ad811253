"""Uniform space-time grids with homogeneous Dirichlet boundaries.

Only interior nodes are unknowns; boundary values are identically zero and
never stored.  Two-dimensional grids order unknowns lexicographically with
the x index fastest, so the flat index of node ``(i, j)`` is ``j * n + i``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = ["Grid1D", "Grid2D"]


def _check_common(lo, hi, n, t_final, steps):
    if hi <= lo:
        raise ValueError(f"empty spatial interval [{lo}, {hi}]")
    if n < 1:
        raise ValueError("need at least one interior node")
    if steps < 1:
        raise ValueError("need at least one time step")
    if t_final <= 0.0:
        raise ValueError("final time must be positive")


@dataclass(frozen=True)
class Grid1D:
    """Interval ``[lo, hi]`` with ``n`` interior nodes and ``steps`` time levels."""

    lo: float = 0.0
    hi: float = 1.0
    n: int = 63
    t_final: float = 1.0
    steps: int = 64

    def __post_init__(self):
        _check_common(self.lo, self.hi, self.n, self.t_final, self.steps)

    @property
    def h(self) -> float:
        return (self.hi - self.lo) / (self.n + 1)

    @property
    def dt(self) -> float:
        return self.t_final / self.steps

    @property
    def ndof(self) -> int:
        return self.n

    @property
    def dim(self) -> int:
        return 1

    @property
    def cell_weight(self) -> float:
        """Quadrature weight of the discrete L2 norm (mesh width)."""
        return self.h

    def nodes(self) -> np.ndarray:
        """Interior node coordinates ``lo + i*h`` for ``i = 1 .. n``."""
        return self.lo + self.h * np.arange(1, self.n + 1)

    def half_nodes(self) -> np.ndarray:
        """Half-grid coordinates ``lo + (i + 1/2)*h`` for ``i = 0 .. n``."""
        return self.lo + self.h * (np.arange(self.n + 1) + 0.5)

    def times(self) -> np.ndarray:
        return self.dt * np.arange(self.steps + 1)


@dataclass(frozen=True)
class Grid2D:
    """Rectangle ``[x_lo, x_hi] x [y_lo, y_hi]`` with ``n`` interior nodes per axis."""

    x_lo: float = 0.0
    x_hi: float = 1.0
    y_lo: float = 0.0
    y_hi: float = 1.0
    n: int = 63
    t_final: float = 1.0
    steps: int = 64

    def __post_init__(self):
        _check_common(self.x_lo, self.x_hi, self.n, self.t_final, self.steps)
        if self.y_hi <= self.y_lo:
            raise ValueError(f"empty spatial interval [{self.y_lo}, {self.y_hi}]")

    @property
    def hx(self) -> float:
        return (self.x_hi - self.x_lo) / (self.n + 1)

    @property
    def hy(self) -> float:
        return (self.y_hi - self.y_lo) / (self.n + 1)

    @property
    def dt(self) -> float:
        return self.t_final / self.steps

    @property
    def ndof(self) -> int:
        return self.n * self.n

    @property
    def dim(self) -> int:
        return 2

    @property
    def cell_weight(self) -> float:
        """Quadrature weight of the discrete L2 norm (cell area)."""
        return self.hx * self.hy

    def x_nodes(self) -> np.ndarray:
        return self.x_lo + self.hx * np.arange(1, self.n + 1)

    def y_nodes(self) -> np.ndarray:
        return self.y_lo + self.hy * np.arange(1, self.n + 1)

    def x_half(self) -> np.ndarray:
        return self.x_lo + self.hx * (np.arange(self.n + 1) + 0.5)

    def y_half(self) -> np.ndarray:
        return self.y_lo + self.hy * (np.arange(self.n + 1) + 0.5)

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        """Flat coordinate arrays ``(X, Y)`` in unknown ordering (x fastest)."""
        xs = self.x_nodes()
        ys = self.y_nodes()
        return np.tile(xs, self.n), np.repeat(ys, self.n)

    def times(self) -> np.ndarray:
        return self.dt * np.arange(self.steps + 1)

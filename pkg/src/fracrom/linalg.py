"""Direct and iterative solvers for the step systems.

One-dimensional problems produce tridiagonal systems solved by the Thomas
algorithm; two-dimensional problems use preconditioned conjugate gradients
with a Jacobi preconditioner by default.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

__all__ = ["Tridiagonal", "thomas_solve", "pcg_solve", "SolverError"]


class SolverError(RuntimeError):
    """A linear solve failed (breakdown or iteration cap)."""


@dataclass(frozen=True)
class Tridiagonal:
    """Tridiagonal matrix stored by bands.

    ``lower[i]`` sits on row ``i+1``, ``upper[i]`` on row ``i``; both bands
    have length ``n - 1``.
    """

    lower: np.ndarray
    diag: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        n = self.diag.size
        if self.lower.size != n - 1 or self.upper.size != n - 1:
            raise ValueError("band lengths do not match the diagonal")

    @property
    def n(self) -> int:
        return int(self.diag.size)

    def matvec(self, v: np.ndarray) -> np.ndarray:
        out = self.diag * v
        out[:-1] += self.upper * v[1:]
        out[1:] += self.lower * v[:-1]
        return out

    def to_dense(self) -> np.ndarray:
        out = np.diag(self.diag)
        out[np.arange(self.n - 1), np.arange(1, self.n)] = self.upper
        out[np.arange(1, self.n), np.arange(self.n - 1)] = self.lower
        return out

    def matmat(self, other: np.ndarray) -> np.ndarray:
        out = self.diag[:, None] * other
        out[:-1] += self.upper[:, None] * other[1:]
        out[1:] += self.lower[:, None] * other[:-1]
        return out


def thomas_solve(lower, diag, upper, rhs) -> np.ndarray:
    """Solve a tridiagonal system by single-pass elimination.

    Bands follow the :class:`Tridiagonal` convention.  The sweep has no
    pivoting, which is safe for the diagonally dominant step matrices
    assembled here; a vanishing pivot raises :class:`SolverError`.
    """
    d = np.asarray(diag, dtype=np.float64)
    lo = np.asarray(lower, dtype=np.float64)
    up = np.asarray(upper, dtype=np.float64)
    b = np.asarray(rhs, dtype=np.float64)
    n = d.size
    if b.size != n or lo.size != n - 1 or up.size != n - 1:
        raise ValueError("band or right-hand-side lengths do not match")
    pivot = np.empty(n)
    scratch = np.empty(max(n - 1, 0))
    x = np.empty(n)
    pivot[0] = d[0]
    if pivot[0] == 0.0:
        raise SolverError("zero pivot in forward sweep at row 0")
    x[0] = b[0]
    for i in range(1, n):
        w = lo[i - 1] / pivot[i - 1]
        pivot[i] = d[i] - w * up[i - 1]
        if pivot[i] == 0.0:
            raise SolverError(f"zero pivot in forward sweep at row {i}")
        x[i] = b[i] - w * x[i - 1]
        scratch[i - 1] = w
    x[n - 1] /= pivot[n - 1]
    for i in range(n - 2, -1, -1):
        x[i] = (x[i] - up[i] * x[i + 1]) / pivot[i]
    return x


def pcg_solve(
    matvec,
    rhs: np.ndarray,
    *,
    tol: float = 1e-10,
    max_iter: int | None = None,
    precond: Callable[[np.ndarray], np.ndarray] | None = None,
) -> np.ndarray:
    """Preconditioned conjugate gradients for a symmetric positive system.

    Parameters
    ----------
    matvec:
        Callable ``v -> A v``, or any object with a ``dot`` method (dense or
        sparse matrix).
    rhs:
        Right-hand side vector.
    tol:
        Relative residual target ``||b - A x|| <= tol * ||b||``.
    max_iter:
        Iteration cap, default ``10 * n``; exceeding it raises
        :class:`SolverError`.
    precond:
        Callable applying the preconditioner inverse to a vector.  ``None``
        means the identity.
    """
    if not callable(matvec):
        mat = matvec
        matvec = lambda v: mat.dot(v)  # noqa: E731
    b = np.asarray(rhs, dtype=np.float64)
    b_norm = float(np.linalg.norm(b))
    if b_norm == 0.0:
        return np.zeros_like(b)
    limit = 10 * b.size if max_iter is None else int(max_iter)
    x = np.zeros_like(b)
    r = b.copy()
    z = precond(r) if precond is not None else r
    p = z.copy()
    rz = float(r @ z)
    for _ in range(limit):
        ap = matvec(p)
        denom = float(p @ ap)
        if denom <= 0.0:
            raise SolverError("conjugate gradients broke down: matrix not positive definite")
        alpha = rz / denom
        x += alpha * p
        r -= alpha * ap
        if np.linalg.norm(r) <= tol * b_norm:
            return x
        z = precond(r) if precond is not None else r
        rz_next = float(r @ z)
        p = z + (rz_next / rz) * p
        rz = rz_next
    raise SolverError(f"conjugate gradients did not reach tol={tol} within {limit} iterations")

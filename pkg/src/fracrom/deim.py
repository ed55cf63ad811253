"""Discrete empirical interpolation of nonlinear terms.

Given an orthonormal nonlinear-term basis ``Psi`` (columns), the greedy
selection picks one interpolation row per basis vector: the first row
maximizes ``|psi_1|``, each later row maximizes the residual of the current
vector interpolated through the rows chosen so far.  Ties resolve to the
lowest row index.  The resulting operator evaluates the nonlinear term at
the ``s`` selected rows only and projects onto the state basis through
``Q = Phi^T Psi (P^T Psi)^{-1}``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
import scipy.linalg

from .pod import ReducedBasis

__all__ = ["DeimError", "DeimOperator", "deim_select", "build_deim_operator", "apply_deim"]


class DeimError(RuntimeError):
    """DEIM construction failed (dependent or degenerate basis columns)."""


def _basis_array(basis) -> np.ndarray:
    mat = basis.matrix if isinstance(basis, ReducedBasis) else np.asarray(basis, dtype=np.float64)
    if mat.ndim != 2 or mat.shape[1] < 1:
        raise ValueError("basis must be a 2D array with at least one column")
    return mat


def deim_select(basis) -> np.ndarray:
    """Greedy interpolation rows for a nonlinear-term basis.

    Returns ``s`` distinct 0-based row indices, one per basis column, in
    selection order.  The selection is deterministic: ``argmax`` breaks
    ties at the lowest index.
    """
    psi = _basis_array(basis)
    n, s = psi.shape
    if s > n:
        raise ValueError("cannot select more rows than the basis has")
    indices = np.empty(s, dtype=np.intp)
    indices[0] = int(np.argmax(np.abs(psi[:, 0])))
    if np.abs(psi[indices[0], 0]) == 0.0:
        raise DeimError("first basis column is identically zero")
    for col in range(1, s):
        chosen = indices[:col]
        try:
            coef = np.linalg.solve(psi[chosen, :col], psi[chosen, col])
        except np.linalg.LinAlgError as exc:
            raise DeimError(f"interpolation system singular at column {col}") from exc
        residual = psi[:, col] - psi[:, :col] @ coef
        indices[col] = int(np.argmax(np.abs(residual)))
        if np.abs(residual[indices[col]]) == 0.0:
            raise DeimError(f"basis column {col} is dependent on earlier columns")
    if len(set(indices.tolist())) != s:
        raise DeimError("selected rows are not distinct")
    return indices


@dataclass(frozen=True)
class DeimOperator:
    """Precomputed interpolation data.

    ``projector`` is the ``r x s`` matrix ``Phi^T Psi (P^T Psi)^{-1}``; the
    LU factorization of ``P^T Psi`` is retained for reconstructing full
    fields in diagnostics.
    """

    indices: np.ndarray
    nonlinear_basis: np.ndarray
    projector: np.ndarray
    lu_factors: tuple

    @property
    def n_points(self) -> int:
        return int(self.indices.size)

    def interpolation_coefficients(self, values_at_points: np.ndarray) -> np.ndarray:
        """Coefficients ``c`` with ``(P^T Psi) c = values``."""
        return scipy.linalg.lu_solve(self.lu_factors, values_at_points)

    def reconstruct(self, values_at_points: np.ndarray) -> np.ndarray:
        """Full-length interpolant ``Psi (P^T Psi)^{-1} values``."""
        return self.nonlinear_basis @ self.interpolation_coefficients(values_at_points)


def build_deim_operator(state_basis, nonlinear_basis, indices=None) -> DeimOperator:
    """Assemble the interpolation operator for given state/nonlinear bases.

    ``indices`` defaults to :func:`deim_select` on the nonlinear basis.  The
    ``s x s`` system ``P^T Psi`` is LU-factored once here and reused for
    every later application.
    """
    phi = _basis_array(state_basis)
    psi = _basis_array(nonlinear_basis)
    if phi.shape[0] != psi.shape[0]:
        raise ValueError("state and nonlinear bases must share the grid dimension")
    idx = deim_select(psi) if indices is None else np.asarray(indices, dtype=np.intp)
    if idx.size != psi.shape[1]:
        raise ValueError("need exactly one interpolation row per basis column")
    core = psi[idx, :]
    lu, piv = scipy.linalg.lu_factor(core)
    if np.any(np.abs(np.diag(lu)) < 1e-14 * max(1.0, float(np.abs(core).max()))):
        raise DeimError("interpolation core is numerically singular")
    projector = scipy.linalg.lu_solve((lu, piv), (phi.T @ psi).T, trans=1).T
    return DeimOperator(
        indices=idx, nonlinear_basis=psi, projector=projector, lu_factors=(lu, piv)
    )


def apply_deim(op: DeimOperator, nonlinear_eval: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    """Reduced nonlinear term from point evaluations only.

    ``nonlinear_eval`` receives the selected row indices and must return the
    nonlinear term at exactly those rows, in order.  No other component of
    the full field is ever requested.
    """
    values = np.asarray(nonlinear_eval(op.indices), dtype=np.float64)
    if values.shape != (op.n_points,):
        raise ValueError(
            f"evaluator returned shape {values.shape}, expected ({op.n_points},)"
        )
    return op.projector @ values

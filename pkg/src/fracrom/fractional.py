"""Discrete Caputo-derivative machinery.

The time-fractional derivative of order ``beta`` in (0, 1) is discretized by
the L1 scheme on a uniform time grid.  Writing ``b_j = (j+1)^(1-beta) -
j^(1-beta)``, the derivative at level ``m`` is approximated by a weighted sum
of backward differences of the state history.  Rearranged for time stepping,
each level solves a spatial problem whose right-hand side carries a memory
term over all previous levels; :func:`history_rhs` evaluates that term and
:func:`gamma_scale` gives the scaling ``dt^beta * Gamma(2 - beta)`` that
multiplies the spatial operator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

__all__ = ["L1Weights", "l1_weights", "gamma_scale", "history_rhs"]


def _require_order(beta: float) -> float:
    beta = float(beta)
    if not 0.0 < beta < 1.0:
        raise ValueError(f"fractional order must lie strictly in (0, 1), got {beta}")
    return beta


@dataclass(frozen=True)
class L1Weights:
    """L1 quadrature weights ``b_0 .. b_{m-1}`` for a fixed order.

    The sequence starts at exactly 1, decreases strictly toward zero, and
    satisfies the telescoping identity
    ``sum_j (b_j - b_{j+1}) + b_{m-1} = 1``.  The ``values`` array is
    read-only; it may be a shared cache entry.
    """

    beta: float
    values: np.ndarray

    def __len__(self) -> int:
        return int(self.values.size)

    def truncate(self, m: int) -> "L1Weights":
        """First ``m`` weights as a view; the sequence is m-independent."""
        if not 1 <= m <= len(self):
            raise ValueError(f"cannot truncate {len(self)} weights to {m}")
        return L1Weights(self.beta, self.values[:m])


@lru_cache(maxsize=256)
def _l1_values(beta: float, m: int) -> np.ndarray:
    j = np.arange(m + 1, dtype=np.float64)
    powers = j ** (1.0 - beta)
    b = powers[1:] - powers[:-1]
    b.setflags(write=False)
    return b


def l1_weights(beta: float, m: int) -> L1Weights:
    """Weights ``b_j = (j+1)^(1-beta) - j^(1-beta)`` for ``j = 0 .. m-1``.

    Results are cached per ``(beta, m)`` pair; the cache is thread-safe and
    the returned array is immutable.
    """
    beta = _require_order(beta)
    m = int(m)
    if m < 1:
        raise ValueError("at least one weight is required")
    return L1Weights(beta, _l1_values(beta, m))


def gamma_scale(beta: float, dt: float) -> float:
    """Scaling factor ``gamma = dt^beta * Gamma(2 - beta)`` of the L1 scheme."""
    beta = _require_order(beta)
    dt = float(dt)
    if dt <= 0.0:
        raise ValueError(f"time step must be positive, got {dt}")
    return dt**beta * math.gamma(2.0 - beta)


def history_rhs(history, weights: L1Weights):
    """Memory term of the L1 scheme at level ``m``.

    Evaluates ``sum_{j=1}^{m-1} (b_{j-1} - b_j) u^{m-j} + b_{m-1} u^0`` for a
    state history ``u^0 .. u^{m-1}``.

    Parameters
    ----------
    history:
        Array of shape ``(m, n)`` whose rows are the previous states in time
        order, or shape ``(m,)`` for a scalar equation.
    weights:
        L1 weights of length exactly ``m``.

    Returns
    -------
    Vector of length ``n`` (or a float in the scalar case).
    """
    hist = np.asarray(history, dtype=np.float64)
    scalar = hist.ndim == 1
    if scalar:
        hist = hist[:, None]
    if hist.ndim != 2:
        raise ValueError("history must be a stack of state vectors")
    m = hist.shape[0]
    if m != len(weights):
        raise ValueError(f"history holds {m} states but {len(weights)} weights were given")
    b = weights.values
    if m == 1:
        out = b[0] * hist[0]
    else:
        coeff = np.empty(m, dtype=np.float64)
        coeff[0] = b[m - 1]
        coeff[1:] = (b[: m - 1] - b[1:m])[::-1]
        out = coeff @ hist
    return float(out[0]) if scalar else out

"""Identification of the fractional order from final-time observations.

Given observation values ``g`` on the grid and a forward map
``beta -> u(., T; beta)``, the loop minimizes

    F(beta) = 1/2 * sum_i (u(x_i, T; beta) - g_i)^2

by a Levenberg-Marquardt iteration: the scalar sensitivity ``J`` comes from
a one-sided finite difference of the forward map, the step direction is
``d = -J.r / (J.J + alpha_k)`` with a halving schedule on ``alpha_k``, and
an Armijo backtracking line search guards the update.  The unregularized
Gauss-Newton direction (``alpha`` dropped) is available as a switch.  The
iteration keeps ``beta`` inside the open interval (0, 1) and stops when the
accepted step falls below the tolerance.
"""

from __future__ import annotations

import time
import warnings
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np

__all__ = [
    "LmConfig",
    "ObservationData",
    "TraceRecord",
    "IdentificationResult",
    "LineSearchError",
    "add_noise",
    "objective",
    "sensitivity",
    "lm_direction",
    "armijo_search",
    "identify",
]


class LineSearchError(RuntimeError):
    """Backtracking exhausted its budget without satisfying the decrease test."""


@dataclass(frozen=True)
class LmConfig:
    """Tunables of the identification loop (defaults match the benchmarks)."""

    beta0: float = 0.5
    rho: float = 0.75
    sigma: float = 0.25
    alpha0: float = 1.0
    delta: float = 1e-3
    tol: float = 1e-7
    max_iterations: int = 50
    max_backtracks: int = 60
    regularized: bool = True

    def __post_init__(self):
        if not 0.0 < self.beta0 < 1.0:
            raise ValueError("initial guess must lie in (0, 1)")
        if not 0.0 < self.rho < 1.0:
            raise ValueError("backtracking ratio must lie in (0, 1)")
        if not 0.0 < self.sigma < 0.5:
            raise ValueError("sufficient-decrease factor must lie in (0, 0.5)")
        if self.delta <= 0.0 or self.tol <= 0.0:
            raise ValueError("delta and tol must be positive")


@dataclass(frozen=True)
class ObservationData:
    """Observed final-time values, with the noise provenance that made them."""

    values: np.ndarray
    noise_percent: float = 0.0
    seed: int | None = None


@dataclass(frozen=True)
class TraceRecord:
    k: int
    beta: float
    objective: float
    step: float
    backtracks: int


@dataclass
class IdentificationResult:
    beta_inv: float
    iterations: int
    converged: bool
    trace: list[TraceRecord]
    wall_time: float
    forward_solves: int

    @property
    def final_objective(self) -> float:
        return self.trace[-1].objective


def add_noise(values: np.ndarray, epsilon_percent: float, seed: int | None = None) -> ObservationData:
    """Multiplicative Gaussian noise ``g * (1 + epsilon% * z)``, seeded.

    ``epsilon_percent = 1`` perturbs each observation by about one percent.
    A zero level returns the values unchanged (bit for bit), regardless of
    the seed.
    """
    values = np.asarray(values, dtype=np.float64)
    if epsilon_percent < 0.0:
        raise ValueError("noise level cannot be negative")
    if epsilon_percent == 0.0:
        return ObservationData(values=values.copy(), noise_percent=0.0, seed=seed)
    rng = np.random.default_rng(seed)
    z = rng.standard_normal(values.size)
    noisy = values * (1.0 + epsilon_percent / 100.0 * z)
    return ObservationData(values=noisy, noise_percent=float(epsilon_percent), seed=seed)


def _data_values(data) -> np.ndarray:
    if isinstance(data, ObservationData):
        return data.values
    return np.asarray(data, dtype=np.float64)


def objective(beta: float, data, forward: Callable[[float], np.ndarray]) -> float:
    """Misfit ``1/2 ||u(., T; beta) - g||^2`` (unweighted sum over nodes)."""
    residual = forward(beta) - _data_values(data)
    return 0.5 * float(residual @ residual)


def sensitivity(
    beta: float,
    data,
    forward: Callable[[float], np.ndarray],
    delta: float = 1e-3,
) -> tuple[np.ndarray, np.ndarray]:
    """Finite-difference sensitivity and residual at ``beta``.

    Uses the one-sided difference ``(u(beta + delta) - u(beta)) / delta``,
    flipped to the left when ``beta + delta`` would leave the open unit
    interval.
    """
    g = _data_values(data)
    u_here = forward(beta)
    if beta + delta < 1.0:
        jac = (forward(beta + delta) - u_here) / delta
    else:
        jac = (u_here - forward(beta - delta)) / delta
    return jac, u_here - g


def lm_direction(jac: np.ndarray, residual: np.ndarray, alpha: float) -> float:
    """Scalar step ``-J.r / (J.J + alpha)``; ``alpha = 0`` gives plain Gauss-Newton."""
    jtj = float(jac @ jac)
    jtr = float(jac @ residual)
    denom = jtj + alpha
    if denom <= 0.0:
        raise ValueError("normal-equation denominator is not positive")
    return -jtr / denom


def armijo_search(
    beta_k: float,
    d_k: float,
    jac: np.ndarray,
    residual: np.ndarray,
    objective_fn: Callable[[float], float],
    rho: float = 0.75,
    sigma: float = 0.25,
    *,
    f_k: float | None = None,
    max_backtracks: int = 60,
    interval: tuple[float, float] = (0.0, 1.0),
) -> tuple[float, float, int, float]:
    """Backtracking line search with the Armijo sufficient-decrease test.

    Finds the smallest ``m >= 0`` with
    ``F(beta_k + rho^m d_k) <= F(beta_k) + sigma rho^m d_k (J.r)``, skipping
    trial points outside the open ``interval``.  Returns
    ``(step, new_beta, m, f_new)``.  A non-descent direction is accepted at
    the backtracking cap with a warning; a descent direction that never
    satisfies the test raises :class:`LineSearchError`.
    """
    slope = float(jac @ residual) * d_k
    if f_k is None:
        f_k = objective_fn(beta_k)
    if d_k == 0.0:
        return 0.0, beta_k, 0, f_k
    lo, hi = interval
    if slope >= 0.0:
        warnings.warn("line search given a non-descent direction; taking the smallest trial step")
        step = rho**max_backtracks * d_k
        candidate = beta_k + step
        if not lo < candidate < hi:
            return 0.0, beta_k, max_backtracks, f_k
        return step, candidate, max_backtracks, objective_fn(candidate)
    for m in range(max_backtracks + 1):
        step = rho**m * d_k
        candidate = beta_k + step
        if not lo < candidate < hi:
            continue
        f_new = objective_fn(candidate)
        if f_new <= f_k + sigma * rho**m * slope:
            return step, candidate, m, f_new
    raise LineSearchError(
        f"no acceptable step within {max_backtracks} backtracks from beta={beta_k}"
    )


def identify(
    config: LmConfig,
    data,
    forward: Callable[[float], np.ndarray],
) -> IdentificationResult:
    """Run the identification loop until the accepted step is below tolerance.

    ``forward`` maps an order to the final-time state on the observation
    grid.  Its evaluations are memoized per run, so repeated objective
    evaluations at the same order cost nothing.  The returned trace has one
    record per visited order (``iterations + 1`` records).
    """
    g = _data_values(data)
    cache: dict[float, np.ndarray] = {}
    stats = {"solves": 0}

    def solve(beta: float) -> np.ndarray:
        key = float(beta)
        if key not in cache:
            cache[key] = forward(key)
            stats["solves"] += 1
        return cache[key]

    def misfit(beta: float) -> float:
        residual = solve(beta) - g
        return 0.5 * float(residual @ residual)

    start = time.perf_counter()
    beta_k = float(config.beta0)
    alpha_k = float(config.alpha0)
    trace: list[TraceRecord] = []
    k = 0
    while True:
        jac, residual = sensitivity(beta_k, g, solve, config.delta)
        f_k = 0.5 * float(residual @ residual)
        d_k = lm_direction(jac, residual, alpha_k if config.regularized else 0.0)
        step, beta_next, backtracks, f_next = armijo_search(
            beta_k,
            d_k,
            jac,
            residual,
            misfit,
            config.rho,
            config.sigma,
            f_k=f_k,
            max_backtracks=config.max_backtracks,
        )
        trace.append(TraceRecord(k=k, beta=beta_k, objective=f_k, step=abs(step), backtracks=backtracks))
        if abs(step) <= config.tol:
            converged = True
            break
        if k >= config.max_iterations:
            converged = False
            break
        assert f_next <= f_k + 1e-15 * max(1.0, abs(f_k)), "line search accepted an ascent step"
        beta_k = beta_next
        alpha_k *= 0.5
        k += 1
    return IdentificationResult(
        beta_inv=beta_k,
        iterations=k,
        converged=converged,
        trace=trace,
        wall_time=time.perf_counter() - start,
        forward_solves=stats["solves"],
    )

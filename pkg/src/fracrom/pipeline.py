"""Offline/online orchestration shared by the CLI, benchmarks, and tests.

The offline phase samples the full-order model at a handful of fractional
orders, stacks the computed levels into snapshot matrices, and builds the
reduced operators.  The online phase exposes forward maps
``beta -> final state`` over either the full or the reduced model; the
identification loop consumes these interchangeably.

Two sampling policies cover the two ways the benchmarks use the solver:

* ``matched`` sources rebuild the manufactured problem per order (forward
  accuracy studies, where each order has its own exact solution);
* ``frozen`` sources keep the problem data fixed while only the order
  varies (identification, where source and observations are given).
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .deim import build_deim_operator
from .fom import ProblemSpec, Trajectory, assemble_stiffness, fom_solve
from .pod import ReducedBasis, SnapshotMatrix, collect_snapshots, compute_basis
from .problems import BenchmarkCase
from .rom import RomOperators, ReducedTrajectory, build_rom, lift, rom_solve

__all__ = [
    "thread_limit",
    "solve_samples",
    "nonlinear_snapshots",
    "OfflineModel",
    "build_offline_model",
    "FomForward",
    "RomForward",
]

THREAD_ENV = "FRAC_ROM_THREADS"


def thread_limit(n_tasks: int) -> int:
    """Worker count for sample solves, capped by the FRAC_ROM_THREADS variable."""
    raw = os.environ.get(THREAD_ENV, "")
    try:
        cap = int(raw)
    except ValueError:
        cap = os.cpu_count() or 1
    if cap < 1:
        cap = 1
    return max(1, min(n_tasks, cap))


def solve_samples(
    spec_for: Callable[[float], ProblemSpec], samples: Sequence[float]
) -> list[tuple[float, Trajectory]]:
    """Full-order trajectories at each sample order, possibly in parallel."""
    samples = [float(b) for b in samples]
    workers = thread_limit(len(samples))
    if workers == 1:
        return [(b, fom_solve(spec_for(b))) for b in samples]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        solved = list(pool.map(lambda b: fom_solve(spec_for(b)), samples))
    return list(zip(samples, solved))


def nonlinear_snapshots(
    spec_for: Callable[[float], ProblemSpec],
    trajectories: Sequence[tuple[float, Trajectory]],
) -> SnapshotMatrix:
    """Snapshots of ``F(u) = g(u) - f(., t)`` along the sampled trajectories."""
    specs = {beta: spec_for(beta) for beta, _ in trajectories}

    def transform(beta, m, u):
        spec = specs[beta]
        t = m * spec.grid.dt
        return spec.reaction(u) - spec.source_vector(t)

    return collect_snapshots(trajectories, transform=transform, kind="nonlinear")


@dataclass
class OfflineModel:
    """Everything the online phase needs, bundled with its provenance."""

    rom: RomOperators
    state_snapshots: SnapshotMatrix
    nonlinear_snaps: SnapshotMatrix | None
    nonlinear_basis: ReducedBasis | None
    samples: tuple[float, ...]
    trajectories: list[tuple[float, Trajectory]]


def build_offline_model(
    spec_for: Callable[[float], ProblemSpec],
    samples: Sequence[float],
    r: int,
    s: int | None = None,
) -> OfflineModel:
    """Sample the full model and assemble reduced operators.

    ``s`` must be given for nonlinear problems (DEIM point count); it is
    ignored for linear ones.
    """
    trajectories = solve_samples(spec_for, samples)
    snaps = collect_snapshots(trajectories)
    basis = compute_basis(snaps, r)
    any_spec = spec_for(samples[0])
    stiffness = assemble_stiffness(any_spec)
    deim_op = None
    nl_snaps = None
    nl_basis = None
    if not any_spec.is_linear:
        if s is None:
            raise ValueError("nonlinear problems need a DEIM point count")
        nl_snaps = nonlinear_snapshots(spec_for, trajectories)
        nl_basis = compute_basis(nl_snaps, s)
        deim_op = build_deim_operator(basis, nl_basis.matrix)
    rom = build_rom(stiffness, basis, deim_op)
    return OfflineModel(
        rom=rom,
        state_snapshots=snaps,
        nonlinear_snaps=nl_snaps,
        nonlinear_basis=nl_basis,
        samples=tuple(float(b) for b in samples),
        trajectories=trajectories,
    )


def matched_spec_factory(case: BenchmarkCase, n=None, steps=None, t_final=None):
    """Per-order manufactured problems (forward verification)."""
    n, steps, t_final = case.grid_args(n, steps, t_final)
    return lambda beta: case.problem(beta, n=n, steps=steps, t_final=t_final)


def frozen_spec_factory(base: ProblemSpec):
    """Fixed problem data, only the order varies (identification)."""
    return base.with_beta


class FomForward:
    """Forward map ``beta -> final full-order state``; counts its solves."""

    def __init__(self, spec_for: Callable[[float], ProblemSpec]):
        self.spec_for = spec_for
        self.n_solves = 0
        self.linear_solves = 0

    def __call__(self, beta: float) -> np.ndarray:
        traj = fom_solve(self.spec_for(beta))
        self.n_solves += 1
        self.linear_solves += traj.meta.get("linear_solves", 0)
        return traj.final


class RomForward:
    """Forward map ``beta -> lifted final reduced state``; counts its solves."""

    def __init__(self, rom: RomOperators, spec_for: Callable[[float], ProblemSpec]):
        self.rom = rom
        self.spec_for = spec_for
        self.n_solves = 0

    def solve(self, beta: float) -> ReducedTrajectory:
        self.n_solves += 1
        return rom_solve(self.rom, self.spec_for(beta))

    def __call__(self, beta: float) -> np.ndarray:
        return lift(self.solve(beta))

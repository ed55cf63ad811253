"""Shared fixtures.

Offline models are the expensive ingredient (each one runs the full-order
solver at four sample orders), so the ones used by several test modules are
built once per session.
"""
from dataclasses import dataclass

import numpy as np
import pytest

from fracrom.fom import Trajectory, fom_solve
from fracrom.pipeline import (
    OfflineModel,
    RomForward,
    build_offline_model,
    frozen_spec_factory,
    matched_spec_factory,
)
from fracrom.problems import BenchmarkCase, get_case


@pytest.fixture(scope="session")
def test1_model() -> OfflineModel:
    """Linear 1D benchmark, matched sources, r=2 (the forward-accuracy setup)."""
    case = get_case("test1")
    return build_offline_model(matched_spec_factory(case), case.samples, case.pod_dim)


@pytest.fixture(scope="session")
def test2_model() -> OfflineModel:
    """Nonlinear 1D benchmark, matched sources, r=4, s=10."""
    case = get_case("test2")
    return build_offline_model(
        matched_spec_factory(case), case.samples, case.pod_dim, case.deim_dim
    )


@dataclass(frozen=True)
class IdentSetup:
    """One identification scenario: frozen problem data, observations, surrogate."""

    case: BenchmarkCase
    observed: np.ndarray
    spec_for: object
    model: OfflineModel
    truth: Trajectory

    def rom_forward(self) -> RomForward:
        return RomForward(self.model.rom, self.spec_for)


def _ident_setup(name: str) -> IdentSetup:
    case = get_case(name)
    base = case.problem(case.beta_star)
    truth = fom_solve(base)
    spec_for = frozen_spec_factory(base)
    model = build_offline_model(spec_for, case.samples, case.pod_dim, case.deim_dim)
    return IdentSetup(case=case, observed=truth.final, spec_for=spec_for, model=model, truth=truth)


@pytest.fixture(scope="session")
def ex1_ident() -> IdentSetup:
    return _ident_setup("ex1")


@pytest.fixture(scope="session")
def ex2_ident() -> IdentSetup:
    return _ident_setup("ex2")

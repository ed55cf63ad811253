"""Time-fractional diffusion-reaction solvers, reduced-order models, and
fractional-order identification."""

from .fractional import L1Weights, gamma_scale, history_rhs, l1_weights
from .grid import Grid1D, Grid2D
from .linalg import SolverError, Tridiagonal, pcg_solve, thomas_solve
from .fom import (
    GaussNewtonError,
    ProblemSpec,
    Trajectory,
    assemble_stiffness,
    assemble_stiffness_1d,
    assemble_stiffness_2d,
    discrete_l2_error,
    fom_solve,
)
from .pod import (
    ReducedBasis,
    SnapshotMatrix,
    collect_snapshots,
    compute_basis,
    energy_rank,
    truncation_error,
)
from .deim import DeimError, DeimOperator, apply_deim, build_deim_operator, deim_select
from .rom import ReducedTrajectory, RomOperators, build_rom, lift, rom_solve
from .inverse import (
    IdentificationResult,
    LineSearchError,
    LmConfig,
    ObservationData,
    TraceRecord,
    add_noise,
    armijo_search,
    identify,
    lm_direction,
    objective,
    sensitivity,
)
from .pipeline import (
    FomForward,
    OfflineModel,
    RomForward,
    build_offline_model,
    frozen_spec_factory,
    matched_spec_factory,
    solve_samples,
)
from .problems import CASES, BenchmarkCase, from_config, get_case, load_config
from .persistence import (
    PersistenceError,
    fnv1a64,
    load_manifest,
    read_matrix,
    read_trace,
    write_manifest,
    write_matrix,
    write_trace,
)
from .reference import TABLES, get_table, tables_for_case
from .tables import TableResult, run_table

__version__ = "0.1.0"

__all__ = [
    "L1Weights",
    "l1_weights",
    "gamma_scale",
    "history_rhs",
    "Grid1D",
    "Grid2D",
    "Tridiagonal",
    "thomas_solve",
    "pcg_solve",
    "SolverError",
    "ProblemSpec",
    "Trajectory",
    "GaussNewtonError",
    "assemble_stiffness",
    "assemble_stiffness_1d",
    "assemble_stiffness_2d",
    "discrete_l2_error",
    "fom_solve",
    "SnapshotMatrix",
    "ReducedBasis",
    "collect_snapshots",
    "compute_basis",
    "truncation_error",
    "energy_rank",
    "DeimError",
    "DeimOperator",
    "deim_select",
    "build_deim_operator",
    "apply_deim",
    "RomOperators",
    "ReducedTrajectory",
    "build_rom",
    "rom_solve",
    "lift",
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
    "FomForward",
    "RomForward",
    "OfflineModel",
    "build_offline_model",
    "solve_samples",
    "frozen_spec_factory",
    "matched_spec_factory",
    "BenchmarkCase",
    "CASES",
    "get_case",
    "from_config",
    "load_config",
    "PersistenceError",
    "fnv1a64",
    "write_matrix",
    "read_matrix",
    "write_manifest",
    "load_manifest",
    "write_trace",
    "read_trace",
    "TABLES",
    "get_table",
    "tables_for_case",
    "TableResult",
    "run_table",
    "__version__",
]

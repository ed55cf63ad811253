"""Frozen reference results for the bundled benchmark cases.

Each table records the expected output of one benchmark workflow: final-time
solution errors for the forward solvers (tables 1-4) or recovered fractional
orders for the identification loop (tables 5-8).  The ``reproduce-table``
command re-runs the workflow and compares fresh numbers against these rows.

A few recorded entries are internally inconsistent (a projection ROM cannot
beat the full-order error it is built from); those betas are listed in
``flagged`` and reported but not enforced.
"""
from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class ErrorTable:
    """Final-time discrete-L2 errors for one forward benchmark."""

    table_id: int
    case: str
    t_final: float
    steps: int
    rank: int
    deim_rank: int | None
    fom_errors: dict[float, float]
    rom_errors: dict[float, float]
    rel_tol: float
    flagged: tuple[float, ...] = ()


@dataclass(frozen=True)
class CleanRow:
    beta0: float
    beta_inv: float
    error: float
    iterations: int


@dataclass(frozen=True)
class IdentTable:
    """Recovered orders for one 1D identification benchmark (surrogate loop).

    ``noisy_errors`` maps a noise level (percent) to the recorded per-guess
    errors.  Noise is redrawn per run, so only the clean rows are
    digit-reproducible; noisy rows bound the expected error magnitude.
    """

    table_id: int
    case: str
    beta_star: float
    clean: tuple[CleanRow, ...]
    noisy_errors: dict[float, dict[float, float]]
    iter_tol: int = 3

    def noisy_max(self, epsilon: float) -> float:
        return max(self.noisy_errors[epsilon].values())


@dataclass(frozen=True)
class ComparisonRow:
    forward: str  # "fom" | "rom"
    beta0: float
    beta_inv: float
    error: float
    iterations: int
    cpu_seconds: float


@dataclass(frozen=True)
class ComparisonTable:
    """Full-order vs reduced-order identification on one 2D benchmark.

    The recorded CPU seconds are machine-specific; only the speedup ratio is
    meaningful.  ``noisy`` rows used one fixed draw of 1% noise, so their
    absolute errors depend on the seed and only the FOM/ROM agreement and
    iteration counts transfer.
    """

    table_id: int
    case: str
    beta_star: float
    clean: tuple[ComparisonRow, ...]
    noisy: tuple[ComparisonRow, ...]
    noise_percent: float = 1.0
    iter_tol: int = 3
    min_speedup: float = 10.0

    def rows(self, forward: str, *, noisy: bool = False) -> tuple[ComparisonRow, ...]:
        src = self.noisy if noisy else self.clean
        return tuple(r for r in src if r.forward == forward)


TABLE1 = ErrorTable(
    table_id=1,
    case="test1",
    t_final=1.0,
    steps=64,
    rank=2,
    deim_rank=None,
    fom_errors={0.2: 1.31e-4, 0.4: 1.36e-4, 0.6: 1.66e-4, 0.8: 3.07e-4},
    rom_errors={
        0.1: 1.31e-4, 0.2: 1.31e-4, 0.3: 1.32e-4, 0.4: 1.36e-4, 0.5: 1.45e-4,
        0.6: 1.66e-4, 0.7: 2.12e-4, 0.8: 3.07e-4, 0.9: 5.02e-4,
    },
    rel_tol=0.03,
)

TABLE2 = ErrorTable(
    table_id=2,
    case="test1",
    t_final=10.0,
    steps=640,
    rank=2,
    deim_rank=None,
    fom_errors={0.2: 2.12e-3, 0.4: 3.40e-3, 0.6: 5.46e-3, 0.8: 8.79e-3},
    rom_errors={
        0.1: 1.67e-3, 0.2: 2.12e-3, 0.3: 2.69e-3, 0.4: 3.40e-3, 0.5: 4.31e-3,
        0.6: 5.46e-3, 0.7: 6.92e-3, 0.8: 8.79e-3, 0.9: 1.13e-2,
    },
    rel_tol=0.15,
)

TABLE3 = ErrorTable(
    table_id=3,
    case="test2",
    t_final=1.0,
    steps=64,
    rank=4,
    deim_rank=10,
    fom_errors={0.2: 6.68e-4, 0.4: 6.72e-4, 0.6: 7.41e-4, 0.8: 1.18e-3},
    rom_errors={
        0.1: 6.71e-4, 0.2: 6.68e-4, 0.3: 7.92e-4, 0.4: 6.72e-4, 0.5: 7.84e-4,
        0.6: 7.41e-4, 0.7: 7.67e-4, 0.8: 1.18e-3, 0.9: 1.80e-3,
    },
    rel_tol=0.03,
    # The ROM entries at these betas sit 12-16% above (0.3, 0.5) or below
    # (0.7, under the full-order error) any curve consistent with the other
    # six entries and the recorded FOM row; treated as transcription noise.
    flagged=(0.3, 0.5, 0.7),
)

TABLE4 = ErrorTable(
    table_id=4,
    case="test2",
    t_final=10.0,
    steps=640,
    rank=4,
    deim_rank=10,
    fom_errors={0.2: 7.17e-2, 0.4: 7.31e-2, 0.6: 7.46e-2, 0.8: 7.63e-2},
    rom_errors={
        0.1: 7.18e-2, 0.2: 7.21e-2, 0.3: 7.25e-2, 0.4: 7.31e-2, 0.5: 7.38e-2,
        0.6: 7.45e-2, 0.7: 7.54e-2, 0.8: 7.62e-2, 0.9: 7.73e-2,
    },
    rel_tol=0.15,
)

TABLE5 = IdentTable(
    table_id=5,
    case="ex1",
    beta_star=0.75,
    clean=(
        CleanRow(0.1, 7.5000e-1, 8.8659e-9, 12),
        CleanRow(0.3, 7.5000e-1, 6.3319e-9, 12),
        CleanRow(0.5, 7.5000e-1, 3.7111e-9, 12),
        CleanRow(0.7, 7.5000e-1, 6.2172e-8, 11),
        CleanRow(0.8, 7.5000e-1, 6.6172e-8, 11),
        CleanRow(0.9, 7.5000e-1, 2.8085e-9, 12),
    ),
    noisy_errors={
        0.01: {0.1: 2.8815e-4, 0.3: 5.7065e-5, 0.5: 4.3908e-4,
               0.7: 2.5526e-4, 0.8: 7.0675e-5, 0.9: 1.0379e-4},
        0.1: {0.1: 1.0463e-3, 0.3: 2.2298e-4, 0.5: 7.8280e-4,
              0.7: 4.4472e-3, 0.8: 2.3619e-3, 0.9: 7.3391e-3},
        1.0: {0.1: 1.3791e-2, 0.3: 1.2373e-2, 0.5: 4.7617e-2,
              0.7: 2.4375e-2, 0.8: 3.3040e-2, 0.9: 1.8461e-2},
    },
)

TABLE6 = IdentTable(
    table_id=6,
    case="ex2",
    beta_star=0.75,
    clean=(
        CleanRow(0.1, 7.5000e-1, 9.9664e-10, 8),
        CleanRow(0.3, 7.5000e-1, 3.4394e-10, 8),
        CleanRow(0.5, 7.5000e-1, 1.6732e-9, 8),
        CleanRow(0.7, 7.5000e-1, 2.9806e-8, 7),
        CleanRow(0.8, 7.5000e-1, 3.6300e-8, 7),
        CleanRow(0.9, 7.5000e-1, 1.0195e-7, 7),
    ),
    noisy_errors={
        0.01: {0.1: 1.5424e-5, 0.3: 3.0629e-5, 0.5: 2.8158e-5,
               0.7: 1.1190e-4, 0.8: 5.6022e-5, 0.9: 6.5169e-5},
        0.1: {0.1: 4.3990e-4, 0.3: 2.4610e-4, 0.5: 7.4076e-5,
              0.7: 1.2027e-4, 0.8: 4.0968e-4, 0.9: 3.1646e-4},
        1.0: {0.1: 4.3964e-3, 0.3: 2.4605e-3, 0.5: 7.4073e-4,
              0.7: 1.2030e-3, 0.8: 4.0992e-3, 0.9: 3.1669e-3},
    },
)

TABLE7 = ComparisonTable(
    table_id=7,
    case="ex3",
    beta_star=0.75,
    clean=(
        ComparisonRow("fom", 0.5, 7.5000e-1, 2.0301e-8, 5, 529.0),
        ComparisonRow("fom", 0.6, 7.5000e-1, 3.4855e-9, 5, 528.0),
        ComparisonRow("fom", 0.7, 7.5000e-1, 2.8237e-8, 4, 418.0),
        ComparisonRow("fom", 0.8, 7.5000e-1, 6.9110e-10, 5, 505.0),
        ComparisonRow("fom", 0.9, 7.5000e-1, 8.7546e-9, 5, 494.0),
        ComparisonRow("rom", 0.5, 7.5000e-1, 2.0300e-8, 5, 34.0),
        ComparisonRow("rom", 0.6, 7.5000e-1, 3.4840e-9, 5, 35.0),
        ComparisonRow("rom", 0.7, 7.5000e-1, 2.8235e-8, 4, 28.0),
        ComparisonRow("rom", 0.8, 7.5000e-1, 6.8953e-10, 5, 35.0),
        ComparisonRow("rom", 0.9, 7.5000e-1, 8.7531e-9, 5, 35.0),
    ),
    noisy=(
        ComparisonRow("fom", 0.5, 7.4986e-1, 1.3766e-4, 5, 556.0),
        ComparisonRow("fom", 0.6, 7.4986e-1, 1.3768e-4, 5, 1162.0),
        ComparisonRow("fom", 0.7, 7.4986e-1, 1.3765e-4, 4, 442.0),
        ComparisonRow("fom", 0.8, 7.4986e-1, 1.3768e-4, 5, 506.0),
        ComparisonRow("fom", 0.9, 7.4986e-1, 1.3767e-4, 5, 695.0),
        ComparisonRow("rom", 0.5, 7.4986e-1, 1.3766e-4, 5, 34.0),
        ComparisonRow("rom", 0.6, 7.4986e-1, 1.3768e-4, 5, 33.0),
        ComparisonRow("rom", 0.7, 7.4986e-1, 1.3765e-4, 4, 26.0),
        ComparisonRow("rom", 0.8, 7.4986e-1, 1.3768e-4, 5, 35.0),
        ComparisonRow("rom", 0.9, 7.4986e-1, 1.3767e-4, 5, 33.0),
    ),
)

TABLE8 = ComparisonTable(
    table_id=8,
    case="ex4",
    beta_star=0.75,
    clean=(
        ComparisonRow("fom", 0.01, 7.5000e-1, 4.6031e-9, 8, 2803.0),
        ComparisonRow("fom", 0.1, 7.5000e-1, 3.9489e-9, 8, 2784.0),
        ComparisonRow("fom", 0.3, 7.5000e-1, 2.6262e-9, 8, 2753.0),
        ComparisonRow("fom", 0.5, 7.5000e-1, 1.4268e-9, 8, 2725.0),
        ComparisonRow("fom", 0.8, 7.5000e-1, 2.9511e-8, 7, 2334.0),
        ComparisonRow("fom", 0.9, 7.5000e-1, 8.8339e-8, 7, 2334.0),
        ComparisonRow("fom", 0.99, 7.5000e-1, 1.3489e-9, 8, 2647.0),
        ComparisonRow("rom", 0.01, 7.5000e-1, 4.6045e-9, 8, 9.0),
        ComparisonRow("rom", 0.1, 7.5000e-1, 3.9490e-9, 8, 9.0),
        ComparisonRow("rom", 0.3, 7.5000e-1, 2.6276e-9, 8, 9.0),
        ComparisonRow("rom", 0.5, 7.5000e-1, 1.4268e-9, 8, 9.0),
        ComparisonRow("rom", 0.8, 7.5000e-1, 2.9511e-8, 7, 8.0),
        ComparisonRow("rom", 0.9, 7.5000e-1, 8.8337e-8, 7, 8.0),
        ComparisonRow("rom", 0.99, 7.5000e-1, 1.3504e-9, 8, 9.0),
    ),
    noisy=(
        ComparisonRow("fom", 0.01, 7.3045e-1, 1.9554e-2, 8, 2821.0),
        ComparisonRow("fom", 0.1, 7.3045e-1, 1.9554e-2, 8, 3038.0),
        ComparisonRow("fom", 0.3, 7.3045e-1, 1.9554e-2, 8, 2789.0),
        ComparisonRow("fom", 0.5, 7.3045e-1, 1.9554e-2, 8, 2761.0),
        ComparisonRow("fom", 0.8, 7.3045e-1, 1.9554e-2, 7, 2381.0),
        ComparisonRow("fom", 0.9, 7.3045e-1, 1.9554e-2, 8, 3503.0),
        ComparisonRow("fom", 0.99, 7.3045e-1, 1.9554e-2, 8, 2682.0),
        ComparisonRow("rom", 0.01, 7.3045e-1, 1.9554e-2, 8, 10.0),
        ComparisonRow("rom", 0.1, 7.3045e-1, 1.9554e-2, 8, 10.0),
        ComparisonRow("rom", 0.3, 7.3045e-1, 1.9554e-2, 8, 10.0),
        ComparisonRow("rom", 0.5, 7.3045e-1, 1.9554e-2, 8, 10.0),
        ComparisonRow("rom", 0.8, 7.3045e-1, 1.9554e-2, 7, 9.0),
        ComparisonRow("rom", 0.9, 7.3045e-1, 1.9554e-2, 8, 10.0),
        ComparisonRow("rom", 0.99, 7.3045e-1, 1.9554e-2, 8, 10.0),
    ),
)

TABLES: dict[int, ErrorTable | IdentTable | ComparisonTable] = {
    t.table_id: t
    for t in (TABLE1, TABLE2, TABLE3, TABLE4, TABLE5, TABLE6, TABLE7, TABLE8)
}


def get_table(table_id: int) -> ErrorTable | IdentTable | ComparisonTable:
    try:
        return TABLES[table_id]
    except KeyError:
        raise KeyError(f"unknown table id {table_id!r}; expected 1-8") from None


def tables_for_case(case: str) -> tuple[int, ...]:
    """Table ids whose reference rows were produced with the given case."""
    return tuple(tid for tid, tab in sorted(TABLES.items()) if tab.case == case)

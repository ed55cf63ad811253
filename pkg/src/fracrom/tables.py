"""Re-run the benchmark tables and diff them against the frozen reference rows.

Each ``run_table`` call owns a complete workflow: offline sampling, reduced
model construction, forward or identification runs, and the per-entry
comparisons.  Results come back as a :class:`TableResult` that the CLI can
render as text, dump as CSV, or hand to the figure helpers.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from statistics import median
from typing import Sequence

import numpy as np

from .fom import discrete_l2_error, fom_solve
from .inverse import IdentificationResult, LmConfig, ObservationData, add_noise, identify
from .pipeline import (
    FomForward,
    RomForward,
    build_offline_model,
    frozen_spec_factory,
    matched_spec_factory,
)
from .problems import get_case
from .reference import (
    ComparisonTable,
    ErrorTable,
    IdentTable,
    get_table,
)
from .rom import lift, rom_solve

__all__ = ["Check", "TableResult", "run_table", "NOISE_LEVELS", "FIXED_NOISE_SEED"]

NOISE_LEVELS = (0.01, 0.1, 1.0)

# Seed for the single "fixed noise" draw used by the 2D comparisons.  The
# reference rows used one unrecorded draw; any fixed seed plays that role.
FIXED_NOISE_SEED = 7


@dataclass(frozen=True)
class Check:
    """One reproduced quantity, compared against its reference value."""

    label: str
    actual: float
    expected: float | None = None
    detail: str = ""
    passed: bool = True
    enforced: bool = True

    def status(self) -> str:
        if not self.enforced:
            return "info"
        return "ok" if self.passed else "FAIL"


@dataclass
class TableResult:
    table_id: int
    title: str
    columns: tuple[str, ...]
    rows: list[tuple]
    checks: list[Check]
    artifacts: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks if c.enforced)

    def render(self) -> str:
        cells = [tuple(str(c) for c in row) for row in self.rows]
        widths = [
            max(len(self.columns[j]), *(len(r[j]) for r in cells)) if cells else len(self.columns[j])
            for j in range(len(self.columns))
        ]
        lines = [self.title]
        lines.append("  ".join(h.ljust(w) for h, w in zip(self.columns, widths)).rstrip())
        for row in cells:
            lines.append("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())
        lines.append("")
        for c in self.checks:
            ref = "" if c.expected is None else f" vs {c.expected:.4e}"
            extra = f" ({c.detail})" if c.detail else ""
            lines.append(f"[{c.status():>4}] {c.label}: {c.actual:.4e}{ref}{extra}")
        lines.append(f"table {self.table_id}: {'PASS' if self.passed else 'FAIL'}")
        return "\n".join(lines)


def _rel_err(actual: float, expected: float) -> float:
    return abs(actual - expected) / abs(expected)


def _exact_final(case, spec) -> np.ndarray:
    t = spec.grid.t_final
    if case.dim == 1:
        return case.exact(spec.grid.nodes(), t, spec.beta)
    x, y = spec.grid.mesh()
    return case.exact(x, y, t, spec.beta)


def _run_error_table(tab: ErrorTable) -> TableResult:
    case = get_case(tab.case)
    spec_for = matched_spec_factory(case, steps=tab.steps, t_final=tab.t_final)
    model = build_offline_model(spec_for, case.samples, tab.rank, tab.deim_rank)
    weight = spec_for(0.5).grid.cell_weight
    fom_traj = dict(model.trajectories)

    checks: list[Check] = []
    rows: list[tuple] = []
    rom_errors: dict[float, float] = {}
    fom_errors: dict[float, float] = {}
    for beta in sorted(tab.rom_errors):
        spec = spec_for(beta)
        u_exact = _exact_final(case, spec)
        fom_err = None
        if beta in tab.fom_errors:
            traj = fom_traj.get(beta) or fom_solve(spec)
            fom_err = discrete_l2_error(traj.final, u_exact, weight)
            fom_errors[beta] = fom_err
            checks.append(
                Check(
                    label=f"fom error at beta={beta}",
                    actual=fom_err,
                    expected=tab.fom_errors[beta],
                    detail=f"rel {_rel_err(fom_err, tab.fom_errors[beta]):.2%}, tol {tab.rel_tol:.0%}",
                    passed=_rel_err(fom_err, tab.fom_errors[beta]) <= tab.rel_tol,
                )
            )
        u_rom = lift(rom_solve(model.rom, spec))
        rom_err = discrete_l2_error(u_rom, u_exact, weight)
        rom_errors[beta] = rom_err
        flagged = beta in tab.flagged
        rel = _rel_err(rom_err, tab.rom_errors[beta])
        checks.append(
            Check(
                label=f"rom error at beta={beta}",
                actual=rom_err,
                expected=tab.rom_errors[beta],
                detail=(
                    f"rel {rel:.2%}, tol {tab.rel_tol:.0%}"
                    + (", reference entry inconsistent; not enforced" if flagged else "")
                ),
                passed=rel <= tab.rel_tol,
                enforced=not flagged,
            )
        )
        rows.append(
            (
                f"{beta:.1f}",
                "---" if fom_err is None else f"{fom_err:.3e}",
                f"{rom_err:.3e}",
                "---" if beta not in tab.fom_errors else f"{tab.fom_errors[beta]:.2e}",
                f"{tab.rom_errors[beta]:.2e}",
            )
        )

    kind = "rom" if tab.deim_rank is None else "rom+deim"
    title = (
        f"table {tab.table_id}: final-time errors, case {tab.case}, "
        f"t={tab.t_final:g}, r={tab.rank}"
        + (f", s={tab.deim_rank}" if tab.deim_rank else "")
    )
    return TableResult(
        table_id=tab.table_id,
        title=title,
        columns=("beta", "fom error", f"{kind} error", "ref fom", "ref rom"),
        rows=rows,
        checks=checks,
        artifacts={
            "model": model,
            "fom_errors": fom_errors,
            "rom_errors": rom_errors,
            "reference": tab,
        },
    )


def _run_ident_table(tab: IdentTable, *, n_seeds: int = 10, noisy: bool = True) -> TableResult:
    case = get_case(tab.case)
    base = case.problem(tab.beta_star)
    observed = fom_solve(base).final
    spec_for = frozen_spec_factory(base)
    model = build_offline_model(spec_for, case.samples, case.pod_dim, case.deim_dim)
    forward = RomForward(model.rom, spec_for)

    checks: list[Check] = []
    rows: list[tuple] = []
    results: dict[tuple[float, float], IdentificationResult] = {}
    for row in tab.clean:
        res = identify(LmConfig(beta0=row.beta0), ObservationData(observed), forward)
        results[(0.0, row.beta0)] = res
        err = abs(tab.beta_star - res.beta_inv)
        checks.append(
            Check(
                label=f"clean recovery from beta0={row.beta0}",
                actual=err,
                detail=f"beta_inv={res.beta_inv:.6f}, require <= 1e-6",
                passed=err <= 1e-6,
            )
        )
        checks.append(
            Check(
                label=f"iterations from beta0={row.beta0}",
                actual=float(res.iterations),
                expected=float(row.iterations),
                detail=f"tolerance +/-{tab.iter_tol}",
                passed=abs(res.iterations - row.iterations) <= tab.iter_tol,
            )
        )
        rows.append(
            ("0", f"{row.beta0:.2f}", f"{res.beta_inv:.5e}", f"{err:.4e}", str(res.iterations),
             f"{row.error:.4e}", str(row.iterations))
        )

    if noisy:
        medians = {0.0: float(median(
            abs(tab.beta_star - results[(0.0, r.beta0)].beta_inv) for r in tab.clean
        ))}
        for eps in NOISE_LEVELS:
            errors = []
            for seed in range(n_seeds):
                data = add_noise(observed, eps, seed=seed)
                res = identify(LmConfig(beta0=0.5), data, forward)
                results[(eps, float(seed))] = res
                errors.append(abs(tab.beta_star - res.beta_inv))
            med = float(median(errors))
            medians[eps] = med
            bound = 3.0 * tab.noisy_max(eps)
            checks.append(
                Check(
                    label=f"median error over {n_seeds} seeds at eps={eps}%",
                    actual=med,
                    detail=f"bound 3x reference max = {bound:.4e}",
                    passed=med <= bound,
                )
            )
            rows.append(
                (f"{eps:g}", "0.50", "---", f"{med:.4e}", "---",
                 f"{tab.noisy_max(eps):.4e}", "---")
            )
        ordered = [medians[e] for e in (0.0, *NOISE_LEVELS)]
        checks.append(
            Check(
                label="median error nondecreasing in noise level",
                actual=float(all(a <= b * (1 + 1e-12) for a, b in zip(ordered, ordered[1:]))),
                detail=" <= ".join(f"{m:.2e}" for m in ordered),
                passed=all(a <= b * (1 + 1e-12) for a, b in zip(ordered, ordered[1:])),
            )
        )

    return TableResult(
        table_id=tab.table_id,
        title=f"table {tab.table_id}: order identification, case {tab.case}, beta*={tab.beta_star}",
        columns=("eps%", "beta0", "beta_inv", "|beta*-beta_inv|", "itr", "ref err", "ref itr"),
        rows=rows,
        checks=checks,
        artifacts={"model": model, "results": results, "observed": observed, "reference": tab},
    )


def _run_comparison_table(
    tab: ComparisonTable,
    *,
    forwards: Sequence[str] = ("fom", "rom"),
    fom_beta0s: Sequence[float] | None = None,
    noisy: bool = True,
    seed: int = FIXED_NOISE_SEED,
) -> TableResult:
    case = get_case(tab.case)
    base = case.problem(tab.beta_star)
    observed = fom_solve(base).final
    spec_for = frozen_spec_factory(base)

    offline_start = time.perf_counter()
    model = build_offline_model(spec_for, case.samples, case.pod_dim, case.deim_dim)
    offline_time = time.perf_counter() - offline_start

    maps = {}
    if "fom" in forwards:
        maps["fom"] = FomForward(spec_for)
    if "rom" in forwards:
        maps["rom"] = RomForward(model.rom, spec_for)

    datasets: list[tuple[str, ObservationData]] = [("clean", ObservationData(observed))]
    if noisy:
        datasets.append((f"noise {tab.noise_percent:g}%", add_noise(observed, tab.noise_percent, seed=seed)))

    checks: list[Check] = []
    rows: list[tuple] = []
    results: dict[tuple[str, str, float], IdentificationResult] = {}
    for data_label, data in datasets:
        clean = data.noise_percent == 0.0
        ref_rows = {
            (r.forward, r.beta0): r for r in (tab.clean if clean else tab.noisy)
        }
        beta0s = sorted({b0 for f, b0 in ref_rows if f in maps})
        for beta0 in beta0s:
            per_forward: dict[str, IdentificationResult] = {}
            for fwd_name in forwards:
                if fwd_name == "fom" and fom_beta0s is not None and beta0 not in fom_beta0s:
                    continue
                res = identify(LmConfig(beta0=beta0), data, maps[fwd_name])
                per_forward[fwd_name] = res
                results[(data_label, fwd_name, beta0)] = res
                ref = ref_rows[(fwd_name, beta0)]
                err = abs(tab.beta_star - res.beta_inv)
                if clean:
                    checks.append(
                        Check(
                            label=f"{fwd_name} clean recovery from beta0={beta0}",
                            actual=err,
                            detail=f"beta_inv={res.beta_inv:.6f}, require <= 1e-6",
                            passed=err <= 1e-6,
                        )
                    )
                checks.append(
                    Check(
                        label=f"{fwd_name} iterations from beta0={beta0} ({data_label})",
                        actual=float(res.iterations),
                        expected=float(ref.iterations),
                        detail=f"tolerance +/-{tab.iter_tol}",
                        passed=abs(res.iterations - ref.iterations) <= tab.iter_tol,
                    )
                )
                rows.append(
                    (data_label, fwd_name, f"{beta0:.2f}", f"{res.beta_inv:.5e}",
                     f"{err:.4e}", str(res.iterations), str(ref.iterations),
                     f"{res.wall_time:.2f}s")
                )
            if len(per_forward) == 2:
                gap = abs(per_forward["fom"].beta_inv - per_forward["rom"].beta_inv)
                checks.append(
                    Check(
                        label=f"fom/rom agreement from beta0={beta0} ({data_label})",
                        actual=gap,
                        detail="require <= 1e-6",
                        passed=gap <= 1e-6,
                    )
                )

    if "fom" in maps and "rom" in maps:
        pairs = [
            (results[("clean", "fom", b0)].wall_time, results[("clean", "rom", b0)].wall_time)
            for (lbl, fwd, b0) in results
            if lbl == "clean" and fwd == "fom" and ("clean", "rom", b0) in results
        ]
        if pairs:
            fom_total = sum(p[0] for p in pairs)
            rom_total = sum(p[1] for p in pairs)
            ratio = fom_total / rom_total
            checks.append(
                Check(
                    label="fom/rom online speedup",
                    actual=ratio,
                    detail=f"fom {fom_total:.2f}s vs rom {rom_total:.3f}s, require >= {tab.min_speedup:g}",
                    passed=ratio >= tab.min_speedup,
                )
            )

    return TableResult(
        table_id=tab.table_id,
        title=(
            f"table {tab.table_id}: full vs reduced identification, case {tab.case}, "
            f"beta*={tab.beta_star} (offline {offline_time:.2f}s)"
        ),
        columns=("data", "forward", "beta0", "beta_inv", "|beta*-beta_inv|",
                 "itr", "ref itr", "wall"),
        rows=rows,
        checks=checks,
        artifacts={
            "model": model,
            "results": results,
            "observed": observed,
            "offline_time": offline_time,
            "reference": tab,
        },
    )


def run_table(table_id: int, **options) -> TableResult:
    """Reproduce one benchmark table; options depend on the table kind.

    Error tables (1-4) accept no options.  Identification tables (5-6)
    accept ``n_seeds`` and ``noisy``.  Comparison tables (7-8) accept
    ``forwards``, ``fom_beta0s``, ``noisy``, and ``seed``.
    """
    tab = get_table(table_id)
    if isinstance(tab, ErrorTable):
        if options:
            raise TypeError(f"table {table_id} accepts no options, got {sorted(options)}")
        return _run_error_table(tab)
    if isinstance(tab, IdentTable):
        return _run_ident_table(tab, **options)
    return _run_comparison_table(tab, **options)

"""Command-line workflows: forward solves, model reduction, identification.

The offline phase (``snapshots`` then ``build-rom``) persists its artifacts
through the binary matrix format plus a JSON manifest; the online commands
(``rom-solve``, ``identify``) rebuild the reduced operators from those files
after checksum verification, or assemble everything in-process when no
manifest is given.  ``reproduce-table`` re-runs the recorded benchmarks and
``bench`` times the full against the reduced forward map.

Exit codes: 0 on success, 1 on numerical failure (divergence, exhausted
iteration budgets, failed table reproduction), 2 on usage errors (bad flags,
unknown problems, malformed or mismatched files).  All data outputs are
byte-deterministic for a fixed ``--seed``; wall times go to stdout only.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .deim import DeimError, build_deim_operator
from .fom import GaussNewtonError, assemble_stiffness, discrete_l2_error, fom_solve
from .inverse import LineSearchError, LmConfig, add_noise, identify
from .linalg import SolverError
from .persistence import (
    PersistenceError,
    load_manifest,
    manifest_add_file,
    read_matrix,
    write_manifest,
    write_matrix,
    write_trace,
)
from .pipeline import (
    FomForward,
    RomForward,
    build_offline_model,
    frozen_spec_factory,
    solve_samples,
    nonlinear_snapshots,
)
from .pod import ReducedBasis, collect_snapshots, compute_basis, truncation_error
from .problems import CASES, from_config, get_case
from .rom import build_rom, lift, rom_solve
from .tables import FIXED_NOISE_SEED, run_table
from . import report

__all__ = ["main"]

OK, NUMERICAL_FAILURE, USAGE_ERROR = 0, 1, 2

_NUMERICAL_ERRORS = (SolverError, GaussNewtonError, DeimError, LineSearchError)


# --- problem resolution -------------------------------------------------------


def _resolve_problem(name: str):
    """A registered case name, or a path to a JSON problem description.

    Returns ``(label, factory, case)`` where ``case`` is None for custom
    problems and ``factory(beta, n=, steps=, t_final=)`` builds the spec.
    """
    if name in CASES:
        case = get_case(name)
        return name, case.problem, case
    path = Path(name)
    if path.suffix == ".json" and path.exists():
        config = json.loads(path.read_text(encoding="utf-8"))
        return config.get("name", path.stem), from_config(config), None
    raise KeyError(
        f"unknown problem {name!r}: expected one of {', '.join(sorted(CASES))} "
        "or a path to a .json problem description"
    )


def _problem_factory_from_manifest(manifest: dict):
    config = manifest.get("problem_config")
    if config is not None:
        return from_config(config)
    return get_case(manifest["problem"]).problem


def _spec_factory_from_manifest(manifest: dict):
    """Rebuild the ``beta -> spec`` map a manifest's artifacts were made with."""
    factory = _problem_factory_from_manifest(manifest)
    g = manifest["grid"]

    def matched(beta):
        return factory(beta, n=g["n"], steps=g["steps"], t_final=g["t_final"])

    source_beta = manifest.get("source_beta")
    if source_beta is not None:
        return frozen_spec_factory(matched(float(source_beta)))
    return matched


def _grid_dict(grid) -> dict:
    return {"n": grid.n, "steps": grid.steps, "t_final": grid.t_final, "dim": grid.dim}


def _grid_overrides(args) -> dict:
    """Grid flags that were actually given; omitted ones keep problem defaults."""
    overrides = {}
    if args.n is not None:
        overrides["n"] = args.n
    if args.steps is not None:
        overrides["steps"] = args.steps
    if args.t_final is not None:
        overrides["t_final"] = args.t_final
    return overrides


def _exact_final(case, spec):
    if case is None or case.exact is None:
        return None
    if spec.grid.dim == 1:
        return case.exact(spec.grid.nodes(), spec.grid.t_final, spec.beta)
    x, y = spec.grid.mesh()
    return case.exact(x, y, spec.grid.t_final, spec.beta)


def _parse_samples(text: str) -> tuple[float, ...]:
    try:
        values = tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise ValueError(f"bad sample list {text!r}; expected comma-separated numbers")
    if not values:
        raise ValueError("sample list is empty")
    if any(not 0.0 < v < 1.0 for v in values):
        raise ValueError("sample orders must lie in (0, 1)")
    return values


def _write_csv(path, header, rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


# --- commands -----------------------------------------------------------------


def cmd_fom_solve(args) -> int:
    label, factory, case = _resolve_problem(args.problem)
    spec = factory(args.beta, **_grid_overrides(args))
    start = time.perf_counter()
    traj = fom_solve(spec)
    wall = time.perf_counter() - start

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    prefix = f"{label}_fom_beta{args.beta:g}"
    manifest = {
        "version": __version__,
        "kind": "trajectory",
        "problem": label,
        "beta": args.beta,
        "grid": _grid_dict(spec.grid),
    }
    checksum = write_matrix(out / f"{prefix}_states.bin", traj.states)
    manifest_add_file(manifest, "states", out / f"{prefix}_states.bin", checksum)
    write_manifest(out / f"{prefix}.json", manifest)

    print(f"solved {label} at beta={args.beta:g}: {spec.grid.ndof} unknowns, "
          f"{spec.grid.steps} steps, {wall:.2f}s, "
          f"{traj.meta.get('linear_solves', 0)} linear solves")
    exact = _exact_final(case, spec)
    if exact is not None:
        err = discrete_l2_error(traj.final, exact, spec.grid.cell_weight)
        print(f"final-time error vs exact solution: {err:.4e}")
    if not args.no_figures:
        fig = report.save_state(spec.grid, traj.final, out / f"{prefix}.png",
                                title=f"{label}, beta={args.beta:g}, t={spec.grid.t_final:g}")
        print(f"wrote {fig}")
    print(f"wrote {out / (prefix + '.json')}")
    return OK


def cmd_snapshots(args) -> int:
    label, factory, _ = _resolve_problem(args.problem)
    samples = _parse_samples(args.samples)

    def matched(beta):
        return factory(beta, **_grid_overrides(args))

    if args.source_beta is not None:
        spec_for = frozen_spec_factory(matched(args.source_beta))
    else:
        spec_for = matched

    start = time.perf_counter()
    trajectories = solve_samples(spec_for, samples)
    snaps = collect_snapshots(trajectories)
    wall = time.perf_counter() - start

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    any_spec = spec_for(samples[0])
    manifest = {
        "version": __version__,
        "kind": "snapshots",
        "problem": label,
        "grid": _grid_dict(any_spec.grid),
        "samples": list(samples),
        "levels_per_sample": any_spec.grid.steps,
        "source_beta": args.source_beta,
    }
    if args.problem not in CASES:
        manifest["problem_config"] = json.loads(Path(args.problem).read_text(encoding="utf-8"))
    checksum = write_matrix(out / f"{label}_snapshots.bin", snaps.data)
    manifest_add_file(manifest, "state_snapshots", out / f"{label}_snapshots.bin", checksum)
    if not any_spec.is_linear:
        nl = nonlinear_snapshots(spec_for, trajectories)
        checksum = write_matrix(out / f"{label}_nonlinear_snapshots.bin", nl.data)
        manifest_add_file(
            manifest, "nonlinear_snapshots", out / f"{label}_nonlinear_snapshots.bin", checksum
        )
    manifest_path = out / f"{label}_snapshots.json"
    write_manifest(manifest_path, manifest)
    print(f"collected {snaps.data.shape[1]} snapshots of dimension {snaps.data.shape[0]} "
          f"at samples {', '.join(f'{b:g}' for b in samples)} in {wall:.2f}s")
    print(f"wrote {manifest_path}")
    return OK


def cmd_build_rom(args) -> int:
    manifest_path = Path(args.manifest)
    snap_manifest = load_manifest(manifest_path)
    if snap_manifest.get("kind") != "snapshots":
        raise PersistenceError(f"{manifest_path} is not a snapshot manifest")
    directory = manifest_path.parent
    label = snap_manifest["problem"]

    state_snaps = read_matrix(directory / snap_manifest["files"]["state_snapshots"]["path"])
    basis = compute_basis(state_snaps, args.rank)
    tail = float(np.sum(basis.singular_values[args.rank:] ** 2))
    direct = truncation_error(state_snaps, basis)
    print(f"state basis: rank {args.rank} of {basis.singular_values.size}, "
          f"leading singular values "
          f"{', '.join(f'{s:.3e}' for s in basis.singular_values[: args.rank + 2])}")
    print(f"truncation check: residual energy {direct:.6e}, tail energy {tail:.6e}")

    out = Path(args.out) if args.out else directory
    out.mkdir(parents=True, exist_ok=True)
    rom_manifest = {
        "version": __version__,
        "kind": "rom",
        "problem": label,
        "grid": snap_manifest["grid"],
        "samples": snap_manifest["samples"],
        "source_beta": snap_manifest.get("source_beta"),
        "r": args.rank,
        "s": None,
    }
    if "problem_config" in snap_manifest:
        rom_manifest["problem_config"] = snap_manifest["problem_config"]
    checksum = write_matrix(out / f"{label}_basis.bin", basis.matrix)
    manifest_add_file(rom_manifest, "basis", out / f"{label}_basis.bin", checksum)
    checksum = write_matrix(out / f"{label}_singular_values.bin", basis.singular_values)
    manifest_add_file(
        rom_manifest, "singular_values", out / f"{label}_singular_values.bin", checksum
    )

    nl_entry = snap_manifest["files"].get("nonlinear_snapshots")
    nl_basis = None
    deim_indices = None
    if nl_entry is not None:
        if args.deim_rank is None:
            raise ValueError("the problem is nonlinear: a DEIM point count (-s) is required")
        nl_snaps = read_matrix(directory / nl_entry["path"])
        nl_basis = compute_basis(nl_snaps, args.deim_rank)
        deim_op = build_deim_operator(basis, nl_basis.matrix)
        deim_indices = deim_op.indices
        rom_manifest["s"] = args.deim_rank
        checksum = write_matrix(out / f"{label}_nonlinear_basis.bin", nl_basis.matrix)
        manifest_add_file(
            rom_manifest, "nonlinear_basis", out / f"{label}_nonlinear_basis.bin", checksum
        )
        checksum = write_matrix(
            out / f"{label}_deim_points.bin", np.asarray(deim_indices, dtype=np.float64)
        )
        manifest_add_file(
            rom_manifest, "deim_points", out / f"{label}_deim_points.bin", checksum
        )
        print(f"interpolation points: {', '.join(str(i) for i in deim_indices)}")
    elif args.deim_rank is not None:
        print("note: problem is linear; ignoring the DEIM point count")

    rom_path = out / f"{label}_rom.json"
    write_manifest(rom_path, rom_manifest)
    print(f"wrote {rom_path}")
    if not args.no_figures:
        spec = _spec_factory_from_manifest(rom_manifest)(0.5)
        figs = [
            report.save_singular_values(
                out / f"{label}_singular_values.png",
                basis.singular_values,
                None if nl_basis is None else nl_basis.singular_values,
            ),
            report.save_basis(spec.grid, basis.matrix, out / f"{label}_basis.png",
                              title=f"{label} reduced basis"),
        ]
        if deim_indices is not None:
            figs.append(
                report.save_deim_points(
                    spec.grid, nl_basis.matrix, deim_indices, out / f"{label}_deim_points.png"
                )
            )
        for fig in figs:
            print(f"wrote {fig}")
    return OK


def _rom_from_manifest(manifest: dict, directory: Path):
    spec_for = _spec_factory_from_manifest(manifest)
    basis = ReducedBasis(
        matrix=read_matrix(directory / manifest["files"]["basis"]["path"]),
        singular_values=read_matrix(
            directory / manifest["files"]["singular_values"]["path"]
        ).ravel(),
    )
    deim_op = None
    if manifest.get("s") is not None:
        psi = read_matrix(directory / manifest["files"]["nonlinear_basis"]["path"])
        indices = read_matrix(directory / manifest["files"]["deim_points"]["path"])
        deim_op = build_deim_operator(basis, psi, indices=indices.ravel().astype(np.intp))
    stiffness = assemble_stiffness(spec_for(0.5))
    return build_rom(stiffness, basis, deim_op), spec_for


def cmd_rom_solve(args) -> int:
    manifest_path = Path(args.manifest)
    manifest = load_manifest(manifest_path)
    if manifest.get("kind") != "rom":
        raise PersistenceError(f"{manifest_path} is not a reduced-model manifest")
    rom, spec_for = _rom_from_manifest(manifest, manifest_path.parent)
    spec = spec_for(args.beta)

    start = time.perf_counter()
    traj = rom_solve(rom, spec)
    wall = time.perf_counter() - start
    final = lift(traj)

    label = manifest["problem"]
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    prefix = f"{label}_rom_beta{args.beta:g}"
    result_manifest = {
        "version": __version__,
        "kind": "reduced-trajectory",
        "problem": label,
        "beta": args.beta,
        "r": manifest["r"],
        "s": manifest.get("s"),
        "grid": manifest["grid"],
    }
    checksum = write_matrix(out / f"{prefix}_coefficients.bin", traj.coefficients)
    manifest_add_file(result_manifest, "coefficients", out / f"{prefix}_coefficients.bin", checksum)
    checksum = write_matrix(out / f"{prefix}_final.bin", final)
    manifest_add_file(result_manifest, "final_state", out / f"{prefix}_final.bin", checksum)
    write_manifest(out / f"{prefix}.json", result_manifest)

    print(f"reduced solve of {label} at beta={args.beta:g}: r={manifest['r']}"
          + (f", s={manifest['s']}" if manifest.get("s") else "")
          + f", {wall:.3f}s")
    case = CASES.get(label)
    exact = _exact_final(case, spec)
    if exact is not None:
        err = discrete_l2_error(final, exact, spec.grid.cell_weight)
        print(f"final-time error vs exact solution: {err:.4e}")
    if not args.no_figures:
        fig = report.save_state(spec.grid, final, out / f"{prefix}.png",
                                title=f"{label} reduced, beta={args.beta:g}")
        print(f"wrote {fig}")
    print(f"wrote {out / (prefix + '.json')}")
    return OK


def cmd_identify(args) -> int:
    label, factory, case = _resolve_problem(args.problem)

    if args.data is None and args.beta_star is None:
        raise ValueError("either --data or --beta-star is required")
    source_beta = args.source_beta if args.source_beta is not None else args.beta_star

    if args.manifest is not None:
        manifest = load_manifest(Path(args.manifest))
        if manifest.get("kind") != "rom":
            raise PersistenceError(f"{args.manifest} is not a reduced-model manifest")
        spec_for = _spec_factory_from_manifest(manifest)
    else:
        def matched(beta):
            return factory(beta, **_grid_overrides(args))

        if source_beta is not None:
            spec_for = frozen_spec_factory(matched(source_beta))
        else:
            spec_for = matched

    if args.data is not None:
        observed = read_matrix(args.data).ravel()
        data = add_noise(observed, args.noise, seed=args.seed)
    else:
        clean = fom_solve(spec_for(args.beta_star)).final
        data = add_noise(clean, args.noise, seed=args.seed)

    if args.forward == "fom":
        forward = FomForward(spec_for)
    elif args.manifest is not None:
        rom, _ = _rom_from_manifest(manifest, Path(args.manifest).parent)
        forward = RomForward(rom, spec_for)
    else:
        r = args.rank if args.rank is not None else (case.pod_dim if case else 4)
        s = args.deim_rank if args.deim_rank is not None else (case.deim_dim if case else 10)
        if spec_for(0.5).is_linear:
            s = None
        start = time.perf_counter()
        model = build_offline_model(spec_for, _parse_samples(args.samples), r, s)
        print(f"offline phase: {time.perf_counter() - start:.2f}s "
              f"(r={r}" + (f", s={s}" if s else "") + ")")
        forward = RomForward(model.rom, spec_for)

    config = LmConfig(
        beta0=args.beta0,
        tol=args.tol,
        max_iterations=args.max_iterations,
        regularized=not args.unregularized,
    )
    result = identify(config, data, forward)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    prefix = f"{label}_identify_{args.forward}"
    write_trace(out / f"{prefix}_trace.csv", result)
    summary = {
        "version": __version__,
        "kind": "identification",
        "problem": label,
        "forward": args.forward,
        "beta0": args.beta0,
        "beta_star": args.beta_star,
        "noise_percent": args.noise,
        "seed": args.seed,
        "beta_inv": result.beta_inv,
        "iterations": result.iterations,
        "converged": result.converged,
        "forward_solves": result.forward_solves,
        "final_objective": result.final_objective,
    }
    write_manifest(out / f"{prefix}.json", summary)

    print(f"beta_inv = {result.beta_inv:.10f}")
    if args.beta_star is not None:
        print(f"|beta* - beta_inv| = {abs(args.beta_star - result.beta_inv):.4e}")
    print(f"iterations = {result.iterations}, objective = {result.final_objective:.4e}")
    solves = getattr(forward, "n_solves", result.forward_solves)
    extra = ""
    if getattr(forward, "linear_solves", 0):
        extra = f" ({forward.linear_solves} linear systems)"
    print(f"forward solves = {solves}{extra}, wall time = {result.wall_time:.3f}s")
    if not args.no_figures:
        fig = report.save_identification(
            out / f"{prefix}.png", {f"beta0={args.beta0:g}": result}, args.beta_star
        )
        print(f"wrote {fig}")
    print(f"wrote {out / (prefix + '_trace.csv')}")
    if not result.converged:
        print("warning: iteration budget exhausted before the step tolerance was met",
              file=sys.stderr)
        return NUMERICAL_FAILURE
    return OK


def cmd_reproduce_table(args) -> int:
    options = {}
    if args.table in (5, 6):
        options["n_seeds"] = args.seeds
        options["noisy"] = not args.skip_noisy
    elif args.table in (7, 8):
        options["forwards"] = ("rom",) if args.forward == "rom" else ("fom", "rom")
        options["noisy"] = not args.skip_noisy
        options["seed"] = args.seed if args.seed is not None else FIXED_NOISE_SEED
    result = run_table(args.table, **options)
    print(result.render())

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    _write_csv(out / f"table{args.table}.csv", result.columns, result.rows)
    _write_csv(
        out / f"table{args.table}_checks.csv",
        ("label", "actual", "expected", "passed", "enforced"),
        [
            (c.label, format(c.actual, ".17g"),
             "" if c.expected is None else format(c.expected, ".17g"),
             c.passed, c.enforced)
            for c in result.checks
        ],
    )
    print(f"wrote {out / f'table{args.table}.csv'}")
    if not args.no_figures:
        fig = report.save_table_figure(result, out / f"table{args.table}.png")
        print(f"wrote {fig}")
    return OK if result.passed else NUMERICAL_FAILURE


def cmd_bench(args) -> int:
    label, factory, case = _resolve_problem(args.problem)
    if case is None:
        raise ValueError("bench requires a registered problem name")
    beta_star = args.beta_star

    def matched(beta):
        return factory(beta, **_grid_overrides(args))

    spec_for = frozen_spec_factory(matched(beta_star))
    observed = fom_solve(spec_for(beta_star)).final
    data = add_noise(observed, args.noise, seed=args.seed)

    start = time.perf_counter()
    model = build_offline_model(spec_for, case.samples, case.pod_dim, case.deim_dim)
    offline = time.perf_counter() - start

    rows = []
    rom_forward = RomForward(model.rom, spec_for)
    rom_result = identify(LmConfig(beta0=args.beta0), data, rom_forward)
    rows.append(
        ("rom", rom_result.beta_inv, abs(beta_star - rom_result.beta_inv),
         rom_result.iterations, rom_result.forward_solves, 0, rom_result.wall_time)
    )
    fom_forward = FomForward(spec_for)
    fom_result = identify(LmConfig(beta0=args.beta0), data, fom_forward)
    rows.append(
        ("fom", fom_result.beta_inv, abs(beta_star - fom_result.beta_inv),
         fom_result.iterations, fom_result.forward_solves,
         fom_forward.linear_solves, fom_result.wall_time)
    )

    print(f"bench {label}: beta*={beta_star:g}, beta0={args.beta0:g}, "
          f"noise={args.noise:g}%, offline {offline:.2f}s")
    header = ("forward", "beta_inv", "error", "iterations",
              "forward_solves", "linear_systems", "wall_seconds")
    widths = (7, 13, 10, 10, 14, 14, 12)
    print("  ".join(h.ljust(w) for h, w in zip(header, widths)))
    for row in rows:
        cells = (row[0], f"{row[1]:.6e}", f"{row[2]:.3e}", str(row[3]),
                 str(row[4]), str(row[5]), f"{row[6]:.3f}")
        print("  ".join(c.ljust(w) for c, w in zip(cells, widths)))
    speedup = fom_result.wall_time / rom_result.wall_time
    agreement = abs(fom_result.beta_inv - rom_result.beta_inv)
    print(f"speedup (online) = {speedup:.1f}x, recovered orders differ by {agreement:.2e}")

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    bench_path = out / f"{label}_bench.csv"
    # wall seconds are not written: outputs stay byte-stable across reruns
    _write_csv(bench_path, header[:-1],
               [(r[0], format(r[1], ".17g"), format(r[2], ".17g"), r[3], r[4], r[5])
                for r in rows])
    print(f"wrote {bench_path}")
    if not args.no_figures:
        fig = report.save_identification(
            out / f"{label}_bench.png",
            {"reduced forward": rom_result, "full forward": fom_result},
            beta_star,
        )
        print(f"wrote {fig}")
    return OK


# --- argument parsing ---------------------------------------------------------


def _add_grid_flags(parser, with_defaults_from=None) -> None:
    parser.add_argument("--n", type=int, default=None,
                        help="interior nodes per axis (default: problem default)")
    parser.add_argument("--steps", "--m", type=int, default=None, dest="steps",
                        help="time steps (default: problem default)")
    parser.add_argument("--t-final", type=float, default=None,
                        help="final time (default: problem default)")


def _add_output_flags(parser) -> None:
    parser.add_argument("--out", default=".", help="output directory (default: .)")
    parser.add_argument("--no-figures", action="store_true",
                        help="skip figure rendering, emit data files only")


def _beta_in_unit(text: str) -> float:
    value = float(text)
    if not 0.0 < value < 1.0:
        raise argparse.ArgumentTypeError(f"order must lie in (0, 1), got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fracrom",
        description="Reduced-order modeling and order identification for "
                    "time-fractional diffusion-reaction problems.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fom-solve", help="full-order solve of one problem at one order")
    p.add_argument("problem", help="registered case name or JSON problem file")
    p.add_argument("--beta", type=_beta_in_unit, required=True, help="fractional order")
    _add_grid_flags(p)
    _add_output_flags(p)
    p.set_defaults(func=cmd_fom_solve)

    p = sub.add_parser("snapshots", help="sample the full model and store snapshot matrices")
    p.add_argument("problem", help="registered case name or JSON problem file")
    p.add_argument("--samples", required=True,
                   help="comma-separated sample orders, e.g. 0.2,0.4,0.6,0.8")
    p.add_argument("--source-beta", type=_beta_in_unit, default=None,
                   help="freeze problem data at this order (identification offline phase)")
    _add_grid_flags(p)
    p.add_argument("--out", default=".", help="output directory (default: .)")
    p.set_defaults(func=cmd_snapshots)

    p = sub.add_parser("build-rom", help="compute reduced bases from stored snapshots")
    p.add_argument("manifest", help="snapshot manifest path")
    p.add_argument("-r", "--rank", type=int, required=True, help="reduced state dimension")
    p.add_argument("-s", "--deim-rank", type=int, default=None,
                   help="interpolation point count (nonlinear problems)")
    p.add_argument("--out", default=None, help="output directory (default: manifest directory)")
    p.add_argument("--no-figures", action="store_true",
                   help="skip figure rendering, emit data files only")
    p.set_defaults(func=cmd_build_rom)

    p = sub.add_parser("rom-solve", help="reduced-order solve from a stored model")
    p.add_argument("manifest", help="reduced-model manifest path")
    p.add_argument("--beta", type=_beta_in_unit, required=True, help="fractional order")
    _add_output_flags(p)
    p.set_defaults(func=cmd_rom_solve)

    p = sub.add_parser("identify", help="recover the fractional order from observations")
    p.add_argument("problem", help="registered case name or JSON problem file")
    p.add_argument("--beta-star", type=_beta_in_unit, default=None,
                   help="true order for synthetic observations")
    p.add_argument("--beta0", type=_beta_in_unit, default=0.5, help="initial guess")
    p.add_argument("--noise", type=float, default=0.0, help="noise level in percent")
    p.add_argument("--seed", type=int, default=None, help="noise seed")
    p.add_argument("--forward", choices=("rom", "fom"), default="rom",
                   help="forward model driving the loop")
    p.add_argument("--data", default=None,
                   help="matrix file with observed final-time values "
                        "(default: synthesize from --beta-star)")
    p.add_argument("--manifest", default=None,
                   help="reduced-model manifest (default: build the model in-process)")
    p.add_argument("--source-beta", type=_beta_in_unit, default=None,
                   help="order the problem data is frozen at (default: --beta-star)")
    p.add_argument("--samples", default="0.2,0.4,0.6,0.8",
                   help="sample orders for the in-process offline phase")
    p.add_argument("--rank", type=int, default=None, help="reduced dimension (in-process)")
    p.add_argument("--deim-rank", type=int, default=None,
                   help="interpolation points (in-process, nonlinear)")
    p.add_argument("--tol", type=float, default=1e-7, help="step-size stopping tolerance")
    p.add_argument("--max-iterations", type=int, default=50)
    p.add_argument("--unregularized", action="store_true",
                   help="drop the damping term from the direction solve")
    _add_grid_flags(p)
    _add_output_flags(p)
    p.set_defaults(func=cmd_identify)

    p = sub.add_parser("reproduce-table", help="re-run a recorded benchmark table")
    p.add_argument("table", type=int, choices=range(1, 9), help="table id (1-8)")
    p.add_argument("--seeds", type=int, default=10,
                   help="seed count for noise statistics (tables 5-6)")
    p.add_argument("--forward", choices=("both", "rom"), default="both",
                   help="forward models to run (tables 7-8)")
    p.add_argument("--seed", type=int, default=None,
                   help="fixed-noise seed (tables 7-8)")
    p.add_argument("--skip-noisy", action="store_true",
                   help="clean-data rows only (tables 5-8)")
    _add_output_flags(p)
    p.set_defaults(func=cmd_reproduce_table)

    p = sub.add_parser("bench", help="time the full against the reduced forward map")
    p.add_argument("problem", help="registered case name")
    p.add_argument("--beta-star", type=_beta_in_unit, default=0.75, help="true order")
    p.add_argument("--beta0", type=_beta_in_unit, default=0.5, help="initial guess")
    p.add_argument("--noise", type=float, default=0.0, help="noise level in percent")
    p.add_argument("--seed", type=int, default=None, help="noise seed")
    _add_grid_flags(p)
    _add_output_flags(p)
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _NUMERICAL_ERRORS as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return NUMERICAL_FAILURE
    except (PersistenceError, KeyError, ValueError, OSError, json.JSONDecodeError) as exc:
        message = exc.args[0] if exc.args else exc
        print(f"error: {message}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())

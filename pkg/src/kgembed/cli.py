"""Command line entry point: ``kgembed {simulate,decompose,check,sweep}``.

Exit codes: 0 success, 1 failed checks or I/O problems, 2 invalid
configuration or usage, 3 numerical blowup.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from .config import RunConfig, config_from_mapping, read_pairs
from .diagnostics import record_from_state
from .embedding import diagonalize
from .errors import ConfigurationError, NumericalBlowupError
from .evolution import Scheme, run
from .initial import InitialConditionSpec, InitialKind, build_initial_state
from .io import format_diagnostics, write_diagnostics, write_snapshot
from .operators import build_symbol
from .verification import (
    CheckResult,
    evolve_records,
    format_table,
    norm_drift,
    oracle_errors,
    projector_defects,
)

log = logging.getLogger("kgembed")

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2
EXIT_BLOWUP = 3


def _read_mapping(path) -> dict[str, str]:
    with open(path, encoding="utf-8") as fh:
        return read_pairs(fh.read())


def _snapshot_path(template: str, step: int) -> Path:
    if "{step" in template:
        return Path(template.format(step=step))
    p = Path(template)
    return p.with_name(f"{p.stem}_{step:06d}{p.suffix}")


def simulate(cfg: RunConfig, diagnostics_path=None) -> list:
    sym = build_symbol(cfg.grid, cfg.params)
    state = build_initial_state(cfg.initial, cfg.grid, sym, cfg.params)
    records = []
    snapshot = None
    if cfg.outputs.snapshot_path:
        template = cfg.outputs.snapshot_path
        snapshot = lambda s, step: write_snapshot(s, _snapshot_path(template, step))  # noqa: E731

    run(state, cfg.integrator, sym, cfg.params, sink=records.append,
        snapshot=snapshot, snapshot_stride=cfg.outputs.snapshot_stride)
    write_diagnostics(records, diagnostics_path or cfg.outputs.diagnostics_path)
    return records


def decompose(cfg: RunConfig) -> str:
    sym = build_symbol(cfg.grid, cfg.params)
    state = build_initial_state(cfg.initial, cfg.grid, sym, cfg.params)
    return format_diagnostics([record_from_state(diagonalize(state), sym, cfg.params)])


def run_checks(cfg: RunConfig) -> list[CheckResult]:
    """Conservation, rho identity, leapfrog agreement and projector consistency."""
    th = cfg.check
    sym = build_symbol(cfg.grid, cfg.params)
    state = build_initial_state(cfg.initial, cfg.grid, sym, cfg.params)
    t_final = cfg.integrator.t_final if cfg.integrator.t_final > 0 else 1.0
    _, records = evolve_records(state, Scheme.EXACT, cfg.integrator.dt, t_final, sym,
                                sample_stride=cfg.integrator.sample_stride)
    results = []
    drift = max(norm_drift(records))
    results.append(CheckResult("norm conservation (exact)", drift, f"< {th.conservation_tol:g}",
                               drift < th.conservation_tol))
    lowest = min(min(r.norm_plus, r.norm_minus) for r in records)
    results.append(CheckResult("norm positivity", lowest, ">= 0", lowest >= 0))
    defect = max(r.identity_defect for r in records)
    results.append(CheckResult("rho identity defect", defect, f"< {th.identity_tol:g}",
                               defect < th.identity_tol))

    oracle_t = min(th.oracle_t_final, t_final)
    errors = oracle_errors(state, [th.oracle_dt, th.oracle_dt / 2], oracle_t, sym)
    ratio = errors[0] / errors[1] if errors[1] > 0 else float("inf")
    results.append(CheckResult(
        "leapfrog order ratio", ratio, f"in [{th.oracle_ratio_min:g}, {th.oracle_ratio_max:g}]",
        th.oracle_ratio_min <= ratio <= th.oracle_ratio_max,
    ))

    rng = np.random.default_rng(th.seed)
    route, total = projector_defects(cfg.grid, sym, th.projector_samples, rng)
    results.append(CheckResult("projector routes agree", route, f"< {th.projector_tol:g}",
                               route < th.projector_tol))
    results.append(CheckResult("Pi+ f + Pi- f = 2f", total, f"< {th.projector_tol:g}",
                               total < th.projector_tol))

    plus = InitialConditionSpec(kind=InitialKind.PURE_PLUS, width=cfg.initial.width,
                                mean_wavenumber=cfg.initial.mean_wavenumber)
    if cfg.initial.kind in (InitialKind.GAUSSIAN, InitialKind.PURE_PLUS, InitialKind.PURE_MINUS):
        for kind, sign in ((InitialKind.PURE_PLUS, -1), (InitialKind.PURE_MINUS, +1)):
            pure = build_initial_state(replace(plus, kind=kind), cfg.grid, sym, cfg.params)
            rec = record_from_state(pure, sym, cfg.params)
            results.append(CheckResult(
                f"rho sign, {kind.value}", rec.rho_integral, "< 0" if sign < 0 else "> 0",
                sign * rec.rho_integral > 0,
            ))
    return results


def _suffixed(path: str, value: str) -> str:
    p = Path(path)
    return str(p.with_name(f"{p.stem}_{value}{p.suffix}"))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kgembed", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="evolve and write a diagnostics CSV")
    p.add_argument("--config", required=True)
    p.add_argument("--output", help="override outputs.diagnostics_path")

    p = sub.add_parser("decompose", help="eta norms, energies and rho at t=0 as one CSV row")
    p.add_argument("--config", required=True)
    p.add_argument("--output", help="write to this file instead of stdout")

    p = sub.add_parser("check", help="run the invariant suite and print a pass/fail table")
    p.add_argument("--config", required=True)

    p = sub.add_parser("sweep", help="repeat simulate over values of one config key")
    p.add_argument("--config", required=True)
    p.add_argument("--key", required=True)
    p.add_argument("--values", required=True, help="comma separated")
    return parser


def cli_main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_CONFIG
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        mapping = _read_mapping(args.config)
        if args.command == "sweep":
            return _sweep(mapping, args.key, [v.strip() for v in args.values.split(",") if v.strip()])
        cfg = config_from_mapping(mapping)
        if args.command == "simulate":
            records = simulate(cfg, args.output)
            log.info("wrote %d records to %s", len(records), args.output or cfg.outputs.diagnostics_path)
            return EXIT_OK
        if args.command == "decompose":
            text = decompose(cfg)
            if args.output:
                Path(args.output).write_text(text, encoding="utf-8")
            else:
                sys.stdout.write(text)
            return EXIT_OK
        if args.command == "check":
            results = run_checks(cfg)
            print(format_table(results))
            return EXIT_OK if all(r.passed for r in results) else EXIT_FAILURE
    except ConfigurationError as exc:
        print(f"kgembed: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalBlowupError as exc:
        print(f"kgembed: numerical blowup: {exc}", file=sys.stderr)
        return EXIT_BLOWUP
    except OSError as exc:
        print(f"kgembed: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    return EXIT_CONFIG


def _sweep(mapping, key, values) -> int:
    if not values:
        raise ConfigurationError("no values given", key="--values")
    # Validate every variant before running any of them.
    configs = []
    for value in values:
        variant = {**mapping, key: value}
        cfg = config_from_mapping(variant)
        outputs = cfg.outputs
        snapshot_path = _suffixed(outputs.snapshot_path, value) if outputs.snapshot_path else None
        cfg = replace(cfg, outputs=replace(outputs,
                                           diagnostics_path=_suffixed(outputs.diagnostics_path, value),
                                           snapshot_path=snapshot_path))
        configs.append(cfg)
    for cfg in configs:
        simulate(cfg)
        print(cfg.outputs.diagnostics_path)
    return EXIT_OK


def main():
    sys.exit(cli_main())

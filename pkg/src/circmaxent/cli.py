"""Command-line interface.

Subcommands mirror the pipeline stages (moments, condition, uncondition,
maxent, invert) plus the end-to-end runners (pipeline, experiment).  All
numeric output is deterministic; exit status is 0 on success, 1 on domain
errors, 2 on usage errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .conditioning import ConditioningOptions, condition_moments, uncondition_moments
from .errors import CircMaxEntError
from .harness import (
    CONDITIONED_KEY,
    UNCONDITIONED_KEY,
    ExperimentConfig,
    run_pipeline_report,
)
from .inversion import invert_phase
from .maxent import SolveOptions, experiment_solve_options, solve
from .moments import MeasureSpec, TrigMomentSequence, moments_of_measure
from .reference import MEASURE_IDS, named_measure
from .spectral import FourierSeries


def _write_json(path: str, payload: dict) -> None:
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _read_moments(path: str) -> TrigMomentSequence:
    return TrigMomentSequence.from_json_dict(json.loads(Path(path).read_text()))


def _series_from_json(payload: dict) -> FourierSeries:
    half = np.array([complex(re, im) for re, im in payload["values"]])
    full = np.concatenate([np.conj(half[:0:-1]), half])
    return FourierSeries(full)


def _series_to_json(series: FourierSeries) -> dict:
    half = [series[k] for k in range(series.bandwidth + 1)]
    return {
        "K": len(half),
        "values": [[float(v.real), float(v.imag)] for v in half],
    }


def _measure_spec(args) -> MeasureSpec:
    if args.spec is not None:
        return MeasureSpec.from_json_dict(json.loads(Path(args.spec).read_text()))
    if args.measure is None:
        raise CircMaxEntError("one of --measure or --spec is required")
    return named_measure(args.measure, a=args.a)


def _add_measure_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--measure", choices=MEASURE_IDS, help="built-in measure id")
    parser.add_argument("--spec", help="path to a MeasureSpec JSON file")
    parser.add_argument("--a", type=float, default=1.0, help="point-mass location (default 1)")
    parser.add_argument("-K", type=int, default=20, help="number of moments (default 20)")


def _add_solver_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--tol", type=float, help="objective tolerance")
    parser.add_argument("--max-iter", type=int, help="iteration cap")
    parser.add_argument("--grid", type=int, help="quadrature size")
    parser.add_argument("--fd", action="store_true", help="finite-difference gradients")


def _solve_options(args, base: SolveOptions | None = None) -> SolveOptions:
    opts = base or SolveOptions()
    updates = {}
    if args.tol is not None:
        updates["objective_tol"] = args.tol
    if args.max_iter is not None:
        updates["max_iterations"] = args.max_iter
    if args.grid is not None:
        updates["quadrature_size"] = args.grid
    if args.fd:
        updates["gradient_mode"] = "fd"
    if not updates:
        return opts
    fields = opts.to_json_dict()
    fields.update(updates)
    return SolveOptions(**fields)


def _cmd_moments(args) -> int:
    spec = _measure_spec(args)
    seq = moments_of_measure(spec, args.K)
    _write_json(args.output, seq.to_json_dict())
    return 0


def _cmd_condition(args) -> int:
    seq = _read_moments(args.input)
    phase = condition_moments(seq, ConditioningOptions(M=args.M, variant=args.variant))
    _write_json(args.output, phase.to_json_dict())
    return 0


def _cmd_uncondition(args) -> int:
    phase = _read_moments(args.input)
    seq = uncondition_moments(phase, args.tau0, ConditioningOptions(M=args.M))
    _write_json(args.output, seq.to_json_dict())
    return 0


def _cmd_maxent(args) -> int:
    targets = _read_moments(args.input)
    model, diagnostics = solve(targets, _solve_options(args))
    _write_json(args.output, model.to_json_dict())
    if args.diag is not None:
        _write_json(args.diag, diagnostics.to_json_dict())
    print(
        f"{diagnostics.status}: {diagnostics.iterations} iterations, "
        f"objective {diagnostics.final_objective:.6e}"
    )
    return 0


def _cmd_invert(args) -> int:
    series = _series_from_json(json.loads(Path(args.input).read_text()))
    record = invert_phase(
        series, tau_mu0=args.tau0, M=args.M, grid_size=args.grid or 4096
    )
    _write_json(
        args.output,
        {
            "coefficient_count": record.coefficient_count,
            "min_value": record.min_value,
            "series": _series_to_json(record.series),
        },
    )
    return 0


def _run_report(args, mode: str) -> int:
    config = ExperimentConfig(
        measure=args.spec if args.spec is not None else args.measure,
        K=args.K,
        M=args.M,
        solve_options=_solve_options(args, experiment_solve_options()),
        extended_orders=args.extended,
        point_mass_location=args.a,
        emit_plots=args.emit_plots,
    )
    if config.measure is None:
        raise CircMaxEntError("one of --measure or --spec is required")
    if mode == "both":
        selected = (UNCONDITIONED_KEY, CONDITIONED_KEY)
    else:
        selected = (mode,)
    report = run_pipeline_report(config, selected, output_dir=args.output)
    for key in selected:
        method = report.method(key)
        if method.error is not None:
            print(f"{key}: FAILED ({method.error})")
        else:
            d = method.diagnostics
            print(
                f"{key}: {d.status}, squared moment error "
                f"{method.squared_error_first_k:.6e}, "
                f"{method.coefficient_count} coefficients"
            )
    return 0


def _cmd_pipeline(args) -> int:
    return _run_report(args, args.mode)


def _cmd_experiment(args) -> int:
    return _run_report(args, "both")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="circmaxent",
        description="Reconstruct circle measures from truncated trigonometric moments",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("moments", help="compute moments of a measure")
    _add_measure_flags(p)
    p.add_argument("-o", "--output", required=True, help="moments JSON output path")
    p.set_defaults(func=_cmd_moments)

    p = sub.add_parser("condition", help="transform measure moments to phase moments")
    p.add_argument("--in", dest="input", required=True, help="moments JSON input path")
    p.add_argument("--M", type=float, default=0.0, help="shift (default 0)")
    p.add_argument(
        "--variant", choices=("shifted-log", "mercator-m1"), default="shifted-log"
    )
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=_cmd_condition)

    p = sub.add_parser("uncondition", help="invert the moment transform")
    p.add_argument("--in", dest="input", required=True, help="phase moments JSON path")
    p.add_argument("--tau0", type=float, required=True, help="zeroth measure moment")
    p.add_argument("--M", type=float, default=0.0)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=_cmd_uncondition)

    p = sub.add_parser("maxent", help="fit the entropy-maximizing density to moments")
    p.add_argument("--in", dest="input", required=True, help="target moments JSON path")
    _add_solver_flags(p)
    p.add_argument("-o", "--output", required=True, help="model JSON output path")
    p.add_argument("--diag", help="optional diagnostics JSON output path")
    p.set_defaults(func=_cmd_maxent)

    p = sub.add_parser("invert", help="reconstruct a density from a phase series")
    p.add_argument("--in", dest="input", required=True, help="phase series JSON path")
    p.add_argument("--tau0", type=float, required=True, help="zeroth measure moment")
    p.add_argument("--M", type=float, default=0.0)
    p.add_argument("--grid", type=int, help="evaluation grid size (default 4096)")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=_cmd_invert)

    for name, helptext in (
        ("pipeline", "run reconstruction pipeline(s) and write a report directory"),
        ("experiment", "run both pipelines and write the full comparison report"),
    ):
        p = sub.add_parser(name, help=helptext)
        _add_measure_flags(p)
        p.add_argument("--M", type=float, default=0.0)
        if name == "pipeline":
            p.add_argument(
                "--mode",
                choices=("conditioned", "unconditioned", "both"),
                default="both",
            )
        p.add_argument("--extended", type=int, default=20, help="extra moment orders compared")
        _add_solver_flags(p)
        p.add_argument("--emit-plots", action="store_true")
        p.add_argument("-o", "--output", required=True, help="report directory")
        p.set_defaults(func=_cmd_pipeline if name == "pipeline" else _cmd_experiment)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CircMaxEntError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

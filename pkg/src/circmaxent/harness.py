"""Experiment runner: the two reconstruction pipelines side by side.

``run_experiment`` executes the unconditioned and the conditioned pipeline
on one measure with one shared set of solver options, collects moment
errors (including orders beyond the input truncation), pointwise errors
against the ground truth, and coefficient counts, and writes a
deterministic report directory:

    report.json        diagnostics, squared moment errors, counts, config
    moments.json       ground-truth moments, orders 0..K+extended-1
    moment_errors.csv  k, re_err_U, im_err_U, re_err_C, im_err_C
    pointwise.csv      theta, mu_true, mu_U, mu_C, err_U, err_C
    phase.csv          theta, phi_C
    *.svg              optional line charts (--emit-plots)

Identical configurations produce byte-identical CSV/JSON outputs.
"""
from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from ._svg import line_chart
from .conditioning import ConditioningOptions
from .errors import CircMaxEntError, DomainError, ReportLockError
from .inversion import (
    INVERSION_GRID_SIZE,
    ReconstructedDensity,
    pipeline_conditioned,
    pipeline_unconditioned,
)
from .maxent import SolveDiagnostics, SolveOptions, experiment_solve_options
from .moments import (
    MeasureSpec,
    TrigMomentSequence,
    moments_of_density,
    moments_of_measure,
)
from .reference import MEASURE_IDS, density_and_moments
from .spectral import PeriodicGrid, analyze, evaluate

POINTWISE_GRID_SIZE = 2048

UNCONDITIONED_KEY = "unconditioned"
CONDITIONED_KEY = "conditioned"


@dataclass(frozen=True)
class ExperimentConfig:
    """What to reconstruct and how; shared by both pipelines.

    ``measure`` is a built-in id (point_mass, gaussians, rectangular) or a
    path to a MeasureSpec JSON file.  ``solve_options`` defaults to the
    derivative-free-style settings of :func:`experiment_solve_options` so
    both solvers run to their noise floor under identical rules.
    """

    measure: str
    K: int = 20
    M: float = 0.0
    solve_options: SolveOptions = field(default_factory=experiment_solve_options)
    extended_orders: int = 20
    point_mass_location: float = 1.0
    emit_plots: bool = False
    inversion_grid: int = INVERSION_GRID_SIZE
    pointwise_grid: int = POINTWISE_GRID_SIZE

    def __post_init__(self):
        if self.K < 1:
            raise DomainError("K must be at least 1")
        if self.extended_orders < 0:
            raise DomainError("extended_orders must be nonnegative")
        if self.inversion_grid % self.pointwise_grid != 0:
            raise DomainError("inversion grid must be a multiple of the pointwise grid")

    def to_json_dict(self) -> dict:
        return {
            "measure": self.measure,
            "K": self.K,
            "M": self.M,
            "solve_options": self.solve_options.to_json_dict(),
            "extended_orders": self.extended_orders,
            "point_mass_location": self.point_mass_location,
            "emit_plots": self.emit_plots,
            "inversion_grid": self.inversion_grid,
            "pointwise_grid": self.pointwise_grid,
        }


@dataclass(frozen=True)
class MethodReport:
    """Outcome of one pipeline (or the error that stopped it)."""

    diagnostics: SolveDiagnostics | None = None
    moment_deltas: np.ndarray | None = field(default=None, repr=False)
    squared_error_first_k: float | None = None
    coefficient_count: int | None = None
    phase_coefficient_count: int | None = None
    min_value: float | None = None
    pointwise: np.ndarray | None = field(default=None, repr=False)
    phase_pointwise: np.ndarray | None = field(default=None, repr=False)
    model_json: dict | None = None
    error: str | None = None

    def to_json_dict(self) -> dict:
        payload: dict = {"error": self.error}
        if self.error is None:
            payload.update(
                {
                    "diagnostics": self.diagnostics.to_json_dict(),
                    "squared_error_first_K": self.squared_error_first_k,
                    "coefficient_count": self.coefficient_count,
                    "min_value": self.min_value,
                    "model": self.model_json,
                }
            )
            if self.phase_coefficient_count is not None:
                payload["phase_coefficient_count"] = self.phase_coefficient_count
        return payload


@dataclass(frozen=True)
class ReconstructionReport:
    """Self-contained result bundle for one experiment."""

    config: ExperimentConfig
    truth_moments: TrigMomentSequence
    theta: np.ndarray = field(repr=False)
    mu_true: np.ndarray = field(repr=False)  # NaN marks masked (atom) nodes
    methods: dict = field(default_factory=dict)

    def method(self, key: str) -> MethodReport:
        return self.methods[key]

    def write(self, output_dir: str | Path) -> Path:
        return write_report(self, output_dir)


def _atom_mask(theta: np.ndarray, atoms) -> np.ndarray:
    """True at the grid node nearest to each atom (error undefined there)."""
    mask = np.zeros(theta.size, dtype=bool)
    for location, _ in atoms:
        wrapped = np.mod(location + np.pi, 2.0 * np.pi) - np.pi
        mask[int(np.argmin(np.abs(theta - wrapped)))] = True
    return mask


def _resolve_measure(config: ExperimentConfig, total_orders: int):
    """Ground truth for a built-in id or a MeasureSpec file.

    Returns (truth_moments, mu_true on the pointwise grid with NaN at
    atom nodes).
    """
    theta = PeriodicGrid(config.pointwise_grid).nodes
    if config.measure in MEASURE_IDS:
        truth, moments = density_and_moments(
            config.measure, total_orders, a=config.point_mass_location
        )
        if config.measure == "point_mass":
            mu_true = np.zeros(theta.size)
            mu_true[_atom_mask(theta, truth)] = np.nan
        else:
            mu_true = np.asarray(truth(theta), dtype=float)
        return moments, mu_true

    path = Path(config.measure)
    if not path.exists():
        raise DomainError(
            f"measure {config.measure!r} is neither a built-in id {MEASURE_IDS} "
            f"nor an existing MeasureSpec file"
        )
    spec = MeasureSpec.from_json_dict(json.loads(path.read_text()))
    moments = moments_of_measure(spec, total_orders)
    mu_true = np.zeros(theta.size)
    if spec.density is not None:
        series = analyze(np.asarray(spec.density, dtype=float))
        mu_true += evaluate(series, theta)
        if spec.normalize:
            # moments were rescaled to unit mass; scale the density to match
            raw = moments_of_measure(replace(spec, normalize=False), 1)
            mu_true *= moments.values[0].real / raw.values[0].real
    if spec.atoms:
        mu_true[_atom_mask(theta, spec.atoms)] = np.nan
    return moments, mu_true


def _method_report(
    record: ReconstructedDensity,
    diagnostics: SolveDiagnostics,
    truth: TrigMomentSequence,
    config: ExperimentConfig,
) -> MethodReport:
    total = truth.K
    reconstructed = moments_of_density(record.samples, total)
    deltas = reconstructed.values - truth.values
    squared = float(np.sum(np.abs(deltas[: config.K]) ** 2))
    stride = config.inversion_grid // config.pointwise_grid
    pointwise = record.samples[::stride]
    phase_pointwise = None
    phase_count = None
    if record.phase_series is not None:
        theta = PeriodicGrid(config.pointwise_grid).nodes
        phase_pointwise = record.model.density(theta)
        phase_count = record.phase_series.coefficient_count
    return MethodReport(
        diagnostics=diagnostics,
        moment_deltas=deltas,
        squared_error_first_k=squared,
        coefficient_count=record.coefficient_count,
        phase_coefficient_count=phase_count,
        min_value=record.min_value,
        pointwise=pointwise,
        phase_pointwise=phase_pointwise,
        model_json=record.model.to_json_dict() if record.model is not None else None,
    )


def run_pipeline_report(
    config: ExperimentConfig,
    methods_to_run: tuple[str, ...] = (UNCONDITIONED_KEY, CONDITIONED_KEY),
    output_dir: str | Path | None = None,
) -> ReconstructionReport:
    """Run the selected pipelines and collect the comparison report.

    A failure inside one pipeline is recorded for that method without
    aborting the other.  When ``output_dir`` is given the report files are
    written there as well.
    """
    total_orders = config.K + config.extended_orders
    truth_moments, mu_true = _resolve_measure(config, total_orders)
    truncated = TrigMomentSequence(truth_moments.values[: config.K])
    theta = PeriodicGrid(config.pointwise_grid).nodes

    shared_options = config.solve_options  # single object: identical settings
    methods: dict[str, MethodReport] = {
        UNCONDITIONED_KEY: MethodReport(error="not run"),
        CONDITIONED_KEY: MethodReport(error="not run"),
    }

    if UNCONDITIONED_KEY in methods_to_run:
        try:
            record_u, diag_u = pipeline_unconditioned(
                truncated, shared_options, grid_size=config.inversion_grid
            )
            methods[UNCONDITIONED_KEY] = _method_report(record_u, diag_u, truth_moments, config)
        except CircMaxEntError as exc:
            methods[UNCONDITIONED_KEY] = MethodReport(error=str(exc))

    if CONDITIONED_KEY in methods_to_run:
        try:
            record_c, diag_c = pipeline_conditioned(
                truncated,
                ConditioningOptions(M=config.M),
                shared_options,
                grid_size=config.inversion_grid,
            )
            methods[CONDITIONED_KEY] = _method_report(record_c, diag_c, truth_moments, config)
        except CircMaxEntError as exc:
            methods[CONDITIONED_KEY] = MethodReport(error=str(exc))

    report = ReconstructionReport(
        config=config,
        truth_moments=truth_moments,
        theta=theta,
        mu_true=mu_true,
        methods=methods,
    )
    if output_dir is not None:
        write_report(report, output_dir)
    return report


def run_experiment(config: ExperimentConfig, output_dir: str | Path | None = None) -> ReconstructionReport:
    """Run both pipelines with identical solver options and collect the report."""
    return run_pipeline_report(config, output_dir=output_dir)


def _cell(value) -> str:
    if value is None:
        return ""
    v = float(value)
    if math.isnan(v):
        return ""
    return repr(v)


def _write_csv(path: Path, header: str, rows: list[list]) -> None:
    lines = [header]
    lines.extend(",".join(_cell(v) for v in row) for row in rows)
    path.write_text("\n".join(lines) + "\n")


def _log_abs(values: np.ndarray | None, count: int) -> list[float | None]:
    if values is None:
        return [None] * count
    return [math.log10(max(abs(v), 1e-18)) for v in values]


def write_report(report: ReconstructionReport, output_dir: str | Path) -> Path:
    """Write the report files; exactly one run may own a directory at a time."""
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    lock = out / ".lock"
    try:
        fd = os.open(lock, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
    except FileExistsError:
        raise ReportLockError(
            f"report directory {out} is locked by another run (remove {lock} if stale)"
        ) from None
    os.close(fd)
    try:
        _write_report_files(report, out)
    finally:
        os.unlink(lock)
    return out


def _write_report_files(report: ReconstructionReport, out: Path) -> None:
    u = report.methods.get(UNCONDITIONED_KEY, MethodReport(error="not run"))
    c = report.methods.get(CONDITIONED_KEY, MethodReport(error="not run"))

    payload = {
        "config": report.config.to_json_dict(),
        "identical_solve_options": True,
        "methods": {
            UNCONDITIONED_KEY: u.to_json_dict(),
            CONDITIONED_KEY: c.to_json_dict(),
        },
    }
    (out / "report.json").write_text(
        json.dumps(payload, indent=2, sort_keys=True) + "\n"
    )
    (out / "moments.json").write_text(
        json.dumps(report.truth_moments.to_json_dict(), indent=2, sort_keys=True) + "\n"
    )

    total = report.truth_moments.K
    rows = []
    for k in range(total):
        du = u.moment_deltas[k] if u.moment_deltas is not None else None
        dc = c.moment_deltas[k] if c.moment_deltas is not None else None
        rows.append(
            [
                float(k),
                du.real if du is not None else None,
                du.imag if du is not None else None,
                dc.real if dc is not None else None,
                dc.imag if dc is not None else None,
            ]
        )
    _write_csv(out / "moment_errors.csv", "k,re_err_U,im_err_U,re_err_C,im_err_C", rows)

    rows = []
    for j, th in enumerate(report.theta):
        true_v = report.mu_true[j]
        masked = math.isnan(true_v)
        mu_u = u.pointwise[j] if u.pointwise is not None else None
        mu_c = c.pointwise[j] if c.pointwise is not None else None
        err_u = None if (masked or mu_u is None) else mu_u - true_v
        err_c = None if (masked or mu_c is None) else mu_c - true_v
        rows.append([th, None if masked else true_v, mu_u, mu_c, err_u, err_c])
    _write_csv(out / "pointwise.csv", "theta,mu_true,mu_U,mu_C,err_U,err_C", rows)

    if c.phase_pointwise is not None:
        rows = [[th, ph] for th, ph in zip(report.theta, c.phase_pointwise)]
        _write_csv(out / "phase.csv", "theta,phi_C", rows)

    if report.config.emit_plots:
        _write_plots(report, out, u, c)


def _write_plots(report: ReconstructionReport, out: Path, u: MethodReport, c: MethodReport) -> None:
    theta = [float(t) for t in report.theta]
    total = report.truth_moments.K

    def col(values):
        if values is None:
            return [None] * len(theta)
        return [None if math.isnan(float(v)) else float(v) for v in values]

    (out / "pointwise.svg").write_text(
        line_chart(
            f"Reconstructed density: {report.config.measure}",
            theta,
            [
                ("true", col(report.mu_true)),
                ("unconditioned", col(u.pointwise)),
                ("conditioned", col(c.pointwise)),
            ],
            x_label="theta",
            y_label="density",
        )
    )
    (out / "moment_errors.svg").write_text(
        line_chart(
            f"Moment errors (log10 magnitude): {report.config.measure}",
            [float(k) for k in range(total)],
            [
                ("unconditioned", _log_abs(u.moment_deltas, total)),
                ("conditioned", _log_abs(c.moment_deltas, total)),
            ],
            x_label="moment order k",
            y_label="log10 |delta tau(k)|",
        )
    )
    if c.phase_pointwise is not None:
        (out / "phase.svg").write_text(
            line_chart(
                f"Reconstructed phase density: {report.config.measure}",
                theta,
                [("phase", col(c.phase_pointwise))],
                x_label="theta",
                y_label="phase density",
            )
        )

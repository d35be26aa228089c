"""Recover a density approximation from a phase density.

The reconstruction evaluates

    mu(theta) = -2M - tau0 + 2 (tau0 + M) exp(-H phi(theta)) sin(phi(theta))

pointwise on a fine grid and refits the result as a Fourier series.  H phi
is the circular Hilbert transform, computed by the spectral multiplier
unless the caller supplies it directly (as the closed-form point-mass
oracle does, avoiding a Gibbs-polluted truncation of a discontinuous
phase).
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .conditioning import ConditioningOptions, condition_moments
from .errors import DomainError, PipelineError
from .maxent import MaxEntModel, SolveDiagnostics, SolveOptions, solve
from .moments import TrigMomentSequence
from .spectral import (
    DEFAULT_TAIL_TOL,
    FourierSeries,
    PeriodicGrid,
    analyze,
    evaluate,
    hilbert,
    synthesize,
    truncate_tail,
)

INVERSION_GRID_SIZE = 4096

CONDITIONED = "Conditioned"
UNCONDITIONED = "Unconditioned"


@dataclass(frozen=True)
class ReconstructedDensity:
    """Reconstruction output plus the artifacts that produced it.

    ``series`` is the tail-truncated Fourier representation whose length is
    the reported coefficient count; ``samples`` holds the raw pointwise
    values on the evaluation grid (negative values, when the inversion
    produces them, are preserved and surface through ``min_value``).
    """

    series: FourierSeries
    provenance: str
    samples: np.ndarray = field(repr=False)
    grid_size: int
    coefficient_count: int
    min_value: float
    phase_series: FourierSeries | None = None
    hilbert_phase: FourierSeries | None = None
    model: MaxEntModel | None = None

    @property
    def has_negative_values(self) -> bool:
        return self.min_value < 0.0

    def mean(self) -> float:
        return float(self.series[0].real)


def _phase_on_grid(phase, grid: PeriodicGrid) -> tuple[np.ndarray, FourierSeries]:
    if isinstance(phase, FourierSeries):
        return evaluate(phase, grid.nodes), phase
    if callable(phase):
        samples = np.asarray(phase(grid.nodes), dtype=float)
    else:
        samples = np.asarray(phase, dtype=float)
        if samples.size != grid.size:
            raise DomainError(
                f"phase sample count {samples.size} does not match grid {grid.size}"
            )
    return samples, analyze(samples, grid)


def invert_phase(
    phase,
    tau_mu0: float,
    M: float = 0.0,
    hilbert_phase=None,
    grid_size: int = INVERSION_GRID_SIZE,
    tail_tol: float = DEFAULT_TAIL_TOL,
) -> ReconstructedDensity:
    """Apply the inversion formula to a phase density.

    Parameters
    ----------
    phase : FourierSeries, callable, or sample vector
        Real-valued phase density.
    tau_mu0 : float
        Zeroth moment of the measure being reconstructed (must be > 0).
    M : float
        Shift used when the phase moments were produced.
    hilbert_phase : optional callable or sample vector
        Overrides the spectral-multiplier Hilbert transform; used when a
        closed form is available.
    grid_size : int
        Evaluation grid; grown automatically to 4x the phase bandwidth.

    Negative pointwise values are legitimate output and are reported, not
    clamped.
    """
    if tau_mu0 <= 0.0:
        raise DomainError("tau_mu(0) must be positive")
    if M < 0.0:
        raise DomainError("shift M must be nonnegative")
    if isinstance(phase, FourierSeries):
        needed = 4 * max(1, phase.bandwidth)
        while grid_size < needed:
            grid_size *= 2
    grid = PeriodicGrid(grid_size)
    phase_samples, phase_series = _phase_on_grid(phase, grid)

    hilbert_series: FourierSeries | None
    if hilbert_phase is None:
        hilbert_series = hilbert(phase_series)
        hilbert_samples = synthesize(hilbert_series, grid)
    elif callable(hilbert_phase):
        hilbert_samples = np.asarray(hilbert_phase(grid.nodes), dtype=float)
        hilbert_series = None
    else:
        hilbert_samples = np.asarray(hilbert_phase, dtype=float)
        if hilbert_samples.size != grid.size:
            raise DomainError("hilbert_phase sample count does not match the grid")
        hilbert_series = None

    samples = (
        -2.0 * M
        - tau_mu0
        + 2.0 * (tau_mu0 + M) * np.exp(-hilbert_samples) * np.sin(phase_samples)
    )
    series = truncate_tail(analyze(samples, grid), tail_tol)
    return ReconstructedDensity(
        series=series,
        provenance=CONDITIONED,
        samples=samples,
        grid_size=grid_size,
        coefficient_count=series.coefficient_count,
        min_value=float(samples.min()),
        phase_series=truncate_tail(phase_series, tail_tol),
        hilbert_phase=hilbert_series,
    )


def model_density_series(
    model: MaxEntModel,
    grid_size: int = INVERSION_GRID_SIZE,
    tail_tol: float = DEFAULT_TAIL_TOL,
) -> tuple[np.ndarray, FourierSeries]:
    """Sample a model density on the standard grid and tail-truncate its fit."""
    samples = model.density(PeriodicGrid(grid_size).nodes)
    return samples, truncate_tail(analyze(samples, PeriodicGrid(grid_size)), tail_tol)


def _run_stage(stage: str, fn):
    try:
        return fn()
    except PipelineError:
        raise
    except Exception as exc:
        raise PipelineError(stage, exc) from exc


def pipeline_conditioned(
    tau_mu: TrigMomentSequence,
    cond_opts: ConditioningOptions | None = None,
    solve_opts: SolveOptions | None = None,
    grid_size: int = INVERSION_GRID_SIZE,
) -> tuple[ReconstructedDensity, SolveDiagnostics]:
    """Condition the moments, fit the phase by entropy maximization, invert.

    Stage failures propagate tagged with the stage name (condition, maxent,
    invert).
    """
    cond_opts = cond_opts or ConditioningOptions()
    phase_targets = _run_stage("condition", lambda: condition_moments(tau_mu, cond_opts))
    model, diagnostics = _run_stage("maxent", lambda: solve(phase_targets, solve_opts))

    def _invert():
        phase_samples = model.density(PeriodicGrid(grid_size).nodes)
        record = invert_phase(
            phase_samples,
            tau_mu0=tau_mu.values[0].real,
            M=cond_opts.M,
            grid_size=grid_size,
        )
        return replace(record, model=model)

    record = _run_stage("invert", _invert)
    return record, diagnostics


def pipeline_unconditioned(
    tau_mu: TrigMomentSequence,
    solve_opts: SolveOptions | None = None,
    grid_size: int = INVERSION_GRID_SIZE,
) -> tuple[ReconstructedDensity, SolveDiagnostics]:
    """Fit the measure density directly by entropy maximization.

    The reconstruction is the model density itself, so it is strictly
    positive everywhere regardless of convergence status.
    """
    model, diagnostics = _run_stage("maxent", lambda: solve(tau_mu, solve_opts))

    def _sample():
        samples, series = model_density_series(model, grid_size)
        return ReconstructedDensity(
            series=series,
            provenance=UNCONDITIONED,
            samples=samples,
            grid_size=grid_size,
            coefficient_count=series.coefficient_count,
            min_value=float(samples.min()),
            model=model,
        )

    record = _run_stage("sample", _sample)
    return record, diagnostics

"""circmaxent: reconstruct measures on the unit circle from truncated
trigonometric moment sequences.

Two reconstruction routes are provided.  The unconditioned route fits an
exponential trigonometric polynomial directly to the input moments by
entropy maximization; it fails to terminate cleanly when the moments come
from a singular measure.  The conditioned route first maps the moments
through a triangular transform to the moments of a bounded phase density,
fits that phase by the same entropy maximization, and then inverts the
transform pointwise with help of the circular Hilbert transform.  The
conditioned route tolerates singular inputs and matches the input moments
more accurately on every built-in example.
"""

from .conditioning import (
    ConditioningOptions,
    condition_moments,
    series_exp,
    series_log,
    uncondition_moments,
)
from .errors import (
    CircMaxEntError,
    DivergenceError,
    DomainError,
    EmptyMeasureError,
    InputShapeError,
    InvalidPhaseError,
    InvalidSequenceError,
    InvalidSeriesError,
    NonResolvableError,
    NormalizationError,
    PipelineError,
    ReportLockError,
    ResolutionError,
    SingularityError,
)
from .harness import (
    ExperimentConfig,
    MethodReport,
    ReconstructionReport,
    run_experiment,
    run_pipeline_report,
    write_report,
)
from .inversion import (
    ReconstructedDensity,
    invert_phase,
    pipeline_conditioned,
    pipeline_unconditioned,
)
from .maxent import (
    MaxEntModel,
    SolveDiagnostics,
    SolveOptions,
    experiment_solve_options,
    gradient,
    model_moments,
    objective,
    solve,
)
from .moments import (
    MeasureSpec,
    TrigMomentSequence,
    extend_conjugate,
    moment_error,
    moments_of_atoms,
    moments_of_density,
    moments_of_measure,
)
from .reference import (
    MEASURE_IDS,
    density_and_moments,
    hilbert_phase_point_mass,
    named_measure,
    phase_density_point_mass,
    point_mass_moments,
    point_mass_phase_moments,
)
from .spectral import (
    FourierSeries,
    PeriodicGrid,
    adaptive_fit,
    analyze,
    evaluate,
    hilbert,
    quadrature_mean,
    synthesize,
    truncate_tail,
)

__version__ = "0.1.0"

__all__ = [
    "CircMaxEntError",
    "ConditioningOptions",
    "DivergenceError",
    "DomainError",
    "EmptyMeasureError",
    "ExperimentConfig",
    "FourierSeries",
    "InputShapeError",
    "InvalidPhaseError",
    "InvalidSequenceError",
    "InvalidSeriesError",
    "MEASURE_IDS",
    "MaxEntModel",
    "MeasureSpec",
    "MethodReport",
    "NonResolvableError",
    "NormalizationError",
    "PeriodicGrid",
    "PipelineError",
    "ReconstructedDensity",
    "ReconstructionReport",
    "ReportLockError",
    "ResolutionError",
    "SingularityError",
    "SolveDiagnostics",
    "SolveOptions",
    "TrigMomentSequence",
    "adaptive_fit",
    "analyze",
    "condition_moments",
    "density_and_moments",
    "evaluate",
    "experiment_solve_options",
    "extend_conjugate",
    "gradient",
    "hilbert",
    "hilbert_phase_point_mass",
    "invert_phase",
    "model_moments",
    "moment_error",
    "moments_of_atoms",
    "moments_of_density",
    "moments_of_measure",
    "named_measure",
    "objective",
    "phase_density_point_mass",
    "pipeline_conditioned",
    "pipeline_unconditioned",
    "point_mass_moments",
    "point_mass_phase_moments",
    "quadrature_mean",
    "run_experiment",
    "run_pipeline_report",
    "series_exp",
    "series_log",
    "solve",
    "synthesize",
    "truncate_tail",
    "uncondition_moments",
    "write_report",
]

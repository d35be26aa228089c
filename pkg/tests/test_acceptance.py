"""Acceptance gate: one test per criterion, each printing a PASS line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see one line per
criterion.  Every tolerance is asserted exactly as stated; each criterion
also enforces its runtime budget.
"""
import time

import numpy as np
import pytest

from conftest import random_admissible, sawtooth_fourier_numeric

from circmaxent.conditioning import condition_moments, series_exp, series_log, uncondition_moments
from circmaxent.harness import CONDITIONED_KEY, UNCONDITIONED_KEY, ExperimentConfig, run_experiment
from circmaxent.maxent import MaxEntModel, SolveOptions, gradient, model_moments, objective, solve
from circmaxent.moments import UNIT_MASS_MOMENT, MeasureSpec, TrigMomentSequence
from circmaxent.reference import (
    MEASURE_IDS,
    hilbert_phase_point_mass,
    phase_density_point_mass,
    point_mass_moments,
)
from circmaxent.inversion import invert_phase, pipeline_conditioned, pipeline_unconditioned
from circmaxent.spectral import FourierSeries, PeriodicGrid, hilbert


class Budget:
    """Context manager asserting a wall-clock budget and reporting a PASS line."""

    def __init__(self, label, seconds):
        self.label = label
        self.seconds = seconds

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.perf_counter() - self.start
        if exc_type is None:
            assert elapsed < self.seconds, (
                f"{self.label}: runtime {elapsed:.2f}s exceeds {self.seconds}s budget"
            )
            print(f"[{self.label}] PASS ({elapsed:.2f}s)")
        return False


@pytest.fixture(scope="module")
def experiments():
    """The three reference experiments at K = 20, identical solver settings."""
    start = time.perf_counter()
    reports = {
        measure_id: run_experiment(ExperimentConfig(measure=measure_id))
        for measure_id in MEASURE_IDS
    }
    return reports, time.perf_counter() - start


def test_criterion_01_phase_moment_pin():
    with Budget("criterion 1: phase-moment pin", 1.0):
        rng = np.random.default_rng(101)
        for _ in range(100):
            tau = random_admissible(rng, 20)
            phase = condition_moments(tau)
            assert abs(phase.values[0] - np.pi / 2.0) <= 1e-12


def test_criterion_02_point_mass_conditioning_oracle():
    with Budget("criterion 2: point-mass conditioning oracle", 1.0):
        for a in (0.0, 1.0, -2.5):
            phase = condition_moments(point_mass_moments(20, a)).values
            ks = np.arange(1, 20)
            closed_form = -0.5j * np.exp(-1j * ks * a) / ks
            assert np.max(np.abs(phase[1:] - closed_form)) <= 1e-12
            numeric = sawtooth_fourier_numeric(a, 20, panels=8192)
            assert np.max(np.abs(phase[1:] - numeric[1:])) <= 1e-6


def test_criterion_03_triangularity_bitwise():
    with Budget("criterion 3: triangularity", 1.0):
        rng = np.random.default_rng(303)
        for _ in range(100):
            tau = random_admissible(rng, 20)
            n = int(rng.integers(1, 19))
            m = int(rng.integers(n + 1, 20))
            base = condition_moments(tau).values
            perturbed = tau.values.copy()
            perturbed[m] += 0.5 * tau.values[0].real * np.exp(1j * rng.uniform(-np.pi, np.pi))
            shifted = condition_moments(TrigMomentSequence(perturbed)).values
            assert np.array_equal(base[: n + 1], shifted[: n + 1])


def test_criterion_04_roundtrips():
    with Budget("criterion 4: exp/log and transform roundtrips", 1.0):
        rng = np.random.default_rng(404)
        for _ in range(100):
            mags = rng.uniform(0.0, 1.0, 19)
            args = rng.uniform(-np.pi, np.pi, 19)
            series = np.concatenate([[1.0], mags * np.exp(1j * args)])
            assert np.max(np.abs(series_exp(series_log(series)) - series)) <= 1e-12
        for _ in range(100):
            tau = random_admissible(rng, 20, mass_low=1e-3, mass_high=10.0)
            back = uncondition_moments(condition_moments(tau), tau.values[0].real)
            # tolerance is in units of the mass scale: the transform divides
            # by tau(0) up front, so its accuracy is relative to tau(0)
            scale = max(1.0, tau.values[0].real)
            assert np.max(np.abs(back.values - tau.values)) <= 1e-12 * scale


def test_criterion_05_hilbert_oracle():
    with Budget("criterion 5: Hilbert multiplier", 1.0):
        for n in range(1, 51):
            cos_series = FourierSeries.from_dict({n: 0.5, -n: 0.5})
            sin_series = FourierSeries.from_dict({n: -0.5j, -n: 0.5j})
            assert hilbert(cos_series)[n] == -0.5j
            assert hilbert(cos_series)[-n] == 0.5j
            assert hilbert(sin_series)[n] == -0.5
            assert hilbert(sin_series)[-n] == -0.5
            twice = hilbert(hilbert(cos_series))
            assert twice[n] == -0.5 and twice[-n] == -0.5 and twice[0] == 0.0


def test_criterion_06_gradient_check():
    with Budget("criterion 6: analytic gradient vs central differences", 10.0):
        rng = np.random.default_rng(606)
        cases = [(2, 17), (5, 17), (10, 16)]  # 50 total
        for order, count in cases:
            for _ in range(count):
                alphas = np.concatenate(
                    [
                        [rng.uniform(-2.0, 0.0)],
                        0.3 * (rng.uniform(-1, 1, order - 1) + 1j * rng.uniform(-1, 1, order - 1)),
                    ]
                )
                model = MaxEntModel(alphas)
                targets = random_admissible(rng, order)
                analytic = gradient(model, targets)
                x0 = np.concatenate(
                    [
                        [alphas[0].real],
                        np.column_stack([alphas[1:].real, alphas[1:].imag]).ravel(),
                    ]
                )

                def rebuild(x):
                    rebuilt = np.empty(order, dtype=complex)
                    rebuilt[0] = x[0]
                    rest = x[1:].reshape(order - 1, 2)
                    rebuilt[1:] = rest[:, 0] + 1j * rest[:, 1]
                    return MaxEntModel(rebuilt)

                fd = np.empty_like(analytic)
                for i in range(x0.size):
                    xp, xm = x0.copy(), x0.copy()
                    xp[i] += 1e-6
                    xm[i] -= 1e-6
                    fd[i] = (objective(rebuild(xp), targets) - objective(rebuild(xm), targets)) / 2e-6
                scale = max(1.0, float(np.max(np.abs(fd))))
                assert np.max(np.abs(analytic - fd)) / scale < 1e-6


def test_criterion_07_solver_self_consistency():
    with Budget("criterion 7: solver self-consistency", 5.0):
        known = MaxEntModel(np.array([-2.0, 0.3 + 0.1j, -0.05 + 0.0j, 0.02j]))
        targets = model_moments(known, 4)
        recovered, diagnostics = solve(targets, SolveOptions(objective_tol=1e-18))
        assert diagnostics.final_objective < 1e-12
        assert np.max(np.abs(recovered.alphas - known.alphas)) < 1e-6


def test_criterion_08_inversion_collapse():
    with Budget("criterion 8: point-mass inversion collapse", 1.0):
        a = 1.0
        record = invert_phase(
            lambda t: phase_density_point_mass(t, a),
            tau_mu0=UNIT_MASS_MOMENT,
            hilbert_phase=lambda t: hilbert_phase_point_mass(t, a),
        )
        theta = PeriodicGrid(record.grid_size).nodes
        off_atom = np.abs(theta - a) > 0.05
        assert np.max(np.abs(record.samples[off_atom])) < 1e-8


def test_criterion_09_reference_reproduction(experiments):
    reports, elapsed = experiments
    with Budget("criterion 9: three-measure reproduction", 300.0 - elapsed):
        errors = {}
        for measure_id, report in reports.items():
            u = report.method(UNCONDITIONED_KEY)
            c = report.method(CONDITIONED_KEY)
            assert u.error is None and c.error is None
            errors[measure_id] = (u, c)

        # (a) conditioned moment error below unconditioned; 10x margin on the
        # smooth and rectangular densities
        for measure_id, (u, c) in errors.items():
            assert c.squared_error_first_k < u.squared_error_first_k, measure_id
        for measure_id in ("gaussians", "rectangular"):
            u, c = errors[measure_id]
            assert c.squared_error_first_k <= u.squared_error_first_k / 10.0, measure_id

        # (b) unconditioned run on the singular measure does not converge
        assert errors["point_mass"][0].diagnostics.status != "Converged"

        # (c) conditioned point-mass reconstruction dips negative near the spike
        pm_report = reports["point_mass"]
        near_spike = np.abs(pm_report.theta - 1.0) < 0.5
        pm_c = errors["point_mass"][1]
        assert pm_c.pointwise[near_spike].min() < 0.0
        assert pm_c.min_value < 0.0

        # (d) coefficient counts: phase < conditioned density <= unconditioned
        for measure_id, (u, c) in errors.items():
            assert c.phase_coefficient_count < c.coefficient_count, measure_id
            assert c.coefficient_count <= u.coefficient_count, measure_id
    print(f"    (experiments took {elapsed:.1f}s for three measures)")


def test_criterion_10_uniform_end_to_end():
    with Budget("criterion 10: uniform measure end to end", 5.0):
        tau = TrigMomentSequence(np.concatenate([[UNIT_MASS_MOMENT], np.zeros(19)]))
        record_u, _ = pipeline_unconditioned(tau)
        record_c, _ = pipeline_conditioned(tau)
        assert np.max(np.abs(record_u.samples - UNIT_MASS_MOMENT)) < 1e-8
        assert np.max(np.abs(record_c.samples - UNIT_MASS_MOMENT)) < 1e-8

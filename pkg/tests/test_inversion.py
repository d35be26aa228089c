import numpy as np
import pytest

from circmaxent.conditioning import ConditioningOptions
from circmaxent.errors import DomainError, PipelineError
from circmaxent.inversion import (
    CONDITIONED,
    UNCONDITIONED,
    invert_phase,
    pipeline_conditioned,
    pipeline_unconditioned,
)
from circmaxent.maxent import SolveOptions
from circmaxent.moments import UNIT_MASS_MOMENT, TrigMomentSequence, moments_of_density
from circmaxent.reference import (
    density_and_moments,
    hilbert_phase_point_mass,
    phase_density_point_mass,
    point_mass_moments,
)
from circmaxent.spectral import FourierSeries, PeriodicGrid


def uniform_moments(count):
    return TrigMomentSequence(np.concatenate([[UNIT_MASS_MOMENT], np.zeros(count - 1)]))


class TestInvertPhase:
    def test_constant_phase_gives_uniform_density(self):
        series = FourierSeries.constant(np.pi / 2.0)
        record = invert_phase(series, tau_mu0=UNIT_MASS_MOMENT)
        assert np.max(np.abs(record.samples - UNIT_MASS_MOMENT)) < 1e-15
        assert record.coefficient_count == 1
        assert record.provenance == CONDITIONED

    def test_point_mass_closed_form_collapses_off_atom(self):
        # exact phase pair: the formula cancels to zero away from the atom
        a = 1.0
        record = invert_phase(
            lambda t: phase_density_point_mass(t, a),
            tau_mu0=UNIT_MASS_MOMENT,
            hilbert_phase=lambda t: hilbert_phase_point_mass(t, a),
        )
        theta = PeriodicGrid(record.grid_size).nodes
        off_atom = np.abs(theta - a) > 0.05
        assert np.max(np.abs(record.samples[off_atom])) < 1e-8

    def test_rejects_bad_mass_or_shift(self):
        series = FourierSeries.constant(np.pi / 2.0)
        with pytest.raises(DomainError):
            invert_phase(series, tau_mu0=0.0)
        with pytest.raises(DomainError):
            invert_phase(series, tau_mu0=1.0, M=-0.5)

    def test_grid_grows_with_bandwidth(self):
        coeffs = np.zeros(4097, dtype=complex)
        coeffs[2048] = np.pi / 2.0  # constant term of a bandwidth-2048 series
        coeffs[2048 + 1500] = 1e-3
        coeffs[2048 - 1500] = 1e-3
        record = invert_phase(FourierSeries(coeffs), tau_mu0=UNIT_MASS_MOMENT)
        assert record.grid_size >= 4 * 2048


class TestPipelines:
    def test_uniform_measure_both_exact(self):
        tau = uniform_moments(20)
        rec_u, diag_u = pipeline_unconditioned(tau)
        rec_c, diag_c = pipeline_conditioned(tau)
        assert diag_u.status == "Converged" and diag_c.status == "Converged"
        assert np.max(np.abs(rec_u.samples - UNIT_MASS_MOMENT)) < 1e-8
        assert np.max(np.abs(rec_c.samples - UNIT_MASS_MOMENT)) < 1e-8
        assert rec_u.provenance == UNCONDITIONED
        assert rec_c.provenance == CONDITIONED

    def test_conditioned_gaussians_moment_error(self):
        _, tau = density_and_moments("gaussians", 20)
        record, diag = pipeline_conditioned(tau)
        reconstructed = moments_of_density(record.samples, 20)
        squared = float(np.sum(np.abs(tau.values - reconstructed.values) ** 2))
        assert squared < 1e-8
        assert record.phase_series is not None
        assert record.hilbert_phase is not None

    def test_conditioned_mass_preservation(self):
        _, tau = density_and_moments("gaussians", 20)
        record, diag = pipeline_conditioned(tau)
        assert diag.status == "Converged"
        assert abs(record.mean() - tau.values[0].real) < 1e-8

    def test_point_mass_spike_and_undershoot(self):
        tau = point_mass_moments(20, 1.0)
        record, diag = pipeline_conditioned(tau)
        theta = PeriodicGrid(record.grid_size).nodes
        peak_location = theta[np.argmax(record.samples)]
        assert abs(peak_location - 1.0) < 0.1
        assert record.samples.max() > 1.0
        near = np.abs(theta - 1.0) < 0.5
        assert record.samples[near].min() < 0.0
        assert record.has_negative_values
        assert record.min_value == record.samples.min()

    def test_unconditioned_rectangular_gibbs(self):
        _, tau = density_and_moments("rectangular", 20)
        record, diag = pipeline_unconditioned(tau)
        assert diag.status == "Converged"
        plateau = 1.0 / (np.pi + 1.0)
        assert record.samples.max() > plateau * 1.01  # overshoot at the jumps
        assert np.all(record.samples > 0.0)
        assert not record.has_negative_values

    def test_unconditioned_point_mass_does_not_converge_fd(self):
        from circmaxent.maxent import experiment_solve_options

        tau = point_mass_moments(20, 1.0)
        record, diag = pipeline_unconditioned(tau, experiment_solve_options())
        assert diag.status in ("StalledNoDecrease", "MaxIterations")
        assert np.all(record.samples > 0.0)

    def test_stage_tagging_condition(self):
        bad = TrigMomentSequence(np.array([-(UNIT_MASS_MOMENT), 0.0, 0.0]))
        with pytest.raises(PipelineError) as excinfo:
            pipeline_conditioned(bad)
        assert excinfo.value.stage == "condition"

    def test_stage_tagging_maxent(self):
        # conditioning tolerates this input, the solver must reject it
        values = np.concatenate([[0.05], np.full(5, 0.2 + 0.0j)])
        bad = TrigMomentSequence(values)
        with pytest.raises(PipelineError) as excinfo:
            pipeline_conditioned(bad)
        assert excinfo.value.stage == "maxent"

    def test_identical_options_object_usable_twice(self):
        tau = uniform_moments(8)
        opts = SolveOptions()
        rec_u, _ = pipeline_unconditioned(tau, opts)
        rec_c, _ = pipeline_conditioned(tau, ConditioningOptions(), opts)
        assert np.max(np.abs(rec_u.samples - rec_c.samples)) < 1e-10

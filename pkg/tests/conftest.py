import numpy as np
import pytest

from circmaxent.moments import TrigMomentSequence
from circmaxent.reference import phase_density_point_mass


def random_admissible(rng, count, mass_low=0.05, mass_high=0.5):
    """Moment sequence with tau(0) > 0 real and |tau(k)| <= tau(0)."""
    t0 = rng.uniform(mass_low, mass_high)
    mags = rng.uniform(0.0, 1.0, count - 1) * t0
    phases = rng.uniform(-np.pi, np.pi, count - 1)
    return TrigMomentSequence(np.concatenate([[t0], mags * np.exp(1j * phases)]))


def sawtooth_fourier_numeric(a, count, panels=8192):
    """Fourier coefficients of the point-mass phase sawtooth.

    The sawtooth is piecewise linear with slope -1/2 and a single jump at
    theta = a, so each panel integral of (alpha*theta + beta) e^{-ik theta}
    has an exact antiderivative.  Panels are split at the jump; accuracy is
    machine precision, independent of the moment-transform route.
    """
    jump = np.mod(a + np.pi, 2.0 * np.pi) - np.pi
    edges = np.unique(np.concatenate([np.linspace(-np.pi, np.pi, panels + 1), [jump]]))
    mid = 0.5 * (edges[:-1] + edges[1:])
    slope = -0.5
    intercept = phase_density_point_mass(mid, a) - slope * mid
    t1, t2 = edges[:-1], edges[1:]
    coeffs = np.zeros(count, dtype=complex)
    coeffs[0] = np.sum(slope * (t2**2 - t1**2) / 2.0 + intercept * (t2 - t1)) / (2.0 * np.pi)
    for k in range(1, count):
        ik = -1j * k
        e1, e2 = np.exp(ik * t1), np.exp(ik * t2)
        integral = (
            (slope * t2 + intercept) * e2 / ik
            - (slope * t1 + intercept) * e1 / ik
            - slope * (e2 - e1) / ik**2
        )
        coeffs[k] = np.sum(integral) / (2.0 * np.pi)
    return coeffs


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)

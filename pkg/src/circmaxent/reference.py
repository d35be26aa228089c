"""Built-in ground-truth measures and their closed-form quantities.

Three unit-mass measures drive the experiments and serve as oracles:

* ``point_mass``  -- a single atom at a (default a = 1); moments
  exp(-i k a)/2pi, and the phase density and its Hilbert transform are
  known in closed form.
* ``gaussians``   -- a superposition of two narrow Gaussian bumps,
  5 exp(-(5 theta - 10)^2) + exp(-(5 theta + 7.5)^2), normalized; the
  tails at +-pi are below 4e-14, so the function is treated as periodic.
* ``rectangular`` -- the indicator of (-(pi+1)/2, (pi+1)/2), normalized;
  moments sin(k (pi+1)/2) / (pi k (pi+1)).
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np

from .errors import DomainError, SingularityError
from .moments import (
    UNIT_MASS_MOMENT,
    MeasureSpec,
    TrigMomentSequence,
    moments_of_density,
)

MEASURE_IDS = ("point_mass", "gaussians", "rectangular")

_RECT_HALF_WIDTH = (np.pi + 1.0) / 2.0
_GAUSS_QUADRATURE = 2 ** 14


def phase_density_point_mass(theta, a: float = 1.0):
    """Phase density of the atom at ``a``: pi - mod((theta - a)/2, pi).

    A sawtooth taking values in [0, pi], jumping from 0 up to pi at
    theta = a, with mean pi/2.
    """
    return np.pi - np.mod((np.asarray(theta, dtype=float) - a) / 2.0, np.pi)


def hilbert_phase_point_mass(theta, a: float = 1.0):
    """Hilbert transform of the point-mass phase: log(2 |sin((theta - a)/2)|).

    Diverges to -inf at the atom; evaluation exactly at theta = a raises.
    """
    th = np.asarray(theta, dtype=float)
    s = np.abs(np.sin((th - a) / 2.0))
    if np.any(s == 0.0):
        raise SingularityError(f"Hilbert phase is singular at theta = {a}")
    return np.log(2.0 * s)


def point_mass_moments(count: int, a: float = 1.0) -> TrigMomentSequence:
    """tau(k) = exp(-i k a) / 2pi."""
    return TrigMomentSequence(np.exp(-1j * np.arange(count) * a) * UNIT_MASS_MOMENT)


def point_mass_phase_moments(count: int, a: float = 1.0) -> TrigMomentSequence:
    """Closed-form phase moments of the atom: pi/2, then -i exp(-i k a)/(2k)."""
    ks = np.arange(1, count)
    values = np.concatenate(
        [[np.pi / 2.0], -0.5j * np.exp(-1j * ks * a) / ks]
    )
    return TrigMomentSequence(values)


def _gaussian_bumps(theta):
    th = np.asarray(theta, dtype=float)
    return 5.0 * np.exp(-((5.0 * th - 10.0) ** 2)) + np.exp(-((5.0 * th + 7.5) ** 2))


@lru_cache(maxsize=1)
def _gaussian_mass() -> float:
    # Periodic rectangle rule; integrand is analytic with sub-4e-14 tails.
    nodes = -np.pi + 2.0 * np.pi * np.arange(_GAUSS_QUADRATURE) / _GAUSS_QUADRATURE
    return float(np.mean(_gaussian_bumps(nodes)) * 2.0 * np.pi)


def gaussians_density(theta):
    """Unit-mass superposition of two Gaussian bumps."""
    return _gaussian_bumps(theta) / _gaussian_mass()


def rectangular_density(theta):
    """Unit-mass indicator of the open interval (-(pi+1)/2, (pi+1)/2)."""
    th = np.asarray(theta, dtype=float)
    inside = np.abs(th) < _RECT_HALF_WIDTH
    return np.where(inside, 1.0 / (np.pi + 1.0), 0.0)


def rectangular_moments(count: int) -> TrigMomentSequence:
    """tau(0) = 1/2pi, tau(k) = sin(k (pi+1)/2) / (pi k (pi+1))."""
    ks = np.arange(1, count)
    tail = np.sin(ks * _RECT_HALF_WIDTH) / (np.pi * ks * (np.pi + 1.0))
    return TrigMomentSequence(np.concatenate([[UNIT_MASS_MOMENT], tail]))


def named_measure(measure_id: str, a: float = 1.0) -> MeasureSpec:
    """MeasureSpec for one of the built-in measure ids."""
    if measure_id == "point_mass":
        return MeasureSpec(atoms=((a, 1.0),), normalize=True)
    if measure_id == "gaussians":
        return MeasureSpec(density=gaussians_density, normalize=True)
    if measure_id == "rectangular":
        return MeasureSpec(density=rectangular_density, normalize=True)
    raise DomainError(f"unknown measure id {measure_id!r}; choose from {MEASURE_IDS}")


def density_and_moments(
    measure_id: str, count: int, a: float = 1.0, grid_size: int = 8192
):
    """Ground-truth description and first ``count`` moments of a built-in measure.

    Returns ``(density_or_atoms, moments)``: the atoms tuple for the point
    mass, a vectorized density callable otherwise.  Moments are closed form
    except for the Gaussian case, which uses quadrature at ``grid_size``.
    """
    if count < 1:
        raise DomainError("moment count must be at least 1")
    if measure_id == "point_mass":
        return ((a, 1.0),), point_mass_moments(count, a)
    if measure_id == "gaussians":
        raw = moments_of_density(gaussians_density, count, grid_size=grid_size)
        values = raw.values * (UNIT_MASS_MOMENT / raw.values[0].real)
        values[0] = values[0].real
        return gaussians_density, TrigMomentSequence(values)
    if measure_id == "rectangular":
        return rectangular_density, rectangular_moments(count)
    raise DomainError(f"unknown measure id {measure_id!r}; choose from {MEASURE_IDS}")

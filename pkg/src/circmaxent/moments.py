"""Trigonometric moment sequences of measures on the circle.

The convention throughout is tau(k) = (1/2pi) * integral exp(-i k theta) dmu,
so tau(k) equals the k-th Fourier coefficient of the density when one exists
and a unit-mass measure has tau(0) = 1/(2pi).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import (
    DomainError,
    EmptyMeasureError,
    InputShapeError,
    InvalidSequenceError,
    ResolutionError,
)
from .spectral import FourierSeries, PeriodicGrid

UNIT_MASS_MOMENT = 1.0 / (2.0 * np.pi)


@dataclass(frozen=True)
class TrigMomentSequence:
    """Finite moment sequence tau(0), ..., tau(K-1)."""

    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        if v.ndim != 1 or v.size < 1:
            raise InputShapeError("moment sequence must be a non-empty 1-D array")
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def K(self) -> int:
        return self.values.size

    def __getitem__(self, k: int) -> complex:
        return complex(self.values[k])

    def is_admissible(self, rel_tol: float = 1e-9) -> bool:
        """tau(0) real positive and |tau(k)| <= tau(0), up to rounding slack."""
        t0 = self.values[0]
        if abs(t0.imag) > rel_tol * max(1.0, abs(t0)) or t0.real <= 0.0:
            return False
        bound = t0.real * (1.0 + rel_tol) + 1e-300
        return bool(np.all(np.abs(self.values) <= bound))

    def to_json_dict(self) -> dict:
        return {
            "K": self.K,
            "values": [[float(v.real), float(v.imag)] for v in self.values],
        }

    @classmethod
    def from_json_dict(cls, payload: dict) -> "TrigMomentSequence":
        values = np.array([complex(re, im) for re, im in payload["values"]])
        if payload.get("K", values.size) != values.size:
            raise InputShapeError("declared K does not match number of values")
        return cls(values)


@dataclass(frozen=True)
class MeasureSpec:
    """Declarative measure: optional atoms plus an optional density part.

    ``density`` may be a vectorized callable on [-pi, pi), a FourierSeries,
    or a vector of samples on the implied equispaced grid.  With
    ``normalize`` set, moments are rescaled to total mass one.
    """

    atoms: tuple[tuple[float, float], ...] = ()
    density: Callable | FourierSeries | np.ndarray | None = None
    normalize: bool = False

    def __post_init__(self):
        atoms = tuple((float(a), float(w)) for a, w in self.atoms)
        if any(w < 0.0 for _, w in atoms):
            raise DomainError("atom weights must be nonnegative")
        object.__setattr__(self, "atoms", atoms)
        if not atoms and self.density is None:
            raise EmptyMeasureError("measure has neither atoms nor a density")

    def to_json_dict(self) -> dict:
        if self.density is not None and not isinstance(self.density, np.ndarray):
            raise InputShapeError("only sampled densities can be serialized")
        payload: dict = {"normalize": self.normalize}
        if self.atoms:
            payload["atoms"] = [[a, w] for a, w in self.atoms]
        if self.density is not None:
            payload["density_samples"] = [float(v) for v in self.density]
        return payload

    @classmethod
    def from_json_dict(cls, payload: dict) -> "MeasureSpec":
        atoms = tuple((a, w) for a, w in payload.get("atoms", []))
        density = payload.get("density_samples")
        if density is not None:
            density = np.asarray(density, dtype=float)
        return cls(atoms=atoms, density=density, normalize=bool(payload.get("normalize", False)))


def _moments_from_samples(samples: np.ndarray, count: int) -> np.ndarray:
    n = samples.size
    if n < 4 * count:
        raise ResolutionError(
            f"{n} samples resolve at most {n // 4} moments, {count} requested"
        )
    grid = PeriodicGrid(n)
    phase = np.exp(-1j * np.outer(np.arange(count), grid.nodes))
    return phase @ samples / n


def moments_of_density(density, count: int, grid_size: int | None = None) -> TrigMomentSequence:
    """First ``count`` trigonometric moments of a nonnegative density.

    ``density`` may be a FourierSeries (moments are read off the
    coefficients exactly, zero beyond the bandwidth), a vectorized callable
    (sampled on max(1024, 8*count) nodes unless ``grid_size`` overrides), or
    a sample vector on the implied equispaced grid.
    """
    if count < 1:
        raise InputShapeError("moment count must be at least 1")
    if isinstance(density, FourierSeries):
        values = np.array([density[k] for k in range(count)])
    elif callable(density):
        n = grid_size if grid_size is not None else max(1024, 8 * count)
        if n % 2:
            n += 1
        if n < 4 * count:
            raise ResolutionError(f"grid size {n} below the 4K = {4 * count} minimum")
        samples = np.asarray(density(PeriodicGrid(n).nodes), dtype=float)
        values = _moments_from_samples(samples, count)
    else:
        samples = np.asarray(density, dtype=float)
        values = _moments_from_samples(samples, count)
    values[0] = values[0].real
    return TrigMomentSequence(values)


def moments_of_atoms(atoms: Sequence[tuple[float, float]], count: int) -> TrigMomentSequence:
    """Moments of a purely atomic measure: tau(k) = sum_j w_j exp(-i k a_j) / 2pi."""
    if count < 1:
        raise InputShapeError("moment count must be at least 1")
    if len(atoms) == 0:
        raise EmptyMeasureError("atom list is empty")
    locations = np.array([a for a, _ in atoms], dtype=float)
    weights = np.array([w for _, w in atoms], dtype=float)
    if np.any(weights < 0.0):
        raise DomainError("atom weights must be nonnegative")
    ks = np.arange(count)
    values = np.exp(-1j * np.outer(ks, locations)) @ weights / (2.0 * np.pi)
    values[0] = values[0].real
    return TrigMomentSequence(values)


def moments_of_measure(spec: MeasureSpec, count: int, grid_size: int | None = None) -> TrigMomentSequence:
    """Moments of a MeasureSpec, normalized to unit mass when requested."""
    total = np.zeros(count, dtype=complex)
    if spec.atoms:
        total += moments_of_atoms(spec.atoms, count).values
    if spec.density is not None:
        total += moments_of_density(spec.density, count, grid_size=grid_size).values
    mass_moment = total[0].real
    if mass_moment <= 0.0:
        raise EmptyMeasureError("measure has nonpositive total mass")
    if spec.normalize:
        total = total * (UNIT_MASS_MOMENT / mass_moment)
    total[0] = total[0].real
    return TrigMomentSequence(total)


def extend_conjugate(seq: TrigMomentSequence) -> np.ndarray:
    """Two-sided extension tau(-k) = conj(tau(k)) over k = -(K-1)..K-1."""
    if abs(seq.values[0].imag) > 1e-12 * max(1.0, abs(seq.values[0])):
        raise InvalidSequenceError("tau(0) must be real")
    positive = seq.values.copy()
    positive[0] = positive[0].real
    return np.concatenate([np.conj(positive[:0:-1]), positive])


def moment_error(a: TrigMomentSequence, b: TrigMomentSequence) -> tuple[np.ndarray, float]:
    """Per-order differences a(k) - b(k) and their squared l2 aggregate."""
    if a.K != b.K:
        raise InputShapeError(f"length mismatch: {a.K} vs {b.K}")
    deltas = a.values - b.values
    return deltas, float(np.sum(np.abs(deltas) ** 2))

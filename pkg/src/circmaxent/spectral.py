"""Fourier representation of real periodic functions on [-pi, pi).

Functions are stored as conjugate-symmetric coefficient vectors c_k,
k = -B..B, so that f(theta) = sum_k c_k exp(i k theta) is real.  Analysis
and synthesis run over equispaced grids via the FFT; the Hilbert transform
is the diagonal multiplier c_k -> -i sign(k) c_k.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    InputShapeError,
    InvalidSeriesError,
    NonResolvableError,
)

SYMMETRY_TOL = 1e-10
DEFAULT_TAIL_TOL = 1e-13
ADAPTIVE_START = 32
ADAPTIVE_CAP = 2 ** 16


@dataclass(frozen=True)
class PeriodicGrid:
    """Equispaced grid theta_j = -pi + 2*pi*j/size, j = 0..size-1."""

    size: int

    def __post_init__(self):
        if self.size <= 0 or self.size % 2 != 0:
            raise InputShapeError(f"grid size must be a positive even integer, got {self.size}")

    @property
    def nodes(self) -> np.ndarray:
        return -np.pi + 2.0 * np.pi * np.arange(self.size) / self.size

    @property
    def spacing(self) -> float:
        return 2.0 * np.pi / self.size


@dataclass(frozen=True)
class FourierSeries:
    """Trigonometric polynomial with coefficients c_k, k = -bandwidth..bandwidth.

    ``coeffs`` stores the 2*bandwidth+1 values in index order -B..B.
    Construction checks conjugate symmetry to ``SYMMETRY_TOL`` and then
    symmetrizes exactly, so every stored series represents a real function.
    """

    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        if c.ndim != 1 or c.size % 2 == 0:
            raise InputShapeError("coefficient vector must be 1-D with odd length 2B+1")
        mirror = np.conj(c[::-1])
        if np.max(np.abs(c - mirror)) > SYMMETRY_TOL:
            raise InvalidSeriesError("coefficients are not conjugate symmetric")
        c = 0.5 * (c + mirror)
        c[c.size // 2] = c[c.size // 2].real
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def bandwidth(self) -> int:
        return self.coeffs.size // 2

    @property
    def coefficient_count(self) -> int:
        return self.coeffs.size

    def __getitem__(self, k: int) -> complex:
        if abs(k) > self.bandwidth:
            return 0.0 + 0.0j
        return complex(self.coeffs[k + self.bandwidth])

    @classmethod
    def from_dict(cls, entries: dict[int, complex]) -> "FourierSeries":
        bandwidth = max((abs(k) for k in entries), default=0)
        c = np.zeros(2 * bandwidth + 1, dtype=complex)
        for k, v in entries.items():
            c[k + bandwidth] += v
        return cls(c)

    @classmethod
    def constant(cls, value: float) -> "FourierSeries":
        return cls(np.array([value], dtype=complex))


def analyze(samples: np.ndarray, grid: PeriodicGrid | None = None) -> FourierSeries:
    """Fit the interpolating trigonometric polynomial through grid samples.

    Parameters
    ----------
    samples : real array of length grid.size
        Function values at the grid nodes.
    grid : PeriodicGrid, optional
        Defaults to the grid implied by ``len(samples)``.

    Returns
    -------
    FourierSeries with bandwidth grid.size / 2.  The Nyquist bin is split
    evenly between +B and -B so the result stays conjugate symmetric and
    synthesis reproduces the samples exactly.
    """
    samples = np.asarray(samples)
    if np.iscomplexobj(samples):
        raise InputShapeError("samples must be real-valued")
    if grid is None:
        grid = PeriodicGrid(samples.size)
    if samples.ndim != 1 or samples.size != grid.size:
        raise InputShapeError(
            f"sample count {samples.size} does not match grid size {grid.size}"
        )
    n = grid.size
    half = n // 2
    bins = np.fft.fft(samples.astype(float)) / n
    # Grid starts at -pi, so bin k carries an extra (-1)^k relative to c_k.
    ks = np.arange(-half, half + 1)
    c = bins[np.mod(ks, n)] * np.where(ks % 2 == 0, 1.0, -1.0)
    c[0] *= 0.5
    c[-1] *= 0.5
    return FourierSeries(c)


def synthesize(series: FourierSeries, grid: PeriodicGrid) -> np.ndarray:
    """Evaluate the series at every grid node (exact inverse of analyze).

    The imaginary residue of the inverse FFT is checked against
    ``SYMMETRY_TOL`` and then discarded.
    """
    n = grid.size
    b = series.bandwidth
    ks = np.arange(-b, b + 1)
    bins = np.zeros(n, dtype=complex)
    np.add.at(bins, np.mod(ks, n), series.coeffs * np.where(ks % 2 == 0, 1.0, -1.0))
    values = np.fft.ifft(bins) * n
    residue = float(np.max(np.abs(values.imag))) if n else 0.0
    if residue > SYMMETRY_TOL:
        raise InvalidSeriesError(f"imaginary residue {residue:.3e} after synthesis")
    return values.real


def evaluate(series: FourierSeries, theta) -> np.ndarray | float:
    """Evaluate the trigonometric polynomial at arbitrary angles.

    Angles are reduced modulo 2*pi into [-pi, pi).  Uses a Horner
    recurrence in exp(i*theta), so no aliasing occurs for any bandwidth.
    """
    scalar = np.isscalar(theta)
    th = np.atleast_1d(np.asarray(theta, dtype=float))
    if not np.all(np.isfinite(th)):
        raise InputShapeError("angles must be finite")
    th = np.mod(th + np.pi, 2.0 * np.pi) - np.pi
    b = series.bandwidth
    z = np.exp(1j * th)
    acc = np.zeros_like(z)
    for k in range(b, 0, -1):
        acc = (acc + series.coeffs[k + b]) * z
    values = series.coeffs[b].real + 2.0 * acc.real
    return float(values[0]) if scalar else values


def hilbert(series: FourierSeries) -> FourierSeries:
    """Apply the circular Hilbert transform multiplier c_k -> -i sign(k) c_k.

    The zeroth coefficient is annihilated; applying the transform twice
    negates every k != 0 coefficient exactly.
    """
    b = series.bandwidth
    ks = np.arange(-b, b + 1)
    return FourierSeries(-1j * np.sign(ks) * series.coeffs)


def quadrature_mean(f) -> float:
    """Mean value (1/2pi) * integral of f over the circle.

    Accepts a FourierSeries (returns c_0) or equispaced grid samples
    (returns their arithmetic mean, the exact periodic trapezoid rule).
    """
    if isinstance(f, FourierSeries):
        return float(f.coeffs[f.bandwidth].real)
    samples = np.asarray(f)
    if np.iscomplexobj(samples):
        raise InputShapeError("samples must be real-valued")
    if samples.ndim != 1 or samples.size == 0:
        raise InputShapeError("samples must be a non-empty 1-D array")
    return float(np.mean(samples))


def _tail_ratio(series: FourierSeries) -> float:
    """Largest tail coefficient relative to the overall peak.

    The tail is the top 5% of frequencies, |k| > 0.95 * bandwidth.
    """
    b = series.bandwidth
    mags = np.abs(series.coeffs)
    peak = float(mags.max())
    if peak == 0.0:
        return 0.0
    ks = np.abs(np.arange(-b, b + 1))
    tail = mags[ks > 0.95 * b]
    return float(tail.max()) / peak


def adaptive_fit(
    f,
    tail_tol: float = DEFAULT_TAIL_TOL,
    start: int = ADAPTIVE_START,
    cap: int = ADAPTIVE_CAP,
) -> FourierSeries:
    """Fit a pointwise-evaluable periodic function, doubling the grid until
    the high-frequency tail of the coefficients decays below tolerance.

    Parameters
    ----------
    f : callable
        Vectorized real function of theta.
    tail_tol : float
        Stop once the largest coefficient among the top 5% highest
        frequencies falls below tail_tol times the peak coefficient.
    start, cap : int
        First and largest grid size tried.

    Raises
    ------
    NonResolvableError
        If the cap is reached first; carries the achieved tail ratio.
        Discontinuous functions never satisfy the tail rule, so they must
        be represented by fixed-size sample vectors instead.
    """
    if tail_tol <= 0.0:
        raise InputShapeError("tail_tol must be positive")
    n = start
    ratio = np.inf
    while n <= cap:
        grid = PeriodicGrid(n)
        series = analyze(np.asarray(f(grid.nodes), dtype=float), grid)
        ratio = _tail_ratio(series)
        if ratio <= tail_tol:
            return series
        n *= 2
    raise NonResolvableError(
        f"tail ratio {ratio:.3e} still above {tail_tol:.1e} at grid cap {cap}",
        achieved_tail_ratio=ratio,
    )


def truncate_tail(series: FourierSeries, tail_tol: float = DEFAULT_TAIL_TOL) -> FourierSeries:
    """Drop trailing coefficients that are below tail_tol times the peak.

    Returns the shortest series whose discarded coefficients all have
    magnitude <= tail_tol * max|c_k|.  Used to report how many
    coefficients a reconstruction actually needs.
    """
    b = series.bandwidth
    mags = np.abs(series.coeffs)
    peak = float(mags.max())
    if peak == 0.0:
        return FourierSeries(series.coeffs[b:b + 1])
    folded = np.maximum(mags[b:], mags[b::-1][: b + 1])
    keep = np.nonzero(folded > tail_tol * peak)[0]
    new_b = int(keep.max()) if keep.size else 0
    return FourierSeries(series.coeffs[b - new_b: b + new_b + 1])

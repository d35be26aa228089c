"""Triangular transform between measure moments and phase moments.

A measure with moments tau(0..K-1) has a phase representation whose
moments come from the truncated formal logarithm of the normalized
generating series 1 + sum_{n>=1} tau(n)/(M + tau(0)) z^n: the k-th phase
moment is -i/2 times the k-th log coefficient, and the zeroth phase moment
is pi/2 for every admissible input.  Output order k depends only on input
orders 0..k, so truncated inputs transform exactly (the map is triangular).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InvalidPhaseError, NormalizationError
from .moments import TrigMomentSequence

PHASE_MEAN = np.pi / 2.0

_MERCATOR_CUTOFF = 1e-18
_MERCATOR_MAX_POWERS = 512


@dataclass(frozen=True)
class ConditioningOptions:
    """Shift M and computational route of the moment transform.

    ``shifted-log`` extracts M + tau(0) from the log argument and works for
    any M >= 0 (the default M = 0).  ``mercator-m1`` expands the logarithm
    around 1 with the shift fixed at M = 1, keeping the constant moment
    inside the expanded series; it requires |tau(0)| < 1 to converge.
    """

    M: float = 0.0
    variant: str = "shifted-log"

    def __post_init__(self):
        if self.variant not in ("shifted-log", "mercator-m1"):
            raise DomainError(f"unknown conditioning variant {self.variant!r}")
        if self.variant == "mercator-m1":
            object.__setattr__(self, "M", 1.0)
        if self.M < 0.0:
            raise DomainError("shift M must be nonnegative")


def _truncated_convolve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.convolve(a, b)[: a.size]


def series_log(a: np.ndarray, method: str = "recurrence") -> np.ndarray:
    """Coefficients of log(a) for a truncated power series with a[0] = 1.

    ``recurrence`` uses n b_n = n a_n - sum_{k<n} k b_k a_{n-k} (the
    production path); ``power`` sums the alternating series
    sum_m (-1)^(m+1) (a-1)^m / m by repeated truncated convolution and is
    kept as an independent cross-check.
    """
    a = np.asarray(a, dtype=complex)
    if a.size == 0:
        raise NormalizationError("series must have at least the constant term")
    if abs(a[0] - 1.0) > 1e-12:
        raise NormalizationError(f"constant term must be 1, got {a[0]}")
    n = a.size
    b = np.zeros(n, dtype=complex)
    if method == "recurrence":
        # extended precision: intermediate coefficients can reach ~1e3 with
        # heavy cancellation, which would eat three digits in plain double
        aa = a.astype(np.clongdouble)
        bb = np.zeros(n, dtype=np.clongdouble)
        weights = np.arange(n, dtype=np.clongdouble)
        for m in range(1, n):
            correction = np.dot(weights[1:m] * bb[1:m], aa[m - 1:0:-1])
            bb[m] = aa[m] - correction / m
        b = bb.astype(complex)
    elif method == "power":
        u = a.copy()
        u[0] = 0.0
        power = u.copy()
        for m in range(1, n):
            b += power * ((-1.0) ** (m + 1) / m)
            if m < n - 1:
                power = _truncated_convolve(power, u)
    else:
        raise ValueError(f"unknown method {method!r}")
    return b


def series_exp(b: np.ndarray, method: str = "recurrence") -> np.ndarray:
    """Coefficients of exp(b) for a truncated power series.

    ``recurrence`` uses n a_n = sum_{k<=n} k b_k a_{n-k}; ``power`` sums the
    Taylor series sum_m b^m / m! with the constant term handled separately.
    """
    b = np.asarray(b, dtype=complex)
    if b.size == 0:
        raise NormalizationError("series must have at least the constant term")
    n = b.size
    a = np.zeros(n, dtype=complex)
    if method == "recurrence":
        bb = b.astype(np.clongdouble)
        aa = np.zeros(n, dtype=np.clongdouble)
        aa[0] = np.exp(bb[0])
        kb = np.arange(n, dtype=np.clongdouble) * bb
        for m in range(1, n):
            aa[m] = np.dot(kb[1:m + 1], aa[m - 1::-1]) / m
        a = aa.astype(complex)
    elif method == "power":
        u = b.copy()
        u[0] = 0.0
        term = np.zeros(n, dtype=complex)
        term[0] = 1.0
        result = term.copy()
        for m in range(1, n):
            term = _truncated_convolve(term, u) / m
            result += term
        a = result * np.exp(b[0])
    else:
        raise ValueError(f"unknown method {method!r}")
    return a


def _mercator_log1p(w: np.ndarray) -> np.ndarray:
    """log(1 + w) for a truncated series whose constant term may be nonzero.

    Summed directly as the alternating power series; each extra power keeps
    contributing to every order because w has a constant term, so the sum
    runs until the largest new contribution is negligible.  Requires
    |w[0]| < 1.
    """
    w0 = complex(w[0])
    if abs(w0) >= 1.0:
        raise DomainError(
            f"|constant term| = {abs(w0):.3f} >= 1: the expanded logarithm diverges"
        )
    n = w.size
    result = np.zeros(n, dtype=complex)
    power = w.astype(complex)
    scale = max(1.0, float(np.max(np.abs(w))))
    for m in range(1, _MERCATOR_MAX_POWERS + 1):
        term = power * ((-1.0) ** (m + 1) / m)
        result += term
        if float(np.max(np.abs(term))) < _MERCATOR_CUTOFF * scale:
            return result
        power = _truncated_convolve(power, w)
    raise DomainError("expanded logarithm failed to converge")


def condition_moments(
    tau_mu: TrigMomentSequence,
    opts: ConditioningOptions | None = None,
) -> TrigMomentSequence:
    """Phase moments of the measure with moments ``tau_mu``.

    The zeroth output is exactly pi/2; higher outputs are -i/2 times the
    truncated log coefficients of the shifted, normalized moment series.
    """
    opts = opts or ConditioningOptions()
    values = tau_mu.values
    shifted_mass = values[0].real + opts.M
    if shifted_mass <= 0.0:
        raise DomainError(
            f"tau(0) + M = {shifted_mass} must be positive to take the logarithm"
        )
    phase = np.zeros(values.size, dtype=complex)
    phase[0] = PHASE_MEAN
    if values.size == 1:
        return TrigMomentSequence(phase)
    if opts.variant == "mercator-m1":
        log_coeffs = _mercator_log1p(values.astype(complex))
    else:
        normalized = values / shifted_mass
        normalized[0] = 1.0
        log_coeffs = series_log(normalized)
    phase[1:] = -0.5j * log_coeffs[1:]
    return TrigMomentSequence(phase)


def uncondition_moments(
    tau_phi: TrigMomentSequence,
    tau_mu0: float,
    opts: ConditioningOptions | None = None,
) -> TrigMomentSequence:
    """Invert the moment transform: recover tau_mu from phase moments.

    ``tau_mu0`` supplies the zeroth measure moment, which the transform does
    not retain.  Requires tau_phi(0) = pi/2 (to 1e-10).
    """
    opts = opts or ConditioningOptions()
    values = tau_phi.values
    if abs(values[0] - PHASE_MEAN) > 1e-10:
        raise InvalidPhaseError(
            f"zeroth phase moment {values[0]} differs from pi/2"
        )
    if tau_mu0 <= 0.0:
        raise DomainError("tau_mu(0) must be positive")
    shifted_mass = tau_mu0 + opts.M
    exponent = 2.0j * values
    exponent[0] = 0.0
    generating = series_exp(exponent)
    out = shifted_mass * generating
    out[0] = tau_mu0
    return TrigMomentSequence(out)

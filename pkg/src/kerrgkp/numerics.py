"""Numerically stable special functions and quadrature primitives.

All physics-level quantities in this package reduce to three ingredients:
Hermite functions evaluated by stable recurrences, Gaussian interval
masses expressed through the error function, and adaptive quadrature of
smooth (possibly oscillatory) integrands with Gaussian envelopes.  This
module provides exactly those, as pure functions with no shared state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy import integrate
from scipy import special

SQRT_PI = math.sqrt(math.pi)

# Gaussian envelopes are treated as numerically zero once they fall below
# this fraction of their peak value; exp(-q^2) crosses it at |q| ~ 6.07.
ENVELOPE_CUTOFF = 1e-16

# Half-width of the support of exp(-q^2) at the ENVELOPE_CUTOFF level,
# padded slightly so interval arithmetic never clips real mass.
GAUSS_SUPPORT_RADIUS = math.sqrt(-math.log(ENVELOPE_CUTOFF)) + 0.2

# Same for a bare amplitude envelope exp(-q^2/2) (amplitude-level integrals
# such as Fourier transforms need the wider window).
AMPLITUDE_SUPPORT_RADIUS = math.sqrt(-2.0 * math.log(ENVELOPE_CUTOFF)) + 0.2


class QuadratureError(ArithmeticError):
    """Adaptive quadrature did not converge within the allowed subdivisions.

    Carries the best available estimate so callers can decide whether the
    partial answer is still usable.
    """

    def __init__(self, message: str, best_estimate: float, error_estimate: float):
        super().__init__(message)
        self.best_estimate = best_estimate
        self.error_estimate = error_estimate


class HermiteOverflowError(OverflowError):
    """H_n(x) left the double range; evaluate hermite_normalized instead."""


class TruncationError(RuntimeError):
    """A series truncation hit its hard cap before reaching the tail bound."""


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances and subdivision budget for adaptive quadrature."""

    absolute_tolerance: float = 1e-10
    relative_tolerance: float = 1e-9
    max_subdivisions: int = 200

    def __post_init__(self):
        if not (self.absolute_tolerance > 0.0):
            raise ValueError("absolute_tolerance must be > 0")
        if not (self.relative_tolerance > 0.0):
            raise ValueError("relative_tolerance must be > 0")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be >= 1")


@dataclass(frozen=True)
class TruncationPolicy:
    """Controls where infinite sums over the excitation index are cut.

    ``tail_weight_bound`` bounds the Poissonian weight exp(-a^2) a^(2n)/n!
    of dropped terms; ``hard_max_n`` is the absolute cap on the index.
    """

    tail_weight_bound: float = 1e-12
    hard_max_n: int = 512

    def __post_init__(self):
        if not (0.0 < self.tail_weight_bound < 1.0):
            raise ValueError("tail_weight_bound must lie in (0, 1)")
        if self.hard_max_n < 1:
            raise ValueError("hard_max_n must be >= 1")


def hermite_physicists(n: int, x: float) -> float:
    """Physicists' Hermite polynomial H_n(x) by the three-term recurrence.

    H_{n+1} = 2x H_n - 2n H_{n-1}.  Exact for polynomial inputs up to
    floating rounding, but overflows near n ~ 150 for moderate x; large-n
    callers should use :func:`hermite_normalized`.

    Raises
    ------
    HermiteOverflowError
        If the recurrence leaves the double range.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    if not math.isfinite(x):
        raise ValueError("x must be finite")
    h_prev, h = 1.0, 2.0 * x
    if n == 0:
        return 1.0
    for k in range(1, n):
        h_prev, h = h, 2.0 * x * h - 2.0 * k * h_prev
    if not math.isfinite(h):
        raise HermiteOverflowError(
            f"H_{n}({x}) overflows double precision; use hermite_normalized"
        )
    return h


def hermite_normalized(n: int, x: float) -> float:
    """Orthonormal Hermite function h_n(x) = H_n(x) e^{-x^2/2} / (2^n n! sqrt(pi))^{1/2}.

    Evaluated by the recurrence on h_n itself,

        h_{n+1} = sqrt(2/(n+1)) x h_n - sqrt(n/(n+1)) h_{n-1},

    which never forms H_n or the factorial separately and stays finite for
    all n <= 1e4, |x| <= 50.  (For |x| large enough that e^{-x^2/2}
    underflows, the returned value is the correctly rounded 0.0.)
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    if not math.isfinite(x):
        raise ValueError("x must be finite")
    h = math.pi ** -0.25 * math.exp(-0.5 * x * x)
    if n == 0:
        return h
    h_prev, h = h, math.sqrt(2.0) * x * h
    for k in range(1, n):
        h_prev, h = h, math.sqrt(2.0 / (k + 1)) * x * h - math.sqrt(k / (k + 1.0)) * h_prev
    return h


def hermite_normalized_all(n_max: int, x: float) -> np.ndarray:
    """All h_0(x) .. h_{n_max}(x) in one recurrence sweep."""
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    out = np.empty(n_max + 1)
    out[0] = math.pi ** -0.25 * math.exp(-0.5 * x * x)
    if n_max == 0:
        return out
    out[1] = math.sqrt(2.0) * x * out[0]
    for k in range(1, n_max):
        out[k + 1] = math.sqrt(2.0 / (k + 1)) * x * out[k] - math.sqrt(k / (k + 1.0)) * out[k - 1]
    return out


def integrate_adaptive(
    f: Callable[[float], float],
    a: float,
    b: float,
    spec: QuadratureSpec = QuadratureSpec(),
) -> tuple[float, float]:
    """Adaptive quadrature of f over the finite interval [a, b].

    Thin wrapper over QUADPACK's globally adaptive Gauss-Kronrod scheme
    (scipy.integrate.quad), mapping the spec tolerances onto epsabs/epsrel
    and the subdivision budget onto ``limit``.  Deterministic for fixed
    inputs.

    Returns
    -------
    (value, error_estimate)

    Raises
    ------
    QuadratureError
        On non-convergence; the exception carries the best estimate.
    """
    if not (math.isfinite(a) and math.isfinite(b)):
        raise ValueError("integration limits must be finite")
    if not a < b:
        raise ValueError("require a < b")
    value, abserr, info, *rest = integrate.quad(
        f,
        a,
        b,
        epsabs=spec.absolute_tolerance,
        epsrel=spec.relative_tolerance,
        limit=spec.max_subdivisions,
        full_output=1,
    )
    if rest:  # quad appends a message (and possibly more) on failure
        raise QuadratureError(
            f"quadrature failed on [{a}, {b}]: {rest[0]}", value, abserr
        )
    return value, abserr


def integrate_piecewise(
    f: Callable[[float], float],
    breakpoints: Sequence[float],
    spec: QuadratureSpec = QuadratureSpec(),
) -> tuple[float, float]:
    """Sum of adaptive integrals over consecutive panels.

    Used wherever an integrand has known structure (comb teeth, narrow
    oscillation) that a single global refinement might miss.
    """
    pts = np.asarray(breakpoints, dtype=float)
    if pts.ndim != 1 or pts.size < 2:
        raise ValueError("need at least two breakpoints")
    if np.any(np.diff(pts) <= 0):
        raise ValueError("breakpoints must be strictly increasing")
    total = 0.0
    err = 0.0
    for lo, hi in zip(pts[:-1], pts[1:]):
        v, e = integrate_adaptive(f, lo, hi, spec)
        total += v
        err += e
    return total, err


def gaussian_interval_mass(center: float, a: float, b: float) -> float:
    """Mass of the unit-width Gaussian density on [a, b].

    Returns int_a^b pi^{-1/2} exp(-(p-center)^2) dp
          = [erf(b-center) - erf(a-center)] / 2.

    Infinite endpoints are allowed.  The erfc form is used when both
    endpoints sit on the same side of the center, where the plain erf
    difference would cancel catastrophically.
    """
    if a > b:
        raise ValueError("require a <= b")
    u = a - center
    v = b - center
    if u >= 0.0:
        return 0.5 * (math.erfc(u) - math.erfc(v))
    if v <= 0.0:
        return 0.5 * (math.erfc(-v) - math.erfc(-u))
    return 0.5 * (math.erf(v) - math.erf(u))


def gaussian_cos_interval_mass(center: float, freq: float, a: float, b: float) -> float:
    """Cosine-weighted Gaussian interval mass.

    Returns int_a^b pi^{-1/2} exp(-(p-center)^2) cos(freq*p) dp, by
    completing the square: the cosine shifts the Gaussian center into the
    complex plane by i*freq/2, leaving an erf of complex argument.

    Intended for moderate |freq| (the intermediate erf magnitude grows as
    exp(freq^2/4)); |freq| <= 50 keeps everything comfortably in range.
    """
    if a > b:
        raise ValueError("require a <= b")
    if freq == 0.0:
        return gaussian_interval_mass(center, a, b)
    if abs(freq) > 50.0:
        raise ValueError("freq too large for the complex-erf evaluation")
    shift = 0.5j * freq
    hi = 1.0 if math.isinf(b) else complex(special.erf(b - center - shift))
    lo = -1.0 if math.isinf(a) else complex(special.erf(a - center - shift))
    amp = 0.5 * math.exp(-0.25 * freq * freq) * (hi - lo)
    return (np.exp(1j * freq * center) * amp).real


def gaussian_cos_interval_mass_grid(
    centers: np.ndarray, freq: float, a: float, b: float
) -> np.ndarray:
    """Vectorized :func:`gaussian_cos_interval_mass` over an array of centers."""
    if a > b:
        raise ValueError("require a <= b")
    centers = np.asarray(centers, dtype=float)
    if freq == 0.0:
        return gaussian_interval_mass_grid(centers, a, b)
    if abs(freq) > 50.0:
        raise ValueError("freq too large for the complex-erf evaluation")
    shift = 0.5j * freq
    hi = np.full(centers.shape, 1.0 + 0j) if math.isinf(b) else special.erf(b - centers - shift)
    lo = np.full(centers.shape, -1.0 + 0j) if math.isinf(a) else special.erf(a - centers - shift)
    amp = 0.5 * math.exp(-0.25 * freq * freq) * (hi - lo)
    return (np.exp(1j * freq * centers) * amp).real


def gaussian_interval_mass_grid(centers: np.ndarray, a: float, b: float) -> np.ndarray:
    """Vectorized :func:`gaussian_interval_mass` over an array of centers."""
    if a > b:
        raise ValueError("require a <= b")
    centers = np.asarray(centers, dtype=float)
    u = (a - centers) if not math.isinf(a) else np.full(centers.shape, -np.inf)
    v = (b - centers) if not math.isinf(b) else np.full(centers.shape, np.inf)
    out = np.empty(centers.shape)
    right = u >= 0.0
    left = v <= 0.0
    mid = ~(right | left)
    out[right] = 0.5 * (special.erfc(u[right]) - special.erfc(v[right]))
    out[left] = 0.5 * (special.erfc(-v[left]) - special.erfc(-u[left]))
    out[mid] = 0.5 * (special.erf(v[mid]) - special.erf(u[mid]))
    return out

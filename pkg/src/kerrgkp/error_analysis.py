"""Error regions and intrinsic error probabilities of the approximate codewords.

A recovery measurement on a comb codeword fails when the measured
quadrature lands in the half-period cells surrounding the *other*
codeword's peaks.  This module builds those periodic cell families,
integrates codeword densities over them (both at finite interaction time
and in the separated-peak limit where closed-form series exist), and
derives the homodyne post-selection statistics: outcome density, success
probability of an acceptance window, window-averaged intrinsic error, and
the interaction-time threshold beyond which the limit values are reached.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .codewords import (
    ApproximateCodeword,
    CoefficientSet,
    DegenerateStateError,
    EncodingParams,
    Label,
    build_codeword,
    coefficients,
    density_q,
)
from .numerics import (
    GAUSS_SUPPORT_RADIUS,
    QuadratureSpec,
    TruncationPolicy,
    gaussian_cos_interval_mass_grid,
    gaussian_interval_mass_grid,
    integrate_adaptive,
    integrate_piecewise,
)

SQRT_PI = math.sqrt(math.pi)

# Relative floor below which the +/- series denominators count as degenerate.
_DEGENERACY_FLOOR = 1e-14

# Mandatory pre-subdivision scale (in x) for the window-averaged error
# integrand, whose oscillations tighten with alpha.
_MEAN_ERROR_PANEL = 0.05

# Acceptance windows wider than this many units beyond alpha add no mass.
_WINDOW_PAD = 12.0


class ThresholdNotReachedError(RuntimeError):
    """The convergence threshold was not reached within the scanned grid."""


@dataclass(frozen=True)
class ErrorRegionFamily:
    """Periodic interval family R_s on one quadrature axis.

    One/Zero live on the q axis with period 2*theta and cell width theta;
    Minus/Plus live on the p axis with period 2*pi/theta and cell width
    pi/theta.  Adjacent-label families tile the axis without overlap.
    """

    label: Label
    theta: float

    @property
    def axis(self) -> str:
        return "q" if self.label in (Label.ZERO, Label.ONE) else "p"

    @property
    def cell_width(self) -> float:
        return self.theta if self.axis == "q" else math.pi / self.theta

    @property
    def period(self) -> float:
        return 2.0 * self.cell_width

    def interval(self, s: int) -> tuple[float, float]:
        w = self.cell_width
        if self.label in (Label.ONE, Label.MINUS):
            return ((2 * s - 0.5) * w, (2 * s + 0.5) * w)
        return ((2 * s + 0.5) * w, (2 * s + 1.5) * w)

    def indices_overlapping(self, lo: float, hi: float) -> range:
        """All s whose interval intersects [lo, hi]."""
        w = self.cell_width
        off = 0.0 if self.label in (Label.ONE, Label.MINUS) else w
        s_lo = math.floor((lo - off + 0.5 * w) / (2 * w))
        s_hi = math.ceil((hi - off + 0.5 * w) / (2 * w))
        return range(s_lo, s_hi + 1)


def error_regions(label: Label, theta: float) -> ErrorRegionFamily:
    """Error-cell family for a codeword label at comb half-spacing theta."""
    if not (theta > 0.0 and math.isfinite(theta)):
        raise ValueError("theta must be finite and > 0")
    return ErrorRegionFamily(label=label, theta=theta)


@dataclass(frozen=True)
class ProbabilityReport:
    """Error probabilities at one parameter point.

    ``pi_minus`` is None when the Minus state is degenerate there.  ``tau``
    is None in asymptotic mode.
    """

    alpha: float
    x: float
    mode: str  # "finite_tau" | "asymptotic"
    pi_q: float
    pi_plus: float
    pi_minus: float | None
    pi_max: float
    homodyne_density: float
    tau: float | None = None


@dataclass(frozen=True)
class SweepTable:
    """Rows of per-point results along one swept axis, in axis order."""

    axis_name: str  # "x" | "z" | "tau"
    axis_values: tuple[float, ...]
    rows: tuple

    def __post_init__(self):
        if len(self.axis_values) != len(self.rows):
            raise ValueError("row count must match axis length")
        if any(b <= a for a, b in zip(self.axis_values, self.axis_values[1:])):
            raise ValueError("axis values must be strictly increasing")


def q_region_mass(
    cw: ApproximateCodeword,
    family: ErrorRegionFamily,
    spec: QuadratureSpec = QuadratureSpec(),
) -> float:
    """Quadrature of the codeword's q-density over one region family.

    The s-sum runs over every cell that intersects the state's Gaussian
    support (envelope above 1e-16 of peak); cells beyond carry no mass.
    """
    if family.axis != "q":
        raise ValueError("family must live on the q axis")
    lo_s, hi_s = -GAUSS_SUPPORT_RADIUS, GAUSS_SUPPORT_RADIUS + cw.theta
    total = 0.0
    for s in family.indices_overlapping(lo_s, hi_s):
        a, b = family.interval(s)
        v, _ = integrate_adaptive(lambda q: density_q(cw, q), a, b, spec)
        total += v
    return total


def intrinsic_error_q(
    params: EncodingParams,
    policy: TruncationPolicy = TruncationPolicy(),
    spec: QuadratureSpec = QuadratureSpec(),
) -> float:
    """Intrinsic error probability of the q-axis recovery at finite tau.

    Integrates the One q-density over its error-cell family R^1.  By
    displacement covariance this equals the Zero state's mass over R^0, so
    one computation serves both labels.
    """
    cw = build_codeword(Label.ONE, params, policy)
    fam = error_regions(Label.ONE, params.theta)
    return q_region_mass(cw, fam, spec)


def _pm_region_masses(
    coeffs: CoefficientSet, tau: float, sign: float, intervals: Sequence[tuple[float, float]]
) -> float:
    """Sum over intervals of the unnormalized +/- momentum density.

    Each (n, n') pair of comb Gaussians multiplies to a single Gaussian of
    unit width centered midway, weighted by exp(-(pi^2/4) tau^2 (n-n')^2);
    the superposition factor (1 +/- cos(p theta)) splits into an erf mass
    and a complex-shifted (cosine-weighted) erf mass.
    """
    mu = coeffs.mu
    n = np.arange(mu.size)
    centers = math.pi * tau * 0.5 * np.add.outer(n, n)
    weights = np.outer(mu, mu) * np.exp(
        -(math.pi ** 2 / 4.0) * tau * tau * np.subtract.outer(n, n).astype(float) ** 2
    )
    theta = 1.0 / (2.0 * tau)
    flat_c = centers.ravel()
    flat_w = weights.ravel()
    keep = flat_w != 0.0
    flat_c = flat_c[keep]
    flat_w = flat_w[keep]
    total = 0.0
    for a, b in intervals:
        plain = gaussian_interval_mass_grid(flat_c, a, b)
        cosw = gaussian_cos_interval_mass_grid(flat_c, theta, a, b)
        total += float(flat_w @ (plain + sign * cosw))
    return total


def intrinsic_error_pm(
    label: Label,
    params: EncodingParams,
    policy: TruncationPolicy = TruncationPolicy(),
    spec: QuadratureSpec = QuadratureSpec(),
) -> float:
    """Intrinsic error probability of the p-axis recovery at finite tau.

    Closed form: every term of the Plus/Minus momentum density is a
    Gaussian-pair product integrated over cells via erf interval masses,
    so no quadrature is involved.  The result is the ratio of error-cell
    mass to whole-line mass, which normalizes the state exactly.
    """
    if label not in (Label.PLUS, Label.MINUS):
        raise ValueError("label must be Plus or Minus")
    # degeneracy gate (raises for Minus when the basis states coincide)
    build_codeword(label, params, policy)
    coeffs = coefficients(params.alpha, params.x, policy)
    sign = 1.0 if label is Label.PLUS else -1.0
    tau = params.tau
    fam = error_regions(label, params.theta)
    top = math.pi * tau * coeffs.n_max
    lo_s, hi_s = -GAUSS_SUPPORT_RADIUS, top + GAUSS_SUPPORT_RADIUS
    intervals = [fam.interval(s) for s in fam.indices_overlapping(lo_s, hi_s)]
    err = _pm_region_masses(coeffs, tau, sign, intervals)
    full = _pm_region_masses(coeffs, tau, sign, [(-math.inf, math.inf)])
    if full <= 0.0:
        raise DegenerateStateError("total +/- momentum mass vanished")
    return min(max(err / full, 0.0), 1.0)


def asymptotic_pi_q(
    alpha: float, x: float, policy: TruncationPolicy = TruncationPolicy()
) -> float:
    """Separated-peak limit of the q-axis intrinsic error.

    1/2 + (2/pi) * sum_{n,k} (-1)^k (2k+1)^{-1} mu_n mu_{n+2(2k+1)} / sum_n mu_n^2.
    The coefficient ratio is identical whether written with rho_n or the
    stable mu_n (the Gaussian prefactors cancel).
    """
    coeffs = coefficients(alpha, x, policy)
    return _pi_q_limit(coeffs)


def _pi_q_limit(coeffs: CoefficientSet) -> float:
    mu = coeffs.mu
    denom = float(mu @ mu)
    if denom <= 0.0:
        raise DegenerateStateError("sum of squared coefficients vanished")
    acc = 0.0
    k = 0
    while True:
        d = 2 * (2 * k + 1)
        if d > coeffs.n_max:
            break  # remaining terms are identically zero
        acc += (-1.0) ** k / (2 * k + 1) * float(mu[:-d] @ mu[d:])
        k += 1
    val = 0.5 + (2.0 / math.pi) * acc / denom
    return min(max(val, 0.0), 1.0)


def asymptotic_pi_pm(
    label: Label, alpha: float, x: float, policy: TruncationPolicy = TruncationPolicy()
) -> float:
    """Separated-peak limit of the p-axis intrinsic error for Plus/Minus.

    sum_k mu_{2k+1}^2 / {2 sum_k (mu_{2k+1}^2 + 2 mu_{4k+c}^2)} with c = 0
    for Plus and c = 2 for Minus.

    Raises
    ------
    DegenerateStateError
        When the denominator vanishes relative to the total weight (e.g.
        Minus as alpha -> 0), making the ratio undefined.
    """
    if label not in (Label.PLUS, Label.MINUS):
        raise ValueError("label must be Plus or Minus")
    coeffs = coefficients(alpha, x, policy)
    return _pi_pm_limit(label, coeffs)


def _pi_pm_limit(label: Label, coeffs: CoefficientSet) -> float:
    mu = coeffs.mu
    s_odd = float(mu[1::2] @ mu[1::2])
    s_fam = float(mu[0::4] @ mu[0::4]) if label is Label.PLUS else float(mu[2::4] @ mu[2::4])
    total = float(mu @ mu)
    denom = 2.0 * (s_odd + 2.0 * s_fam)
    if total <= 0.0 or denom < _DEGENERACY_FLOOR * total:
        raise DegenerateStateError(f"{label.value} limit denominator degenerate (0/0)")
    return min(max(s_odd / denom, 0.0), 1.0)


def homodyne_density(
    alpha: float, x: float, policy: TruncationPolicy = TruncationPolicy()
) -> float:
    """Asymptotic probability density of homodyne outcome x: pi^{-1/2} sum mu_n^2."""
    coeffs = coefficients(alpha, x, policy)
    return coeffs.weight_sum() / SQRT_PI


def pi_max_asymptotic(
    alpha: float, x: float, policy: TruncationPolicy = TruncationPolicy()
) -> ProbabilityReport:
    """Report of all separated-peak error probabilities at (alpha, x)."""
    coeffs = coefficients(alpha, x, policy)
    pq = _pi_q_limit(coeffs)
    pp = _pi_pm_limit(Label.PLUS, coeffs)
    try:
        pm: float | None = _pi_pm_limit(Label.MINUS, coeffs)
    except DegenerateStateError:
        pm = None
    worst = max(v for v in (pq, pp, pm) if v is not None)
    return ProbabilityReport(
        alpha=alpha,
        x=x,
        mode="asymptotic",
        pi_q=pq,
        pi_plus=pp,
        pi_minus=pm,
        pi_max=worst,
        homodyne_density=coeffs.weight_sum() / SQRT_PI,
    )


def pi_max_finite(
    params: EncodingParams,
    policy: TruncationPolicy = TruncationPolicy(),
    spec: QuadratureSpec = QuadratureSpec(),
) -> ProbabilityReport:
    """Report of all finite-tau error probabilities at (alpha, tau, x)."""
    pq = intrinsic_error_q(params, policy, spec)
    pp = intrinsic_error_pm(Label.PLUS, params, policy, spec)
    try:
        pm: float | None = intrinsic_error_pm(Label.MINUS, params, policy, spec)
    except DegenerateStateError:
        pm = None
    worst = max(v for v in (pq, pp, pm) if v is not None)
    coeffs = coefficients(params.alpha, params.x, policy)
    return ProbabilityReport(
        alpha=params.alpha,
        x=params.x,
        mode="finite_tau",
        pi_q=pq,
        pi_plus=pp,
        pi_minus=pm,
        pi_max=worst,
        homodyne_density=coeffs.weight_sum() / SQRT_PI,
        tau=params.tau,
    )


def _acceptance_window(z: float, alpha: float) -> float:
    """Half-width of the accepted homodyne window; z = 0 accepts everything."""
    if z < 0.0:
        raise ValueError("z must be >= 0")
    if alpha < 0.0:
        raise ValueError("alpha must be >= 0")
    cap = alpha + _WINDOW_PAD
    return cap if z == 0.0 else min(alpha / z, cap)


def success_probability(
    z: float,
    alpha: float,
    spec: QuadratureSpec = QuadratureSpec(),
    policy: TruncationPolicy = TruncationPolicy(),
) -> float:
    """Post-selection acceptance probability P(z, alpha) of the window |x| < alpha/z.

    z = 0 means accepting every measurement result (the integral then runs
    over the whole effective support of the outcome density).
    """
    w = _acceptance_window(z, alpha)
    panels = max(2, int(math.ceil(2.0 * w / 0.5)))
    pts = np.linspace(-w, w, panels + 1)
    val, _ = integrate_piecewise(lambda t: homodyne_density(alpha, t, policy), pts, spec)
    return min(max(val, 0.0), 1.0)


def mean_intrinsic_error(
    z: float,
    alpha: float,
    spec: QuadratureSpec = QuadratureSpec(),
    policy: TruncationPolicy = TruncationPolicy(),
) -> float:
    """Window-averaged worst-case intrinsic error of accepted codewords.

    Pi(z, alpha) = int_{-w}^{w} P(x) Pi_max(x) dx / P(z, alpha).  The
    integrand oscillates on a scale that shrinks with alpha, so the window
    is pre-subdivided at scale <= 0.05 before adaptive refinement.
    """
    P = success_probability(z, alpha, spec, policy)
    if P <= 0.0:
        raise DegenerateStateError("success probability vanished; mean error undefined")

    def integrand(t: float) -> float:
        rep = pi_max_asymptotic(alpha, t, policy)
        return rep.homodyne_density * rep.pi_max

    w = _acceptance_window(z, alpha)
    panels = max(2, int(math.ceil(2.0 * w / _MEAN_ERROR_PANEL)))
    pts = np.linspace(-w, w, panels + 1)
    num, _ = integrate_piecewise(integrand, pts, spec)
    return min(max(num / P, 0.0), 1.0)


def threshold_tau(
    alpha: float,
    tolerance: float = 0.02,
    spec: QuadratureSpec = QuadratureSpec(),
    policy: TruncationPolicy = TruncationPolicy(),
    grid_step: float = 0.1,
    grid_max: float = 10.0,
) -> float:
    """Smallest grid tau from which Pi_max(tau, alpha, 0) stays within
    ``tolerance`` of its separated-peak limit for all larger grid points.

    Raises
    ------
    ThresholdNotReachedError
        If no such grid point exists within (0, grid_max].
    """
    if not (alpha > 0.0):
        raise ValueError("alpha must be > 0")
    if not (tolerance > 0.0):
        raise ValueError("tolerance must be > 0")
    ref = pi_max_asymptotic(alpha, 0.0, policy).pi_max
    n_pts = int(round(grid_max / grid_step))
    taus = [round((i + 1) * grid_step, 12) for i in range(n_pts)]
    diffs = [
        abs(pi_max_finite(EncodingParams(alpha, t, 0.0), policy, spec).pi_max - ref)
        for t in taus
    ]
    threshold = None
    for t, d in zip(reversed(taus), reversed(diffs)):
        if d <= tolerance:
            threshold = t
        else:
            break
    if threshold is None:
        raise ThresholdNotReachedError(
            f"|Pi_max(tau) - limit| stayed above {tolerance} up to tau = {grid_max}"
        )
    return threshold


def _map_ordered(fn, values: Sequence[float], threads: int):
    """Apply fn over values, optionally concurrently, preserving order."""
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(fn, values))
    return [fn(v) for v in values]


def sweep_x(
    alpha: float,
    xs: Sequence[float],
    policy: TruncationPolicy = TruncationPolicy(),
    threads: int = 1,
) -> SweepTable:
    """Asymptotic probability reports over a grid of homodyne outcomes."""
    xs = tuple(float(v) for v in xs)
    rows = _map_ordered(lambda t: pi_max_asymptotic(alpha, t, policy), xs, threads)
    return SweepTable(axis_name="x", axis_values=xs, rows=tuple(rows))


def sweep_z(
    alpha: float,
    zs: Sequence[float],
    spec: QuadratureSpec = QuadratureSpec(),
    policy: TruncationPolicy = TruncationPolicy(),
    threads: int = 1,
) -> SweepTable:
    """(success probability, mean intrinsic error) over a grid of window factors z."""
    zs = tuple(float(v) for v in zs)
    rows = _map_ordered(
        lambda z: (
            success_probability(z, alpha, spec, policy),
            mean_intrinsic_error(z, alpha, spec, policy),
        ),
        zs,
        threads,
    )
    return SweepTable(axis_name="z", axis_values=zs, rows=tuple(rows))


def sweep_tau(
    alpha: float,
    taus: Sequence[float],
    x: float = 0.0,
    spec: QuadratureSpec = QuadratureSpec(),
    policy: TruncationPolicy = TruncationPolicy(),
    threads: int = 1,
) -> SweepTable:
    """Finite-tau probability reports over a grid of interaction times."""
    taus = tuple(float(v) for v in taus)
    rows = _map_ordered(
        lambda t: pi_max_finite(EncodingParams(alpha, t, x), policy, spec), taus, threads
    )
    return SweepTable(axis_name="tau", axis_values=taus, rows=tuple(rows))

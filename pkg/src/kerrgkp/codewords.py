"""Conditional approximate codewords of an optical mode.

A cross-Kerr interaction between a weak coherent probe (amplitude alpha)
and an intense mode, followed by a homodyne measurement of the probe with
outcome x, leaves the intense mode's fluctuations in a comb-like state.
That conditional state is adopted as the logical-one codeword; logical
zero is its displacement by theta = 1/(2 tau) along q, and the +/- pair
are the normalized sum and difference.

Position representation of the base state (One), with mu_n the spectral
coefficients and N the normalization constant:

    phi(q) = pi^{-1/2} N sum_n mu_n exp(-q^2/2 + i pi n tau q)
    psi(p) = pi^{-1/2} N sum_n mu_n exp(-(p - pi n tau)^2 / 2)

mu_n(alpha, x) = rho_n e^{-(alpha^2+x^2)/2} with
rho_n = alpha^n H_n(x) / (2^{n/2} n!); here it is evaluated in the
equivalent stable form mu_n = pi^{1/4} (e^{-alpha^2} alpha^{2n}/n!)^{1/2} h_n(x).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .numerics import (
    AMPLITUDE_SUPPORT_RADIUS,
    GAUSS_SUPPORT_RADIUS,
    QuadratureSpec,
    TruncationError,
    TruncationPolicy,
    integrate_piecewise,
)

SQRT_PI = math.sqrt(math.pi)
PI4 = math.pi ** 0.25

# Gaussian factor exp(-(pi^2/4) d^2 tau^2) in the normalization double sum
# is dropped below this level.
_OFFDIAG_CUTOFF = 1e-16

# Minus construction fails below this norm; the two basis codewords are
# then numerically indistinguishable.
MINUS_NORM_FLOOR = 1e-6


class DegenerateStateError(ArithmeticError):
    """A state construction degenerated (all-zero coefficients or N_- ~ 0)."""


class Label(enum.Enum):
    ZERO = "zero"
    ONE = "one"
    PLUS = "plus"
    MINUS = "minus"


@dataclass(frozen=True)
class EncodingParams:
    """Physical knobs of one conditional preparation.

    alpha : weak-mode coherent amplitude (> 0 physically; 0 is allowed as
            the degenerate vacuum limit used by analytic anchor tests)
    tau   : scaled interaction time (> 0); sets theta = 1/(2 tau)
    x     : homodyne measurement result on the weak mode
    """

    alpha: float
    tau: float
    x: float = 0.0

    def __post_init__(self):
        if not (self.alpha >= 0.0 and math.isfinite(self.alpha)):
            raise ValueError("alpha must be finite and >= 0")
        if not (self.tau > 0.0 and math.isfinite(self.tau)):
            raise ValueError("tau must be finite and > 0")
        if not math.isfinite(self.x):
            raise ValueError("x must be finite")

    @property
    def theta(self) -> float:
        """Comb half-spacing theta = 1/(2 tau); derived, never stored."""
        return 1.0 / (2.0 * self.tau)


@dataclass(frozen=True, eq=False)
class CoefficientSet:
    """Truncated coefficient sequence mu_0 .. mu_{n_max} for given (alpha, x)."""

    mu: np.ndarray
    n_max: int
    alpha: float
    x: float

    def weight_sum(self) -> float:
        """sum_n mu_n^2 (equals sqrt(pi) times the homodyne density)."""
        return float(self.mu @ self.mu)


def tau_from_physical(k: float, t: float) -> float:
    """Scaled interaction time sqrt(2) k t / pi from rate k and duration t."""
    kt = k * t
    if not (kt > 0.0 and math.isfinite(kt)):
        raise ValueError("k*t must be positive and finite")
    return math.sqrt(2.0) * kt / math.pi


def coefficients(alpha: float, x: float, policy: TruncationPolicy = TruncationPolicy()) -> CoefficientSet:
    """Compute the stable coefficient sequence mu_n(alpha, x), truncated.

    mu_n = pi^{1/4} (e^{-alpha^2} alpha^{2n}/n!)^{1/2} h_n(x), identical to
    rho_n e^{-(alpha^2+x^2)/2} but free of the factorial/power overflow of
    the raw form.  Terms are kept while the Poissonian weight
    w_n = e^{-alpha^2} alpha^{2n}/n! exceeds the policy tail bound, then
    extended until three consecutive |mu_n| fall below
    tail_weight_bound * max|mu|.  The amplitude-scale tail criterion keeps
    dropped wavefunction contributions at the bound level itself, so
    doubling n_max moves reported amplitudes by far less than 1e-10.

    Raises
    ------
    TruncationError
        If hard_max_n is reached before the tail bound is met.
    """
    if not (alpha >= 0.0 and math.isfinite(alpha)):
        raise ValueError("alpha must be finite and >= 0")
    if not math.isfinite(x):
        raise ValueError("x must be finite")
    if alpha == 0.0:
        # vacuum limit: only n = 0 survives
        return CoefficientSet(mu=np.array([math.exp(-0.5 * x * x)]), n_max=0, alpha=alpha, x=x)

    log_a2 = 2.0 * math.log(alpha)
    log_bound = math.log(policy.tail_weight_bound)
    peak_n = alpha * alpha

    def log_weight(n: int) -> float:
        return -alpha * alpha + n * log_a2 - math.lgamma(n + 1)

    # Single sweep: the "core" rides the Poisson weight past its peak down
    # to the tail bound; the extension then runs until three consecutive
    # |mu_n| drop below tail_weight_bound * max|mu|.  The three trailing
    # (negligible) entries are kept in the recorded set.
    mu_list: list[float] = []
    h_prev = 0.0
    h_cur = math.pi ** -0.25 * math.exp(-0.5 * x * x)
    max_abs = 0.0
    run = 0
    n = 0
    while True:
        mu_n = PI4 * math.exp(0.5 * log_weight(n)) * h_cur
        mu_list.append(mu_n)
        max_abs = max(max_abs, abs(mu_n))
        in_core = (log_weight(n) > log_bound) or (n <= peak_n)
        if in_core:
            run = 0
        else:
            run = run + 1 if abs(mu_n) < policy.tail_weight_bound * max_abs else 0
            if run >= 3:
                break
        if n >= policy.hard_max_n:
            raise TruncationError(
                f"coefficient tail not settled at hard_max_n={policy.hard_max_n}"
            )
        h_prev, h_cur = h_cur, (
            math.sqrt(2.0 / (n + 1)) * x * h_cur - math.sqrt(n / (n + 1.0)) * h_prev
        )
        n += 1

    mu = np.array(mu_list)
    return CoefficientSet(mu=mu, n_max=len(mu) - 1, alpha=alpha, x=x)


def normalization_constant(coeffs: CoefficientSet, tau: float) -> float:
    """Normalization N = pi^{1/4} {sum_{n,n'} mu_n mu_{n'} e^{-(pi^2/4)(n-n')^2 tau^2}}^{-1/2}.

    The Gaussian factor in the double sum is dropped once it falls below
    1e-16, so only near-diagonal bands contribute.
    """
    if not (tau > 0.0):
        raise ValueError("tau must be > 0")
    mu = coeffs.mu
    total = float(mu @ mu)
    if total <= 0.0:
        raise DegenerateStateError("all coefficients vanish; cannot normalize")
    rate = (math.pi ** 2 / 4.0) * tau * tau
    d = 1
    while d <= coeffs.n_max:
        factor = math.exp(-rate * d * d)
        if factor < _OFFDIAG_CUTOFF:
            break
        total += 2.0 * factor * float(mu[:-d] @ mu[d:])
        d += 1
    if total <= 0.0:
        raise DegenerateStateError("normalization double sum is not positive")
    return PI4 / math.sqrt(total)


@dataclass(frozen=True, eq=False)
class ApproximateCodeword:
    """A labeled conditional codeword with evaluable q/p wavefunctions.

    Immutable after construction; evaluators are pure.  ``pm_norm`` (the
    superposition normalization N_+-) is present exactly for the Plus and
    Minus labels.
    """

    label: Label
    params: EncodingParams
    coefficients: CoefficientSet
    norm_constant: float
    pm_norm: float | None = None

    @property
    def theta(self) -> float:
        return self.params.theta


def overlap_zero_one(params: EncodingParams, policy: TruncationPolicy = TruncationPolicy()) -> complex:
    """Overlap <0~|1~> of the displaced codeword pair, in closed form.

    Completing the square in int phi_1*(q - theta) phi_1(q) dq gives

        pi^{-1/2} N^2 e^{-theta^2/4}
            sum_{n,n'} mu_n mu_{n'} e^{-(pi^2/4) tau^2 (n-n')^2}
                       e^{i pi tau theta (n+n')/2}
    """
    coeffs = coefficients(params.alpha, params.x, policy)
    nc = normalization_constant(coeffs, params.tau)
    return _overlap_from(coeffs, nc, params.tau)


def _overlap_from(coeffs: CoefficientSet, norm_constant_value: float, tau: float) -> complex:
    mu = coeffs.mu
    theta = 1.0 / (2.0 * tau)
    n = np.arange(mu.size)
    rate = (math.pi ** 2 / 4.0) * tau * tau
    phase_half = math.pi * tau * theta / 2.0  # = pi/4 exactly, kept general
    acc = 0.0 + 0.0j
    for d in range(0, coeffs.n_max + 1):
        gauss = math.exp(-rate * d * d)
        if gauss < _OFFDIAG_CUTOFF:
            break
        if d == 0:
            acc += gauss * np.sum(mu * mu * np.exp(1j * phase_half * 2 * n))
        else:
            pairs = mu[:-d] * mu[d:]
            phases = np.exp(1j * phase_half * (2 * n[:-d] + d))
            acc += 2.0 * gauss * np.sum(pairs * phases)
    pref = norm_constant_value ** 2 / SQRT_PI * math.exp(-theta * theta / 4.0)
    return complex(pref * acc)


def build_codeword(
    label: Label,
    params: EncodingParams,
    policy: TruncationPolicy = TruncationPolicy(),
) -> ApproximateCodeword:
    """Construct a unit-normalized approximate codeword.

    One is the conditional state itself; Zero is its q-displacement by
    theta; Plus/Minus are (Zero +/- One) / N_pm with
    N_pm = {2 (1 +/- Re<0~|1~>)}^{1/2}.

    Raises
    ------
    DegenerateStateError
        For Minus when N_- < 1e-6 (the two basis states are numerically
        identical and the difference state is meaningless).
    """
    coeffs = coefficients(params.alpha, params.x, policy)
    nc = normalization_constant(coeffs, params.tau)
    pm_norm = None
    if label in (Label.PLUS, Label.MINUS):
        ov = _overlap_from(coeffs, nc, params.tau)
        sign = 1.0 if label is Label.PLUS else -1.0
        arg = 2.0 * (1.0 + sign * ov.real)
        pm_norm = math.sqrt(max(arg, 0.0))
        if label is Label.MINUS and pm_norm < MINUS_NORM_FLOOR:
            raise DegenerateStateError(
                f"N_- = {pm_norm:.3e} below {MINUS_NORM_FLOOR}; Zero and One coincide"
            )
    return ApproximateCodeword(
        label=label, params=params, coefficients=coeffs, norm_constant=nc, pm_norm=pm_norm
    )


def _phi_one(cw: ApproximateCodeword, q: float) -> complex:
    mu = cw.coefficients.mu
    n = np.arange(mu.size)
    s = np.sum(mu * np.exp(1j * math.pi * cw.params.tau * n * q))
    return cw.norm_constant / SQRT_PI * math.exp(-0.5 * q * q) * s


def _psi_one(cw: ApproximateCodeword, p: float) -> float:
    mu = cw.coefficients.mu
    centers = math.pi * cw.params.tau * np.arange(mu.size)
    s = float(np.sum(mu * np.exp(-0.5 * (p - centers) ** 2)))
    return cw.norm_constant / SQRT_PI * s


def wavefunction_q(cw: ApproximateCodeword, q: float) -> complex:
    """Position-representation amplitude <q|codeword>."""
    th = cw.theta
    if cw.label is Label.ONE:
        return _phi_one(cw, q)
    if cw.label is Label.ZERO:
        return _phi_one(cw, q - th)
    sign = 1.0 if cw.label is Label.PLUS else -1.0
    return (_phi_one(cw, q - th) + sign * _phi_one(cw, q)) / cw.pm_norm


def wavefunction_p(cw: ApproximateCodeword, p: float) -> complex:
    """Momentum-representation amplitude <p|codeword>.

    Returned complex even when provably real (One), for a uniform interface.
    """
    th = cw.theta
    base = _psi_one(cw, p)
    if cw.label is Label.ONE:
        return complex(base)
    if cw.label is Label.ZERO:
        return np.exp(-1j * p * th) * base
    sign = 1.0 if cw.label is Label.PLUS else -1.0
    return (np.exp(-1j * p * th) + sign) * base / cw.pm_norm


def density_q(cw: ApproximateCodeword, q: float) -> float:
    """|<q|codeword>|^2."""
    return abs(wavefunction_q(cw, q)) ** 2


def density_p(cw: ApproximateCodeword, p: float) -> float:
    """|<p|codeword>|^2."""
    return abs(wavefunction_p(cw, p)) ** 2


def q_support(cw: ApproximateCodeword) -> tuple[float, float]:
    """Interval outside which the q-density is below the envelope cutoff."""
    centers = [0.0] if cw.label is Label.ONE else [0.0, cw.theta]
    r = GAUSS_SUPPORT_RADIUS
    return min(centers) - r, max(centers) + r


def p_support(cw: ApproximateCodeword) -> tuple[float, float]:
    """Interval outside which the p-density is below the envelope cutoff."""
    top = math.pi * cw.params.tau * cw.coefficients.n_max
    r = GAUSS_SUPPORT_RADIUS
    return -r, top + r


def q_breakpoints(cw: ApproximateCodeword, lo: float | None = None, hi: float | None = None) -> np.ndarray:
    """Panel boundaries for q-integrals, one comb cell (width 2 theta) each.

    Boundaries sit on even multiples of theta so the teeth of the One
    density fall at panel centers.
    """
    if lo is None or hi is None:
        s_lo, s_hi = q_support(cw)
        lo = s_lo if lo is None else lo
        hi = s_hi if hi is None else hi
    step = 2.0 * cw.theta
    k_lo = math.floor(lo / step)
    k_hi = math.ceil(hi / step)
    pts = np.arange(k_lo, k_hi + 1) * step
    pts[0] = min(pts[0], lo)
    pts[-1] = max(pts[-1], hi)
    return pts


def p_breakpoints(cw: ApproximateCodeword) -> np.ndarray:
    """Panel boundaries for p-integrals: midpoints between Gaussian teeth."""
    tau = cw.params.tau
    n_max = cw.coefficients.n_max
    r = GAUSS_SUPPORT_RADIUS
    mids = math.pi * tau * (np.arange(n_max) + 0.5)
    return np.concatenate(([-r], mids[(mids > -r) & (mids < math.pi * tau * n_max + r)],
                           [math.pi * tau * n_max + r]))


@dataclass(frozen=True, eq=False)
class CoherentSuperposition:
    """Oracle representation: the conditional state as coherent components.

    The evolved two-mode state, projected on the homodyne eigenstate |x>,
    reduces the signal mode to sum_n mu_n |gamma_n> with purely imaginary
    gamma_n = i pi n tau / sqrt(2) (momentum displacement pi n tau under
    q = (b+b')/sqrt(2), p = (b-b')/(i sqrt(2))).  Weights are unnormalized.
    """

    weights: np.ndarray
    gammas: np.ndarray
    params: EncodingParams

    def wavefunction_q(self, q: float) -> complex:
        """Sum of standard coherent-state position Gaussians (unnormalized)."""
        qc = math.sqrt(2.0) * self.gammas.real
        pc = math.sqrt(2.0) * self.gammas.imag
        terms = np.exp(-0.5 * (q - qc) ** 2 + 1j * pc * q - 0.5j * pc * qc)
        return complex(math.pi ** -0.25 * np.sum(self.weights * terms))

    def wavefunction_p(self, p: float) -> complex:
        """Sum of standard coherent-state momentum Gaussians (unnormalized)."""
        qc = math.sqrt(2.0) * self.gammas.real
        pc = math.sqrt(2.0) * self.gammas.imag
        terms = np.exp(-0.5 * (p - pc) ** 2 - 1j * qc * p + 0.5j * qc * pc)
        return complex(math.pi ** -0.25 * np.sum(self.weights * terms))


def coherent_superposition_oracle(
    params: EncodingParams, policy: TruncationPolicy = TruncationPolicy()
) -> CoherentSuperposition:
    """Component list {(mu_n, gamma_n = i pi n tau / sqrt(2))} of the state."""
    coeffs = coefficients(params.alpha, params.x, policy)
    n = np.arange(coeffs.mu.size)
    gammas = 1j * math.pi * params.tau * n / math.sqrt(2.0)
    return CoherentSuperposition(weights=coeffs.mu.copy(), gammas=gammas, params=params)


def fourier_consistency(
    cw: ApproximateCodeword,
    p_grid: np.ndarray,
    spec: QuadratureSpec = QuadratureSpec(),
) -> float:
    """Max deviation between the numeric Fourier transform of phi and psi.

    Computes (2 pi)^{-1/2} int phi(q) e^{-i p q} dq at each grid p by
    adaptive quadrature over panels narrow enough that both the comb teeth
    of phi and the transform oscillation are resolved, and returns
    max_p |result - psi(p)|.  Panel tolerances run two orders below the
    given spec so the summed quadrature error stays under it.
    """
    p_grid = np.asarray(p_grid, dtype=float)
    if p_grid.size == 0:
        raise ValueError("p grid must be non-empty")
    lo, hi = q_support(cw)
    pad = AMPLITUDE_SUPPORT_RADIUS - GAUSS_SUPPORT_RADIUS
    lo, hi = lo - pad, hi + pad
    inner = QuadratureSpec(
        absolute_tolerance=spec.absolute_tolerance * 1e-2,
        relative_tolerance=spec.relative_tolerance * 1e-2,
        max_subdivisions=spec.max_subdivisions,
    )
    pts = np.linspace(lo, hi, int(math.ceil((hi - lo) / 0.25)) + 1)
    worst = 0.0
    for p in p_grid:
        re, _ = integrate_piecewise(
            lambda q: (wavefunction_q(cw, q) * np.exp(-1j * p * q)).real, pts, inner
        )
        im, _ = integrate_piecewise(
            lambda q: (wavefunction_q(cw, q) * np.exp(-1j * p * q)).imag, pts, inner
        )
        ft = complex(re, im) / math.sqrt(2.0 * math.pi)
        worst = max(worst, abs(ft - wavefunction_p(cw, p)))
    return worst


def state_fidelity(cw: ApproximateCodeword, oracle: CoherentSuperposition,
                   spec: QuadratureSpec = QuadratureSpec()) -> float:
    """|<oracle|codeword>| with the oracle normalized by quadrature.

    Both the overlap and the oracle norm are evaluated as position-space
    integrals, keeping this check independent of the closed-form
    normalization machinery.
    """
    pts = q_breakpoints(cw)

    def ov_re(q: float) -> float:
        return (np.conj(oracle.wavefunction_q(q)) * wavefunction_q(cw, q)).real

    def ov_im(q: float) -> float:
        return (np.conj(oracle.wavefunction_q(q)) * wavefunction_q(cw, q)).imag

    def nrm(q: float) -> float:
        return abs(oracle.wavefunction_q(q)) ** 2

    re, _ = integrate_piecewise(ov_re, pts, spec)
    im, _ = integrate_piecewise(ov_im, pts, spec)
    norm2, _ = integrate_piecewise(nrm, pts, spec)
    return abs(complex(re, im)) / math.sqrt(norm2)


@dataclass(frozen=True)
class PeakComb:
    """Arithmetic progression of peaks: position(s) = offset + spacing*s."""

    offset: float
    spacing: float
    alternating: bool = False

    def position(self, s: int) -> float:
        return self.offset + self.spacing * s

    def sign(self, s: int) -> int:
        return -1 if (self.alternating and s % 2) else 1


@dataclass(frozen=True)
class IdealCodewordModel:
    """Peak structure of an infinitely squeezed codeword (symbolic model)."""

    label: Label
    theta: float
    q_peaks: PeakComb
    p_peaks: PeakComb


def ideal_model(label: Label, theta: float) -> IdealCodewordModel:
    """Peak descriptors of the ideal comb states.

    Zero: q-peaks at 2 theta s, One: q-peaks at 2 theta s + theta; both
    have p-peaks at pi s / theta, with alternating signs for One.  Plus
    keeps the even p-peaks (spacing 2 pi/theta), Minus the odd ones, their
    p-combs mutually displaced by pi/theta.
    """
    if not (theta > 0.0 and math.isfinite(theta)):
        raise ValueError("theta must be finite and > 0")
    L = math.pi / theta
    if label is Label.ZERO:
        return IdealCodewordModel(label, theta, PeakComb(0.0, 2 * theta), PeakComb(0.0, L))
    if label is Label.ONE:
        return IdealCodewordModel(label, theta, PeakComb(theta, 2 * theta), PeakComb(0.0, L, True))
    if label is Label.PLUS:
        return IdealCodewordModel(label, theta, PeakComb(0.0, theta), PeakComb(0.0, 2 * L))
    return IdealCodewordModel(label, theta, PeakComb(0.0, theta, True), PeakComb(L, 2 * L))

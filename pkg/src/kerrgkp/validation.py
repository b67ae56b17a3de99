"""Self-checks wiring the whole stack together.

Each check returns the measured deviation (or value), the tolerated bound,
and a pass flag; the CLI ``validate`` subcommand runs them all and the
exit status reflects the conjunction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import codewords as cw
from . import error_analysis as ea
from .numerics import QuadratureSpec, TruncationPolicy, integrate_piecewise

DEFAULT_ALPHAS = (0.5, 1.0, 2.0)
DEFAULT_TAUS = (1.0, 2.0, 5.0)
DEFAULT_XS = (0.0, 0.5, 1.0)

FOURIER_CASES = ((2.0, 2.0, 0.0), (1.0, 4.0, 0.5))
CONSISTENCY_ALPHAS = (0.5, 1.5, 3.0)
CONSISTENCY_XS = (0.0, 0.4, 1.2)
ANCHOR_Z0_ALPHAS = (1.0, 1.5, 2.0, 3.0, 4.0, 5.0)
THRESHOLD_ALPHAS = (0.75, 1.5, 2.25)


@dataclass(frozen=True)
class CheckResult:
    name: str
    measured: float
    tolerance: float
    passed: bool
    comparison: str = "<="  # how measured relates to tolerance when passing
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = f"{status}  {self.name}: measured {self.measured:.3e} (require {self.comparison} {self.tolerance:.3e})"
        if self.detail:
            text += f"  [{self.detail}]"
        return text


def _norm_deviation(state: cw.ApproximateCodeword, spec: QuadratureSpec) -> tuple[float, float]:
    """(q-norm deviation, p-norm deviation) from unity for one state."""
    q_pts = cw.q_breakpoints(state)
    nq, _ = integrate_piecewise(lambda q: cw.density_q(state, q), q_pts, spec)
    p_pts = cw.p_breakpoints(state)
    np_, _ = integrate_piecewise(lambda p: cw.density_p(state, p), p_pts, spec)
    return abs(nq - 1.0), abs(np_ - 1.0)


def check_normalizations(
    alphas=DEFAULT_ALPHAS,
    taus=DEFAULT_TAUS,
    xs=DEFAULT_XS,
    spec: QuadratureSpec = QuadratureSpec(),
    policy: TruncationPolicy = TruncationPolicy(),
    tolerance: float = 1e-8,
) -> list[CheckResult]:
    worst_q = worst_p = 0.0
    where_q = where_p = ""
    for a in alphas:
        for t in taus:
            for x in xs:
                params = cw.EncodingParams(a, t, x)
                for label in cw.Label:
                    try:
                        state = cw.build_codeword(label, params, policy)
                    except cw.DegenerateStateError:
                        continue
                    dq, dp = _norm_deviation(state, spec)
                    if dq > worst_q:
                        worst_q, where_q = dq, f"{label.value}@a={a},tau={t},x={x}"
                    if dp > worst_p:
                        worst_p, where_p = dp, f"{label.value}@a={a},tau={t},x={x}"
    return [
        CheckResult("normalization-q", worst_q, tolerance, worst_q <= tolerance, detail=where_q),
        CheckResult("normalization-p", worst_p, tolerance, worst_p <= tolerance, detail=where_p),
    ]


def check_homodyne_density_norm(
    alphas=(0.0, 0.5, 1.0, 2.0, 4.0),
    spec: QuadratureSpec = QuadratureSpec(),
    policy: TruncationPolicy = TruncationPolicy(),
    tolerance: float = 1e-8,
) -> CheckResult:
    worst = 0.0
    where = ""
    for a in alphas:
        w = a + 12.0
        pts = np.linspace(-w, w, max(2, int(math.ceil(2 * w / 0.5))) + 1)
        total, _ = integrate_piecewise(lambda t: ea.homodyne_density(a, t, policy), pts, spec)
        dev = abs(total - 1.0)
        if dev > worst:
            worst, where = dev, f"alpha={a}"
    return CheckResult("homodyne-density-norm", worst, tolerance, worst <= tolerance, detail=where)


def check_fourier(
    cases=FOURIER_CASES,
    spec: QuadratureSpec = QuadratureSpec(),
    policy: TruncationPolicy = TruncationPolicy(),
    tolerance: float = 1e-6,
    p_max: float = 30.0,
    p_step: float = 0.5,
) -> CheckResult:
    if p_max <= 0 or p_step <= 0:
        raise ValueError("p grid must be non-empty")
    worst = 0.0
    where = ""
    for a, t, x in cases:
        state = cw.build_codeword(cw.Label.ONE, cw.EncodingParams(a, t, x), policy)
        grid = np.arange(-p_max, p_max + p_step / 2, p_step)
        dev = cw.fourier_consistency(state, grid, spec)
        if dev > worst:
            worst, where = dev, f"a={a},tau={t},x={x}"
    return CheckResult("fourier-consistency", worst, tolerance, worst <= tolerance, detail=where)


def check_oracle_fidelity(
    alphas=DEFAULT_ALPHAS,
    taus=DEFAULT_TAUS,
    xs=DEFAULT_XS,
    spec: QuadratureSpec = QuadratureSpec(),
    policy: TruncationPolicy = TruncationPolicy(),
    tolerance: float = 1e-8,
) -> CheckResult:
    worst = 0.0
    where = ""
    for a in alphas:
        for t in taus:
            for x in xs:
                params = cw.EncodingParams(a, t, x)
                state = cw.build_codeword(cw.Label.ONE, params, policy)
                oracle = cw.coherent_superposition_oracle(params, policy)
                dev = abs(1.0 - cw.state_fidelity(state, oracle, spec))
                if dev > worst:
                    worst, where = dev, f"a={a},tau={t},x={x}"
    return CheckResult("oracle-fidelity", worst, tolerance, worst <= tolerance, detail=where)


def check_asymptotic_consistency(
    alphas=CONSISTENCY_ALPHAS,
    xs=CONSISTENCY_XS,
    tau: float = 10.0,
    spec: QuadratureSpec = QuadratureSpec(),
    policy: TruncationPolicy = TruncationPolicy(),
    tolerance: float = 1e-3,
) -> list[CheckResult]:
    worst = {"q": (0.0, ""), "plus": (0.0, ""), "minus": (0.0, "")}
    for a in alphas:
        for x in xs:
            params = cw.EncodingParams(a, tau, x)
            dq = abs(ea.intrinsic_error_q(params, policy, spec) - ea.asymptotic_pi_q(a, x, policy))
            if dq > worst["q"][0]:
                worst["q"] = (dq, f"a={a},x={x}")
            for label, key in ((cw.Label.PLUS, "plus"), (cw.Label.MINUS, "minus")):
                try:
                    fin = ea.intrinsic_error_pm(label, params, policy, spec)
                    asy = ea.asymptotic_pi_pm(label, a, x, policy)
                except cw.DegenerateStateError:
                    continue
                d = abs(fin - asy)
                if d > worst[key][0]:
                    worst[key] = (d, f"a={a},x={x}")
    return [
        CheckResult(
            f"asymptotic-consistency-{key}", dev, tolerance, dev <= tolerance, detail=where
        )
        for key, (dev, where) in worst.items()
    ]


def check_anchors(
    spec: QuadratureSpec = QuadratureSpec(),
    policy: TruncationPolicy = TruncationPolicy(),
) -> list[CheckResult]:
    out = []
    p = ea.success_probability(27.0, 2.0, spec, policy)
    out.append(
        CheckResult("anchor-success-P(27,2)", abs(p - 0.017), 0.003, abs(p - 0.017) <= 0.003,
                    detail=f"P={p:.6f}")
    )
    m = ea.mean_intrinsic_error(27.0, 2.0, spec, policy)
    out.append(
        CheckResult("anchor-mean-error-Pi(27,2)", abs(m - 0.010), 0.003, abs(m - 0.010) <= 0.003,
                    detail=f"Pi={m:.6f}")
    )
    floor_margin = min(
        ea.mean_intrinsic_error(0.0, a, spec, policy) - 0.5 for a in ANCHOR_Z0_ALPHAS
    )
    out.append(
        CheckResult("anchor-accept-all-floor", floor_margin, -1e-6, floor_margin >= -1e-6,
                    comparison=">=", detail="min over alpha of Pi(0,alpha) - 0.5")
    )
    worst_tau = max(ea.threshold_tau(a, 0.02, spec, policy) for a in THRESHOLD_ALPHAS)
    out.append(
        CheckResult("anchor-threshold-tau", worst_tau, 2.1, worst_tau <= 2.1,
                    detail="max over alpha of tau_th at tolerance 0.02")
    )
    return out


def run_validation(
    alphas=DEFAULT_ALPHAS,
    taus=DEFAULT_TAUS,
    xs=DEFAULT_XS,
    fourier_tolerance: float = 1e-6,
    spec: QuadratureSpec = QuadratureSpec(),
    policy: TruncationPolicy = TruncationPolicy(),
) -> list[CheckResult]:
    """Full check battery; any empty grid is a configuration error."""
    if not alphas or not taus or not xs:
        raise ValueError("validation grids must be non-empty")
    results = []
    results += check_normalizations(alphas, taus, xs, spec, policy)
    results.append(check_homodyne_density_norm(spec=spec, policy=policy))
    results.append(check_fourier(spec=spec, policy=policy, tolerance=fourier_tolerance))
    results.append(check_oracle_fidelity(alphas, taus, xs, spec, policy))
    results += check_asymptotic_consistency(spec=spec, policy=policy)
    results += check_anchors(spec, policy)
    return results

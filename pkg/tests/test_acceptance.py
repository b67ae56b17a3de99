"""Acceptance suite: every numbered criterion as a test with a printed verdict.

Each test prints one ``[criterion N] PASS/FAIL`` line with the measured
numbers (visible with ``pytest -s`` / ``-rA`` and in failure output).

Criterion 4 is split: the q-axis comparison (4a) holds at the stated
tolerance, while the +/- comparisons (4b) provably cannot at tau = 10 —
off the x = 0 axis those probabilities approach their separated-peak
limits only linearly in 1/tau (boundary teeth split asymmetrically at
O(theta)), leaving gaps of order 3e-3..2e-2.  4b is asserted at the stated
tolerance anyway and is expected to fail; the convergence law itself is
verified in test_error_analysis.
"""

import math

import numpy as np
import pytest

from conftest import doubled_truncation
from kerrgkp.codewords import (
    DegenerateStateError,
    EncodingParams,
    Label,
    build_codeword,
    coherent_superposition_oracle,
    density_p,
    density_q,
    fourier_consistency,
    p_breakpoints,
    q_breakpoints,
    state_fidelity,
    wavefunction_p,
    wavefunction_q,
)
from kerrgkp.error_analysis import (
    asymptotic_pi_pm,
    asymptotic_pi_q,
    error_regions,
    homodyne_density,
    intrinsic_error_pm,
    intrinsic_error_q,
    mean_intrinsic_error,
    pi_max_asymptotic,
    q_region_mass,
    success_probability,
    threshold_tau,
)
from kerrgkp.numerics import integrate_piecewise

GRID_ALPHAS = (0.5, 1.0, 2.0)
GRID_TAUS = (1.0, 2.0, 5.0)
GRID_XS = (0.0, 0.5, 1.0)


def verdict(num, ok, detail):
    print(f"[criterion {num}] {'PASS' if ok else 'FAIL'} - {detail}")
    return ok


def test_criterion_1_operating_point_anchors():
    p = success_probability(27.0, 2.0)
    m = mean_intrinsic_error(27.0, 2.0)
    ok = abs(p - 0.017) <= 0.003 and abs(m - 0.010) <= 0.003
    assert verdict(1, ok, f"P(27,2)={p:.6f} (0.017+-0.003), Pi(27,2)={m:.6f} (0.010+-0.003)")


def test_criterion_2_accept_all_floor():
    worst = min(mean_intrinsic_error(0.0, a) for a in (1.0, 1.5, 2.0, 3.0, 4.0, 5.0))
    ok = worst >= 0.5 - 1e-6
    assert verdict(2, ok, f"min over alpha of Pi(0,alpha) = {worst:.6f} >= 0.5 - 1e-6")


def test_criterion_3_threshold_time():
    ths = {a: threshold_tau(a, 0.02) for a in (0.75, 1.5, 2.25)}
    ok = all(t <= 2.1 for t in ths.values())
    assert verdict(3, ok, f"tau_th at tolerance 0.02: {ths} (all <= 2.1)")


def _consistency_gaps():
    gaps_q, gaps_pm = {}, {}
    for a in (0.5, 1.5, 3.0):
        for x in (0.0, 0.4, 1.2):
            params = EncodingParams(a, 10.0, x)
            gaps_q[(a, x)] = abs(intrinsic_error_q(params) - asymptotic_pi_q(a, x))
            for label in (Label.PLUS, Label.MINUS):
                try:
                    fin = intrinsic_error_pm(label, params)
                    asy = asymptotic_pi_pm(label, a, x)
                except DegenerateStateError:
                    continue  # degenerate Minus cases are skipped
                gaps_pm[(label.value, a, x)] = abs(fin - asy)
    return gaps_q, gaps_pm


def test_criterion_4a_asymptotic_consistency_q():
    gaps_q, _ = _consistency_gaps()
    worst = max(gaps_q.values())
    ok = worst <= 1e-3
    assert verdict("4a", ok, f"max |Pi_q(tau=10) - limit| = {worst:.3e} (<= 1e-3)")


def test_criterion_4b_asymptotic_consistency_pm():
    # Expected to fail; see module docstring.  The measured gaps quantify
    # the O(theta) = O(1/(2 tau)) convergence of the +/- probabilities.
    _, gaps_pm = _consistency_gaps()
    worst_key = max(gaps_pm, key=gaps_pm.get)
    worst = gaps_pm[worst_key]
    ok = worst <= 1e-3
    assert verdict(
        "4b", ok, f"max |Pi_pm(tau=10) - limit| = {worst:.3e} at {worst_key} (<= 1e-3)"
    )


def test_criterion_5_oracle_equivalence():
    worst = 1.0
    for a in GRID_ALPHAS:
        for t in GRID_TAUS:
            for x in GRID_XS:
                params = EncodingParams(a, t, x)
                cw = build_codeword(Label.ONE, params)
                orc = coherent_superposition_oracle(params)
                worst = min(worst, state_fidelity(cw, orc))
    ok = worst >= 1.0 - 1e-8
    assert verdict(5, ok, f"min oracle fidelity over 27-point grid = {worst:.12f} (>= 1-1e-8)")


def test_criterion_6_normalizations():
    worst = 0.0
    for a in GRID_ALPHAS:
        for t in GRID_TAUS:
            for x in GRID_XS:
                params = EncodingParams(a, t, x)
                for label in Label:
                    try:
                        cw = build_codeword(label, params)
                    except DegenerateStateError:
                        continue
                    nq, _ = integrate_piecewise(
                        lambda q: density_q(cw, q), q_breakpoints(cw)
                    )
                    npp, _ = integrate_piecewise(
                        lambda p: density_p(cw, p), p_breakpoints(cw)
                    )
                    worst = max(worst, abs(nq - 1.0), abs(npp - 1.0))
    for a in (0.0, 0.5, 1.0, 2.0, 4.0):
        w = a + 12.0
        total, _ = integrate_piecewise(
            lambda t: homodyne_density(a, t), np.linspace(-w, w, int(4 * w) + 1)
        )
        worst = max(worst, abs(total - 1.0))
    ok = worst <= 1e-8
    assert verdict(6, ok, f"worst normalization deviation = {worst:.3e} (<= 1e-8)")


def test_criterion_7_fourier_consistency():
    grid = np.arange(-30.0, 30.01, 0.5)
    worst = 0.0
    for a, t, x in ((2.0, 2.0, 0.0), (1.0, 4.0, 0.5)):
        cw = build_codeword(Label.ONE, EncodingParams(a, t, x))
        worst = max(worst, fourier_consistency(cw, grid))
    ok = worst <= 1e-6
    assert verdict(7, ok, f"max |FT(phi) - psi| over |p|<=30 = {worst:.3e} (<= 1e-6)")


def test_criterion_8_comb_structure():
    params = EncodingParams(2.0, 2.0, 0.0)
    one = build_codeword(Label.ONE, params)
    zero = build_codeword(Label.ZERO, params)
    # p-density local maxima within +-0.05 of 0 and 4 pi
    ps = np.arange(-1.0, 14.0, 0.005)
    dens = np.array([density_p(one, p) for p in ps])
    peaks = [
        ps[i]
        for i in range(1, len(ps) - 1)
        if dens[i] > dens[i - 1] and dens[i] > dens[i + 1] and dens[i] > 1e-3
    ]
    near0 = min(abs(p) for p in peaks)
    near4pi = min(abs(p - 4 * math.pi) for p in peaks)
    # q-densities of Zero and One are mutual translates by theta = 0.25
    qs = np.arange(-3.0, 3.0001, 0.01)
    shift_dev = max(abs(density_q(zero, q) - density_q(one, q - 0.25)) for q in qs)
    same_p_dev = max(abs(density_p(zero, p) - density_p(one, p)) for p in np.arange(-1, 14, 0.1))
    ok = near0 <= 0.05 and near4pi <= 0.05 and shift_dev <= 1e-10 and same_p_dev <= 1e-10
    assert verdict(
        8,
        ok,
        f"p-peaks off by ({near0:.4f}, {near4pi:.4f}) from (0, 4pi) (<= 0.05); "
        f"q-translate dev = {shift_dev:.2e}, p-identity dev = {same_p_dev:.2e} (<= 1e-10)",
    )


def test_criterion_9_best_outcome_at_origin():
    xs = np.arange(-3.0, 3.0001, 0.01)
    vals = [pi_max_asymptotic(1.5, float(x)).pi_max for x in xs]
    argmin = float(xs[int(np.argmin(vals))])
    ok = abs(argmin) <= 0.2
    assert verdict(9, ok, f"argmin_x Pi_max_inf(1.5, x) = {argmin:+.2f} (|.| <= 0.2)")


class TestCriterion10Properties:
    """Property bundle: tiling, complementarity, monotonicity, ranges,
    truncation stability, determinism."""

    def test_region_tiling(self):
        for theta in (0.1, 0.25):
            one = error_regions(Label.ONE, theta)
            zero = error_regions(Label.ZERO, theta)
            cells = sorted(
                [one.interval(s) for s in range(-50, 51)]
                + [zero.interval(s) for s in range(-50, 51)]
            )
            gaps = max(abs(b1 - a2) for (_, b1), (a2, _) in zip(cells[:-1], cells[1:]))
            assert cells[0][0] <= -50 * theta and cells[-1][1] >= 50 * theta
            assert gaps <= 1e-12
        assert verdict("10.tiling", True, "R^1/R^0 and R^+/R^- tile the axis, |s| <= 50")

    def test_complementarity(self):
        params = EncodingParams(2.0, 2.0, 0.0)
        one = build_codeword(Label.ONE, params)
        m1 = q_region_mass(one, error_regions(Label.ONE, params.theta))
        m0 = q_region_mass(one, error_regions(Label.ZERO, params.theta))
        ok = abs(m1 + m0 - 1.0) <= 1e-8
        assert verdict("10.complement", ok, f"R^1 + R^0 mass = {m1 + m0:.12f} (1 +- 1e-8)")

    def test_success_monotone(self):
        zs = (0.0, 0.5, 1.0, 3.0, 10.0, 27.0, 100.0)
        vals = [success_probability(z, 2.0) for z in zs]
        ok = all(a >= b - 1e-12 for a, b in zip(vals[:-1], vals[1:]))
        assert verdict("10.monotone", ok, "P(z, 2) non-increasing over z grid")

    def test_probabilities_in_unit_interval(self):
        ok = True
        for a in (0.3, 1.5, 3.0):
            for x in (0.0, 0.7, 2.0):
                rep = pi_max_asymptotic(a, x)
                vals = [rep.pi_q, rep.pi_plus, rep.pi_minus, rep.pi_max]
                ok &= all(v is None or 0.0 <= v <= 1.0 for v in vals)
        rep = None
        for a, t, x in ((1.5, 2.0, 0.4), (2.0, 5.0, 0.0)):
            from kerrgkp.error_analysis import pi_max_finite

            rep = pi_max_finite(EncodingParams(a, t, x))
            vals = [rep.pi_q, rep.pi_plus, rep.pi_minus, rep.pi_max]
            ok &= all(v is None or 0.0 <= v <= 1.0 for v in vals)
        assert verdict("10.range", ok, "all probabilities within [0, 1]")

    def test_truncation_stability(self):
        worst = 0.0
        for a, t, x in ((2.0, 2.0, 0.0), (1.0, 5.0, 0.5), (0.5, 1.0, 1.0)):
            cw = build_codeword(Label.ONE, EncodingParams(a, t, x))
            deep = doubled_truncation(cw)
            for q in (0.0, 0.3, 1.1):
                worst = max(worst, abs(wavefunction_q(deep, q) - wavefunction_q(cw, q)))
            for p in (0.0, 1.7, math.pi * t):
                worst = max(worst, abs(wavefunction_p(deep, p) - wavefunction_p(cw, p)))
        ok = worst < 1e-10
        assert verdict("10.truncation", ok, f"doubled n_max moves values by {worst:.2e} (< 1e-10)")

    def test_bit_exact_determinism(self):
        params = EncodingParams(1.5, 2.0, 0.3)
        pairs = [
            (intrinsic_error_q(params), intrinsic_error_q(params)),
            (
                intrinsic_error_pm(Label.PLUS, params),
                intrinsic_error_pm(Label.PLUS, params),
            ),
            (success_probability(13.0, 1.5), success_probability(13.0, 1.5)),
            (mean_intrinsic_error(13.0, 1.5), mean_intrinsic_error(13.0, 1.5)),
            (
                wavefunction_q(build_codeword(Label.PLUS, params), 0.21),
                wavefunction_q(build_codeword(Label.PLUS, params), 0.21),
            ),
        ]
        ok = all(a == b for a, b in pairs)
        assert verdict("10.determinism", ok, "repeated runs bit-identical")

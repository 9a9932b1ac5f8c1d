"""Polarizability layer: dispersion quadrature, closed form, Kramers-Kronig."""

import numpy as np
import pytest

from conftest import random_target, two_level, two_level_pair
from gainscatter import (
    LineSpectrum,
    PolarizabilityCurve,
    broaden,
    closed_form_lorentzian,
    im_alpha,
    kramers_kronig_residual,
    line_spectrum,
    polarizability_curve,
    polarizability_dispersion,
)


def brute_force_alpha(lines, gamma, zeta, span=400.0, points=4_000_001):
    """Independent oracle: dense trapezoid of the broadened dispersion integrand."""
    w = np.linspace(-span, span, points)
    s_plus = np.zeros_like(w)
    s_minus = np.zeros_like(w)
    for w0, wt in zip(lines.omega, lines.weight):
        s_plus += wt * (gamma / np.pi) / ((w - w0) ** 2 + gamma**2)
        s_minus += wt * (gamma / np.pi) / ((w + w0) ** 2 + gamma**2)
    return np.trapezoid((s_plus - s_minus) / (w - zeta), w)


def random_lines(rng, n_max=3):
    n = int(rng.integers(1, n_max + 1))
    return LineSpectrum(np.sort(rng.uniform(-2.0, 2.0, n)), rng.uniform(0.1, 1.0, n))


def dense_pair(lines, gamma, span=60.0, spacing_factor=8.0):
    points = int(np.ceil(2 * span * spacing_factor / gamma)) + 1
    return broaden(lines, np.linspace(-span, span, points), gamma)


# --- closed form: derivation cross-check before use as an oracle ---------------


def test_closed_form_against_brute_force_quadrature():
    # contour result w/(w0 - i gamma - zeta) checked against raw quadrature
    # at 10 random zeta before the closed form is trusted anywhere else
    rng = np.random.default_rng(10)
    gamma = 0.02
    lines = random_lines(rng)
    for _ in range(10):
        zeta = complex(rng.uniform(-2.5, 2.5), 10.0 ** rng.uniform(-1.5, 0.5))
        want = brute_force_alpha(lines, gamma, zeta)
        got = closed_form_lorentzian(lines, gamma, zeta)
        assert abs(got - want) / abs(want) <= 1e-5


def test_closed_form_empty_lines():
    empty = LineSpectrum(np.empty(0), np.empty(0))
    assert closed_form_lorentzian(empty, 0.01, 1.0 + 1.0j) == 0.0


def test_closed_form_delta_limit():
    # gamma -> 0 with Im zeta fixed: each line tends to weight/(w_line - zeta)
    lines = LineSpectrum(np.array([0.8]), np.array([0.5]))
    zeta = 0.3 + 1.0j
    got = closed_form_lorentzian(lines, 1e-6, zeta)
    want = 0.5 / (0.8 - zeta) - 0.5 / (-0.8 - zeta)
    assert abs(got - want) / abs(want) <= 1e-5


def test_closed_form_rejects_lower_half_plane():
    lines = LineSpectrum(np.array([1.0]), np.array([1.0]))
    with pytest.raises(ValueError):
        closed_form_lorentzian(lines, 0.01, 1.0 - 0.1j)


# --- dispersion quadrature ------------------------------------------------------


def test_dispersion_zero_for_symmetric_populations():
    pair = two_level_pair(0.5, points=9601)
    for zeta in (1.0 + 0.05j, 0.2 + 0.5j, 2.0j):
        alpha = polarizability_dispersion(pair, zeta)
        assert abs(alpha) <= 1e-13


def test_dispersion_far_field_bound():
    lines = LineSpectrum(np.array([1.0]), np.array([0.4]))
    pair = dense_pair(lines, 0.01, span=30.0)
    lam = 1e6
    alpha = polarizability_dispersion(pair, 1j * lam)
    assert abs(alpha) <= lines.weight.sum() / lam * (1.0 + 1e-6)


def test_dispersion_matches_closed_form_ground_state():
    gamma = 0.01
    lines = line_spectrum(two_level(0.0))
    pair = dense_pair(lines, gamma)
    zeta = 1.0 + 0.01j
    got = polarizability_dispersion(pair, zeta)
    want = closed_form_lorentzian(lines, gamma, zeta)
    assert abs(got - want) / abs(want) <= 1e-6


def test_dispersion_oracle_equivalence_property():
    # acceptance-grade sweep lives in test_acceptance; this is the smoke version
    rng = np.random.default_rng(11)
    worst = 0.0
    for _ in range(25):
        gamma = 10.0 ** rng.uniform(-2.3, -1.3)
        lines = random_lines(rng)
        pair = dense_pair(lines, gamma, span=60.0)
        zeta = complex(rng.uniform(-2.5, 2.5), 10.0 ** rng.uniform(np.log10(gamma / 2.0), 0.5))
        got = polarizability_dispersion(pair, zeta)
        want = closed_form_lorentzian(lines, gamma, zeta)
        worst = max(worst, abs(got - want) / abs(want))
    assert worst <= 1e-6


def test_dispersion_rejects_real_axis():
    pair = two_level_pair(0.0)
    with pytest.raises(ValueError):
        polarizability_dispersion(pair, 1.0 + 0.0j)
    with pytest.raises(ValueError):
        polarizability_dispersion(pair, 1.0 - 0.2j)


def test_dispersion_rejects_coarse_grid():
    pair = two_level_pair(0.0, points=241)  # spacing 0.025 over [-3, 3]
    with pytest.raises(ValueError, match="too coarse"):
        polarizability_dispersion(pair, 1.0 + 0.001j)


def test_dispersion_linearity_in_line_sets():
    gamma = 0.01
    a = LineSpectrum(np.array([0.8]), np.array([0.5]))
    b = LineSpectrum(np.array([1.6]), np.array([0.25]))
    union = LineSpectrum(np.array([0.8, 1.6]), np.array([0.5, 0.25]))
    grid = np.linspace(-40.0, 40.0, 64001)
    zeta = 1.1 + 0.02j
    total = polarizability_dispersion(broaden(union, grid, gamma), zeta)
    parts = polarizability_dispersion(broaden(a, grid, gamma), zeta)
    parts += polarizability_dispersion(broaden(b, grid, gamma), zeta)
    assert abs(total - parts) <= 1e-13 * abs(total)


# --- boundary values -------------------------------------------------------------


def test_im_alpha_peak_values():
    gamma = 0.01
    d_sq = 1.0
    peak = d_sq / (3.0 * gamma)
    ground = two_level_pair(0.0, gamma=gamma, d_sq=d_sq)
    inverted = two_level_pair(1.0, gamma=gamma, d_sq=d_sq)
    # mirror-line tail shifts the peak at the 1e-4 relative level
    assert np.isclose(im_alpha(ground, 1.0), peak, rtol=1e-4)
    assert np.isclose(im_alpha(inverted, 1.0), -peak, rtol=1e-4)


def test_im_alpha_cancellation_equal_populations():
    # oracle: the two Lorentzian tails evaluated explicitly
    gamma = 0.01
    pair = two_level_pair(0.5, gamma=gamma)
    w = 1.0 / 6.0
    explicit = np.pi * w * (
        (gamma / np.pi) / ((1.0 - 1.0) ** 2 + gamma**2)
        + (gamma / np.pi) / ((1.0 + 1.0) ** 2 + gamma**2)
        - (gamma / np.pi) / ((1.0 + 1.0) ** 2 + gamma**2)
        - (gamma / np.pi) / ((1.0 - 1.0) ** 2 + gamma**2)
    )
    assert abs(explicit) <= 1e-12
    scale = np.pi * pair.s_plus_at(1.0)
    assert abs(im_alpha(pair, 1.0)) <= 1e-12 * scale


def test_sign_rule_two_level():
    for p_e, sign in ((0.0, 1.0), (0.2, 1.0), (0.8, -1.0), (1.0, -1.0)):
        pair = two_level_pair(p_e)
        assert np.sign(im_alpha(pair, 1.0)) == sign


# --- curves ----------------------------------------------------------------------


def test_curve_crossing_symmetry():
    for eta in (0.0, 1e-3):
        pair = two_level_pair(0.3)
        curve = polarizability_curve(pair, eta=eta)
        gap = np.abs(curve.alpha[::-1] - np.conj(curve.alpha)).max()
        assert gap <= 1e-10 * np.abs(curve.alpha).max()


def test_curve_tail_decay():
    pair = two_level_pair(0.0, span=8.0, points=16001)
    curve = polarizability_curve(pair)
    im = np.abs(curve.alpha.imag)
    assert im[0] < 1e-3 * im.max()
    assert im[-1] < 1e-3 * im.max()


def test_curve_dispersion_provenance_matches_closed_form():
    # wide support: the quadrature truncates at the pair grid, so the grid
    # must carry the 1/omega^3 tails of the dissipative density
    pair = dense_pair(line_spectrum(two_level(0.0)), 0.01, span=60.0)
    grid = np.linspace(-2.0, 2.0, 9)
    eta = 0.005
    via_quad = polarizability_curve(pair, grid=grid, eta=eta, provenance="dispersion-integral")
    via_closed = polarizability_curve(pair, grid=grid, eta=eta)
    assert np.allclose(via_quad.alpha, via_closed.alpha, rtol=1e-6)
    assert via_quad.provenance == "dispersion-integral"


def test_curve_eta_validation():
    pair = two_level_pair(0.0)
    with pytest.raises(ValueError):
        polarizability_curve(pair, eta=-0.1)
    with pytest.raises(ValueError):
        polarizability_curve(pair, eta=0.0, provenance="dispersion-integral")


# --- Kramers-Kronig ---------------------------------------------------------------


def test_kramers_kronig_zero_curve():
    grid = np.linspace(-1.0, 1.0, 201)
    curve = PolarizabilityCurve(grid, np.zeros(201, complex), 0.0, "closed-form-lorentzian")
    assert kramers_kronig_residual(curve) == 0.0


def test_kramers_kronig_single_line():
    pair = two_level_pair(0.0, span=8.0, points=16385)
    assert kramers_kronig_residual(polarizability_curve(pair)) <= 1e-3


def test_kramers_kronig_inverted_line():
    # causality holds regardless of the sign of Im alpha
    pair = two_level_pair(1.0, span=8.0, points=16385)
    assert kramers_kronig_residual(polarizability_curve(pair)) <= 1e-3


def test_kramers_kronig_rejects_undecayed_edges():
    # tightest span broaden() allows: edge |Im alpha| is ~2.5e-3 of the peak
    pair = two_level_pair(0.0, span=1.2, points=2401)
    curve = polarizability_curve(pair)
    with pytest.raises(ValueError, match="edges"):
        kramers_kronig_residual(curve)


def test_kramers_kronig_rejects_large_eta():
    pair = two_level_pair(0.0, span=8.0, points=16385)
    curve = polarizability_curve(pair, eta=0.005)  # gamma/2 > gamma/10
    with pytest.raises(ValueError, match="eta"):
        kramers_kronig_residual(curve)


# --- linearity / random-target properties ------------------------------------------


def test_boundary_alpha_linearity_random_targets():
    rng = np.random.default_rng(12)
    from gainscatter import alpha_boundary

    for _ in range(20):
        target = random_target(rng, n_max=4)
        lines = line_spectrum(target)
        span = lines.max_abs_omega + 0.5
        grid = np.linspace(-span, span, 801)
        pair = broaden(lines, grid, 0.01)
        w = rng.uniform(0.1, lines.max_abs_omega)
        direct = alpha_boundary(pair, w)
        total = 0.0 + 0.0j
        for w0, wt in zip(lines.omega, lines.weight):
            single = broaden(LineSpectrum(np.array([w0]), np.array([wt])), grid, 0.01)
            total += alpha_boundary(single, w)
        assert abs(direct - total) <= 1e-12 * max(abs(direct), 1e-300)

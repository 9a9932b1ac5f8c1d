"""Scattering layer: amplitudes, cross sections, bands, spectral identities."""

import numpy as np
import pytest

from conftest import random_target, two_level_pair
from gainscatter import (
    alpha_boundary,
    amplifier_bands,
    broaden,
    cross_sections,
    differential_elastic,
    im_alpha,
    line_spectrum,
    noise_temperature,
    polarizability_curve,
    scattering_amplitude,
    sigma_elastic,
    sigma_total_optical,
    sigma_total_spectral,
)
from gainscatter.spectral import TargetLevels


def gl_solid_angle_integral(alpha, omega, order=40):
    """Oracle: Gauss-Legendre integration of the differential cross section."""
    nodes, weights = np.polynomial.legendre.leggauss(order)
    theta = 0.5 * np.pi * (nodes + 1.0)
    w = 0.5 * np.pi * weights
    return 2.0 * np.pi * np.sum(differential_elastic(alpha, omega, theta) * np.sin(theta) * w)


# --- amplitude -----------------------------------------------------------------


def test_amplitude_perpendicular_polarizations():
    e_i = np.array([1.0, 0.0, 0.0])
    e_f = np.array([0.0, 1.0, 0.0])
    assert scattering_amplitude(0.3 + 0.1j, 1.0, e_i, e_f) == 0.0


def test_amplitude_forward_real_alpha_gives_zero_sigma():
    e = np.array([1.0, 0.0, 0.0])
    f = scattering_amplitude(0.7, 1.3, e, e)
    assert f.imag == 0.0
    assert sigma_total_optical(np.array(f / 1.3**2), 1.3) == 0.0


def test_amplitude_unit_frequency():
    e = np.array([0.0, 0.0, 1.0])
    a0 = 0.45
    assert scattering_amplitude(1j * a0, 1.0, e, e) == pytest.approx(1j * a0)


def test_amplitude_rejects_non_unit_polarization():
    e = np.array([1.0, 0.0, 0.0])
    with pytest.raises(ValueError, match="unit"):
        scattering_amplitude(1.0, 1.0, 2.0 * e, e)


def test_amplitude_complex_polarization():
    # circular polarization: e* . e = 1
    e = np.array([1.0, 1.0j, 0.0]) / np.sqrt(2.0)
    f = scattering_amplitude(0.5j, 2.0, e, e)
    assert f == pytest.approx(4.0 * 0.5j)


# --- differential and elastic ----------------------------------------------------


def test_differential_angle_factor():
    full = differential_elastic(1.0 + 1.0j, 1.0, 0.0)
    half = differential_elastic(1.0 + 1.0j, 1.0, np.pi / 2.0)
    assert half == pytest.approx(full / 2.0)
    assert differential_elastic(0.0, 1.0, 0.7) == 0.0


def test_sigma_elastic_values():
    assert sigma_elastic(0.0, 1.0) == 0.0
    assert sigma_elastic(1.0 + 0.0j, 1.0) == pytest.approx(8.0 * np.pi / 3.0)
    # quadratic scaling in |alpha|
    assert sigma_elastic(2.0, 1.0) == pytest.approx(4.0 * sigma_elastic(1.0, 1.0))


def test_rayleigh_closure_example():
    alpha = 0.3 - 0.2j
    omega = 1.7
    got = gl_solid_angle_integral(alpha, omega)
    assert got == pytest.approx(sigma_elastic(alpha, omega), rel=1e-9)


def test_rayleigh_closure_property():
    rng = np.random.default_rng(20)
    for _ in range(100):
        alpha = complex(rng.normal(), rng.normal())
        omega = 10.0 ** rng.uniform(-1, 1)
        want = sigma_elastic(alpha, omega)
        if want == 0.0:
            continue
        assert abs(gl_solid_angle_integral(alpha, omega) - want) <= 1e-9 * want


# --- total cross section ----------------------------------------------------------


def test_sigma_total_optical_values():
    assert sigma_total_optical(np.array(0.7 + 0.0j), 1.0) == 0.0
    assert sigma_total_optical(np.array(1.0j), 1.0) == pytest.approx(4.0 * np.pi)


def test_sigma_total_inverted_peak():
    # composed: boundary Im alpha at line center into the optical theorem
    gamma = 0.01
    pair = two_level_pair(1.0, gamma=gamma)
    sigma = float(sigma_total_optical(alpha_boundary(pair, 1.0), 1.0))
    want = -4.0 * np.pi * 1.0 / (3.0 * gamma)
    assert sigma < 0.0
    assert sigma == pytest.approx(want, rel=1e-4)


def test_sigma_total_spectral_trivial_cases():
    pair = two_level_pair(0.5)
    assert sigma_total_spectral(pair, 1.0) == 0.0  # S+ = S-

    # one-sided S+: sigma = 4 pi^2 omega S+ (the exp factor saturates to 0)
    from gainscatter.spectral import SpectralPair

    grid = np.array([-2.0, 0.0, 2.0])
    w = 0.4
    one_sided = SpectralPair(grid, np.full(3, w), np.zeros(3), 0.01)
    got = sigma_total_spectral(one_sided, 2.0)
    assert got == pytest.approx(4.0 * np.pi**2 * 2.0 * w, rel=1e-12)
    # and the mirror case: S+ = 0 gives the negative limit
    mirrored = SpectralPair(grid, np.zeros(3), np.full(3, w), 0.01)
    assert sigma_total_spectral(mirrored, 2.0) == pytest.approx(
        -4.0 * np.pi**2 * 2.0 * w, rel=1e-12
    )


def test_sigma_total_spectral_matches_optical_ground_state():
    pair = two_level_pair(0.0)
    sig_spec = float(sigma_total_spectral(pair, 1.0))
    sig_opt = float(sigma_total_optical(alpha_boundary(pair, 1.0), 1.0))
    assert sig_spec == pytest.approx(sig_opt, rel=1e-10)


def test_sigma_total_spectral_identity_chain_property():
    rng = np.random.default_rng(21)
    for _ in range(30):
        target = random_target(rng, n_max=4)
        lines = line_spectrum(target)
        span = lines.max_abs_omega + 0.5
        pair = broaden(lines, np.linspace(-span, span, 1601), 0.01)
        omegas = rng.uniform(0.05, lines.max_abs_omega, size=16)
        sig_opt = sigma_total_optical(alpha_boundary(pair, omegas), omegas)
        sig_spec = sigma_total_spectral(pair, omegas)
        defined = sig_spec != 0.0
        assert np.allclose(sig_opt[defined], sig_spec[defined], rtol=1e-8, atol=0.0)


def test_sign_theorem_sweep():
    # sign(sigma_tot) = sign(T_n) wherever both are defined; crossings coincide
    ratios = [0.0, 0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0, np.inf]
    omegas = np.linspace(0.2, 2.0, 361)
    for r in ratios:
        p_e = 1.0 if np.isinf(r) else r / (1.0 + r)
        pair = two_level_pair(p_e)
        sigma = sigma_total_spectral(pair, omegas)
        for w, s in zip(omegas, sigma):
            tn = noise_temperature(pair, float(w))
            if tn is None or s == 0.0:
                continue
            assert np.sign(s) == np.sign(tn), f"ratio {r}, omega {w}"


def test_equal_population_null_sigma():
    pair = two_level_pair(0.5)
    omegas = np.linspace(0.2, 2.0, 181)
    sigma_tot = sigma_total_spectral(pair, omegas)
    scale = 4.0 * np.pi**2 * float(pair.s_plus_at(1.0))
    assert np.abs(sigma_tot).max() <= 1e-10 * scale


def three_level_amplifier():
    # levels {0, 0.5, 1.5}: absorbing lines at 0.5 and 1.5 flank an inverted
    # line at 1.0; the dipole matrix makes both absorbing weights equal
    return TargetLevels(
        [0.0, 0.5, 1.5],
        [[0.0, 1.0, 1.6], [1.0, 0.0, 1.0], [1.6, 1.0, 0.0]],
        [0.55, 0.15, 0.30],
    )


def test_sigma_in_negative_at_inversion_crossing():
    # between an inverted and a normal line Im alpha crosses zero while
    # Re alpha does not, so sigma_in = -sigma_el < 0 there
    lines = line_spectrum(three_level_amplifier())
    pair = broaden(lines, np.linspace(-2.5, 2.5, 8001), 0.01)
    curve = polarizability_curve(pair)
    (_, hi), = amplifier_bands(curve)  # upper band edge = the sign crossing
    alpha = alpha_boundary(pair, hi)
    sig_el = float(sigma_elastic(alpha, hi))
    sig_tot = float(sigma_total_optical(alpha, hi))
    assert sig_el > 0.0
    assert abs(sig_tot) <= 1e-4 * sig_el  # crossing: total ~ 0
    assert sig_tot - sig_el < 0.0


# --- bands and cross-section sets ---------------------------------------------------


def test_amplifier_bands_ground_state_empty():
    curve = polarizability_curve(two_level_pair(0.0))
    assert amplifier_bands(curve) == []


def test_amplifier_bands_inverted_contains_line():
    curve = polarizability_curve(two_level_pair(1.0))
    bands = amplifier_bands(curve)
    assert len(bands) == 1
    lo, hi = bands[0]
    assert lo < 1.0 < hi


def test_amplifier_bands_three_level_single_band():
    # one inverted pair flanked by two normal pairs, all lines 50 gamma apart
    gamma = 0.01
    lines = line_spectrum(three_level_amplifier())
    grid = np.linspace(-2.5, 2.5, 8001)
    pair = broaden(lines, grid, gamma)
    curve = polarizability_curve(pair)
    bands = amplifier_bands(curve)
    assert len(bands) == 1
    lo, hi = bands[0]
    # oracle: dense scan of the sign of Im alpha
    fine = np.linspace(0.6, 1.4, 400001)
    signs = im_alpha(pair, fine) < 0.0
    scan_lo = fine[np.argmax(signs)]
    scan_hi = fine[len(signs) - 1 - np.argmax(signs[::-1])]
    assert lo == pytest.approx(scan_lo, abs=1e-5)
    assert hi == pytest.approx(scan_hi, abs=1e-5)
    assert 0.5 * (lo + hi) == pytest.approx(1.0, abs=gamma / 10.0)


def test_band_edges_refined_to_tolerance():
    curve = polarizability_curve(two_level_pair(1.0))
    (lo, hi), = amplifier_bands(curve)
    # refined edges sit where Im alpha changes sign, to 1e-6
    assert abs(float(im_alpha(curve.pair, lo))) <= abs(float(im_alpha(curve.pair, lo + 1e-4)))
    grid_step = float(curve.grid[1] - curve.grid[0])
    assert grid_step > 1e-6  # refinement actually had to bisect


def test_cross_section_set_invariants():
    curve = polarizability_curve(two_level_pair(0.9))
    xs = cross_sections(curve)
    assert np.all(xs.sigma_el >= 0.0)
    # sum rule holds exactly as stored
    assert np.array_equal(xs.sigma_in, xs.sigma_tot - xs.sigma_el)
    amplifying = xs.band_flags == "amplifying"
    absorbing = xs.band_flags == "absorbing"
    assert np.all(xs.sigma_tot[amplifying] < -xs.tol_band)
    assert np.all(xs.sigma_tot[absorbing] > xs.tol_band)
    assert np.any(amplifying)  # p_e = 0.9 inverts the line


def test_cross_section_set_positive_grid_only():
    curve = polarizability_curve(two_level_pair(0.2))
    xs = cross_sections(curve)
    assert np.all(xs.grid > 0.0)

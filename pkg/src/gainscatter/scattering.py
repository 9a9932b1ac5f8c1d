"""Dipole scattering amplitudes and cross sections.

For a polarizable point target the elastic amplitude is F = (omega/c)^2
(e_f* . e_i) alpha, giving sigma_el = (8 pi / 3) (omega/c)^4 |alpha|^2 and,
through the optical theorem, sigma_tot = (4 pi omega / c) Im alpha.  Nothing
in that chain fixes the sign of Im alpha: where the level populations are
inverted, sigma_tot is negative and the target amplifies the beam.  The
inelastic cross section is defined purely by the sum rule sigma_in =
sigma_tot - sigma_el and may be negative (stimulated-emission bookkeeping).

``sigma_total_spectral`` is the independent spectral route: sigma_tot =
4 pi^2 omega [1 - exp(-omega/T_n)] S+(omega), written through the noise
temperature.  It must agree with the optical route identically, and with
the symmetrized form 8 pi^2 omega tanh[omega/(2 T_n)] S_bar(omega) via
1 - e^-x = tanh(x/2) (1 + e^-x); both identities are asserted internally.

Internal units hbar = c = 1; cross sections come out in (c/omega_ref)^2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .response import PolarizabilityCurve, im_alpha
from .spectral import LOG_RATIO_FLOOR, NOISE_FLOOR, SpectralPair, log_ratio

__all__ = [
    "TOL_BAND",
    "scattering_amplitude",
    "differential_elastic",
    "sigma_elastic",
    "sigma_total_optical",
    "sigma_total_spectral",
    "amplifier_bands",
    "CrossSectionSet",
    "cross_sections",
]

TOL_BAND = 1e-12  # |sigma_tot| below this counts as neutral for band classification
_BISECTION_TOL = 1e-6


def scattering_amplitude(alpha: complex, omega: float, e_i, e_f) -> complex:
    """Elastic amplitude omega^2 (e_f* . e_i) alpha for unit polarizations.

    Complex (circular) polarization vectors are fine; the forward amplitude
    is obtained with e_f = e_i.
    """
    omega = float(omega)
    if omega <= 0.0:
        raise ValueError("omega must be positive")
    e_i = np.asarray(e_i, dtype=complex)
    e_f = np.asarray(e_f, dtype=complex)
    for name, e in (("e_i", e_i), ("e_f", e_f)):
        norm = np.sqrt(np.vdot(e, e).real)
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"{name} must be a unit vector (|{name}| = {norm!r})")
    return omega * omega * complex(np.vdot(e_f, e_i)) * complex(alpha)


def differential_elastic(alpha: complex, omega: float, theta):
    """Polarization-averaged dperp cross section (1/2)(1 + cos^2) omega^4 |alpha|^2."""
    theta = np.asarray(theta, dtype=float)
    if np.isscalar(omega) and omega <= 0.0:
        raise ValueError("omega must be positive")
    value = 0.5 * (1.0 + np.cos(theta) ** 2) * omega**4 * np.abs(alpha) ** 2
    return float(value) if value.ndim == 0 else value


def sigma_elastic(alpha, omega):
    """Elastic cross section (8 pi / 3) omega^4 |alpha|^2; never negative."""
    return (8.0 * np.pi / 3.0) * np.asarray(omega, dtype=float) ** 4 * np.abs(alpha) ** 2


def sigma_total_optical(alpha, omega):
    """Optical-theorem total cross section 4 pi omega Im alpha (signed)."""
    return 4.0 * np.pi * np.asarray(omega, dtype=float) * np.asarray(alpha, dtype=complex).imag


def sigma_total_spectral(pair: SpectralPair, omega):
    """Total cross section from the spectral densities via the noise temperature.

    Evaluates 4 pi^2 omega [1 - exp(-omega/T_n)] S+ with the log-ratio kept
    in log1p/expm1 form and cross-checks the tanh form against it to 1e-12
    relative.  Where one density sits below the floor the exponential
    saturates and the limit is taken (S- = 0 gives 4 pi^2 omega S+; S+ = 0
    gives -4 pi^2 omega S-); at the inversion crossover (S+ = S- within the
    log-ratio floor, T_n undefined) the result is 0.
    """
    omega_arr = np.asarray(omega, dtype=float)
    if np.any(omega_arr <= 0.0):
        raise ValueError("omega must be positive")
    s_plus = np.asarray(pair.s_plus_at(omega_arr), dtype=float)
    s_minus = np.asarray(pair.s_minus_at(omega_arr), dtype=float)
    scalar = omega_arr.ndim == 0
    omega_arr, s_plus, s_minus = np.atleast_1d(omega_arr, s_plus, s_minus)

    both = np.minimum(s_plus, s_minus) >= NOISE_FLOOR
    # x = omega / T_n = ln(S+/S-)
    x = np.asarray(log_ratio(np.where(both, s_plus, 1.0), np.where(both, s_minus, 1.0)))
    defined = both & (np.abs(x) >= LOG_RATIO_FLOOR)

    prefactor = 4.0 * np.pi**2 * omega_arr
    sigma = np.zeros_like(omega_arr)
    sigma[defined] = prefactor[defined] * -np.expm1(-x[defined]) * s_plus[defined]
    # saturated limits where one side has no spectral weight
    one_sided = ~both
    sigma[one_sided] = prefactor[one_sided] * (s_plus[one_sided] - s_minus[one_sided])

    s_bar = 0.5 * (s_plus + s_minus)
    tanh_form = np.zeros_like(sigma)
    tanh_form[defined] = (
        2.0 * prefactor[defined] * np.tanh(0.5 * x[defined]) * s_bar[defined]
    )
    # in the saturated limit tanh(x/2) -> sign(S+ - S-) and both forms
    # collapse to the same expression, so the cross-check is the generic branch
    tanh_form[one_sided] = sigma[one_sided]
    mismatch = np.abs(sigma - tanh_form) > 1e-12 * np.maximum(np.abs(sigma), np.abs(tanh_form))
    if np.any(mismatch):
        raise RuntimeError("exponential and tanh forms of sigma_tot disagree beyond 1e-12")
    return float(sigma[0]) if scalar else sigma


def amplifier_bands(curve: PolarizabilityCurve, tol_band: float = TOL_BAND):
    """Maximal positive-frequency intervals where sigma_tot < -tol_band.

    The curve should resolve the line shape (at least ~8 samples per
    gamma).  When the generating pair is available, band edges are refined
    by bisection on the sign of Im alpha to 1e-6; otherwise the sampled
    boundaries are returned as-is.
    """
    positive = curve.grid > 0.0
    grid = curve.grid[positive]
    sigma = sigma_total_optical(curve.alpha[positive], grid)
    if grid.size == 0:
        return []
    amplifying = sigma < -tol_band

    def refine(lo: float, hi: float) -> float:
        # sign change of Im alpha bracketed in (lo, hi)
        f = lambda w: float(im_alpha(curve.pair, w))
        f_lo, f_hi = f(lo), f(hi)
        if f_lo == 0.0:
            return lo
        if f_hi == 0.0:
            return hi
        if (f_lo < 0.0) == (f_hi < 0.0):
            return 0.5 * (lo + hi)  # no crossing inside: sampled edge is the best answer
        while hi - lo > _BISECTION_TOL:
            mid = 0.5 * (lo + hi)
            if (f(mid) < 0.0) == (f_lo < 0.0):
                lo = mid
            else:
                hi = mid
        return 0.5 * (lo + hi)

    bands = []
    i = 0
    n = grid.size
    while i < n:
        if not amplifying[i]:
            i += 1
            continue
        j = i
        while j + 1 < n and amplifying[j + 1]:
            j += 1
        lo = float(grid[i]) if i == 0 else float(grid[i - 1])
        hi = float(grid[j]) if j == n - 1 else float(grid[j + 1])
        if curve.pair is not None:
            if i > 0:
                lo = refine(float(grid[i - 1]), float(grid[i]))
            if j < n - 1:
                hi = refine(float(grid[j]), float(grid[j + 1]))
        bands.append((lo, hi))
        i = j + 1
    return bands


@dataclass(frozen=True)
class CrossSectionSet:
    """Elastic/total/inelastic cross sections with per-sample band flags.

    sigma_in is stored as the sum-rule difference sigma_tot - sigma_el and
    may be negative; band_flags holds "amplifying" where sigma_tot <
    -tol_band, "absorbing" where > +tol_band, "neutral" between.
    """

    grid: np.ndarray
    sigma_el: np.ndarray
    sigma_tot: np.ndarray
    sigma_in: np.ndarray
    band_flags: np.ndarray
    tol_band: float = TOL_BAND

    def __post_init__(self):
        for name in ("grid", "sigma_el", "sigma_tot", "sigma_in"):
            arr = np.array(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        flags = np.array(self.band_flags)
        flags.setflags(write=False)
        object.__setattr__(self, "band_flags", flags)
        if np.any(self.grid <= 0.0):
            raise ValueError("cross sections are tabulated for positive frequencies only")
        if np.any(self.sigma_el < 0.0):
            raise ValueError("sigma_el must be non-negative")


def cross_sections(curve: PolarizabilityCurve, tol_band: float = TOL_BAND) -> CrossSectionSet:
    """Tabulate sigma_el, sigma_tot, sigma_in over the curve's positive grid."""
    positive = curve.grid > 0.0
    grid = curve.grid[positive]
    alpha = curve.alpha[positive]
    sig_el = sigma_elastic(alpha, grid)
    sig_tot = sigma_total_optical(alpha, grid)
    sig_in = sig_tot - sig_el
    flags = np.where(
        sig_tot < -tol_band, "amplifying", np.where(sig_tot > tol_band, "absorbing", "neutral")
    )
    return CrossSectionSet(grid, sig_el, sig_tot, sig_in, flags, tol_band)

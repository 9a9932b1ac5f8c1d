"""Far-field screen intensity and the missing-intensity cross section.

Place a screen at distance z behind the target.  The field there is the
incident plane wave plus the outgoing spherical wave, so the intensity
ratio at transverse radius r is

    I/I0 = |exp(i omega z) + F exp(i omega r_d) / r_d|^2,
    r_d = z + r^2/(2 z)   (paraxial expansion of sqrt(z^2 + r^2)),

and the total cross section is the transverse integral of the intensity
deficit, sigma = integral (1 - I/I0) d^2 r.  Keeping only the interference
cross-term, the integrand oscillates as exp(i omega r^2 / 2 z) - a Fresnel
zone pattern - and the integral is only conditionally convergent.  We make
it summable with a Gaussian taper exp(-eps * omega r^2 / (2 z)), evaluate
on a geometric schedule of the dimensionless eps, and extrapolate to
eps -> 0.  For the pure interference kernel,

    integral_0^inf exp[(i - eps) a r^2 / 2] r dr = 1 / (a (eps - i)),
    a = omega / z,

so sigma_est(eps) * (1 + eps^2) is exactly linear in eps; the extrapolation
is a linear fit in that corrected variable, and its intercept reproduces
sigma = (4 pi / omega) Im F to quadrature precision - for either sign of
Im F.  Nothing in the construction cares whether the target absorbs or
amplifies: a negative Im F simply makes the screen brighter than the free
beam and sigma comes out negative.

The |F|^2/r_d^2 term (the scattered flux itself) is kept as a diagnostic
variant: after tapering it contributes O(1/(eps z)), vanishing in the
z -> infinity limit.  Its known eps-shape is added to the fit basis so the
variant also extrapolates cleanly; the convergence verdict is keyed to the
interference form, which is what the missing-intensity argument integrates.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .response import alpha_boundary
from .scattering import scattering_amplitude
from .spectral import DEFAULT_GAMMA, TargetLevels, broaden, line_spectrum

__all__ = [
    "ScreenGrid",
    "screen_intensity",
    "screen_grid",
    "missing_intensity_sigma",
    "default_eps_schedule",
    "extrapolate_missing_intensity",
    "optical_theorem_sigma",
    "verify_optical_theorem",
    "DEFAULT_Z",
    "TAPER_DECAY",
]

DEFAULT_Z = 1e4           # default screen distance, in c/omega units
PARAXIAL_RATIO = 0.1      # r_perp may not exceed z/10
FAR_FIELD_MIN = 1e3       # z must be at least this many wavelengths-over-2pi (c/omega)
TAPER_DECAY = 1e-8        # feasibility: taper must be below this at r_max
_SCHEDULE_DECAY = 1e-12   # default schedules push the truncation error to here
_PHASE_PER_PANEL = np.pi / 8.0
_GL_ORDER = 12


def _check_geometry(omega: float, z: float, r_max: float) -> None:
    if omega <= 0.0:
        raise ValueError("omega must be positive")
    if z < FAR_FIELD_MIN / omega:
        raise ValueError(
            f"far-field condition violated: z = {z:g} < {FAR_FIELD_MIN:g}*c/omega = "
            f"{FAR_FIELD_MIN / omega:g}"
        )
    if r_max > PARAXIAL_RATIO * z:
        raise ValueError(
            f"paraxial condition violated: r_max = {r_max:g} > z/10 = {PARAXIAL_RATIO * z:g}"
        )


@dataclass(frozen=True)
class ScreenGrid:
    """Sampled intensity ratio I/I0 on a screen at distance z."""

    z: float
    r_perp: np.ndarray
    intensity_ratio: np.ndarray
    forward_amplitude: complex

    def __post_init__(self):
        r = np.array(self.r_perp, dtype=float)
        ratio = np.array(self.intensity_ratio, dtype=float)
        r.setflags(write=False)
        ratio.setflags(write=False)
        object.__setattr__(self, "r_perp", r)
        object.__setattr__(self, "intensity_ratio", ratio)
        if r.size and not np.all(np.diff(r) > 0.0):
            raise ValueError("r_perp samples must be ascending")
        if r.size and r[-1] > PARAXIAL_RATIO * self.z:
            raise ValueError(
                f"paraxial condition violated: max r_perp = {r[-1]:g} > z/10 = "
                f"{PARAXIAL_RATIO * self.z:g}"
            )


def screen_intensity(f_forward: complex, omega: float, z: float, r_perp):
    """Intensity ratio I/I0 at transverse radius r_perp on the screen.

    Includes both the interference cross-term and the |F|^2 scattered term.
    """
    r = np.asarray(r_perp, dtype=float)
    r_top = float(r.max()) if r.size else 0.0
    _check_geometry(omega, z, r_top)
    r_dist = z + r * r / (2.0 * z)
    cross = 2.0 * (f_forward * np.exp(1j * omega * (r_dist - z))).real / r_dist
    ratio = 1.0 + cross + np.abs(f_forward) ** 2 / r_dist**2
    return float(ratio) if ratio.ndim == 0 else ratio


def screen_grid(f_forward: complex, omega: float, z: float, r_perp) -> ScreenGrid:
    """Build a ScreenGrid by sampling the intensity ratio."""
    ratio = screen_intensity(f_forward, omega, z, r_perp)
    return ScreenGrid(float(z), np.asarray(r_perp, dtype=float), np.atleast_1d(ratio), complex(f_forward))


def _radial_nodes(omega: float, z: float, eps: float, r_max: float):
    """Gauss-Legendre nodes/weights on panels tracking the Fresnel oscillation.

    Panels carry at most ~pi/8 of quadratic phase each; extra edges resolve
    the taper scale when the taper dies faster than the oscillation.
    """
    phase_total = omega * r_max * r_max / (2.0 * z)
    n_panels = max(int(np.ceil(phase_total / _PHASE_PER_PANEL)), 4)
    edges = r_max * np.sqrt(np.linspace(0.0, 1.0, n_panels + 1))
    r_taper = np.sqrt(2.0 * z / (eps * omega))  # taper e-folding radius
    if r_taper < r_max:
        extra = np.arange(0.0, min(8.0 * r_taper, r_max), 0.5 * r_taper)
        edges = np.unique(np.concatenate((edges, extra)))
    nodes, weights = np.polynomial.legendre.leggauss(_GL_ORDER)
    a, b = edges[:-1], edges[1:]
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    x = (mid[:, None] + half[:, None] * nodes).ravel()
    w = (half[:, None] * weights).ravel()
    return x, w


def missing_intensity_sigma(
    f_forward: complex,
    omega: float,
    z: float,
    taper_eps: float,
    r_max: float,
    include_scattered_term: bool = False,
) -> float:
    """Tapered missing-intensity integral 2 pi int (1 - I/I0) taper r dr.

    ``taper_eps`` is dimensionless: the taper is exp(-eps omega r^2/(2 z)),
    i.e. eps in units of the local Fresnel phase.  Feasibility is enforced
    jointly: r_max <= z/10, z in the far field, and the taper must have
    decayed below TAPER_DECAY at r_max (otherwise the truncated oscillatory
    tail pollutes the estimate).  By default only the interference form of
    the deficit is integrated; ``include_scattered_term`` adds |F|^2/r_d^2
    and switches the interference denominator to the true distance r_d.
    """
    _check_geometry(omega, z, r_max)
    if taper_eps <= 0.0:
        raise ValueError("taper_eps must be positive")
    phase_max = omega * r_max * r_max / (2.0 * z)
    taper_at_edge = np.exp(-taper_eps * phase_max)
    if taper_at_edge > TAPER_DECAY:
        eps_min = np.log(1.0 / TAPER_DECAY) / phase_max
        raise ValueError(
            f"taper has not decayed at r_max: exp(-eps*omega*r_max^2/(2 z)) = "
            f"{taper_at_edge:.3e} > {TAPER_DECAY:g}; need taper_eps >= {eps_min:.6g} "
            f"(got {taper_eps:g})"
        )
    a = omega / z
    r, w = _radial_nodes(omega, z, taper_eps, r_max)
    phase = 0.5 * a * r * r
    taper = np.exp(-taper_eps * phase)
    osc = (f_forward * np.exp(1j * phase)).real
    if include_scattered_term:
        r_dist = z + r * r / (2.0 * z)
        deficit = -2.0 * osc / r_dist - np.abs(f_forward) ** 2 / r_dist**2
    else:
        deficit = -2.0 * osc / z
    return float(2.0 * np.pi * np.sum(deficit * taper * r * w))


def default_eps_schedule(
    omega: float,
    z: float,
    r_max: float,
    steps: int = 6,
    ratio: float = 0.5,
) -> np.ndarray:
    """Geometric taper schedule, descending, all members feasible.

    The smallest member pushes the edge taper down to ~1e-12 so truncation
    noise stays far below the extrapolation tolerance.
    """
    phase_max = omega * r_max * r_max / (2.0 * z)
    eps_min = np.log(1.0 / _SCHEDULE_DECAY) / phase_max
    return eps_min / ratio ** np.arange(steps - 1, -1, -1)


def extrapolate_missing_intensity(
    f_forward: complex,
    omega: float,
    z: float,
    eps_schedule,
    r_max: float,
    include_scattered_term: bool = False,
):
    """Estimates over the schedule plus their eps -> 0 extrapolation.

    The fit is linear in sigma(eps) (1 + eps^2), exact for the interference
    kernel; the scattered-term variant adds the (1 + eps^2)/eps basis
    matching that term's known taper integral.
    """
    eps_schedule = np.asarray(eps_schedule, dtype=float)
    if eps_schedule.size < (3 if include_scattered_term else 2):
        raise ValueError("eps schedule too short to extrapolate")
    estimates = np.array(
        [
            missing_intensity_sigma(f_forward, omega, z, eps, r_max, include_scattered_term)
            for eps in eps_schedule
        ]
    )
    corrected = estimates * (1.0 + eps_schedule**2)
    columns = [np.ones_like(eps_schedule), eps_schedule]
    if include_scattered_term:
        columns.append((1.0 + eps_schedule**2) / eps_schedule)
    design = np.column_stack(columns)
    coeffs, *_ = np.linalg.lstsq(design, corrected, rcond=None)
    return estimates, float(coeffs[0])


def optical_theorem_sigma(f_forward: complex, omega: float) -> float:
    """Closed-form optical theorem sigma_tot = (4 pi / omega) Im F (signed)."""
    if omega <= 0.0:
        raise ValueError("omega must be positive")
    return 4.0 * np.pi * complex(f_forward).imag / omega


def verify_optical_theorem(
    target: TargetLevels,
    omega: float,
    z: float = DEFAULT_Z,
    eps_schedule=None,
    gamma: float = DEFAULT_GAMMA,
    r_max: float | None = None,
) -> dict:
    """Full pipeline check: screen integral versus closed-form optical theorem.

    Builds the target's response, forms the forward amplitude at ``omega``,
    runs the tapered screen integral over the eps schedule (both with and
    without the scattered |F|^2 term) and extrapolates.  ``converged`` is
    true when the interference-form extrapolation matches (4 pi/omega) Im F
    within 1e-3 relative, or within 1e-9 of the amplitude scale when sigma
    is essentially zero.
    """
    if r_max is None:
        r_max = PARAXIAL_RATIO * z
    _check_geometry(omega, z, r_max)
    lines = line_spectrum(target)
    span = max(lines.max_abs_omega, abs(omega)) + 25.0 * gamma
    grid = np.linspace(-span, span, int(np.ceil(8.0 * span / gamma)) + 1)
    pair = broaden(lines, grid, gamma)
    if not (pair.grid[0] <= omega <= pair.grid[-1]):
        raise ValueError("omega lies outside the sampled response grid")
    alpha = complex(alpha_boundary(pair, omega))
    e = np.array([1.0, 0.0, 0.0])
    f_forward = scattering_amplitude(alpha, omega, e, e)
    if eps_schedule is None:
        eps_schedule = default_eps_schedule(omega, z, r_max)
    eps_schedule = np.asarray(eps_schedule, dtype=float)

    sigma_closed = optical_theorem_sigma(f_forward, omega)
    estimates, extrapolated = extrapolate_missing_intensity(
        f_forward, omega, z, eps_schedule, r_max, include_scattered_term=False
    )
    estimates_full, extrapolated_full = extrapolate_missing_intensity(
        f_forward, omega, z, eps_schedule, r_max, include_scattered_term=True
    )
    scale = 4.0 * np.pi * abs(f_forward) / omega
    gap = abs(extrapolated - sigma_closed)
    converged = bool(gap <= max(1e-3 * abs(sigma_closed), 1e-9 * scale))
    return {
        "omega": float(omega),
        "z": float(z),
        "r_max": float(r_max),
        "forward_amplitude": [f_forward.real, f_forward.imag],
        "sigma_closed_form": sigma_closed,
        "eps_schedule": [float(e_) for e_ in eps_schedule],
        "sigma_estimates": [float(s) for s in estimates],
        "sigma_extrapolated": float(extrapolated),
        "sigma_estimates_full": [float(s) for s in estimates_full],
        "sigma_extrapolated_full": float(extrapolated_full),
        "converged": converged,
    }

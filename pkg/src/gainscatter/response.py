"""Complex polarizability from the spectral densities.

The retarded polarizability is the dispersion integral

    alpha(zeta) = integral [S+(w) - S-(w)] / (w - zeta) dw,   Im zeta > 0,

analytic in the upper half plane.  For Lorentzian-broadened lines the
integral has a closed form (each line contributes w / (w_line - i*gamma -
zeta), minus the reflected partner), derived by closing the contour in the
lower half plane around the pole at w_line - i*gamma.  The broadening width
itself supplies the retarded regularization, so the physical boundary value
alpha(w + i0+) is finite and is evaluated analytically at real frequency;
on that boundary Im alpha(w) = pi * [S+(w) - S-(w)] exactly, which is what
the cross-section module consumes.  Im alpha < 0 (an amplifier band) is a
perfectly good outcome.

``polarizability_dispersion`` is the quadrature route, kept independent of
the closed form so the two can cross-check each other.  It uses fixed
Gauss-Legendre panels on geometric ladders around every line and around
Re zeta, with the pole subtracted analytically when Re zeta lies inside the
integration range; node placement never depends on the line weights, so the
quadrature is exactly linear in the spectrum.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .spectral import LineSpectrum, SpectralPair

__all__ = [
    "PolarizabilityCurve",
    "polarizability_dispersion",
    "closed_form_lorentzian",
    "alpha_boundary",
    "im_alpha",
    "polarizability_curve",
    "kramers_kronig_residual",
]

_GL_ORDER = 24
EDGE_DECAY_FRACTION = 1e-3  # |Im alpha| at the grid edges must be below this times the peak


def _alpha_line_sum(line_omega: np.ndarray, line_weight: np.ndarray, gamma: float, zeta):
    """Analytic alpha(zeta) for Lorentzian-broadened lines; valid for Im zeta >= 0."""
    zeta_arr = np.asarray(zeta, dtype=complex)
    if line_omega.size == 0:
        out = np.zeros_like(zeta_arr)
    else:
        z = zeta_arr[..., None]
        out = (
            line_weight / (line_omega - 1j * gamma - z)
            - line_weight / (-line_omega - 1j * gamma - z)
        ).sum(axis=-1)
    if np.isscalar(zeta) or zeta_arr.ndim == 0:
        return complex(out)
    return out


def closed_form_lorentzian(lines: LineSpectrum, gamma: float, zeta):
    """Closed-form polarizability of a broadened line set (test oracle).

    Each line adds weight/(w_line - i*gamma - zeta) minus the same term for
    the reflected line; see the module docstring for the contour derivation.
    Requires Im zeta > 0 like the dispersion route it checks.
    """
    if gamma <= 0.0:
        raise ValueError("gamma must be positive")
    zeta_arr = np.asarray(zeta, dtype=complex)
    if np.any(zeta_arr.imag <= 0.0):
        raise ValueError("Im zeta must be positive (retarded response only)")
    return _alpha_line_sum(lines.omega, lines.weight, gamma, zeta)


def alpha_boundary(pair: SpectralPair, omega):
    """The physical boundary value alpha(omega + i0+) on the real axis.

    Evaluated analytically from the broadened line model; the Lorentzian
    width acts as the retarded regulator, so no explicit offset is needed.
    Satisfies Im alpha = pi * (S+ - S-) identically.
    """
    if pair.lines is None:
        raise ValueError("boundary evaluation needs a line-backed spectral pair")
    return _alpha_line_sum(pair.lines.omega, pair.lines.weight, pair.gamma, np.asarray(omega, dtype=float) + 0.0j)


def im_alpha(pair: SpectralPair, omega):
    """Im alpha(omega + i0+) = pi * [S+(omega) - S-(omega)].

    Negative values mark amplifier bands; no clipping is applied.
    """
    return np.pi * pair.difference_at(omega)


@lru_cache(maxsize=None)
def _gl_nodes(order: int):
    nodes, weights = np.polynomial.legendre.leggauss(order)
    return nodes, weights


def _panel_edges(lo: float, hi: float, centers, scales) -> np.ndarray:
    """Panel edges: geometric ladders (step doubling) around each feature."""
    edges = [lo, hi]
    for c, s in zip(centers, scales):
        if not (lo < c < hi):
            continue
        edges.append(c)
        step = 0.5 * s
        while True:
            left, right = c - step, c + step
            if left > lo:
                edges.append(left)
            if right < hi:
                edges.append(right)
            if left <= lo and right >= hi:
                break
            step *= 2.0
    edges = np.unique(np.asarray(edges, dtype=float))
    # Drop near-coincident edges (ladders from nearby features can collide).
    keep = np.concatenate(([True], np.diff(edges) > 1e-12 * (hi - lo)))
    keep[-1] = True
    return edges[keep]


def _panel_quadrature(func, edges: np.ndarray) -> complex:
    nodes, weights = _gl_nodes(_GL_ORDER)
    a, b = edges[:-1], edges[1:]
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    x = (mid[:, None] + half[:, None] * nodes).ravel()
    w = (half[:, None] * weights).ravel()
    return complex(np.sum(func(x) * w))


def polarizability_dispersion(pair: SpectralPair, zeta) -> complex:
    """Quadrature evaluation of the dispersion integral over the pair's grid.

    Requires Im zeta > 0.  When Re zeta lies inside the grid the integrand's
    near-pole part is subtracted analytically (the constant D(Re zeta) over
    a symmetric window integrates to a logarithm), so accuracy is uniform
    down to vanishing Im zeta.  The stored grid must resolve the integrand
    near Re zeta: local spacing above max(gamma, Im zeta)/4 is rejected.
    """
    zeta = complex(zeta)
    eta = zeta.imag
    if eta <= 0.0:
        raise ValueError("Im zeta must be positive (retarded response only)")
    if pair.lines is None:
        raise ValueError("dispersion quadrature needs a line-backed spectral pair")
    grid = pair.grid
    lo, hi = float(grid[0]), float(grid[-1])
    lines = pair.lines
    gamma = pair.gamma
    if lines.n_lines:
        m = lines.max_abs_omega
        if lo > -m or hi < m:
            raise ValueError(
                f"pair grid [{lo:g}, {hi:g}] does not cover the spectral support +-{m:g}"
            )
    x0 = zeta.real
    if lo < x0 < hi:
        i = int(np.searchsorted(grid, x0))
        i = min(max(i, 1), grid.size - 1)
        local_spacing = float(grid[i] - grid[i - 1])
        allowed = max(gamma, eta) / 4.0
        if local_spacing > allowed * (1.0 + 1e-9):
            raise ValueError(
                f"pair grid too coarse near Re zeta = {x0:g}: spacing {local_spacing:g} "
                f"exceeds max(gamma, Im zeta)/4 = {allowed:g}; refine the grid there"
            )

    centers = list(np.concatenate((lines.omega, -lines.omega)))
    scales = [gamma] * len(centers)
    subtract = lo < x0 < hi
    window = 0.0
    d0 = 0.0
    if subtract:
        centers.append(x0)
        scales.append(max(gamma, eta))
        window = min(hi - x0, x0 - lo)
        d0 = float(pair.difference_at(x0))

    edges = [lo, hi]
    if subtract:
        edges += [x0 - window, x0 + window]  # the subtracted window's jump points
    edges = _panel_edges(lo, hi, centers, scales) if not edges else np.unique(
        np.concatenate((_panel_edges(lo, hi, centers, scales), np.asarray(edges)))
    )

    def integrand(w):
        value = pair.difference_at(w) / (w - zeta)
        if subtract and d0 != 0.0:
            inside = np.abs(w - x0) <= window
            value = value - d0 * inside / (w - zeta)
        return value

    total = _panel_quadrature(integrand, edges)
    if subtract and d0 != 0.0:
        # integral of 1/(w - zeta) over [x0 - W, x0 + W]
        total += d0 * np.log((window - 1j * eta) / (-window - 1j * eta))
    return total


@dataclass(frozen=True)
class PolarizabilityCurve:
    """Complex polarizability sampled on a real frequency grid.

    ``eta`` is the imaginary offset of the sample points zeta = omega +
    i*eta.  eta = 0 denotes the physical boundary value, evaluated
    analytically with the Lorentzian width as regulator (production
    default); eta > 0 curves are used where a genuine upper-half-plane
    offset is wanted (dispersion-quadrature checks, Kramers-Kronig tests).
    """

    grid: np.ndarray
    alpha: np.ndarray
    eta: float
    provenance: str
    pair: SpectralPair | None = None

    def __post_init__(self):
        grid = np.array(self.grid, dtype=float)
        alpha = np.array(self.alpha, dtype=complex)
        grid.setflags(write=False)
        alpha.setflags(write=False)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "eta", float(self.eta))
        if grid.ndim != 1 or grid.size < 2 or not np.all(np.diff(grid) > 0.0):
            raise ValueError("curve grid must be strictly ascending")
        if alpha.shape != grid.shape:
            raise ValueError("alpha samples must match the grid")
        if self.eta < 0.0:
            raise ValueError("eta must be non-negative")
        if self.provenance not in ("dispersion-integral", "closed-form-lorentzian"):
            raise ValueError(f"unknown provenance {self.provenance!r}")


def polarizability_curve(
    pair: SpectralPair,
    grid=None,
    eta: float = 0.0,
    provenance: str = "closed-form-lorentzian",
) -> PolarizabilityCurve:
    """Sample alpha(omega + i*eta) on a grid (defaults to the pair's grid).

    With the default eta = 0 the boundary value is evaluated analytically.
    The dispersion-integral provenance runs the quadrature per sample and
    requires eta > 0.
    """
    grid = pair.grid if grid is None else np.asarray(grid, dtype=float)
    if provenance == "closed-form-lorentzian":
        if pair.lines is None:
            raise ValueError("closed-form curve needs a line-backed spectral pair")
        alpha = _alpha_line_sum(pair.lines.omega, pair.lines.weight, pair.gamma, grid + 1j * eta)
    elif provenance == "dispersion-integral":
        if eta <= 0.0:
            raise ValueError("dispersion-integral curves need eta > 0")
        alpha = np.array([polarizability_dispersion(pair, w + 1j * eta) for w in grid])
    else:
        raise ValueError(f"unknown provenance {provenance!r}")
    return PolarizabilityCurve(grid, alpha, eta, provenance, pair)


def _pv_reconstruct(grid: np.ndarray, f: np.ndarray, eval_idx: np.ndarray) -> np.ndarray:
    """Re alpha from Im alpha by the principal-value Hilbert transform.

    Odd reflection about the singular point: over the symmetric window the
    integrand becomes [f(w+u) - f(w-u)]/u, smooth at u = 0 with limit
    2 f'(w); the leftover one-sided stretch is an ordinary trapezoid.
    Richardson (h, 2h) extrapolation removes the leading h^2 error.
    """
    n = grid.size
    h = float(grid[1] - grid[0])

    def transform(k: int, stride: int, m: int) -> float:
        j = np.arange(stride, m + 1, stride)
        diffs = f[k + j] - f[k - j]
        terms = diffs / (j // stride).astype(float)
        # trapezoid in u with g(0) from a 4th-order derivative stencil
        hs = h * stride
        g0 = (-f[k + 2 * stride] + 8 * f[k + stride] - 8 * f[k - stride] + f[k - 2 * stride]) / (6.0 * hs)
        sym = hs * 0.5 * g0 + terms[:-1].sum() + 0.5 * terms[-1]
        # remainders beyond the symmetric window, anchored at the window
        # ends so both resolutions integrate the same intervals
        rem = 0.0
        if k - m > 0:
            idx = np.arange(k - m, -1, -stride)[::-1]
            if idx[0] != 0:
                idx = np.concatenate(([0], idx))
            rem += float(np.trapezoid(f[idx] / (grid[idx] - grid[k]), grid[idx]))
        if k + m < n - 1:
            idx = np.arange(k + m, n, stride)
            if idx[-1] != n - 1:
                idx = np.append(idx, n - 1)
            rem += float(np.trapezoid(f[idx] / (grid[idx] - grid[k]), grid[idx]))
        return sym + rem

    out = np.empty(eval_idx.size)
    for a, k in enumerate(eval_idx):
        k = int(k)
        m = min(k, n - 1 - k)
        m -= m % 4  # common window for the h and 2h passes
        if m < 8:
            out[a] = transform(k, 1, max(m, 2)) if m >= 2 else 0.0
            continue
        fine = transform(k, 1, m)
        coarse = transform(k, 2, m)
        out[a] = (4.0 * fine - coarse) / 3.0
    return out / np.pi


def kramers_kronig_residual(curve: PolarizabilityCurve, max_eval_points: int = 1024) -> float:
    """How well the stored Re alpha matches the Hilbert transform of Im alpha.

    Returns the maximum deviation over the central 80% of the grid, relative
    to the peak |Re alpha| there (pointwise ratios are meaningless where
    Re alpha crosses zero).  Requires a near-uniform grid whose edges have
    |Im alpha| below ``EDGE_DECAY_FRACTION`` of its peak, and a curve offset
    eta at most gamma/10 when the generating pair is known.
    """
    grid = curve.grid
    spacing = np.diff(grid)
    if not np.allclose(spacing, spacing[0], rtol=1e-9, atol=0.0):
        raise ValueError("Kramers-Kronig check needs a uniform grid")
    if curve.pair is not None and curve.eta > curve.pair.gamma / 10.0 + 1e-15:
        raise ValueError("curve offset eta must be at most gamma/10 for this check")
    im = curve.alpha.imag
    peak = float(np.abs(im).max())
    if peak > 0.0:
        edge = max(abs(im[0]), abs(im[-1]))
        if edge > EDGE_DECAY_FRACTION * peak:
            raise ValueError(
                f"Im alpha has not decayed at the grid edges ({edge:g} vs peak {peak:g}); "
                "widen the grid"
            )
    n = grid.size
    k_lo, k_hi = int(0.1 * n), int(0.9 * n)
    eval_idx = np.arange(k_lo, k_hi)
    if eval_idx.size > max_eval_points:
        stride = int(np.ceil(eval_idx.size / max_eval_points))
        eval_idx = eval_idx[::stride]
    reconstructed = _pv_reconstruct(grid, im, eval_idx)
    re = curve.alpha.real[eval_idx]
    scale = float(np.abs(curve.alpha.real[k_lo:k_hi]).max())
    if scale == 0.0:
        return float(np.abs(reconstructed).max()) if reconstructed.size else 0.0
    return float(np.abs(reconstructed - re).max() / scale)

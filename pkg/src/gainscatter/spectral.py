"""Quantum dipole targets and their spectral functions.

A target is a set of energy levels with squared dipole matrix elements and
initial-state occupation probabilities.  From these we build the emission /
absorption spectral densities S+(omega) and S-(omega): population-weighted
sums of delta lines at the signed transition frequencies, optionally
broadened into Lorentzians for grid work.  Detailed balance and the
frequency-dependent noise temperature T_n(omega) both live here; an inverted
pair of levels shows up as T_n < 0 at its transition frequency.

Internal units: hbar = c = k_B = 1.  Energies and frequencies are measured
in a common reference frequency, squared dipole moments in a reference
dipole squared, so spectral densities carry (dipole^2 / frequency).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

__all__ = [
    "TargetLevels",
    "LineSpectrum",
    "SpectralPair",
    "thermal_populations",
    "line_spectrum",
    "broaden",
    "lorentzian",
    "detailed_balance_residual",
    "noise_temperature",
    "noise_temperature_samples",
    "symmetric_spectrum",
    "log_ratio",
    "DEFAULT_GAMMA",
    "NOISE_FLOOR",
    "LOG_RATIO_FLOOR",
    "BROADEN_MARGIN",
]

DEFAULT_GAMMA = 1e-2      # default Lorentzian half-width
NOISE_FLOOR = 1e-300      # spectral value below this -> noise temperature undefined
LOG_RATIO_FLOOR = 1e-12   # |ln(S+/S-)| below this -> inversion crossover, undefined
BROADEN_MARGIN = 20.0     # grid must span the line set by this many gamma

POPULATION_SUM_TOL = 1e-12


def _frozen(a, dtype=float) -> np.ndarray:
    out = np.array(a, dtype=dtype)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class TargetLevels:
    """Energy levels, squared dipole matrix elements and populations.

    ``energies`` must be strictly ascending (degenerate levels are rejected:
    they would produce coincident zero-frequency lines).  ``dipole_sq`` is a
    symmetric non-negative matrix; its diagonal is ignored everywhere (no
    permanent dipole moments).  ``populations`` are the initial-state
    probabilities and must sum to one.
    """

    energies: np.ndarray
    dipole_sq: np.ndarray
    populations: np.ndarray

    def __post_init__(self):
        energies = _frozen(self.energies)
        dipole_sq = _frozen(self.dipole_sq)
        populations = _frozen(self.populations)
        object.__setattr__(self, "energies", energies)
        object.__setattr__(self, "dipole_sq", dipole_sq)
        object.__setattr__(self, "populations", populations)

        n = energies.size
        if n == 0:
            raise ValueError("target needs at least one level")
        if energies.ndim != 1:
            raise ValueError("energies must be a flat list")
        if n > 1 and not np.all(np.diff(energies) > 0.0):
            raise ValueError(
                "energies must be strictly ascending; degenerate levels are not supported"
            )
        if dipole_sq.shape != (n, n):
            raise ValueError(f"dipole_sq must be {n}x{n} to match the level count")
        if not np.array_equal(dipole_sq, dipole_sq.T):
            raise ValueError("dipole_sq must be symmetric")
        if np.any(dipole_sq < 0.0):
            raise ValueError("dipole_sq entries must be non-negative")
        if populations.shape != (n,):
            raise ValueError("populations must have one entry per level")
        if np.any(populations < 0.0):
            raise ValueError("populations must be non-negative")
        total = float(populations.sum())
        if abs(total - 1.0) > POPULATION_SUM_TOL:
            raise ValueError(
                f"populations must sum to 1 within {POPULATION_SUM_TOL:g} (got {total!r})"
            )

    @property
    def n_levels(self) -> int:
        return self.energies.size

    @classmethod
    def from_temperature(cls, energies, dipole_sq, temperature: float) -> "TargetLevels":
        """Build a target with Boltzmann populations at ``temperature``."""
        return cls(energies, dipole_sq, thermal_populations(energies, temperature))


def thermal_populations(energies, temperature: float) -> np.ndarray:
    """Boltzmann occupation probabilities, exp(-E/T) normalized to sum one.

    Negative temperatures are accepted and produce inverted populations, the
    standard device for describing pumped (amplifying) ensembles.  T = 0 is
    rejected; assign populations explicitly for that degenerate limit.
    """
    energies = np.asarray(energies, dtype=float)
    if energies.size == 0:
        raise ValueError("target needs at least one level")
    temperature = float(temperature)
    if temperature == 0.0:
        raise ValueError("temperature 0 is degenerate; pass explicit populations instead")
    # Shift by the dominant (extremal) energy so every exponent is <= 0.
    shift = energies.min() if temperature > 0.0 else energies.max()
    weights = np.exp(-(energies - shift) / temperature)
    return weights / weights.sum()


@dataclass(frozen=True)
class LineSpectrum:
    """The exact (unbroadened) S+ line set: one entry per ordered level pair.

    ``omega`` holds the signed transition frequencies E_final - E_initial and
    ``weight`` the corresponding population-weighted dipole strengths
    p_initial * |<F|p|I>|^2 / 3.  The S- line set is never stored: it equals
    this set reflected through omega = 0 with the same weights.
    """

    omega: np.ndarray
    weight: np.ndarray

    def __post_init__(self):
        omega = _frozen(self.omega)
        weight = _frozen(self.weight)
        object.__setattr__(self, "omega", omega)
        object.__setattr__(self, "weight", weight)
        if omega.shape != weight.shape or omega.ndim != 1:
            raise ValueError("omega and weight must be flat lists of equal length")
        if np.any(weight < 0.0):
            raise ValueError("line weights must be non-negative")

    @property
    def n_lines(self) -> int:
        return self.omega.size

    @property
    def max_abs_omega(self) -> float:
        return float(np.abs(self.omega).max()) if self.omega.size else 0.0

    def reflected(self) -> "LineSpectrum":
        """The S- line set (frequencies negated, weights unchanged)."""
        return LineSpectrum(-self.omega[::-1], self.weight[::-1])

    def aggregated(self) -> tuple[np.ndarray, np.ndarray]:
        """Unique line frequencies with summed weights."""
        if self.omega.size == 0:
            return np.empty(0), np.empty(0)
        uniq, inverse = np.unique(self.omega, return_inverse=True)
        summed = np.zeros_like(uniq)
        np.add.at(summed, inverse, self.weight)
        return uniq, summed

    def s_plus_weight_at(self, omega: float) -> float:
        """Total S+ delta weight sitting exactly at ``omega`` (0 if none)."""
        uniq, summed = self.aggregated()
        i = np.searchsorted(uniq, omega)
        if i < uniq.size and uniq[i] == omega:
            return float(summed[i])
        return 0.0

    def s_minus_weight_at(self, omega: float) -> float:
        """Total S- delta weight at ``omega``, i.e. the S+ weight at -omega."""
        return self.s_plus_weight_at(-float(omega))


def line_spectrum(target: TargetLevels) -> LineSpectrum:
    """All dipole transition lines of a target.

    One line per ordered pair (initial, final) of distinct levels, at the
    signed frequency E_final - E_initial with weight p_initial *
    dipole_sq[initial, final] / 3.  Zero-weight lines are dropped.
    """
    n = target.n_levels
    omegas, weights = [], []
    for i in range(n):
        p = target.populations[i]
        if p == 0.0:
            continue
        for f in range(n):
            if f == i:
                continue
            d2 = target.dipole_sq[i, f]
            if d2 == 0.0:
                continue
            omegas.append(target.energies[f] - target.energies[i])
            weights.append(p * d2 / 3.0)
    omegas = np.asarray(omegas, dtype=float)
    weights = np.asarray(weights, dtype=float)
    order = np.argsort(omegas, kind="stable")
    return LineSpectrum(omegas[order], weights[order])


def lorentzian(x, gamma: float):
    """Normalized Lorentzian (gamma/pi) / (x^2 + gamma^2)."""
    x = np.asarray(x, dtype=float)
    return (gamma / np.pi) / (x * x + gamma * gamma)


@dataclass(frozen=True)
class SpectralPair:
    """Grid-sampled, Lorentzian-broadened spectral densities S+ and S-.

    The generating line set is kept (when known) so operations that need
    values between grid samples can evaluate the broadened model exactly
    instead of interpolating.  The stored samples are the export/CSV view.
    """

    grid: np.ndarray
    s_plus: np.ndarray
    s_minus: np.ndarray
    gamma: float
    lines: LineSpectrum | None = None

    def __post_init__(self):
        grid = _frozen(self.grid)
        s_plus = _frozen(self.s_plus)
        s_minus = _frozen(self.s_minus)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "s_plus", s_plus)
        object.__setattr__(self, "s_minus", s_minus)
        object.__setattr__(self, "gamma", float(self.gamma))
        if grid.ndim != 1 or grid.size < 2:
            raise ValueError("grid must hold at least two samples")
        if not np.all(np.diff(grid) > 0.0):
            raise ValueError("grid must be strictly ascending")
        if s_plus.shape != grid.shape or s_minus.shape != grid.shape:
            raise ValueError("spectral samples must match the grid shape")
        if self.gamma <= 0.0:
            raise ValueError("gamma must be positive")
        if np.any(s_plus < 0.0) or np.any(s_minus < 0.0):
            raise ValueError("spectral densities must be non-negative")

    def s_plus_at(self, omega):
        """S+ at arbitrary frequencies (exact line sums when lines are known)."""
        if self.lines is None:
            return np.interp(omega, self.grid, self.s_plus)
        return _broadened_sum(self.lines.omega, self.lines.weight, self.gamma, omega)

    def s_minus_at(self, omega):
        """S- at arbitrary frequencies; equals S+ mirrored through omega = 0."""
        if self.lines is None:
            return np.interp(omega, self.grid, self.s_minus)
        return _broadened_sum(-self.lines.omega, self.lines.weight, self.gamma, omega)

    def difference_at(self, omega):
        """S+(omega) - S-(omega), the dissipative weight (signed)."""
        return self.s_plus_at(omega) - self.s_minus_at(omega)

    def symmetric_at(self, omega):
        """Symmetrized density (S+(omega) + S-(omega)) / 2."""
        return 0.5 * (self.s_plus_at(omega) + self.s_minus_at(omega))


def _broadened_sum(line_omega: np.ndarray, line_weight: np.ndarray, gamma: float, omega):
    omega_arr = np.asarray(omega, dtype=float)
    if line_omega.size == 0:
        out = np.zeros_like(omega_arr)
        return float(out) if np.isscalar(omega) or omega_arr.ndim == 0 else out
    x = omega_arr[..., None] - line_omega
    out = (lorentzian(x, gamma) * line_weight).sum(axis=-1)
    return float(out) if np.isscalar(omega) or omega_arr.ndim == 0 else out


def broaden(lines: LineSpectrum, grid, gamma: float) -> SpectralPair:
    """Replace each delta line by a Lorentzian of half-width ``gamma``.

    The grid must span the signed line set (both the S+ frequencies and
    their reflections, since the pair holds both densities) by at least
    ``BROADEN_MARGIN * gamma`` on each side.
    """
    grid = np.asarray(grid, dtype=float)
    if gamma <= 0.0:
        raise ValueError("gamma must be positive")
    if grid.ndim != 1 or grid.size < 2 or not np.all(np.diff(grid) > 0.0):
        raise ValueError("grid must be strictly ascending with at least two samples")
    if lines.n_lines:
        m = lines.max_abs_omega
        margin = BROADEN_MARGIN * gamma
        lo_req, hi_req = -m - margin, m + margin
        if grid[0] > lo_req or grid[-1] < hi_req:
            raise ValueError(
                f"grid [{grid[0]:g}, {grid[-1]:g}] does not cover the line set: need "
                f"[{lo_req:g}, {hi_req:g}] (max |line frequency| {m:g} plus "
                f"{BROADEN_MARGIN:g}*gamma margin)"
            )
    s_plus = _broadened_sum(lines.omega, lines.weight, gamma, grid)
    s_minus = _broadened_sum(-lines.omega, lines.weight, gamma, grid)
    return SpectralPair(grid, s_plus, s_minus, gamma, lines)


def detailed_balance_residual(lines: LineSpectrum, temperature: float) -> float:
    """Worst relative violation of S-(w) = S+(w) exp(-w/T) on exact line weights.

    Checked at every positive frequency carrying S+ or S- weight.  A
    frequency where S+ vanishes but S- does not gives an infinite residual
    (an inverted pair can never look thermal at positive temperature).
    """
    if temperature <= 0.0:
        raise ValueError("detailed balance is defined against a positive temperature")
    uniq, summed = lines.aggregated()
    support = np.unique(np.abs(uniq))
    support = support[support > 0.0]
    worst = 0.0
    for w in support:
        s_plus = lines.s_plus_weight_at(w)
        s_minus = lines.s_minus_weight_at(w)
        if s_plus == 0.0 and s_minus == 0.0:
            continue
        if s_plus == 0.0:
            return float("inf")
        expected = np.exp(-w / temperature)
        worst = max(worst, abs(s_minus / s_plus - expected) / expected)
    return float(worst)


def log_ratio(s_plus, s_minus):
    """ln(S+/S-) accurate through the inversion crossover.

    Near S+ = S- the plain log of the ratio loses the tiny difference, so
    log1p of (S+ - S-)/S- is used there; far from the crossover the plain
    log is the well-conditioned form.
    """
    s_plus = np.asarray(s_plus, dtype=float)
    s_minus = np.asarray(s_minus, dtype=float)
    near = (s_plus < 2.0 * s_minus) & (s_minus < 2.0 * s_plus)
    diff = np.where(near, s_plus - s_minus, 0.0) / np.where(near, s_minus, 1.0)
    ratio = np.where(near, 1.0, s_plus) / np.where(near, 1.0, s_minus)
    out = np.where(near, np.log1p(diff), np.log(ratio))
    return float(out) if out.ndim == 0 else out


def noise_temperature(spectrum: Union[SpectralPair, LineSpectrum], omega: float):
    """Noise temperature T_n(omega) = omega / ln[S+(omega)/S-(omega)].

    Returns a signed float, negative wherever the populations are inverted
    at this frequency.  Returns None ("undefined") when either spectral
    value is below ``NOISE_FLOOR`` or the log-ratio is within
    ``LOG_RATIO_FLOOR`` of zero (the crossover where T_n diverges).
    """
    omega = float(omega)
    if omega == 0.0:
        raise ValueError("noise temperature is undefined at zero frequency")
    if isinstance(spectrum, LineSpectrum):
        s_plus = spectrum.s_plus_weight_at(omega)
        s_minus = spectrum.s_minus_weight_at(omega)
    else:
        s_plus = float(spectrum.s_plus_at(omega))
        s_minus = float(spectrum.s_minus_at(omega))
    if min(s_plus, s_minus) < NOISE_FLOOR:
        return None
    ratio_log = log_ratio(s_plus, s_minus)
    if abs(ratio_log) < LOG_RATIO_FLOOR:
        return None
    return omega / ratio_log


def noise_temperature_samples(pair: SpectralPair) -> np.ndarray:
    """T_n over the pair's grid; NaN where undefined (and at omega = 0)."""
    out = np.full(pair.grid.shape, np.nan)
    s_plus, s_minus = pair.s_plus, pair.s_minus
    ok = (np.minimum(s_plus, s_minus) >= NOISE_FLOOR) & (pair.grid != 0.0)
    ratio_log = log_ratio(np.where(ok, s_plus, 1.0), np.where(ok, s_minus, 1.0))
    ok &= np.abs(ratio_log) >= LOG_RATIO_FLOOR
    out[ok] = pair.grid[ok] / ratio_log[ok]
    return out


def symmetric_spectrum(pair: SpectralPair) -> np.ndarray:
    """Symmetrized noise density (S+ + S-)/2 on the pair's grid; never negative."""
    return 0.5 * (pair.s_plus + pair.s_minus)

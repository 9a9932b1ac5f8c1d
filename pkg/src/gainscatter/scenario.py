"""Declarative scenario files: target, grids and pipeline parameters.

A scenario is a plain-text key-value document, one ``key = value`` per
line, values written as Python literals.  ``#`` starts a comment.  Unknown
keys are errors, not warnings: a silently misspelled key would corrupt a
physics run.  Recognized keys:

    energies        = [0.0, 1.0]          level energies, ascending
    dipole_sq       = [[0, 1], [1, 0]]    symmetric |<F|p|I>|^2 matrix
    populations     = [1.0, 0.0]          exactly one of populations /
    temperature     = 0.5                 temperature must be given
    gamma           = 0.01                Lorentzian half-width (> 0)
    eta             = 0.0                 curve offset (>= 0, default 0)
    grid.min        = -3.0                response/spectrum grid
    grid.max        = 3.0
    grid.points     = 2001
    medium.density_n = 1e-6               enables the medium pipeline
    slab.z_max      = 100.0               slab profile extent (optional)
    slab.points     = 101
    slab.omega      = 1.0                 profile frequency (default: max |h|)
    screen.z        = 1e4                 enables/configures verification
    screen.r_max    = 1e3                 default z/10
    screen.eps_schedule = [17.7, ...]     default geometric, 6 steps
    screen.omega    = 1.0                 default: strongest line frequency
    output_dir      = "out"               default output directory

Validation is fail-fast: every referenced precondition is checked before
any computation starts, and the first violated invariant is named.
"""

from __future__ import annotations

import ast
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .screen import FAR_FIELD_MIN, PARAXIAL_RATIO, TAPER_DECAY, default_eps_schedule
from .spectral import BROADEN_MARGIN, TargetLevels, line_spectrum

__all__ = ["Scenario", "ScenarioError", "parse_scenario", "load_scenario"]

_KNOWN_KEYS = {
    "energies",
    "dipole_sq",
    "populations",
    "temperature",
    "gamma",
    "eta",
    "grid.min",
    "grid.max",
    "grid.points",
    "medium.density_n",
    "slab.z_max",
    "slab.points",
    "slab.omega",
    "screen.z",
    "screen.r_max",
    "screen.eps_schedule",
    "screen.omega",
    "output_dir",
}


class ScenarioError(ValueError):
    """A scenario file violated an invariant; the message names which."""


@dataclass(frozen=True)
class Scenario:
    """Validated scenario: target plus grid/medium/screen parameters."""

    target: TargetLevels
    gamma: float
    eta: float
    grid_min: float
    grid_max: float
    grid_points: int
    medium_density: float | None = None
    slab_z_max: float | None = None
    slab_points: int = 101
    slab_omega: float | None = None
    screen_z: float = 1e4
    screen_r_max: float | None = None
    screen_eps_schedule: tuple | None = None
    screen_omega: float | None = None
    output_dir: str = "out"

    def grid(self) -> np.ndarray:
        return np.linspace(self.grid_min, self.grid_max, self.grid_points)

    def default_screen_omega(self) -> float:
        """Verification frequency: explicit key, else the strongest line."""
        if self.screen_omega is not None:
            return self.screen_omega
        lines = line_spectrum(self.target)
        if lines.n_lines == 0:
            raise ScenarioError("screen.omega required: the target has no dipole lines")
        return float(abs(lines.omega[np.argmax(lines.weight)]))


def _parse_lines(text: str, source: str) -> dict:
    values: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ScenarioError(f"{source}:{lineno}: expected 'key = value', got {raw!r}")
        key, _, literal = line.partition("=")
        key = key.strip()
        if key not in _KNOWN_KEYS:
            raise ScenarioError(f"{source}:{lineno}: unknown key {key!r}")
        if key in values:
            raise ScenarioError(f"{source}:{lineno}: duplicate key {key!r}")
        try:
            values[key] = ast.literal_eval(literal.strip())
        except (ValueError, SyntaxError) as exc:
            raise ScenarioError(f"{source}:{lineno}: bad literal for {key!r}: {exc}") from exc
    return values


def parse_scenario(text: str, source: str = "<scenario>", grid_points_override: int | None = None) -> Scenario:
    """Parse and validate scenario text (fail-fast, first violation named)."""
    values = _parse_lines(text, source)

    for key in ("energies", "dipole_sq"):
        if key not in values:
            raise ScenarioError(f"{source}: missing required key {key!r}")
    has_pop = "populations" in values
    has_temp = "temperature" in values
    if has_pop == has_temp:
        raise ScenarioError(
            f"{source}: exactly one of 'populations' or 'temperature' must be given"
        )

    energies = values["energies"]
    dipole_sq = values["dipole_sq"]
    try:
        if has_pop:
            target = TargetLevels(energies, dipole_sq, values["populations"])
        else:
            target = TargetLevels.from_temperature(energies, dipole_sq, values["temperature"])
    except ValueError as exc:
        raise ScenarioError(f"{source}: {exc}") from exc

    gamma = float(values.get("gamma", 1e-2))
    if gamma <= 0.0:
        raise ScenarioError(f"{source}: gamma must be positive (got {gamma!r})")
    eta = float(values.get("eta", 0.0))
    if eta < 0.0:
        raise ScenarioError(f"{source}: eta must be non-negative (got {eta!r})")

    grid_min = float(values.get("grid.min", np.nan))
    grid_max = float(values.get("grid.max", np.nan))
    grid_points = int(values.get("grid.points", 0))
    if grid_points_override is not None:
        grid_points = int(grid_points_override)
    if "grid.min" not in values or "grid.max" not in values or (
        "grid.points" not in values and grid_points_override is None
    ):
        raise ScenarioError(f"{source}: grid.min, grid.max and grid.points are required")
    if not grid_min < grid_max:
        raise ScenarioError(f"{source}: grid.min must be below grid.max")
    if grid_points < 2:
        raise ScenarioError(f"{source}: grid.points must be at least 2")

    lines = line_spectrum(target)
    if lines.n_lines:
        need = lines.max_abs_omega + BROADEN_MARGIN * gamma
        if grid_min > -need or grid_max < need:
            raise ScenarioError(
                f"{source}: grid [{grid_min:g}, {grid_max:g}] must span the line set "
                f"by {BROADEN_MARGIN:g}*gamma: need [-{need:g}, {need:g}]"
            )

    medium_density = values.get("medium.density_n")
    if medium_density is not None:
        medium_density = float(medium_density)
        if medium_density <= 0.0:
            raise ScenarioError(
                f"{source}: medium.density_n must be positive (got {medium_density!r})"
            )

    slab_z_max = values.get("slab.z_max")
    slab_z_max = float(slab_z_max) if slab_z_max is not None else None
    if slab_z_max is not None and slab_z_max <= 0.0:
        raise ScenarioError(f"{source}: slab.z_max must be positive")
    slab_points = int(values.get("slab.points", 101))
    if slab_points < 2:
        raise ScenarioError(f"{source}: slab.points must be at least 2")
    slab_omega = values.get("slab.omega")
    slab_omega = float(slab_omega) if slab_omega is not None else None

    screen_z = float(values.get("screen.z", 1e4))
    screen_r_max = values.get("screen.r_max")
    screen_r_max = float(screen_r_max) if screen_r_max is not None else None
    screen_omega = values.get("screen.omega")
    screen_omega = float(screen_omega) if screen_omega is not None else None
    eps_schedule = values.get("screen.eps_schedule")
    if eps_schedule is not None:
        eps_schedule = tuple(float(e) for e in eps_schedule)
        if any(e <= 0.0 for e in eps_schedule):
            raise ScenarioError(f"{source}: screen.eps_schedule members must be positive")

    scenario = Scenario(
        target=target,
        gamma=gamma,
        eta=eta,
        grid_min=grid_min,
        grid_max=grid_max,
        grid_points=grid_points,
        medium_density=medium_density,
        slab_z_max=slab_z_max,
        slab_points=slab_points,
        slab_omega=slab_omega,
        screen_z=screen_z,
        screen_r_max=screen_r_max,
        screen_eps_schedule=eps_schedule,
        screen_omega=screen_omega,
        output_dir=str(values.get("output_dir", "out")),
    )
    _validate_screen(scenario, source)
    return scenario


def _validate_screen(scenario: Scenario, source: str) -> None:
    """Joint feasibility of the screen geometry, checked before any run."""
    omega = None
    try:
        omega = scenario.default_screen_omega()
    except ScenarioError:
        return  # no lines and no explicit frequency: screen pipeline unused
    z = scenario.screen_z
    r_max = scenario.screen_r_max if scenario.screen_r_max is not None else PARAXIAL_RATIO * z
    if z < FAR_FIELD_MIN / omega:
        raise ScenarioError(
            f"{source}: screen.z = {z:g} violates the far-field condition "
            f"z >= {FAR_FIELD_MIN:g}*c/omega = {FAR_FIELD_MIN / omega:g}"
        )
    if r_max > PARAXIAL_RATIO * z:
        raise ScenarioError(
            f"{source}: screen.r_max = {r_max:g} violates the paraxial condition "
            f"r_max <= z/10 = {PARAXIAL_RATIO * z:g}"
        )
    schedule = (
        np.asarray(scenario.screen_eps_schedule, dtype=float)
        if scenario.screen_eps_schedule is not None
        else default_eps_schedule(omega, z, r_max)
    )
    phase_max = omega * r_max * r_max / (2.0 * z)
    worst = float(np.exp(-schedule.min() * phase_max))
    if worst > TAPER_DECAY:
        eps_min = np.log(1.0 / TAPER_DECAY) / phase_max
        raise ScenarioError(
            f"{source}: screen.eps_schedule member {schedule.min():g} violates the "
            f"taper-decay condition exp(-eps*omega*r_max^2/(2 z)) <= {TAPER_DECAY:g}: "
            f"need eps >= {eps_min:.6g}"
        )


def load_scenario(path, grid_points_override: int | None = None) -> Scenario:
    """Read and validate a scenario file."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario file {path}: {exc}") from exc
    return parse_scenario(text, source=str(path), grid_points_override=grid_points_override)

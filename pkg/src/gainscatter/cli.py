"""Command-line surface: scenario-driven pipelines emitting CSV/JSON.

Subcommands: spectrum, response, cross-sections, medium, verify, validate.
Exit codes: 0 success, 2 validation error, 3 numerical non-convergence.

Outputs are deterministic: numbers are written with 17 significant digits
in scientific notation, lines end with \\n, and files are written to a
temporary name and renamed into place so a failing run never leaves a
partial artifact.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from pathlib import Path

import numpy as np

from . import validate as validation_suite
from .medium import extinction_dilute, intensity_profile, medium_response
from .response import polarizability_curve
from .scattering import amplifier_bands, cross_sections, sigma_total_optical
from .scenario import Scenario, ScenarioError, load_scenario
from .screen import screen_intensity, verify_optical_theorem
from .spectral import (
    broaden,
    line_spectrum,
    noise_temperature_samples,
    symmetric_spectrum,
)

__all__ = ["main", "run"]

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NON_CONVERGED = 3


def _format(x: float) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, str):
        return x
    if np.isnan(x):
        return ""  # undefined entries (e.g. noise temperature) stay blank
    return f"{x:.16e}"


def _atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", newline="\n") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_csv(path: Path, header: list[str], columns: list[np.ndarray]) -> None:
    rows = [",".join(header)]
    for values in zip(*columns):
        rows.append(",".join(_format(v) for v in values))
    _atomic_write(path, "\n".join(rows) + "\n")


def write_json(path: Path, payload) -> None:
    _atomic_write(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _spectral_pair(scenario: Scenario):
    lines = line_spectrum(scenario.target)
    return broaden(lines, scenario.grid(), scenario.gamma)


def cmd_spectrum(scenario: Scenario, out_dir: Path, quiet: bool) -> int:
    pair = _spectral_pair(scenario)
    t_noise = noise_temperature_samples(pair)
    write_csv(
        out_dir / "spectrum.csv",
        ["omega", "s_plus", "s_minus", "s_bar", "t_noise"],
        [pair.grid, pair.s_plus, pair.s_minus, symmetric_spectrum(pair), t_noise],
    )
    if not quiet:
        print(f"wrote {out_dir / 'spectrum.csv'}")
    return EXIT_OK


def _curve(scenario: Scenario):
    pair = _spectral_pair(scenario)
    return polarizability_curve(pair, eta=scenario.eta)


def cmd_response(scenario: Scenario, out_dir: Path, quiet: bool) -> int:
    curve = _curve(scenario)
    write_csv(
        out_dir / "response.csv",
        ["omega", "re_alpha", "im_alpha"],
        [curve.grid, curve.alpha.real, curve.alpha.imag],
    )
    if not quiet:
        print(f"wrote {out_dir / 'response.csv'}")
    return EXIT_OK


def cmd_cross_sections(scenario: Scenario, out_dir: Path, quiet: bool) -> int:
    curve = _curve(scenario)
    xs = cross_sections(curve)
    write_csv(
        out_dir / "cross_sections.csv",
        ["omega", "sigma_el", "sigma_tot", "sigma_in", "band_flag"],
        [xs.grid, xs.sigma_el, xs.sigma_tot, xs.sigma_in, xs.band_flags],
    )
    bands = amplifier_bands(curve)
    write_json(out_dir / "bands.json", [{"lo": lo, "hi": hi} for lo, hi in bands])
    if not quiet:
        print(f"wrote {out_dir / 'cross_sections.csv'} and bands.json ({len(bands)} band(s))")
    return EXIT_OK


def cmd_medium(scenario: Scenario, out_dir: Path, quiet: bool) -> int:
    if scenario.medium_density is None:
        raise ScenarioError("medium.density_n is required for the medium pipeline")
    curve = _curve(scenario)
    med = medium_response(curve, scenario.medium_density)
    sigma_tot = sigma_total_optical(curve.alpha[curve.grid > 0.0], med.grid)
    h_dilute = extinction_dilute(scenario.medium_density, sigma_tot, med.dilute_ok)
    write_csv(
        out_dir / "medium.csv",
        ["omega", "re_eps", "im_eps", "re_k", "im_k", "h_exact", "h_dilute", "dilute_ok"],
        [
            med.grid,
            med.epsilon.real,
            med.epsilon.imag,
            med.k.real,
            med.k.imag,
            med.h,
            h_dilute,
            med.dilute_ok,
        ],
    )
    # Slab profile at the frequency of strongest extinction unless pinned.
    if scenario.slab_omega is not None:
        idx = int(np.argmin(np.abs(med.grid - scenario.slab_omega)))
    else:
        idx = int(np.argmax(np.abs(med.h)))
    h = float(med.h[idx])
    z_max = scenario.slab_z_max if scenario.slab_z_max is not None else (
        2.0 / abs(h) if h != 0.0 else 1.0
    )
    z = np.linspace(0.0, z_max, scenario.slab_points)
    profile = intensity_profile(2.0, h, z)  # |E0|^2 = 2 so the ratio starts at 1
    write_csv(out_dir / "slab.csv", ["z", "intensity_ratio"], [z, profile])
    if not quiet:
        print(f"wrote {out_dir / 'medium.csv'} and slab.csv (h = {h:g} at omega = {med.grid[idx]:g})")
    return EXIT_OK


def cmd_verify(scenario: Scenario, out_dir: Path, quiet: bool) -> int:
    omega = scenario.default_screen_omega()
    z = scenario.screen_z
    r_max = scenario.screen_r_max if scenario.screen_r_max is not None else z / 10.0
    report = verify_optical_theorem(
        scenario.target,
        omega,
        z=z,
        eps_schedule=scenario.screen_eps_schedule,
        gamma=scenario.gamma,
        r_max=r_max,
    )
    write_json(out_dir / "verify.json", report)
    r_perp = np.linspace(0.0, r_max, 512)
    f_forward = complex(*report["forward_amplitude"])
    write_csv(
        out_dir / "screen.csv",
        ["r_perp", "intensity_ratio"],
        [r_perp, screen_intensity(f_forward, omega, z, r_perp)],
    )
    if not quiet:
        print(
            f"wrote {out_dir / 'verify.json'}: sigma_screen = {report['sigma_extrapolated']:.6e}, "
            f"sigma_closed = {report['sigma_closed_form']:.6e}, converged = {report['converged']}"
        )
    return EXIT_OK if report["converged"] else EXIT_NON_CONVERGED


def run(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="gainscatter",
        description="Dipole-scattering observables for absorbing and amplifying targets.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    needs_scenario = ("spectrum", "response", "cross-sections", "medium", "verify")
    for name in needs_scenario + ("validate",):
        p = sub.add_parser(name)
        if name in needs_scenario:
            p.add_argument("--scenario", required=True, help="scenario file path")
            p.add_argument("--grid-points", type=int, default=None, help="override grid.points")
        p.add_argument("--out", default=None, help="output directory")
        p.add_argument("--quiet", action="store_true")
    args = parser.parse_args(argv)

    if args.command == "validate":
        out_dir = Path(args.out) if args.out else Path("validate_out")
        return validation_suite.run_validation(out_dir, quiet=args.quiet)

    try:
        scenario = load_scenario(args.scenario, grid_points_override=args.grid_points)
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    out_dir = Path(args.out) if args.out else Path(scenario.output_dir)

    handler = {
        "spectrum": cmd_spectrum,
        "response": cmd_response,
        "cross-sections": cmd_cross_sections,
        "medium": cmd_medium,
        "verify": cmd_verify,
    }[args.command]
    try:
        return handler(scenario, out_dir, args.quiet)
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

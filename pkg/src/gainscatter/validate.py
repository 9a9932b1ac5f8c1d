"""Built-in validation suite: canonical scenarios plus invariant checks.

Runs a fast, deterministic battery covering every module on built-in
scenarios (a ground-state absorber, a fully inverted amplifier, a thermal
three-level ladder), writes their CSV/JSON artifacts, and re-runs the
writers to confirm byte-identical output.  Both signs of the total cross
section are exercised.  The pytest suite runs the same physics at larger
sample counts; this command is the quick self-check.
"""

from __future__ import annotations

import filecmp
import shutil
import time
from pathlib import Path

import numpy as np

from .medium import dielectric, extinction, wavevector
from .response import (
    alpha_boundary,
    closed_form_lorentzian,
    im_alpha,
    kramers_kronig_residual,
    polarizability_curve,
    polarizability_dispersion,
)
from .scattering import (
    amplifier_bands,
    differential_elastic,
    sigma_elastic,
    sigma_total_optical,
    sigma_total_spectral,
)
from .scenario import parse_scenario
from .screen import (
    default_eps_schedule,
    extrapolate_missing_intensity,
    missing_intensity_sigma,
    optical_theorem_sigma,
    verify_optical_theorem,
)
from .spectral import (
    LineSpectrum,
    TargetLevels,
    broaden,
    detailed_balance_residual,
    line_spectrum,
    noise_temperature,
    symmetric_spectrum,
    thermal_populations,
)

__all__ = ["run_validation", "CANONICAL_SCENARIOS"]

CANONICAL_SCENARIOS = {
    "absorber": """
energies = [0.0, 1.0]
dipole_sq = [[0.0, 1.0], [1.0, 0.0]]
populations = [1.0, 0.0]
gamma = 0.01
grid.min = -3.0
grid.max = 3.0
grid.points = 4801
medium.density_n = 1e-6
""",
    "amplifier": """
energies = [0.0, 1.0]
dipole_sq = [[0.0, 1.0], [1.0, 0.0]]
populations = [0.0, 1.0]
gamma = 0.01
grid.min = -3.0
grid.max = 3.0
grid.points = 4801
medium.density_n = 1e-6
""",
    "thermal": """
energies = [0.0, 1.0, 2.5]
dipole_sq = [[0.0, 1.0, 0.4], [1.0, 0.0, 0.7], [0.4, 0.7, 0.0]]
temperature = 1.0
gamma = 0.01
grid.min = -4.0
grid.max = 4.0
grid.points = 6401
medium.density_n = 1e-6
""",
}


def _random_ladder(rng, n_max=6):
    n = int(rng.integers(2, n_max + 1))
    energies = np.concatenate(([0.0], np.cumsum(rng.uniform(0.4, 1.4, size=n - 1))))
    d2 = rng.uniform(0.0, 1.0, size=(n, n))
    d2 = 0.5 * (d2 + d2.T)
    np.fill_diagonal(d2, 0.0)
    return energies, d2


def _two_level(p_excited: float, gamma=0.01, span=3.0, points=4801):
    target = TargetLevels([0.0, 1.0], [[0.0, 1.0], [1.0, 0.0]], [1.0 - p_excited, p_excited])
    pair = broaden(line_spectrum(target), np.linspace(-span, span, points), gamma)
    return target, pair


def check_population_conservation():
    rng = np.random.default_rng(11)
    worst = 0.0
    for _ in range(40):
        energies, _ = _random_ladder(rng)
        t = float(rng.choice([-1.0, 1.0])) * 10.0 ** rng.uniform(-3, 12)
        p = thermal_populations(energies, t)
        worst = max(worst, abs(p.sum() - 1.0), -min(p.min(), 0.0))
    return worst <= 1e-12, f"max deviation {worst:.2e}"


def check_reflection_symmetry():
    rng = np.random.default_rng(12)
    for _ in range(20):
        energies, d2 = _random_ladder(rng)
        p = rng.dirichlet(np.ones(energies.size))
        lines = line_spectrum(TargetLevels(energies, d2, p))
        mirrored = lines.reflected()
        a = sorted(zip(lines.omega, lines.weight))
        b = sorted(zip(-mirrored.omega, mirrored.weight))
        if a != b:
            return False, "reflected line multiset differs"
    return True, "20 random targets"


def check_detailed_balance():
    rng = np.random.default_rng(13)
    worst = 0.0
    for _ in range(20):
        energies, d2 = _random_ladder(rng)
        t = 10.0 ** rng.uniform(-1, 2)
        lines = line_spectrum(TargetLevels.from_temperature(energies, d2, t))
        worst = max(worst, detailed_balance_residual(lines, t))
    return worst <= 1e-12, f"max residual {worst:.2e}"


def check_noise_temperature():
    rng = np.random.default_rng(14)
    worst = 0.0
    for _ in range(20):
        energies, d2 = _random_ladder(rng)
        t = 10.0 ** rng.uniform(-1, 2)
        lines = line_spectrum(TargetLevels.from_temperature(energies, d2, t))
        for w in np.unique(np.abs(lines.omega)):
            tn = noise_temperature(lines, float(w))
            worst = max(worst, abs(tn - t) / t)
    target, pair = _two_level(0.9)
    inverted_tn = noise_temperature(pair, 1.0)
    ok = worst <= 1e-10 and inverted_tn is not None and inverted_tn < 0.0
    return ok, f"thermal recovery {worst:.2e}; inverted T_n = {inverted_tn:.3f}"


def check_symmetric_nonneg():
    _, pair = _two_level(0.7)
    s_bar = symmetric_spectrum(pair)
    return bool(np.all(s_bar >= 0.0)), f"min S_bar {s_bar.min():.2e}"


def check_oracle_agreement():
    rng = np.random.default_rng(15)
    worst = 0.0
    for _ in range(20):
        n_lines = int(rng.integers(1, 4))
        gamma = 10.0 ** rng.uniform(-2.3, -1.3)
        lines = LineSpectrum(
            np.sort(rng.uniform(-2.0, 2.0, n_lines)), rng.uniform(0.1, 1.0, n_lines)
        )
        grid = np.linspace(-60.0, 60.0, 20001)
        pair = broaden(lines, grid, gamma)
        zeta = complex(rng.uniform(-2.5, 2.5), 10.0 ** rng.uniform(np.log10(gamma / 2), 0.5))
        got = polarizability_dispersion(pair, zeta)
        want = closed_form_lorentzian(lines, gamma, zeta)
        worst = max(worst, abs(got - want) / abs(want))
    return worst <= 1e-6, f"max relative gap {worst:.2e}"


def check_sign_rule():
    _, ground = _two_level(0.0)
    _, inverted = _two_level(1.0)
    ok = im_alpha(ground, 1.0) > 0.0 and im_alpha(inverted, 1.0) < 0.0
    return ok, "Im alpha sign follows p_lower - p_upper"


def check_linearity():
    gamma = 0.01
    a = LineSpectrum(np.array([0.8]), np.array([0.5]))
    b = LineSpectrum(np.array([1.6]), np.array([0.25]))
    union = LineSpectrum(np.array([0.8, 1.6]), np.array([0.5, 0.25]))
    grid = np.linspace(-40.0, 40.0, 32001)
    zeta = 1.1 + 0.02j
    total = polarizability_dispersion(broaden(union, grid, gamma), zeta)
    parts = polarizability_dispersion(broaden(a, grid, gamma), zeta) + polarizability_dispersion(
        broaden(b, grid, gamma), zeta
    )
    gap = abs(total - parts) / abs(total)
    return gap <= 1e-12, f"relative gap {gap:.2e}"


def check_kramers_kronig():
    _, pair = _two_level(0.0, span=8.0, points=16385)
    residual = kramers_kronig_residual(polarizability_curve(pair))
    return residual <= 1e-3, f"residual {residual:.2e}"


def check_crossing_symmetry():
    _, pair = _two_level(0.3)
    curve = polarizability_curve(pair, eta=1e-3)
    # the grid is symmetric, so alpha(-omega) sits at the reversed index
    alpha_at_minus = curve.alpha[::-1]
    gap = np.abs(alpha_at_minus - np.conj(curve.alpha)).max() / np.abs(curve.alpha).max()
    return gap <= 1e-10, f"max gap {gap:.2e}"


def check_rayleigh_closure():
    rng = np.random.default_rng(16)
    nodes, weights = np.polynomial.legendre.leggauss(40)
    theta = 0.5 * np.pi * (nodes + 1.0)
    w = 0.5 * np.pi * weights
    worst = 0.0
    for _ in range(20):
        alpha = complex(rng.normal(), rng.normal())
        omega = 10.0 ** rng.uniform(-1, 1)
        integral = 2.0 * np.pi * np.sum(
            differential_elastic(alpha, omega, theta) * np.sin(theta) * w
        )
        want = sigma_elastic(alpha, omega)
        worst = max(worst, abs(integral - want) / want)
    return worst <= 1e-9, f"max relative gap {worst:.2e}"


def check_identity_chain():
    rng = np.random.default_rng(17)
    worst = 0.0
    for _ in range(10):
        energies, d2 = _random_ladder(rng, n_max=4)
        p = rng.dirichlet(np.ones(energies.size))
        target = TargetLevels(energies, d2, p)
        lines = line_spectrum(target)
        span = lines.max_abs_omega + 0.5
        pair = broaden(lines, np.linspace(-span, span, 2001), 0.01)
        omegas = rng.uniform(0.05, lines.max_abs_omega, size=12)
        sig_opt = sigma_total_optical(alpha_boundary(pair, omegas), omegas)
        sig_spec = sigma_total_spectral(pair, omegas)
        defined = sig_spec != 0.0
        if np.any(defined):
            gap = np.abs(sig_opt - sig_spec)[defined] / np.abs(sig_spec)[defined]
            worst = max(worst, float(gap.max()))
    return worst <= 1e-8, f"max relative gap {worst:.2e}"


def check_sign_theorem():
    ratios = [0.0, 0.1, 0.5, 0.9, 1.1, 2.0, 10.0, np.inf]
    for r in ratios:
        p_e = 1.0 if np.isinf(r) else r / (1.0 + r)
        _, pair = _two_level(p_e)
        omegas = np.linspace(0.2, 2.0, 181)
        sigma = sigma_total_spectral(pair, omegas)
        for w, s in zip(omegas, sigma):
            tn = noise_temperature(pair, float(w))
            if tn is None or s == 0.0:
                continue
            if np.sign(s) != np.sign(tn):
                return False, f"sign mismatch at ratio {r}, omega {w}"
    return True, f"{len(ratios)} population ratios"


def check_equal_population_null():
    _, pair = _two_level(0.5)
    omegas = np.linspace(0.2, 2.0, 181)
    sigma = sigma_total_spectral(pair, omegas)
    scale = 4.0 * np.pi**2 * float(pair.s_plus_at(1.0))
    ok = np.abs(sigma).max() <= 1e-10 * scale
    return ok, f"max |sigma_tot| {np.abs(sigma).max():.2e} vs scale {scale:.2e}"


def check_bands_both_signs():
    target_g, pair_g = _two_level(0.0)
    target_e, pair_e = _two_level(1.0)
    bands_g = amplifier_bands(polarizability_curve(pair_g))
    bands_e = amplifier_bands(polarizability_curve(pair_e))
    ok = bands_g == [] and len(bands_e) == 1 and bands_e[0][0] < 1.0 < bands_e[0][1]
    return ok, f"absorber {bands_g}, amplifier {bands_e}"


def check_medium_first_order():
    for p_e in (0.0, 1.0):
        _, pair = _two_level(p_e)
        alpha = complex(alpha_boundary(pair, 1.0))
        sigma = float(sigma_total_optical(alpha, 1.0))
        rel = []
        densities = np.logspace(-7, -5, 5)
        for n in densities:
            h_exact = float(extinction(wavevector(dielectric(alpha, n), 1.0)))
            rel.append(abs(h_exact - n * sigma) / abs(n * sigma))
        slope = np.polyfit(np.log(densities), np.log(rel), 1)[0]
        if not 0.8 <= slope <= 1.2:
            return False, f"slope {slope:.3f} for p_e={p_e}"
    return True, "first-order error scales linearly in density"


def check_medium_sign_chain():
    for p_e, sign in ((0.0, 1.0), (1.0, -1.0)):
        _, pair = _two_level(p_e)
        alpha = complex(alpha_boundary(pair, 1.0))
        h = float(extinction(wavevector(dielectric(alpha, 1e-6), 1.0)))
        if np.sign(h) != sign or np.sign(alpha.imag) != sign:
            return False, f"sign chain broken for p_e={p_e}"
    return True, "sign(h) = sign(Im alpha) = sign(sigma_tot)"


def check_gain_loss_duality():
    _, pair_a = _two_level(0.25)
    _, pair_b = _two_level(0.75)
    omegas = np.linspace(-2.5, 2.5, 501)
    im_a = im_alpha(pair_a, omegas)
    im_b = im_alpha(pair_b, omegas)
    gap = np.abs(im_a + im_b).max() / np.abs(im_a).max()
    return gap <= 1e-12, f"max |Im a + Im a_flipped| {gap:.2e} relative"


def check_negative_sigma_routes():
    target, pair = _two_level(1.0)
    sigma_optical = float(sigma_total_optical(alpha_boundary(pair, 1.0), 1.0))
    sigma_spectral = float(sigma_total_spectral(pair, 1.0))
    report = verify_optical_theorem(target, 1.0)
    values = [sigma_optical, sigma_spectral, report["sigma_extrapolated"]]
    ok = all(v < 0.0 for v in values) and report["converged"]
    spread = (max(values) - min(values)) / abs(sigma_optical)
    ok = ok and spread <= 1e-3
    return ok, f"sigma_tot ~ {sigma_optical:.4e}, route spread {spread:.2e}"


def check_screen_sign_blind():
    rng = np.random.default_rng(18)
    z = 1e4
    schedule = default_eps_schedule(1.0, z, z / 10.0)
    worst = 0.0
    for quadrant in range(8):
        f = complex(rng.uniform(0.2, 2.0), rng.uniform(0.2, 2.0))
        f = complex(f.real * (-1) ** quadrant, f.imag * (-1) ** (quadrant // 2))
        _, got = extrapolate_missing_intensity(f, 1.0, z, schedule, z / 10.0)
        want = optical_theorem_sigma(f, 1.0)
        worst = max(worst, abs(got - want) / abs(want))
    return worst <= 1e-3, f"max relative gap {worst:.2e}"


def check_screen_convergence_order():
    z, omega = 1e6, 1.0
    r_max = z / 10.0
    f = 1.0 + 0.8j
    want = optical_theorem_sigma(f, omega)
    phase_max = omega * r_max**2 / (2.0 * z)
    eps = (np.log(1e12) / phase_max) * 2.0 ** np.arange(5)
    devs = [
        abs(missing_intensity_sigma(f, omega, z, e, r_max) - want) for e in eps
    ]
    slope = np.polyfit(np.log(eps), np.log(devs), 1)[0]
    return 0.8 <= slope <= 1.2, f"fitted slope {slope:.3f}"


def check_z_independence():
    f = 0.4 + 1.1j
    results = []
    for z in (1e4, 1e5):
        schedule = default_eps_schedule(1.0, z, z / 10.0)
        _, got = extrapolate_missing_intensity(f, 1.0, z, schedule, z / 10.0)
        results.append(got)
    gap = abs(results[0] - results[1]) / abs(results[1])
    return gap <= 1e-3, f"relative gap {gap:.2e}"


def check_energy_bookkeeping():
    target, pair = _two_level(1.0)
    alpha = complex(alpha_boundary(pair, 1.0))
    f = 1.0 * 1.0 * alpha  # forward amplitude at omega = 1
    z = 1e4
    eps = default_eps_schedule(1.0, z, z / 10.0)[-1]
    deficit = missing_intensity_sigma(f, 1.0, z, eps, z / 10.0)
    # integral of (I - I0)/I0 is minus the deficit integral
    return -deficit > 0.0, f"screen surplus {-deficit:.3e} (sigma_tot < 0)"


def _write_artifacts(out_dir: Path) -> None:
    from . import cli  # local import: cli imports this module

    for name, text in CANONICAL_SCENARIOS.items():
        scenario = parse_scenario(text, source=f"<builtin:{name}>")
        target_dir = out_dir / name
        cli.cmd_spectrum(scenario, target_dir, quiet=True)
        cli.cmd_response(scenario, target_dir, quiet=True)
        cli.cmd_cross_sections(scenario, target_dir, quiet=True)
        cli.cmd_medium(scenario, target_dir, quiet=True)
        cli.cmd_verify(scenario, target_dir, quiet=True)


def check_artifact_determinism(out_dir: Path):
    first = out_dir / "artifacts"
    second = out_dir / "recheck"
    for directory in (first, second):
        if directory.exists():
            shutil.rmtree(directory)
        _write_artifacts(directory)
    mismatched = []
    for path in sorted(first.rglob("*")):
        if path.is_dir():
            continue
        twin = second / path.relative_to(first)
        if not twin.exists() or not filecmp.cmp(path, twin, shallow=False):
            mismatched.append(str(path.relative_to(first)))
    shutil.rmtree(second)
    return not mismatched, (
        f"{sum(1 for p in first.rglob('*') if p.is_file())} artifacts byte-identical"
        if not mismatched
        else f"mismatch: {mismatched}"
    )


def run_validation(out_dir: Path, quiet: bool = False) -> int:
    """Run every check, print a pass/fail table, return a process exit code."""
    out_dir = Path(out_dir)
    checks = [
        ("spectral.population_conservation", check_population_conservation),
        ("spectral.reflection_symmetry", check_reflection_symmetry),
        ("spectral.detailed_balance", check_detailed_balance),
        ("spectral.noise_temperature", check_noise_temperature),
        ("spectral.symmetric_nonneg", check_symmetric_nonneg),
        ("response.oracle_agreement", check_oracle_agreement),
        ("response.sign_rule", check_sign_rule),
        ("response.linearity", check_linearity),
        ("response.kramers_kronig", check_kramers_kronig),
        ("response.crossing_symmetry", check_crossing_symmetry),
        ("scattering.rayleigh_closure", check_rayleigh_closure),
        ("scattering.identity_chain", check_identity_chain),
        ("scattering.sign_theorem", check_sign_theorem),
        ("scattering.equal_population_null", check_equal_population_null),
        ("scattering.amplifier_bands", check_bands_both_signs),
        ("medium.first_order_consistency", check_medium_first_order),
        ("medium.sign_chain", check_medium_sign_chain),
        ("medium.gain_loss_duality", check_gain_loss_duality),
        ("screen.negative_sigma_routes", check_negative_sigma_routes),
        ("screen.sign_blindness", check_screen_sign_blind),
        ("screen.convergence_order", check_screen_convergence_order),
        ("screen.z_independence", check_z_independence),
        ("screen.energy_bookkeeping", check_energy_bookkeeping),
        ("cli.artifact_determinism", lambda: check_artifact_determinism(out_dir)),
    ]
    failures = 0
    start = time.perf_counter()
    for name, check in checks:
        t0 = time.perf_counter()
        try:
            ok, detail = check()
        except Exception as exc:  # a crashing check is a failing check
            ok, detail = False, f"raised {type(exc).__name__}: {exc}"
        elapsed = time.perf_counter() - t0
        if not ok:
            failures += 1
        if not quiet:
            print(f"{'PASS' if ok else 'FAIL'}  {name:<40} {elapsed:6.2f}s  {detail}")
    total = time.perf_counter() - start
    if not quiet:
        print(f"{len(checks) - failures}/{len(checks)} checks passed in {total:.1f}s")
    return 0 if failures == 0 else 2

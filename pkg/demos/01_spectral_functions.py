"""Spectral densities of a dipole target: lines, broadening, noise temperature.

A two-level target stores its state in the populations.  Ground-state
occupation puts the S+ line at +omega_0 (the target can absorb); an
inverted target puts it at -omega_0 instead, which is the same thing as an
S- line at +omega_0 (the target can only emit).  The noise temperature
reads that asymmetry off as a signed temperature.
"""

import numpy as np

from gainscatter import (
    TargetLevels,
    broaden,
    detailed_balance_residual,
    line_spectrum,
    noise_temperature,
    thermal_populations,
)

omega_0 = 1.0
dipole_sq = [[0.0, 1.0], [1.0, 0.0]]

print("=== exact line sets ===")
for name, populations in [
    ("ground state ", [1.0, 0.0]),
    ("inverted     ", [0.0, 1.0]),
    ("equal split  ", [0.5, 0.5]),
]:
    target = TargetLevels([0.0, omega_0], dipole_sq, populations)
    lines = line_spectrum(target)
    entries = ", ".join(f"S+ line at {w:+.1f} (weight {wt:.3f})" for w, wt in zip(lines.omega, lines.weight))
    print(f"  {name}: {entries}")

print()
print("=== thermal populations and detailed balance ===")
for t in (0.5, 2.0, -0.5):
    p = thermal_populations([0.0, omega_0], t)
    target = TargetLevels([0.0, omega_0], dipole_sq, p)
    lines = line_spectrum(target)
    tn = noise_temperature(lines, omega_0)
    tag = f"residual {detailed_balance_residual(lines, t):.1e}" if t > 0 else "inverted (no thermal check)"
    print(f"  T = {t:+.2f}: populations [{p[0]:.3f}, {p[1]:.3f}], T_n = {tn:+.4f}, {tag}")

print()
print("=== broadened densities around the line ===")
gamma = 0.01
target = TargetLevels([0.0, omega_0], dipole_sq, [0.25, 0.75])  # pumped 3:1
pair = broaden(line_spectrum(target), np.linspace(-3.0, 3.0, 2401), gamma)
for w in (0.9, 1.0, 1.1):
    tn = noise_temperature(pair, w)
    print(
        f"  omega = {w:.2f}: S+ = {pair.s_plus_at(w):9.4f}, S- = {pair.s_minus_at(w):9.4f}, "
        f"T_n = {tn:+.4f}"
    )
print("  S- dominates near the line and T_n < 0: the target is an amplifier there.")

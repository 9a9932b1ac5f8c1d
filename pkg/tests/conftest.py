"""Shared builders for the test suite."""

import numpy as np

from gainscatter import TargetLevels, broaden, line_spectrum


def random_ladder(rng, n_max=6, min_gap=0.3, max_gap=1.5):
    """Strictly ascending level energies plus a random symmetric dipole matrix."""
    n = int(rng.integers(2, n_max + 1))
    energies = np.concatenate(([0.0], np.cumsum(rng.uniform(min_gap, max_gap, size=n - 1))))
    d2 = rng.uniform(0.0, 1.0, size=(n, n))
    d2 = 0.5 * (d2 + d2.T)
    np.fill_diagonal(d2, 0.0)
    return energies, d2


def random_target(rng, n_max=6):
    energies, d2 = random_ladder(rng, n_max)
    populations = rng.dirichlet(np.ones(energies.size))
    return TargetLevels(energies, d2, populations)


def two_level(p_excited, d_sq=1.0, omega_0=1.0):
    return TargetLevels(
        [0.0, omega_0],
        [[0.0, d_sq], [d_sq, 0.0]],
        [1.0 - p_excited, p_excited],
    )


def two_level_pair(p_excited, gamma=0.01, span=3.0, points=4801, d_sq=1.0, omega_0=1.0):
    target = two_level(p_excited, d_sq=d_sq, omega_0=omega_0)
    grid = np.linspace(-span, span, points)
    return broaden(line_spectrum(target), grid, gamma)

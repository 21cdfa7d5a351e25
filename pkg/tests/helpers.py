"""Independent oracles and random-case generators shared by the test modules.

Nothing here imports the library's numerics: the oracles work from raw
``(value, probability)`` lists so they stay independent of the code under test.
"""

import itertools
import math

import numpy as np

COIN_FLIP = [(-0.9, 0.05), (0.2, 0.95)]
SYMMETRIC = [(-0.5, 0.5), (0.5, 0.5)]
RISKLESS = [(0.04, 1.0)]
LONG_FAVOURED = [(-0.5, 0.2), (0.5, 0.8)]
SHORT_FAVOURED = [(-0.5, 0.8), (0.5, 0.2)]


def random_atoms(rng, n_atoms=None, low=-1.0, high=1.0, mixed_sign=True, prob_floor=0.0):
    """Random finite law as a list of (value, probability) pairs.

    ``prob_floor`` mixes the Dirichlet weights with the uniform law so no atom
    is vanishingly rare (Monte Carlo tests need every atom to be sampled).
    """
    if n_atoms is None:
        n_atoms = int(rng.integers(2, 6))
    while True:
        values = rng.uniform(low, high, size=n_atoms)
        if mixed_sign and n_atoms >= 2:
            values[0] = -abs(values[0]) if values[0] != 0 else -0.5
            values[1] = abs(values[1]) if values[1] != 0 else 0.5
        if len(set(values.tolist())) == n_atoms and np.all(values != 0.0):
            break
    weights = rng.dirichlet(np.ones(n_atoms))
    weights = (1.0 - prob_floor * n_atoms) * weights + prob_floor
    weights = weights / weights.sum()
    return list(zip(values.tolist(), weights.tolist()))


def interior_gain(rng, atoms, shrink=1.0):
    """A gain drawn uniformly from the survival interval scaled by ``shrink``."""
    xs = [x for x, _ in atoms]
    lower = -1.0 / max(xs) if max(xs) > 0 else -10.0
    upper = 1.0 / abs(min(xs)) if min(xs) < 0 else 10.0
    return float(rng.uniform(shrink * lower, shrink * upper))


def enumerate_sequences(atoms, k, n, v0=1.0):
    """Exact E[G], var(G) and var(log V(N)/V(0)) by listing all atom sequences."""
    probs, gains, logs = [], [], []
    for seq in itertools.product(atoms, repeat=n):
        prob = 1.0
        value = v0
        log_ratio = 0.0
        for x, p in seq:
            prob *= p
            value *= 1.0 + k * x
            log_ratio += math.log(1.0 + k * x) if 1.0 + k * x > 0 else -math.inf
        probs.append(prob)
        gains.append(value - v0)
        logs.append(log_ratio)
    mean_gain = math.fsum(p * g for p, g in zip(probs, gains))
    var_gain = math.fsum(p * (g - mean_gain) ** 2 for p, g in zip(probs, gains))
    mean_log = math.fsum(p * l for p, l in zip(probs, logs))
    var_log = math.fsum(p * (l - mean_log) ** 2 for p, l in zip(probs, logs))
    return mean_gain, var_gain, var_log


def grid_log_growth(atoms, grid):
    """g evaluated on a grid straight from the atoms (-inf where some 1 + Kx <= 0)."""
    xs = np.array([x for x, _ in atoms])
    ps = np.array([p for _, p in atoms])
    kx = np.asarray(grid)[:, None] * xs
    with np.errstate(divide="ignore", invalid="ignore"):
        vals = (ps * np.log(1.0 + kx)).sum(axis=1)
    return np.where((1.0 + kx > 0).all(axis=1), vals, -np.inf)


def feasible_grid(atoms, n_points=10_000, constraint=(-math.inf, math.inf)):
    """Grid over the closed constraint intersected with the open survival interval."""
    xs = [x for x, _ in atoms]
    lower = -1.0 / max(xs) if max(xs) > 0 else -math.inf
    upper = 1.0 / abs(min(xs)) if min(xs) < 0 else math.inf
    lo, hi = max(constraint[0], lower), min(constraint[1], upper)
    grid = np.linspace(lo, hi, n_points + 2)
    # drop open endpoints coming from the survival interval
    keep = (grid > lower) & (grid < upper)
    return grid[keep]

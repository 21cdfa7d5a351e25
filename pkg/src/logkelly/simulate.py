"""Seeded Monte Carlo engine for ``V(k+1) = (1 + K X(k)) V(k)``.

Random streams
--------------
Path ``i`` owns a SplitMix64 stream whose starting state is the ``i``-th
output of a SplitMix64 generator seeded with ``seed``::

    mix(z)      = SplitMix64 finalizer (shifts 30/27/31, multipliers
                  0xBF58476D1CE4E5B9 and 0x94D049BB133111EB)
    state_i     = mix(seed + (i + 1) * GAMMA)          GAMMA = 0x9E3779B97F4A7C15
    word(i, k)  = mix(state_i + (k + 1) * GAMMA)       k = 0, 1, ... stage index
    u(i, k)     = (word(i, k) >> 11) * 2**-53          uniform on [0, 1)

All arithmetic is modulo 2**64.  Every draw is a pure function of
``(seed, i, k)``, so results do not depend on thread count, chunking or
platform.  A uniform ``u`` selects atom ``j`` when ``c[j-1] < u <= c[j]``
(``c`` the cumulative probabilities, right-closed cells).
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .distribution import ReturnDistribution
from .errors import KellyError

GAMMA = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
QUANTILE_LEVELS = (0.01, 0.25, 0.5, 0.75, 0.99)
_ENUMERATION_LIMIT = 20


def _mix(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * _M1
    z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


def path_states(seed: int, paths: np.ndarray) -> np.ndarray:
    with np.errstate(over="ignore"):
        idx = np.asarray(paths, dtype=np.uint64)
        return _mix(np.uint64(seed) + (idx + np.uint64(1)) * GAMMA)


def stage_uniforms(states: np.ndarray, stage: int) -> np.ndarray:
    """Uniforms on [0, 1) for one stage of every path whose state is in ``states``."""
    with np.errstate(over="ignore"):
        words = _mix(states + np.uint64(stage + 1) * GAMMA)
    return (words >> np.uint64(11)).astype(np.float64) * (1.0 / 9007199254740992.0)


@dataclass(frozen=True)
class SimulationConfig:
    k: float
    horizon: int
    v0: float = 1.0
    paths: int = 10_000
    seed: int = 0

    def __post_init__(self):
        if not math.isfinite(self.k):
            raise KellyError(f"gain must be finite, got {self.k!r}")
        if int(self.horizon) != self.horizon or self.horizon < 1:
            raise KellyError(f"horizon must be a positive integer, got {self.horizon!r}")
        if int(self.paths) != self.paths or self.paths < 1:
            raise KellyError(f"paths must be a positive integer, got {self.paths!r}")
        if not (self.v0 > 0.0 and math.isfinite(self.v0)):
            raise KellyError(f"initial account value must be positive, got {self.v0!r}")
        if int(self.seed) != self.seed or not 0 <= self.seed < 2**64:
            raise KellyError(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")


@dataclass(frozen=True)
class SimulationResult:
    """Summary of a run.

    Gain statistics cover every path.  Log-growth statistics cover only the
    surviving paths (``surviving_paths`` of them); the mean is per stage, the
    variance is of the total log ratio ``log V(N)/V(0)``.  Variances use the
    ``n - 1`` denominator.
    """

    empirical_gain_mean: float
    empirical_gain_variance: float
    empirical_log_growth_mean: float
    empirical_log_growth_variance: float
    min_account_value: float
    ruin_paths: int
    terminal_quantiles: dict[float, float]
    paths: int
    surviving_paths: int
    gain_mean_stderr: float
    gain_variance_stderr: float
    log_growth_mean_stderr: float
    terminal_values: np.ndarray = field(repr=False, compare=False)
    ruined: np.ndarray = field(repr=False, compare=False)

    @property
    def ruin_fraction(self) -> float:
        return self.ruin_paths / self.paths


def _simulate_chunk(cum: np.ndarray, values: np.ndarray, cfg: SimulationConfig, start: int, stop: int):
    states = path_states(cfg.seed, np.arange(start, stop, dtype=np.uint64))
    n = stop - start
    v = np.full(n, float(cfg.v0))
    low = v.copy()
    log_ratio = np.zeros(n)
    ruined = np.zeros(n, dtype=bool)
    last = len(values) - 1
    for stage in range(cfg.horizon):
        u = stage_uniforms(states, stage)
        j = np.minimum(np.searchsorted(cum, u, side="left"), last)
        factor = 1.0 + cfg.k * values[j]
        v = v * factor
        np.minimum(low, v, out=low)
        dead = factor <= 0.0
        ruined |= dead
        with np.errstate(divide="ignore", invalid="ignore"):
            log_ratio += np.where(dead, 0.0, np.log(np.where(dead, 1.0, factor)))
    return v, low, log_ratio, ruined


def _variance_and_stderr(x: np.ndarray) -> tuple[float, float]:
    n = x.size
    if n < 2:
        return 0.0, math.nan
    centred = x - x.mean()
    var = float(np.dot(centred, centred) / (n - 1))
    m4 = float(np.mean(centred**4))
    m2 = float(np.mean(centred**2))
    return var, math.sqrt(max(m4 - m2 * m2, 0.0) / n)


def simulate_paths(d: ReturnDistribution, cfg: SimulationConfig, workers: int = 1) -> SimulationResult:
    """Run ``cfg.paths`` independent account paths; ``workers`` threads share the paths.

    Ruin (some V(k) <= 0) is reported, not raised; a ruined path keeps
    following the recursion so the gain statistics stay unbiased.
    """
    if workers < 1:
        raise KellyError(f"workers must be >= 1, got {workers}")
    values = np.asarray(d.values)
    cum = np.cumsum(d.probs)
    cum[-1] = 1.0

    bounds = np.linspace(0, cfg.paths, min(workers, cfg.paths) + 1).astype(int)
    chunks = list(zip(bounds[:-1], bounds[1:]))
    if len(chunks) == 1:
        parts = [_simulate_chunk(cum, values, cfg, *chunks[0])]
    else:
        with ThreadPoolExecutor(max_workers=len(chunks)) as pool:
            parts = list(pool.map(lambda c: _simulate_chunk(cum, values, cfg, *c), chunks))
    terminal, low, log_ratio, ruined = (np.concatenate(cols) for cols in zip(*parts))

    gain = terminal - cfg.v0
    gain_var, gain_var_se = _variance_and_stderr(gain)
    alive = log_ratio[~ruined]
    if alive.size:
        log_mean = float(alive.mean()) / cfg.horizon
        log_var, _ = _variance_and_stderr(alive)
        log_mean_se = math.sqrt(log_var / alive.size) / cfg.horizon
    else:
        log_mean = log_var = log_mean_se = math.nan

    quantiles = np.quantile(terminal, QUANTILE_LEVELS)
    terminal.flags.writeable = False
    ruined.flags.writeable = False
    return SimulationResult(
        empirical_gain_mean=float(gain.mean()),
        empirical_gain_variance=gain_var,
        empirical_log_growth_mean=log_mean,
        empirical_log_growth_variance=log_var,
        min_account_value=float(low.min()),
        ruin_paths=int(ruined.sum()),
        terminal_quantiles={q: float(v) for q, v in zip(QUANTILE_LEVELS, quantiles)},
        paths=cfg.paths,
        surviving_paths=int(alive.size),
        gain_mean_stderr=math.sqrt(gain_var / cfg.paths) if cfg.paths > 1 else math.nan,
        gain_variance_stderr=gain_var_se,
        log_growth_mean_stderr=log_mean_se,
        terminal_values=terminal,
        ruined=ruined,
    )


def _enumerated_survival(factors: tuple[float, float], horizon: int) -> bool:
    # Walk every sequence over {X_min, X_max}; only the sign of V(k) matters,
    # so track signs (V(0) > 0) to stay clear of under/overflow.
    signs = np.ones(1)
    step = np.sign(np.array(factors))
    for _ in range(horizon):
        signs = np.concatenate([signs * step[0], signs * step[1]])
        if np.any(signs <= 0.0):
            return False
    return True


def worst_case_survival(d: ReturnDistribution, k: float, horizon: int) -> bool:
    """True iff V(k) > 0 at every stage up to ``horizon`` on every sample path.

    The affine step means the extreme atoms are the worst case, so the answer
    is ``1 + k X_min > 0 and 1 + k X_max > 0``.  For horizons up to 20 all
    2**N extreme-atom sequences are also enumerated and must agree.
    """
    if int(horizon) != horizon or horizon < 1:
        raise KellyError(f"horizon must be a positive integer, got {horizon!r}")
    factors = (1.0 + k * d.x_min, 1.0 + k * d.x_max)
    per_step = factors[0] > 0.0 and factors[1] > 0.0
    if horizon <= _ENUMERATION_LIMIT:
        enumerated = _enumerated_survival(factors, horizon)
        if enumerated != per_step:
            raise AssertionError(f"survival routes disagree for k={k!r}: enumerated={enumerated}, per-step={per_step}")
    return per_step

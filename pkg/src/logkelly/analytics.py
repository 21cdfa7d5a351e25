"""Closed-form performance and risk quantities for a constant feedback gain.

Everything here is an exact finite sum over the atoms of the return law; the
only stochastic check of these formulas lives in :mod:`logkelly.simulate`.

Powers such as ``(1 + K mu)^N - 1`` are evaluated as
``expm1(N * log1p(K mu))`` so that small gains do not lose their digits to
cancellation and very long horizons overflow to ``inf`` instead of raising.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .distribution import ReturnDistribution, mean, second_moment, variance
from .errors import DegenerateZeroReturn, DenominatorNonPositive, KellyError, OutsideSurvivalInterval, ZeroVariance
from .growth import survival_interval


@dataclass(frozen=True)
class GainStats:
    expected_gain: float
    gain_variance: float
    horizon: int
    v0: float
    k: float


def _exp(x: float) -> float:
    try:
        return math.exp(x)
    except OverflowError:
        return math.inf


def _power_minus_one(a: float, n: int) -> float:
    """(1 + a)^n - 1 without cancellation for small a."""
    if a > -1.0:
        t = n * math.log1p(a)
        if t > 709.0:
            return math.inf
        return math.expm1(t)
    base = 1.0 + a
    if base == 0.0:
        return -1.0
    mag = _exp(n * math.log(abs(base)))
    return (-mag if n % 2 else mag) - 1.0


def _check_horizon(n: int, v0: float = 1.0) -> None:
    if int(n) != n or n < 1:
        raise KellyError(f"horizon must be a positive integer, got {n!r}")
    if not v0 > 0.0:
        raise KellyError(f"initial account value must be positive, got {v0!r}")


def _check_interior(d: ReturnDistribution, k: float, name: str = "gain") -> None:
    interval = survival_interval(d)
    if not interval.contains(k):
        raise OutsideSurvivalInterval(f"{name} {k!r} is not inside the survival interval {interval}")


def best_performance_bound(d: ReturnDistribution) -> float:
    """Upper bound log(1 + mu^2 / (mu^2 + sigma^2)) on g at the Taylor gain; never above log 2."""
    m2 = second_moment(d)
    if m2 == 0.0:
        raise DegenerateZeroReturn("E[X^2] = 0: the return is identically zero")
    return math.log1p(mean(d) ** 2 / m2)


def merton_performance_bound(d: ReturnDistribution) -> float:
    var = variance(d)
    if var == 0.0:
        raise ZeroVariance("variance is zero; the mu / sigma^2 bound is undefined")
    return math.log1p(mean(d) ** 2 / var)


def jensen_bound(d: ReturnDistribution, k: float) -> float:
    """log(1 + K mu), which bounds g(K) from above for any surviving K."""
    km = k * mean(d)
    return math.log1p(km) if km > -1.0 else -math.inf


def expected_gain(d: ReturnDistribution, k: float, n: int, v0: float) -> float:
    """E[V(N) - V(0)] = ((1 + K mu)^N - 1) V(0).

    Valid for any finite K; whether K survives is the caller's business.
    """
    _check_horizon(n, v0)
    return _power_minus_one(k * mean(d), n) * v0


def gain_variance(d: ReturnDistribution, k: float, n: int, v0: float) -> float:
    """var(V(N) - V(0)) = ((mu_K^2 + sigma_K^2)^N - mu_K^(2N)) V(0)^2.

    Here mu_K = 1 + K mu and sigma_K = K sigma.  Evaluated as
    ``mu_K^(2N) * ((1 + sigma_K^2 / mu_K^2)^N - 1)``, which is never negative.
    """
    _check_horizon(n, v0)
    mu_k = 1.0 + k * mean(d)
    s2_k = k * k * variance(d)
    if s2_k == 0.0:
        return 0.0
    if mu_k == 0.0:
        return _exp(n * math.log(s2_k) + 2.0 * math.log(v0))
    spread = _power_minus_one(s2_k / (mu_k * mu_k), n)
    if spread == 0.0:
        return 0.0
    if math.isinf(spread):
        return math.inf
    return _exp(2.0 * n * math.log(abs(mu_k)) + math.log(spread) + 2.0 * math.log(v0))


def gain_variance_taylor(d: ReturnDistribution, n: int, v0: float) -> float:
    """Gain variance at K = mu / E[X^2], written purely in mu and sigma^2.

    ``((4mu^2 + s^2) / (mu^2 + s^2))^N - ((2mu^2 + s^2) / (mu^2 + s^2))^(2N)``
    times V(0)^2.  Kept as an independent algebraic route to :func:`gain_variance`.
    """
    _check_horizon(n, v0)
    mu2, s2 = mean(d) ** 2, variance(d)
    m2 = mu2 + s2
    if m2 == 0.0:
        raise DegenerateZeroReturn("E[X^2] = 0: the return is identically zero")
    return (((4.0 * mu2 + s2) / m2) ** n - ((2.0 * mu2 + s2) / m2) ** (2 * n)) * v0 * v0


def gain_stats(d: ReturnDistribution, k: float, n: int, v0: float) -> GainStats:
    return GainStats(expected_gain(d, k, n, v0), gain_variance(d, k, n, v0), n, v0, k)


def log_growth_variance(d: ReturnDistribution, k: float, n: int) -> float:
    """var(log V(N)/V(0)) = N (E[log^2(1 + K X)] - g(K)^2).

    Computed as the centred sum ``N * sum p (log(1 + K x) - g)^2``.
    """
    _check_horizon(n)
    _check_interior(d, k)
    logs = [(math.log1p(k * x), p) for x, p in d.atoms]
    g = math.fsum(p * l for l, p in logs)
    return n * math.fsum(p * (l - g) ** 2 for l, p in logs)


def gap_upper_bound(d: ReturnDistribution, k_star: float, k_approx: float) -> float:
    """Jensen bound log E[(1 + K* X) / (1 + K_approx X)] on g(K*) - g(K_approx).

    Exactly 0 when the two gains coincide.
    """
    _check_interior(d, k_star, "k_star")
    _check_interior(d, k_approx, "k_approx")
    if k_star == k_approx:
        return 0.0
    # (1 + a x)/(1 + b x) = 1 + (a - b) x / (1 + b x)
    slope = math.fsum(p * x / (1.0 + k_approx * x) for x, p in d.atoms)
    return math.log1p((k_star - k_approx) * slope)


def fractional_vertex_bound(k_star: float, k_approx: float, x_min: float, x_max: float) -> float:
    """Maximum of (1 + K* z) / (1 + K_approx z) over z in [x_min, x_max].

    With a positive denominator this Mobius map is monotone in z, so the
    linear-fractional program is solved by comparing the two endpoints.
    """
    if x_min > x_max:
        raise KellyError(f"empty support interval [{x_min!r}, {x_max!r}]")
    for z in (x_min, x_max):
        if not 1.0 + k_approx * z > 0.0:
            raise DenominatorNonPositive(f"1 + {k_approx!r} * {z!r} is not positive")
    if k_star == k_approx:
        return 1.0
    diff = k_star - k_approx
    return max(1.0 + diff * z / (1.0 + k_approx * z) for z in (x_min, x_max))


def expected_gain_monotone_check(d: ReturnDistribution, k: float, n_max: int) -> bool:
    """True iff the expected gain (V(0) = 1) is nonnegative and nondecreasing on N = 1..n_max."""
    if int(n_max) != n_max or n_max < 2:
        raise KellyError(f"n_max must be an integer >= 2, got {n_max!r}")
    gains = [expected_gain(d, k, n, 1.0) for n in range(1, n_max + 1)]
    return all(later >= earlier >= 0.0 for earlier, later in zip(gains, gains[1:]))

"""Second-order (quadratic) approximation of the log-growth objective.

Expanding log(1 + K X) around K = 0 gives ``K mu - K^2 E[X^2] / 2``, whose
maximizer is the closed-form gain ``mu / E[X^2]``.  That gain need not keep the
account alive, so :func:`saturate` clamps it back into the survival interval.
"""

from __future__ import annotations

from .distribution import ReturnDistribution, mean, second_moment, variance
from .errors import DegenerateZeroReturn, ZeroVariance
from .growth import ENDPOINT_MARGIN, SurvivalInterval


def quadratic_objective(d: ReturnDistribution, k: float) -> float:
    return k * mean(d) - 0.5 * k * k * second_moment(d)


def kelly_taylor(d: ReturnDistribution) -> float:
    """mu / E[X^2], equivalently mu / (mu^2 + sigma^2)."""
    m2 = second_moment(d)
    if m2 == 0.0:
        raise DegenerateZeroReturn("E[X^2] = 0: the return is identically zero")
    return mean(d) / m2


def kelly_merton(d: ReturnDistribution) -> float:
    """mu / sigma^2, the variant that replaces E[X^2] with the variance."""
    var = variance(d)
    if var == 0.0:
        raise ZeroVariance("variance is zero; mu / sigma^2 is undefined for a riskless return")
    return mean(d) / var


def saturate(k: float, interval: SurvivalInterval, margin: float = ENDPOINT_MARGIN) -> float:
    """Clamp ``k`` to the survival interval shrunk by a relative ``margin``.

    The result is strictly inside the open interval, so 1 + k x > 0 for every
    atom.  Infinite endpoints never clamp.
    """
    lo, hi = interval.shrunk(margin)
    if k < lo:
        return lo
    if k > hi:
        return hi
    return k


def taylor_peak_value(d: ReturnDistribution) -> float:
    """Value of the quadratic at its vertex, mu^2 / (2 E[X^2])."""
    m2 = second_moment(d)
    if m2 == 0.0:
        raise DegenerateZeroReturn("E[X^2] = 0: the return is identically zero")
    return mean(d) ** 2 / (2.0 * m2)

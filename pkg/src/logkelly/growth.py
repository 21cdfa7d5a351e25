"""Expected log-growth g(K) = E[log(1 + K X)] and its exact maximization.

The account evolves as ``V(k+1) = (1 + K X(k)) V(k)``.  A gain K keeps every
sample path strictly positive iff ``-1/X_max < K < 1/|X_min|``; that open set
is the :class:`SurvivalInterval`.  On it g is strictly concave (two or more
atoms), so the maximizer is found by bisection on the sign of g'.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .distribution import ReturnDistribution, mean
from .errors import (
    EmptyFeasibleSet,
    OutsideSurvivalInterval,
    SupportOutOfUnitRange,
    UnboundedObjective,
)

ENDPOINT_MARGIN = 1e-9
BRACKET_WIDTH = 1e-12
MAX_DOUBLINGS = 200
_MAX_BISECTIONS = 4000


@dataclass(frozen=True)
class SurvivalInterval:
    """Open interval ``(lower, upper)`` of gains that can never ruin the account."""

    lower: float
    upper: float

    def contains(self, k: float) -> bool:
        return self.lower < k < self.upper

    def shrunk(self, margin: float = ENDPOINT_MARGIN) -> tuple[float, float]:
        """Endpoints pulled inward by ``margin * max(1, |endpoint|)``; infinities are kept."""
        lo, hi = self.lower, self.upper
        if math.isfinite(lo):
            lo = lo + margin * max(1.0, abs(lo))
        if math.isfinite(hi):
            hi = hi - margin * max(1.0, abs(hi))
        return lo, hi

    def __str__(self) -> str:
        return f"({self.lower:.12g}, {self.upper:.12g})"


@dataclass(frozen=True)
class OptimizationResult:
    k_star: float
    g_star: float
    bracket: tuple[float, float]
    at_constraint_boundary: bool
    iterations: int


class Attractiveness(enum.Enum):
    FULL_LONG = "FullLong"
    FULL_SHORT = "FullShort"
    INCONCLUSIVE = "Inconclusive"


def survival_interval(d: ReturnDistribution) -> SurvivalInterval:
    x_min, x_max = d.x_min, d.x_max
    lower = -1.0 / x_max if x_max > 0 else -math.inf
    upper = 1.0 / abs(x_min) if x_min < 0 else math.inf
    return SurvivalInterval(lower, upper)


def log_growth(d: ReturnDistribution, k):
    """g(K) = sum p_i log(1 + K x_i); ``-inf`` where some atom gives 1 + K x_i <= 0.

    Accepts a scalar or an array of gains.
    """
    ks = np.asarray(k, dtype=np.float64)
    kx = ks[..., None] * d.values
    with np.errstate(divide="ignore", invalid="ignore"):
        logs = np.log1p(kx)
    out = np.where(np.all(kx > -1.0, axis=-1), np.sum(d.probs * logs, axis=-1), -np.inf)
    return float(out) if out.ndim == 0 else out


def log_growth_derivative(d: ReturnDistribution, k):
    """g'(K) = sum p_i x_i / (1 + K x_i), defined strictly inside the survival interval."""
    ks = np.asarray(k, dtype=np.float64)
    interval = survival_interval(d)
    if not np.all((ks > interval.lower) & (ks < interval.upper)):
        raise OutsideSurvivalInterval(f"gain {k} is not inside the survival interval {interval}")
    out = np.sum(d.probs * d.values / (1.0 + ks[..., None] * d.values), axis=-1)
    return float(out) if out.ndim == 0 else out


def _slope(d: ReturnDistribution, k: float) -> float:
    # Unchecked scalar g'; callers guarantee k is inside the survival interval.
    return math.fsum(p * x / (1.0 + k * x) for x, p in d.atoms)


def solve_exact(
    d: ReturnDistribution,
    constraint: tuple[float, float] = (-math.inf, math.inf),
) -> OptimizationResult:
    """Maximize g over ``[lo, hi]`` intersected with the survival interval.

    ``constraint`` is a closed interval; either end may be infinite.

    Raises:
        EmptyFeasibleSet: the constraint misses the survival interval.
        UnboundedObjective: g increases without bound along an unconstrained
            direction (every atom on one side of zero).
    """
    lo, hi = float(constraint[0]), float(constraint[1])
    interval = survival_interval(d)
    if math.isnan(lo) or math.isnan(hi) or lo > hi or lo >= interval.upper or hi <= interval.lower:
        raise EmptyFeasibleSet(f"constraint [{lo:.12g}, {hi:.12g}] does not meet survival interval {interval}")

    s_lo, s_hi = interval.shrunk()
    a, b = max(lo, s_lo), min(hi, s_hi)
    if a > b:
        # Feasible set is thinner than the endpoint margin.
        raise EmptyFeasibleSet(f"constraint [{lo:.12g}, {hi:.12g}] only touches survival interval {interval}")

    def result(k, bracket, boundary, iterations):
        return OptimizationResult(k, log_growth(d, k), bracket, boundary, iterations)

    def boundary_flag(k):
        return k == lo or k == hi

    if len(d) == 1 and d.x_min == 0.0:
        k = min(max(0.0, a), b)
        return result(k, (a, b), boundary_flag(k) and k != 0.0, 0)
    if mean(d) == 0.0 and a <= 0.0 <= b:
        return result(0.0, (a, b), False, 0)

    # Left anchor: need g' > 0 there, otherwise the max sits at the left end.
    if math.isfinite(a):
        left = a
        if _slope(d, a) <= 0.0:
            return result(a, (a, a), boundary_flag(a), 0)
    else:
        anchor, step = min(0.0, b), 1.0
        for _ in range(MAX_DOUBLINGS):
            left = anchor - step
            if _slope(d, left) > 0.0:
                break
            step *= 2.0
        else:
            raise UnboundedObjective("g keeps increasing as K decreases; add a finite lower constraint")

    if math.isfinite(b):
        right = b
        if _slope(d, b) >= 0.0:
            return result(b, (b, b), boundary_flag(b), 0)
    else:
        anchor, step = max(0.0, a), 1.0
        for _ in range(MAX_DOUBLINGS):
            right = anchor + step
            if _slope(d, right) < 0.0:
                break
            step *= 2.0
        else:
            raise UnboundedObjective("g keeps increasing as K grows; add a finite upper constraint")

    iterations = 0
    while right - left > BRACKET_WIDTH and iterations < _MAX_BISECTIONS:
        mid = 0.5 * (left + right)
        if mid <= left or mid >= right:
            break  # float resolution reached
        iterations += 1
        s = _slope(d, mid)
        if s > 0.0:
            left = mid
        elif s < 0.0:
            right = mid
        else:
            left = right = mid
    k = 0.5 * (left + right)
    return result(k, (left, right), False, iterations)


def attractiveness_check(d: ReturnDistribution) -> Attractiveness:
    """Cash-financed (K in [-1, 1]) corner test.

    FULL_LONG when E[1/(1+X)] <= 1 (K* = 1), FULL_SHORT when E[1/(1-X)] <= 1
    (K* = -1).  Requires every atom strictly inside (-1, 1).
    """
    if not (-1.0 < d.x_min and d.x_max < 1.0):
        raise SupportOutOfUnitRange(f"support [{d.x_min:g}, {d.x_max:g}] is not inside (-1, 1)")
    if math.fsum(p / (1.0 + x) for x, p in d.atoms) <= 1.0:
        return Attractiveness.FULL_LONG
    if math.fsum(p / (1.0 - x) for x, p in d.atoms) <= 1.0:
        return Attractiveness.FULL_SHORT
    return Attractiveness.INCONCLUSIVE

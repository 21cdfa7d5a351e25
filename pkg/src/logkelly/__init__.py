"""Log-optimal (Kelly) betting with a constant feedback gain.

The account follows ``V(k+1) = (1 + K X(k)) V(k)`` with i.i.d. returns drawn
from a finite discrete law.  The package solves for the exact growth-optimal
gain, the Taylor approximate gain and its saturated version, evaluates the
closed-form gain/variance/log-growth statistics, and checks all of them with a
seeded Monte Carlo simulator.
"""

from .analytics import (
    GainStats,
    best_performance_bound,
    expected_gain,
    expected_gain_monotone_check,
    fractional_vertex_bound,
    gain_stats,
    gain_variance,
    gain_variance_taylor,
    gap_upper_bound,
    jensen_bound,
    log_growth_variance,
    merton_performance_bound,
)
from .approx import kelly_merton, kelly_taylor, quadratic_objective, saturate, taylor_peak_value
from .distribution import (
    ReturnDistribution,
    estimate_from_samples,
    from_atoms,
    mean,
    parse_distribution,
    read_distribution,
    second_moment,
    support_bounds,
    variance,
)
from .errors import *  # noqa: F403
from .growth import (
    Attractiveness,
    OptimizationResult,
    SurvivalInterval,
    attractiveness_check,
    log_growth,
    log_growth_derivative,
    solve_exact,
    survival_interval,
)
from .simulate import SimulationConfig, SimulationResult, simulate_paths, worst_case_survival

__version__ = "0.1.0"

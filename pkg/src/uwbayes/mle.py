"""Maximum-likelihood estimation of the Unit-Weibull shape pair.

The alpha score ``n/alpha - S_0(beta)`` vanishes at ``alpha = n/S_0(beta)``,
so the problem profiles down to one equation in beta,

    g(beta) = n/beta + sum(ln z_i) - n * S_1(beta) / S_0(beta) = 0,

solved by bracketing on a log grid followed by a safeguarded root solve
and a Newton polish.  The fit is pure likelihood; prior information enters
only the posterior-mode machinery elsewhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .dgos import DgosSample, DgosScheme, DgosStats
from .distribution import UwParams
from .errors import DegenerateSample, NoConvergence

__all__ = ["MleResult", "score", "fit_mle"]

_BETA_LO = 1e-3
_BETA_HI = 1e3


@dataclass(frozen=True)
class MleResult:
    params: UwParams
    converged: bool
    iterations: int
    score_norm: float


def score(
    sample: DgosSample, scheme: DgosScheme, p: UwParams, stats: DgosStats | None = None
) -> tuple[float, float]:
    """Gradient of the log-likelihood at ``p``.

    Components are ``n/alpha - S_0(beta)`` and
    ``n/beta + sum(ln z_i) - alpha * S_1(beta)``.
    """
    if stats is None:
        stats = DgosStats(sample, scheme)
    return (
        stats.n / p.alpha - stats.weighted_power_sum(p.beta),
        stats.n / p.beta
        + stats.sum_log_z
        - p.alpha * stats.weighted_power_sum(p.beta, 1),
    )


def _profile_score(stats: DgosStats, beta: float) -> float:
    # Ratio form stays finite across the whole bracket scan.
    return stats.n / beta + stats.sum_log_z - stats.n * stats.power_sum_ratio(beta, 1)


def _profile_score_derivative(stats: DgosStats, beta: float) -> float:
    r1 = stats.power_sum_ratio(beta, 1)
    r2 = stats.power_sum_ratio(beta, 2)
    return -stats.n / beta**2 - stats.n * (r2 - r1 * r1)


def fit_mle(
    sample: DgosSample,
    scheme: DgosScheme,
    tolerance: float = 1e-8,
    max_iterations: int = 200,
) -> MleResult:
    """Fit ``(alpha, beta)`` by profiling alpha out of the likelihood.

    Raises
    ------
    DegenerateSample
        For ``n < 2`` or when all ``ln z_i`` coincide, in which case the
        profiled equation has no interior root.
    NoConvergence
        When no sign change is found on ``beta in [1e-3, 1e3]`` or the
        polish stalls above ``tolerance``.
    """
    stats = DgosStats(sample, scheme)
    if stats.n < 2:
        raise DegenerateSample("at least two observations are required")
    if float(np.ptp(stats.log_z)) < 1e-12:
        raise DegenerateSample("all transformed observations coincide")

    grid = np.geomspace(_BETA_LO, _BETA_HI, 61)
    values = [_profile_score(stats, b) for b in grid]
    bracket = None
    for left, right, f_left, f_right in zip(grid, grid[1:], values, values[1:]):
        if f_left == 0.0:
            bracket = (left, left)
            break
        if f_left * f_right < 0.0:
            bracket = (left, right)
            break
    if bracket is None:
        if values[-1] == 0.0:
            bracket = (grid[-1], grid[-1])
        else:
            raise NoConvergence(
                "no sign change of the profiled score on the search interval"
            )

    iterations = len(grid)
    if bracket[0] == bracket[1]:
        beta = bracket[0]
    else:
        beta, info = brentq(
            lambda b: _profile_score(stats, b),
            bracket[0],
            bracket[1],
            xtol=1e-13,
            maxiter=max_iterations,
            full_output=True,
        )
        iterations += info.iterations

    # Newton polish: brentq already lands near the root, so a handful of
    # steps reaches the floating-point floor of the profiled score.
    for _ in range(8):
        g = _profile_score(stats, beta)
        dg = _profile_score_derivative(stats, beta)
        step = g / dg
        if not math.isfinite(step) or abs(step) >= 0.5 * beta:
            break
        beta -= step
        iterations += 1
        if abs(step) < 1e-15 * beta:
            break

    alpha = stats.n / stats.weighted_power_sum(beta)
    params = UwParams(alpha=alpha, beta=beta)
    g_alpha, g_beta = score(sample, scheme, params, stats)
    norm = math.hypot(g_alpha, g_beta)
    if not (math.isfinite(norm) and norm < tolerance):
        raise NoConvergence(f"score norm {norm:.3e} above tolerance at the root")
    return MleResult(params=params, converged=True, iterations=iterations, score_norm=norm)

"""The Unit-Weibull law on (0, 1).

A Weibull variable pushed through ``x = exp(-y)`` lands on the unit
interval with distribution function ``F(x) = exp(-alpha * (-ln x)**beta)``
and two positive shape parameters.  Special cases: ``alpha = beta = 1`` is
the standard uniform, ``beta = 1`` the power-function law ``x**alpha`` and
``beta = 2`` the unit-Rayleigh law.

All functions are pure; random draws consume an explicit
``numpy.random.Generator``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

__all__ = [
    "UwParams",
    "ReliabilityQuery",
    "pdf",
    "cdf",
    "log_pdf",
    "quantile",
    "reliability",
    "sample_iid",
]


@dataclass(frozen=True)
class UwParams:
    """Shape-parameter pair of the Unit-Weibull law, both strictly positive."""

    alpha: float
    beta: float

    def __post_init__(self):
        for name in ("alpha", "beta"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0.0):
                raise DomainError(f"{name} must be a positive finite real, got {value!r}")


@dataclass(frozen=True)
class ReliabilityQuery:
    """Evaluation time for the survival probability, inside (0, 1)."""

    t: float

    def __post_init__(self):
        if not (math.isfinite(self.t) and 0.0 < self.t < 1.0):
            raise DomainError(f"reliability time must lie in (0, 1), got {self.t!r}")


def _check_unit_open(x: float, name: str = "x") -> float:
    x = float(x)
    if not (0.0 < x < 1.0):
        raise DomainError(f"{name} must lie in the open interval (0, 1), got {x!r}")
    return x


def log_pdf(x: float, p: UwParams) -> float:
    """Natural logarithm of the density at ``x``.

    The factor ``(-ln x)**(beta - 1)`` is evaluated in log space so the
    density stays finite-representable arbitrarily close to the endpoints.
    """
    x = _check_unit_open(x)
    z = -math.log(x)
    log_z = math.log(z)
    return (
        -math.log(x)
        + math.log(p.alpha)
        + math.log(p.beta)
        + (p.beta - 1.0) * log_z
        - p.alpha * math.exp(p.beta * log_z)
    )


def pdf(x: float, p: UwParams) -> float:
    """Density ``(1/x) * alpha * beta * (-ln x)**(beta-1) * exp(-alpha (-ln x)**beta)``."""
    try:
        return math.exp(log_pdf(x, p))
    except OverflowError:
        return math.inf


def cdf(x: float, p: UwParams) -> float:
    """Distribution function ``exp(-alpha * (-ln x)**beta)``."""
    x = _check_unit_open(x)
    z = -math.log(x)
    return math.exp(-p.alpha * math.exp(p.beta * math.log(z)))


def quantile(u: float, p: UwParams) -> float:
    """Inverse of :func:`cdf`: ``exp(-(-ln(u)/alpha)**(1/beta))``."""
    u = _check_unit_open(u, "u")
    return math.exp(-((-math.log(u)) / p.alpha) ** (1.0 / p.beta))


def reliability(t: float | ReliabilityQuery, p: UwParams) -> float:
    """Survival probability ``1 - cdf(t)`` for ``t`` in (0, 1)."""
    if isinstance(t, ReliabilityQuery):
        t = t.t
    return 1.0 - cdf(t, p)


def sample_iid(rng: np.random.Generator, p: UwParams, count: int) -> np.ndarray:
    """Draw ``count`` independent variates by inverse-transform sampling."""
    if count < 1:
        raise DomainError(f"count must be a positive integer, got {count!r}")
    u = rng.random(count)
    # rng.random() can return exactly 0.0; nudge into the open interval.
    tiny = np.nextafter(0.0, 1.0)
    u = np.where(u == 0.0, tiny, u)
    return np.exp(-((-np.log(u)) / p.alpha) ** (1.0 / p.beta))

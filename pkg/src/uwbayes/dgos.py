"""Descending ordered-observation schemes and their Unit-Weibull likelihood.

A scheme is the triple ``(n, k, m)`` with weights
``gamma_r = k + n - r + sum(m[r-1:])`` that unifies several models of
ordered data arranged in decreasing magnitude: ``m = 0, k = 1`` gives the
reversed order statistics of an iid sample, ``m = -1, k = 1`` gives the
ordinary lower record values, and general ``(m, k)`` covers the rest of
the family.

The log-likelihood of a descending sample ``x`` under the Unit-Weibull
parent factors through the weighted power sums

    S_j(beta) = sum_i w_i * z_i**beta * (ln z_i)**j,   z_i = -ln x_i,

with weights ``w_i = m_i + 1`` for the first ``n - 1`` positions and
``w_n = k``.  :class:`DgosStats` precomputes everything the likelihood,
score and Hessian evaluations share.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .distribution import UwParams
from .errors import DomainError, InvalidScheme

__all__ = [
    "DgosScheme",
    "DgosSample",
    "DgosStats",
    "scheme_order_statistics",
    "scheme_lower_records",
    "scheme_general",
    "scheme_by_name",
    "SCHEME_NAMES",
    "sample_dgos",
    "log_likelihood",
    "sample_to_csv",
    "sample_from_csv",
]


@dataclass(frozen=True)
class DgosScheme:
    """Configuration ``(n, k, m)`` with derived positive weights ``gamma``."""

    n: int
    k: float
    m: tuple[float, ...]
    gamma: tuple[float, ...] = field(init=False)

    def __post_init__(self):
        if self.n < 1:
            raise InvalidScheme(f"n must be at least 1, got {self.n}")
        if not (math.isfinite(self.k) and self.k > 0.0):
            raise InvalidScheme(f"k must be a positive real, got {self.k!r}")
        if self.k < 1.0:
            warnings.warn(
                f"k = {self.k} < 1 is outside the usual generalized-record range; "
                "the scheme is still valid because every gamma_r stays positive",
                UserWarning,
                stacklevel=3,
            )
        if len(self.m) != self.n - 1:
            raise InvalidScheme(
                f"m must have length n - 1 = {self.n - 1}, got {len(self.m)}"
            )
        gamma = []
        tail = 0.0  # running sum m_r + ... + m_{n-1}
        for r in range(self.n - 1, 0, -1):
            tail += self.m[r - 1]
            gamma.append(self.k + self.n - r + tail)
        gamma.reverse()
        gamma.append(float(self.k))
        if any(not (g > 0.0) for g in gamma):
            raise InvalidScheme(f"every gamma_r must be positive, got {gamma}")
        object.__setattr__(self, "gamma", tuple(gamma))


def scheme_order_statistics(n: int) -> DgosScheme:
    """Reversed order statistics of an iid sample: ``m = 0, k = 1``."""
    return DgosScheme(n=n, k=1.0, m=(0.0,) * (n - 1))


def scheme_lower_records(n: int) -> DgosScheme:
    """Ordinary lower record values: ``m = -1, k = 1`` (every gamma is 1)."""
    return DgosScheme(n=n, k=1.0, m=(-1.0,) * (n - 1))


def scheme_general(n: int, k: float, m) -> DgosScheme:
    """Arbitrary scheme; raises :class:`InvalidScheme` if any gamma_r <= 0."""
    return DgosScheme(n=n, k=float(k), m=tuple(float(v) for v in m))


#: Canonical names of the two bundled sub-models.
SCHEME_NAMES = ("order_statistics", "lower_records")


def scheme_by_name(name: str, n: int) -> DgosScheme:
    """Build one of the named sub-models for a given sample size."""
    if name == "order_statistics":
        return scheme_order_statistics(n)
    if name == "lower_records":
        return scheme_lower_records(n)
    raise InvalidScheme(f"unknown scheme name {name!r}; expected one of {SCHEME_NAMES}")


@dataclass(frozen=True)
class DgosSample:
    """A descending sample ``1 > x_1 >= x_2 >= ... >= x_n > 0``."""

    values: tuple[float, ...]

    def __post_init__(self):
        if len(self.values) == 0:
            raise DomainError("sample must contain at least one value")
        previous = 1.0
        for i, x in enumerate(self.values):
            if not (0.0 < x < 1.0):
                raise DomainError(
                    f"sample values must lie in (0, 1); position {i} is {x!r}"
                )
            if x > previous:
                raise DomainError("sample values must be non-increasing")
            previous = x

    def __len__(self) -> int:
        return len(self.values)


def sample_dgos(rng: np.random.Generator, scheme: DgosScheme, p: UwParams) -> DgosSample:
    """Generate one descending sample under ``scheme`` from the UW parent.

    Uses the uniform-product construction: with independent uniforms
    ``U_i``, the running product ``W_i = prod_{j<=i} U_j**(1/gamma_j)``
    has the joint law of the descending quantile levels, and
    ``X_i = quantile(W_i)``.  The product is accumulated in log space
    (``-ln W_i = sum (-ln U_j)/gamma_j``) which feeds the quantile
    directly and never underflows.
    """
    u = rng.random(scheme.n)
    tiny = np.nextafter(0.0, 1.0)
    u = np.where(u == 0.0, tiny, u)
    neg_log_w = np.cumsum(-np.log(u) / np.asarray(scheme.gamma))
    x = np.exp(-((neg_log_w / p.alpha) ** (1.0 / p.beta)))
    # Monotone map; enforce non-increasing order exactly despite rounding.
    x = np.minimum.accumulate(x)
    x = np.clip(x, np.nextafter(0.0, 1.0), np.nextafter(1.0, 0.0))
    return DgosSample(values=tuple(float(v) for v in x))


class DgosStats:
    """Precomputed sufficient quantities for one (sample, scheme) pair.

    Attributes
    ----------
    z : ndarray
        Transformed observations ``-ln x_i`` (positive, non-decreasing).
    log_z : ndarray
        ``ln z_i``.
    weights : ndarray
        ``(m_i + 1, ..., m_{n-1} + 1, k)``.
    sum_log_z : float
        Unweighted ``sum ln z_i`` appearing in the score for beta.
    log_scheme_const : float
        ``ln k + sum ln gamma_j`` over the first ``n - 1`` weights.
    sum_z : float
        ``sum z_i = -sum ln x_i``.
    """

    def __init__(self, sample: DgosSample, scheme: DgosScheme):
        if len(sample) != scheme.n:
            raise DomainError(
                f"sample length {len(sample)} does not match scheme n = {scheme.n}"
            )
        x = np.asarray(sample.values, dtype=float)
        self.n = scheme.n
        self.z = -np.log(x)
        self.log_z = np.log(self.z)
        self.weights = np.append(np.asarray(scheme.m, dtype=float) + 1.0, scheme.k)
        self.sum_log_z = float(np.sum(self.log_z))
        self.sum_z = float(np.sum(self.z))
        self.log_scheme_const = math.log(scheme.k) + float(
            np.sum(np.log(scheme.gamma[:-1]))
        )
        self._beta_cache: float | None = None
        self._scaled_cache: np.ndarray | None = None
        self._log_scale: float = 0.0

    def _scaled_powers(self, beta: float) -> tuple[float, np.ndarray]:
        """``z_i**beta`` with the largest power factored out.

        The sample is descending, so ``z_n`` is the largest transform and
        the factored terms never exceed 1; the scale re-enters only at
        the end, keeping the huge-beta region of bracket scans free of
        overflow.  One-slot cache: solvers evaluate several sums at the
        same beta.
        """
        if self._beta_cache != beta:
            log_powers = beta * self.log_z
            self._log_scale = float(log_powers[-1]) if beta >= 0.0 else float(log_powers[0])
            self._scaled_cache = np.exp(log_powers - self._log_scale)
            self._beta_cache = beta
        return self._log_scale, self._scaled_cache

    def weighted_power_sum(self, beta: float, log_order: int = 0) -> float:
        """``sum_i w_i * z_i**beta * (ln z_i)**log_order``.

        ``log_order = 0`` is the exponent sum multiplying alpha in the
        likelihood; orders 1..3 are its derivatives in beta.  Returns a
        signed infinity when the scale itself overflows.
        """
        log_scale, scaled = self._scaled_powers(beta)
        terms = self.weights * scaled
        if log_order:
            terms = terms * self.log_z**log_order
        total = float(np.sum(terms))
        if log_scale > 709.0:  # exp() would overflow
            return math.copysign(math.inf, total) if total != 0.0 else 0.0
        return math.exp(log_scale) * total

    def power_sum_ratio(self, beta: float, log_order: int = 1) -> float:
        """``S_j(beta) / S_0(beta)`` computed without forming either sum."""
        _, scaled = self._scaled_powers(beta)
        terms = self.weights * scaled
        return float(np.sum(terms * self.log_z**log_order) / np.sum(terms))


def log_likelihood(sample: DgosSample, scheme: DgosScheme, p: UwParams) -> float:
    """Joint log-density of the descending sample under the scheme.

    Equals ``ln k + sum ln gamma_j + n ln(alpha beta)
    + sum[(beta - 1) ln z_i + z_i] - alpha * S_0(beta)``.
    """
    stats = DgosStats(sample, scheme)
    return log_likelihood_from_stats(stats, p)


def log_likelihood_from_stats(stats: DgosStats, p: UwParams) -> float:
    return (
        stats.log_scheme_const
        + stats.n * (math.log(p.alpha) + math.log(p.beta))
        + (p.beta - 1.0) * stats.sum_log_z
        + stats.sum_z
        - p.alpha * stats.weighted_power_sum(p.beta)
    )


def sample_to_csv(sample: DgosSample, path) -> None:
    """Write the descending values as a one-column CSV with header ``x``."""
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["x"])
        for value in sample.values:
            writer.writerow([repr(value)])


def sample_from_csv(path) -> DgosSample:
    """Read a one-column CSV (header ``x``) of descending values."""
    with open(path, newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header is None or header[0].strip() != "x":
            raise DomainError(f"expected a one-column CSV with header 'x' in {path}")
        values = tuple(float(row[0]) for row in reader if row)
    return DgosSample(values=values)

"""Posterior expectations by second-order expansion around the MLE.

For a smooth target ``zeta(alpha, beta)`` the posterior expectation is
approximated by

    E[zeta | x] ~= zeta
                 + 1/2 sum_ij zeta_ij tau_ij
                 + sum_i phi_i P_i
                 + 1/2 (L111 tau11 P1 + L222 tau22 P2)
                 + 1/2 [L112 (2 tau12 P1 + tau11 P2)
                        + L122 (tau22 P1 + 2 tau12 P2)],

with ``P_r = sum_j zeta_j tau_rj``, everything evaluated at the MLE.
``tau`` is the inverse of the negated log-likelihood Hessian, ``phi`` the
log-prior gradient and ``L_ijk`` the third log-likelihood derivatives.
For this model ``L112 = 0`` identically, since the alpha curvature
``-n/alpha**2`` carries no beta dependence.

The three loss functions reuse one expectation routine with different
``zeta`` fields: the expectation itself for squared error,
``exp(-c target)`` for LINEX (then ``-(1/c) ln``), and ``target**(-c)``
for general entropy (then ``(.)**(-1/c)``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dgos import DgosSample, DgosScheme, DgosStats
from .distribution import UwParams
from .errors import ApproximationOutOfRange
from .losses import LossSpec
from .mle import MleResult, fit_mle
from .priors import GammaPriors
from .targets import FieldFn, check_target_support, exp_scaled, power_neg, target_field

__all__ = ["LindleyWorkspace", "lindley_derivatives", "lindley_expectation", "lindley_estimate"]


@dataclass(frozen=True)
class LindleyWorkspace:
    """Model-side ingredients of the expansion at one anchor point."""

    L11: float
    L12: float
    L22: float
    L111: float
    L112: float
    L122: float
    L222: float
    tau: np.ndarray  # 2x2 inverse of [-L_ij]
    phi1: float
    phi2: float


def lindley_derivatives(
    sample: DgosSample,
    scheme: DgosScheme,
    priors: GammaPriors,
    at: UwParams,
    stats: DgosStats | None = None,
) -> LindleyWorkspace:
    """Log-likelihood derivatives, their inverse curvature and the prior gradient.

    Closed forms in the weighted power sums ``S_j``:

        L11  = -n/alpha**2        L111 = 2n/alpha**3      L112 = 0
        L12  = -S_1               L122 = -S_2
        L22  = -n/beta**2 - alpha S_2
        L222 = 2n/beta**3 - alpha S_3
    """
    if stats is None:
        stats = DgosStats(sample, scheme)
    n, alpha, beta = stats.n, at.alpha, at.beta
    s1 = stats.weighted_power_sum(beta, 1)
    s2 = stats.weighted_power_sum(beta, 2)
    s3 = stats.weighted_power_sum(beta, 3)

    l11 = -n / alpha**2
    l12 = -s1
    l22 = -n / beta**2 - alpha * s2
    det = l11 * l22 - l12 * l12  # determinant of [-L] equals det of L for 2x2
    if not (math.isfinite(det) and det > 0.0 and l11 < 0.0):
        raise ApproximationOutOfRange(
            "observed information is not positive definite at the anchor point"
        )
    tau = np.array([[-l22, l12], [l12, -l11]]) / det

    phi1, phi2 = priors.log_gradient(at)
    return LindleyWorkspace(
        L11=l11,
        L12=l12,
        L22=l22,
        L111=2.0 * n / alpha**3,
        L112=0.0,
        L122=-s2,
        L222=2.0 * n / beta**3 - alpha * s3,
        tau=tau,
        phi1=phi1,
        phi2=phi2,
    )


def lindley_expectation(ws: LindleyWorkspace, zeta: FieldFn, at: UwParams) -> float:
    """Expansion value for the scalar field ``zeta`` at the anchor point."""
    z = zeta(at)
    t11, t12, t22 = ws.tau[0, 0], ws.tau[0, 1], ws.tau[1, 1]
    p1 = z.da * t11 + z.db * t12
    p2 = z.da * t12 + z.db * t22
    return (
        z.value
        + 0.5 * (z.daa * t11 + 2.0 * z.dab * t12 + z.dbb * t22)
        + ws.phi1 * p1
        + ws.phi2 * p2
        + 0.5 * (ws.L111 * t11 * p1 + ws.L222 * t22 * p2)
        + 0.5 * (ws.L112 * (2.0 * t12 * p1 + t11 * p2) + ws.L122 * (t22 * p1 + 2.0 * t12 * p2))
    )


def lindley_estimate(
    sample: DgosSample,
    scheme: DgosScheme,
    priors: GammaPriors,
    loss: LossSpec,
    target: str,
    t: float | None = None,
    mle: MleResult | None = None,
) -> float:
    """Bayes estimate of ``target`` under ``loss`` by the expansion method.

    ``target`` is one of ``"alpha"``, ``"beta"`` or ``"reliability"``
    (the latter requires ``t``).  The anchor point is the MLE; pass a
    precomputed ``mle`` to share one fit across several calls.

    Raises :class:`ApproximationOutOfRange` when an inner expectation is
    non-positive where a logarithm or fractional power is required, or
    when a reliability estimate leaves (0, 1).
    """
    if mle is None:
        mle = fit_mle(sample, scheme)
    stats = DgosStats(sample, scheme)
    ws = lindley_derivatives(sample, scheme, priors, mle.params, stats)
    base = target_field(target, t)

    if loss.kind == "self":
        estimate = lindley_expectation(ws, base, mle.params)
    elif loss.kind == "linex":
        inner = lindley_expectation(ws, exp_scaled(base, loss.c), mle.params)
        if inner <= 0.0:
            raise ApproximationOutOfRange(
                f"LINEX inner expectation {inner:.3e} is not positive"
            )
        estimate = -math.log(inner) / loss.c
    else:  # general entropy
        inner = lindley_expectation(ws, power_neg(base, loss.c), mle.params)
        if inner <= 0.0:
            raise ApproximationOutOfRange(
                f"entropy inner expectation {inner:.3e} is not positive"
            )
        estimate = inner ** (-1.0 / loss.c)

    return check_target_support(target, estimate)

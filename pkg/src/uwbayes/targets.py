"""Scalar fields over the parameter plane with analytic derivatives.

The approximation engines need, for each estimation target and loss, a
function ``g(alpha, beta)`` together with its gradient and Hessian.  A
:class:`ScalarField` carries those six numbers at one point; the builders
below produce them for the raw targets (alpha, beta, reliability at a
fixed time) and for the loss transforms (``exp(-c g)``, ``g**(-c)``,
``ln g``) via the chain rule.  Every formula here is cross-checked against
central finite differences in the test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .distribution import UwParams
from .errors import ApproximationOutOfRange, DomainError

__all__ = [
    "ScalarField",
    "TargetName",
    "FieldFn",
    "field_alpha",
    "field_beta",
    "field_reliability",
    "target_field",
    "exp_scaled",
    "power_neg",
    "log_of",
    "scaled",
    "check_target_support",
]


def check_target_support(target: TargetName, estimate: float) -> float:
    """Reject approximation output that leaves the target's support.

    The closed-form expansions are corrections, not true expectations: a
    shape estimate can come out non-positive and a reliability estimate
    can leave (0, 1) when the correction overwhelms the anchor value.
    Such values are breakdowns, not answers.
    """
    if target == "reliability":
        if not (0.0 < estimate < 1.0):
            raise ApproximationOutOfRange(
                f"reliability estimate {estimate:.3e} lies outside (0, 1)"
            )
    elif not estimate > 0.0:
        raise ApproximationOutOfRange(f"{target} estimate {estimate:.3e} is not positive")
    return estimate

#: Positivity floor applied before fractional powers of a target value.
POWER_FLOOR = 1e-300

TargetName = str  # "alpha" | "beta" | "reliability"
FieldFn = Callable[[UwParams], "ScalarField"]


@dataclass(frozen=True)
class ScalarField:
    """Value, gradient and Hessian of a scalar function at one point."""

    value: float
    da: float
    db: float
    daa: float
    dab: float
    dbb: float


def field_alpha(p: UwParams) -> ScalarField:
    return ScalarField(p.alpha, 1.0, 0.0, 0.0, 0.0, 0.0)


def field_beta(p: UwParams) -> ScalarField:
    return ScalarField(p.beta, 0.0, 1.0, 0.0, 0.0, 0.0)


def field_reliability(t: float) -> FieldFn:
    """Survival probability ``1 - exp(-alpha w)`` with ``w = (-ln t)**beta``.

    With ``l = ln(-ln t)`` the derivatives are

        d/da   =  w e
        d/db   =  alpha w l e
        d2/da2 = -w**2 e
        da db  =  w l e (1 - alpha w)
        d2/db2 =  alpha w l**2 e (1 - alpha w)

    where ``e = exp(-alpha w)``.
    """
    if not (0.0 < t < 1.0):
        raise DomainError(f"reliability time must lie in (0, 1), got {t!r}")
    neg_log_t = -math.log(t)
    log_l = math.log(neg_log_t)

    def build(p: UwParams) -> ScalarField:
        w = math.exp(p.beta * log_l)
        e = math.exp(-p.alpha * w)
        one_minus_aw = 1.0 - p.alpha * w
        return ScalarField(
            value=1.0 - e,
            da=w * e,
            db=p.alpha * w * log_l * e,
            daa=-w * w * e,
            dab=w * log_l * e * one_minus_aw,
            dbb=p.alpha * w * log_l * log_l * e * one_minus_aw,
        )

    return build


def target_field(target: TargetName, t: float | None = None) -> FieldFn:
    """Field builder for one of the three estimation targets."""
    if target == "alpha":
        return field_alpha
    if target == "beta":
        return field_beta
    if target == "reliability":
        if t is None:
            raise DomainError("reliability target requires the evaluation time t")
        return field_reliability(t)
    raise DomainError(f"unknown target {target!r}")


def exp_scaled(inner: FieldFn, c: float) -> FieldFn:
    """``u = exp(-c g)``: the LINEX transform of a target ``g``."""

    def build(p: UwParams) -> ScalarField:
        g = inner(p)
        u = math.exp(-c * g.value)
        return ScalarField(
            value=u,
            da=-c * g.da * u,
            db=-c * g.db * u,
            daa=u * (c * c * g.da * g.da - c * g.daa),
            dab=u * (c * c * g.da * g.db - c * g.dab),
            dbb=u * (c * c * g.db * g.db - c * g.dbb),
        )

    return build


def power_neg(inner: FieldFn, c: float) -> FieldFn:
    """``u = g**(-c)``: the general-entropy transform of a target ``g``.

    The base is floored at a tiny positive constant so reliability values
    underflowing to zero do not turn into NaN.
    """

    def build(p: UwParams) -> ScalarField:
        g = inner(p)
        base = max(g.value, POWER_FLOOR)
        u = base ** (-c)
        first = -c * base ** (-c - 1.0)
        second = c * (c + 1.0) * base ** (-c - 2.0)
        return ScalarField(
            value=u,
            da=first * g.da,
            db=first * g.db,
            daa=second * g.da * g.da + first * g.daa,
            dab=second * g.da * g.db + first * g.dab,
            dbb=second * g.db * g.db + first * g.dbb,
        )

    return build


def log_of(inner: FieldFn) -> FieldFn:
    """``u = ln g``; requires ``g > 0`` at the evaluation point."""

    def build(p: UwParams) -> ScalarField:
        g = inner(p)
        if g.value <= 0.0:
            raise ApproximationOutOfRange(
                f"logarithm of a non-positive target value {g.value!r}"
            )
        inv = 1.0 / g.value
        return ScalarField(
            value=math.log(g.value),
            da=g.da * inv,
            db=g.db * inv,
            daa=g.daa * inv - g.da * g.da * inv * inv,
            dab=g.dab * inv - g.da * g.db * inv * inv,
            dbb=g.dbb * inv - g.db * g.db * inv * inv,
        )

    return build


def scaled(inner: FieldFn, factor: float) -> FieldFn:
    """``u = factor * g``."""

    def build(p: UwParams) -> ScalarField:
        g = inner(p)
        return ScalarField(
            factor * g.value,
            factor * g.da,
            factor * g.db,
            factor * g.daa,
            factor * g.dab,
            factor * g.dbb,
        )

    return build

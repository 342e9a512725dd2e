"""Loss functions and the point estimates they induce.

Three losses are supported:

* SELF, the squared error ``(d - th)**2``; its Bayes rule is the
  posterior mean.
* LINEX, the asymmetric ``exp(c (d - th)) - c (d - th) - 1``; its Bayes
  rule is ``-(1/c) ln E[exp(-c th)]``.
* GE, the general entropy ``(d/th)**c - c ln(d/th) - 1``; its Bayes rule
  is ``E[th**(-c)]**(-1/c)``.

``c`` must be nonzero for LINEX and GE and is rejected at construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

from .errors import DomainError, InvalidEstimate

__all__ = ["LossSpec", "LossKind", "loss_value", "SELF"]

LossKind = Literal["self", "linex", "ge"]


@dataclass(frozen=True)
class LossSpec:
    """Loss selector: ``kind`` in {"self", "linex", "ge"} plus constant ``c``."""

    kind: LossKind
    c: float | None = None

    def __post_init__(self):
        if self.kind not in ("self", "linex", "ge"):
            raise DomainError(f"unknown loss kind {self.kind!r}")
        if self.kind == "self":
            if self.c is not None:
                raise DomainError("SELF takes no loss constant")
        else:
            if self.c is None or not math.isfinite(self.c) or self.c == 0.0:
                raise DomainError(
                    f"{self.kind} requires a finite nonzero loss constant, got {self.c!r}"
                )

    def label(self) -> str:
        return self.kind if self.kind == "self" else f"{self.kind}({self.c:g})"


SELF = LossSpec("self")


def loss_value(loss: LossSpec, estimate: float, truth: float) -> float:
    """Loss incurred by ``estimate`` when the true value is ``truth``.

    GE is only defined for positive estimate/truth ratios; a non-positive
    estimate raises :class:`InvalidEstimate`.
    """
    if not math.isfinite(estimate):
        raise InvalidEstimate(f"estimate must be finite, got {estimate!r}")
    diff = estimate - truth
    if loss.kind == "self":
        return diff * diff
    if loss.kind == "linex":
        return math.exp(loss.c * diff) - loss.c * diff - 1.0
    if truth <= 0.0:
        raise DomainError(f"GE loss needs a positive truth, got {truth!r}")
    if estimate <= 0.0:
        raise InvalidEstimate(f"GE loss needs a positive estimate, got {estimate!r}")
    ratio = estimate / truth
    return ratio**loss.c - loss.c * math.log(ratio) - 1.0

"""Independent gamma priors for the two shape parameters.

``alpha ~ Gamma(a1, rate b1)`` and ``beta ~ Gamma(a2, rate b2)``.  Only the
kernel (normalizing constants dropped) is ever needed: posterior ratios,
posterior-mode objectives and the expansion terms all use differences or
derivatives of the log prior.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .distribution import UwParams
from .errors import DomainError

__all__ = ["GammaPriors", "PRIOR_I", "PRIOR_II"]


@dataclass(frozen=True)
class GammaPriors:
    """Hyperparameters ``(a1, b1, a2, b2)``, all strictly positive."""

    a1: float
    b1: float
    a2: float
    b2: float

    def __post_init__(self):
        for name in ("a1", "b1", "a2", "b2"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0.0):
                raise DomainError(f"{name} must be a positive finite real, got {value!r}")

    def log_kernel(self, p: UwParams) -> float:
        """``(a1-1) ln alpha - b1 alpha + (a2-1) ln beta - b2 beta``."""
        return (
            (self.a1 - 1.0) * math.log(p.alpha)
            - self.b1 * p.alpha
            + (self.a2 - 1.0) * math.log(p.beta)
            - self.b2 * p.beta
        )

    def log_gradient(self, p: UwParams) -> tuple[float, float]:
        """Gradient of :meth:`log_kernel` in (alpha, beta)."""
        return (
            (self.a1 - 1.0) / p.alpha - self.b1,
            (self.a2 - 1.0) / p.beta - self.b2,
        )


#: Informative setting used throughout the bundled simulation plans.
PRIOR_I = GammaPriors(2.0, 2.0, 2.0, 2.0)

#: Near-diffuse setting.
PRIOR_II = GammaPriors(0.05, 0.05, 0.05, 0.05)

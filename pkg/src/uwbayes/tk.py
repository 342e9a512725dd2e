"""Posterior expectations as a ratio of two Laplace-style maximizations.

Write ``psi = (log-likelihood + log-prior)/n`` and, for a positive target
``zeta``, ``psi* = psi + ln(zeta)/n``.  With ``(ah, bh)`` maximizing
``psi`` and ``(ah*, bh*)`` maximizing ``psi*``, the posterior expectation
of ``zeta`` is approximated by

    E[zeta | x] ~= sqrt(det S* / det S) * exp(n (psi*(ah*, bh*) - psi(ah, bh)))

where ``S`` and ``S*`` are the inverses of the negated Hessians at the
respective maxima.  Both Hessians are analytic; the ``psi*`` corrections
come from the chain-rule fields in :mod:`uwbayes.targets` and are
validated against finite differences in the test suite.

The alpha stationarity equation of ``psi`` includes the alpha-prior terms
``((a1 - 1)/alpha - b1)/n``.  Setting ``include_alpha_prior=False`` drops
that factor from the optimized objective (the alpha prior is treated as
flat), which reduces the alpha equation to its maximum-likelihood form;
some published analyses use that reduced convention.  The default keeps
the prior, which is what the quadrature cross-checks validate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dgos import DgosSample, DgosScheme, DgosStats, log_likelihood_from_stats
from .distribution import UwParams
from .errors import ApproximationOutOfRange, NoConvergence, NonConcaveAtOptimum
from .losses import LossSpec
from .mle import MleResult, fit_mle
from .priors import GammaPriors
from .targets import FieldFn, check_target_support, log_of, scaled, target_field

__all__ = [
    "TkWorkspace",
    "TkSolver",
    "psi",
    "psi_gradient",
    "psi_hessian",
    "maximize_psi",
    "tk_workspace",
    "tk_expectation",
    "tk_estimate",
]

_GRAD_TOL = 1e-9
_MAX_NEWTON = 120


def _effective_prior(priors: GammaPriors, include_alpha_prior: bool) -> tuple[float, float, float, float]:
    if include_alpha_prior:
        return priors.a1, priors.b1, priors.a2, priors.b2
    return 1.0, 0.0, priors.a2, priors.b2


@dataclass(frozen=True)
class TkWorkspace:
    """Both maximizations of one expectation: arguments, values, curvatures."""

    psi_arg: UwParams
    psi_value: float
    psi_star_arg: UwParams
    psi_star_value: float
    det_sigma: float
    det_sigma_star: float


def psi(
    sample: DgosSample,
    scheme: DgosScheme,
    priors: GammaPriors,
    p: UwParams,
    stats: DgosStats | None = None,
    include_alpha_prior: bool = True,
) -> float:
    """``(log-likelihood + log-prior kernel) / n`` at ``p``."""
    if stats is None:
        stats = DgosStats(sample, scheme)
    a1, b1, a2, b2 = _effective_prior(priors, include_alpha_prior)
    log_prior = (
        (a1 - 1.0) * math.log(p.alpha)
        - b1 * p.alpha
        + (a2 - 1.0) * math.log(p.beta)
        - b2 * p.beta
    )
    return (log_likelihood_from_stats(stats, p) + log_prior) / stats.n


def _psi_parts(stats: DgosStats, prior4, p: UwParams, log_zeta: FieldFn | None):
    """Value, gradient and Hessian of psi (plus the log-zeta tilt) at ``p``."""
    a1, b1, a2, b2 = prior4
    n = stats.n
    alpha, beta = p.alpha, p.beta
    s0 = stats.weighted_power_sum(beta)
    s1 = stats.weighted_power_sum(beta, 1)
    s2 = stats.weighted_power_sum(beta, 2)

    log_prior = (
        (a1 - 1.0) * math.log(alpha) - b1 * alpha + (a2 - 1.0) * math.log(beta) - b2 * beta
    )
    value = (log_likelihood_from_stats(stats, p) + log_prior) / n
    g_alpha = (n / alpha - s0 + (a1 - 1.0) / alpha - b1) / n
    g_beta = (n / beta + stats.sum_log_z - alpha * s1 + (a2 - 1.0) / beta - b2) / n
    h_aa = -(n + a1 - 1.0) / (n * alpha * alpha)
    h_ab = -s1 / n
    h_bb = (-n / beta**2 - alpha * s2 - (a2 - 1.0) / beta**2) / n

    if log_zeta is not None:
        lz = log_zeta(p)
        value += lz.value / n
        g_alpha += lz.da / n
        g_beta += lz.db / n
        h_aa += lz.daa / n
        h_ab += lz.dab / n
        h_bb += lz.dbb / n
    return value, (g_alpha, g_beta), (h_aa, h_ab, h_bb)


def psi_gradient(
    sample: DgosSample,
    scheme: DgosScheme,
    priors: GammaPriors,
    p: UwParams,
    include_alpha_prior: bool = True,
) -> tuple[float, float]:
    stats = DgosStats(sample, scheme)
    return _psi_parts(stats, _effective_prior(priors, include_alpha_prior), p, None)[1]


def psi_hessian(
    sample: DgosSample,
    scheme: DgosScheme,
    priors: GammaPriors,
    p: UwParams,
    include_alpha_prior: bool = True,
) -> np.ndarray:
    stats = DgosStats(sample, scheme)
    h_aa, h_ab, h_bb = _psi_parts(
        stats, _effective_prior(priors, include_alpha_prior), p, None
    )[2]
    return np.array([[h_aa, h_ab], [h_ab, h_bb]])


def _newton_maximize(stats, prior4, log_zeta, start: UwParams):
    """Damped Newton ascent in the open positive quadrant.

    Falls back to a steepest-ascent step whenever the Newton direction is
    unusable (Hessian indefinite or pointing downhill).
    """
    alpha, beta = start.alpha, start.beta
    value, grad, hess = _psi_parts(stats, prior4, UwParams(alpha, beta), log_zeta)
    for _ in range(_MAX_NEWTON):
        g = np.array(grad)
        if float(np.max(np.abs(g))) < _GRAD_TOL:
            break
        h_aa, h_ab, h_bb = hess
        det = h_aa * h_bb - h_ab * h_ab
        if det > 0.0 and h_aa < 0.0:
            step = np.array(
                [-(h_bb * g[0] - h_ab * g[1]) / det, -(h_aa * g[1] - h_ab * g[0]) / det]
            )
            if float(step @ g) <= 0.0:
                step = g / float(np.hypot(*g)) * 0.1 * max(alpha, beta)
        else:
            step = g / float(np.hypot(*g)) * 0.1 * max(alpha, beta)

        scale = 1.0
        improved = False
        for _ in range(50):
            cand_alpha = alpha + scale * step[0]
            cand_beta = beta + scale * step[1]
            if cand_alpha > 0.0 and cand_beta > 0.0:
                cand = UwParams(cand_alpha, cand_beta)
                cand_value, cand_grad, cand_hess = _psi_parts(stats, prior4, cand, log_zeta)
                if math.isfinite(cand_value) and cand_value >= value - 1e-15:
                    alpha, beta = cand_alpha, cand_beta
                    value, grad, hess = cand_value, cand_grad, cand_hess
                    improved = True
                    break
            scale *= 0.5
        if not improved:
            break
    else:
        raise NoConvergence("posterior-mode search exhausted its iteration budget")

    if float(np.max(np.abs(np.array(grad)))) >= 1e-8:
        raise NoConvergence(
            f"posterior-mode search stalled with gradient norm {np.max(np.abs(grad)):.3e}"
        )
    h_aa, h_ab, h_bb = hess
    det = h_aa * h_bb - h_ab * h_ab
    if not (det > 0.0 and h_aa < 0.0):
        raise NonConcaveAtOptimum("Hessian is not negative definite at the optimum")
    return UwParams(alpha, beta), value, np.array([[h_aa, h_ab], [h_ab, h_bb]])


def maximize_psi(
    sample: DgosSample,
    scheme: DgosScheme,
    priors: GammaPriors,
    log_zeta: FieldFn | None = None,
    start: UwParams | None = None,
    include_alpha_prior: bool = True,
) -> tuple[UwParams, float, np.ndarray]:
    """Maximize psi (or the log-zeta tilted variant) from ``start``.

    Returns the argmax, the value there and the analytic 2x2 Hessian.
    ``start`` defaults to the MLE.
    """
    stats = DgosStats(sample, scheme)
    if start is None:
        start = fit_mle(sample, scheme).params
    return _newton_maximize(stats, _effective_prior(priors, include_alpha_prior), log_zeta, start)


class TkSolver:
    """Shared state for several expectations on one (sample, scheme, prior).

    The untilted maximization does not depend on the target, so it is run
    once and reused; each tilted maximization starts from that mode.
    """

    def __init__(
        self,
        sample: DgosSample,
        scheme: DgosScheme,
        priors: GammaPriors,
        start: UwParams | None = None,
        include_alpha_prior: bool = True,
    ):
        self._stats = DgosStats(sample, scheme)
        self._prior4 = _effective_prior(priors, include_alpha_prior)
        if start is None:
            start = fit_mle(sample, scheme).params
        self._base = _newton_maximize(self._stats, self._prior4, None, start)

    def workspace(self, log_zeta: FieldFn | None) -> TkWorkspace:
        arg, value, hess = self._base
        if log_zeta is None:
            star_arg, star_value, star_hess = arg, value, hess
        else:
            star_arg, star_value, star_hess = _newton_maximize(
                self._stats, self._prior4, log_zeta, arg
            )
        return TkWorkspace(
            psi_arg=arg,
            psi_value=value,
            psi_star_arg=star_arg,
            psi_star_value=star_value,
            det_sigma=1.0 / float(np.linalg.det(hess)),
            det_sigma_star=1.0 / float(np.linalg.det(star_hess)),
        )

    def expectation(self, log_zeta: FieldFn | None) -> float:
        """The determinant-corrected exponential ratio for one target."""
        if log_zeta is None:
            return 1.0
        ws = self.workspace(log_zeta)
        ratio = ws.det_sigma_star / ws.det_sigma
        if ratio <= 0.0:
            raise ApproximationOutOfRange("curvature ratio is not positive")
        return math.sqrt(ratio) * math.exp(
            self._stats.n * (ws.psi_star_value - ws.psi_value)
        )

    def estimate(self, loss: LossSpec, target: str, t: float | None = None) -> float:
        """Bayes estimate of ``target`` under ``loss``.

        The tilts are ``ln(target)`` for squared error, ``-c * target``
        for LINEX (wrapped by ``-(1/c) ln``) and ``-c * ln(target)`` for
        general entropy (wrapped by ``(.)**(-1/c)``).
        """
        base = target_field(target, t)
        if loss.kind == "self":
            log_zeta = log_of(base)
        elif loss.kind == "linex":
            log_zeta = scaled(base, -loss.c)
        else:
            log_zeta = scaled(log_of(base), -loss.c)

        inner = self.expectation(log_zeta)
        if loss.kind == "self":
            estimate = inner
        elif loss.kind == "linex":
            if inner <= 0.0:
                raise ApproximationOutOfRange(
                    f"LINEX inner expectation {inner:.3e} is not positive"
                )
            estimate = -math.log(inner) / loss.c
        else:
            if inner <= 0.0:
                raise ApproximationOutOfRange(
                    f"entropy inner expectation {inner:.3e} is not positive"
                )
            estimate = inner ** (-1.0 / loss.c)

        return check_target_support(target, estimate)


def tk_workspace(
    sample: DgosSample,
    scheme: DgosScheme,
    priors: GammaPriors,
    log_zeta: FieldFn | None,
    start: UwParams | None = None,
    include_alpha_prior: bool = True,
) -> TkWorkspace:
    return TkSolver(sample, scheme, priors, start, include_alpha_prior).workspace(log_zeta)


def tk_expectation(
    sample: DgosSample,
    scheme: DgosScheme,
    priors: GammaPriors,
    log_zeta: FieldFn | None,
    start: UwParams | None = None,
    include_alpha_prior: bool = True,
) -> float:
    return TkSolver(sample, scheme, priors, start, include_alpha_prior).expectation(log_zeta)


def tk_estimate(
    sample: DgosSample,
    scheme: DgosScheme,
    priors: GammaPriors,
    loss: LossSpec,
    target: str,
    t: float | None = None,
    mle: MleResult | None = None,
    include_alpha_prior: bool = True,
) -> float:
    start = mle.params if mle is not None else None
    solver = TkSolver(sample, scheme, priors, start, include_alpha_prior)
    return solver.estimate(loss, target, t)

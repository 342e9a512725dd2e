"""Uniform front end over the three estimation engines.

Everything downstream (risk study, data pipeline, command line) asks the
same question: "estimate alpha, beta and R(t) under this loss with this
method".  An :class:`Estimator` answers it while reusing whatever the
method can share across calls: the expansion engine shares one MLE fit
and workspace, the ratio engine shares the untilted maximization, the
sampler shares one set of posterior draws.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .dgos import DgosSample, DgosScheme
from .distribution import UwParams
from .errors import DomainError, UwBayesError
from .lindley import lindley_estimate
from .losses import LossSpec
from .mcmc import McmcConfig, mcmc_estimate, pool_draws, run_chain, run_chains, tune_proposal_sd
from .mle import MleResult, fit_mle
from .priors import GammaPriors
from .tk import TkSolver

__all__ = ["EstimateSet", "Estimator", "make_estimator", "METHODS", "TARGETS"]

METHODS = ("lindley", "tk", "mcmc")
TARGETS = ("alpha", "beta", "reliability")


@dataclass(frozen=True)
class EstimateSet:
    """Point estimates of the three targets for one method and one loss."""

    method: str
    loss: LossSpec
    alpha: float
    beta: float
    reliability: float


class Estimator:
    """Per-method estimate provider bound to one (sample, scheme, prior)."""

    def __init__(
        self,
        method: str,
        sample: DgosSample,
        scheme: DgosScheme,
        priors: GammaPriors,
        t: float,
        rng: np.random.Generator | None = None,
        mcmc_config: McmcConfig | None = None,
        mle: MleResult | None = None,
    ):
        if method not in METHODS:
            raise DomainError(f"unknown method {method!r}; expected one of {METHODS}")
        self.method = method
        self.sample = sample
        self.scheme = scheme
        self.priors = priors
        self.t = t
        self._rng = rng
        self._mcmc_config = mcmc_config if mcmc_config is not None else McmcConfig()
        self._mle = mle
        self._tk_solver: TkSolver | None = None
        self._draws = None

    def _ensure_mle(self) -> MleResult:
        if self._mle is None:
            self._mle = fit_mle(self.sample, self.scheme)
        return self._mle

    def _ensure_draws(self):
        if self._draws is None:
            config = self._mcmc_config
            if self._rng is not None:
                # The caller owns the stream: tune once, then run the
                # chains sequentially from the same generator.
                try:
                    start = self._ensure_mle().params
                except UwBayesError:
                    start = UwParams(1.0, 1.0)
                sd = config.proposal_sd
                if sd is None:
                    sd = tune_proposal_sd(
                        self._rng, self.sample, self.scheme, self.priors, start
                    )
                tuned = replace(config, proposal_sd=sd)
                chains = [
                    run_chain(self._rng, self.sample, self.scheme, self.priors, tuned, start)
                    for _ in range(config.chains)
                ]
            else:
                chains = run_chains(self.sample, self.scheme, self.priors, config)
            self._draws = pool_draws(chains)
        return self._draws

    def estimate(self, loss: LossSpec, target: str) -> float:
        t = self.t if target == "reliability" else None
        if self.method == "lindley":
            return lindley_estimate(
                self.sample, self.scheme, self.priors, loss, target, t, self._ensure_mle()
            )
        if self.method == "tk":
            if self._tk_solver is None:
                self._tk_solver = TkSolver(
                    self.sample, self.scheme, self.priors, self._ensure_mle().params
                )
            return self._tk_solver.estimate(loss, target, t)
        return mcmc_estimate(self._ensure_draws(), loss, target, t)

    def estimate_set(self, loss: LossSpec) -> EstimateSet:
        return EstimateSet(
            method=self.method,
            loss=loss,
            alpha=self.estimate(loss, "alpha"),
            beta=self.estimate(loss, "beta"),
            reliability=self.estimate(loss, "reliability"),
        )


def make_estimator(method: str, *args, **kwargs) -> Estimator:
    return Estimator(method, *args, **kwargs)

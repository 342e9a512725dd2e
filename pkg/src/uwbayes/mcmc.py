"""Gibbs-within-Metropolis sampling of the joint posterior.

Conditionally on beta, alpha is gamma distributed:

    alpha | beta, x ~ Gamma(n + a1, rate = b1 + S_0(beta)),

so it is drawn exactly.  The beta conditional has the log kernel

    (n + a2 - 1) ln(beta) + (beta - 1) sum(ln z_i) - b2 beta - alpha S_0(beta)

and is sampled by a random walk on beta itself with a normal proposal;
non-positive proposals are rejected outright.  All acceptance arithmetic
happens in log space.

One chain is strictly sequential.  Several chains use independent
seed-derived streams, so results are reproducible given (seed, chains,
iterations) regardless of how the chains are scheduled.
"""

from __future__ import annotations

import csv
import math
from collections import defaultdict
from dataclasses import dataclass, replace

import numpy as np
from scipy.special import logsumexp

from .dgos import DgosSample, DgosScheme, DgosStats
from .distribution import UwParams, reliability
from .errors import DomainError, NoConvergence
from .losses import LossSpec
from .mle import fit_mle
from .priors import GammaPriors

__all__ = [
    "McmcConfig",
    "PosteriorDraws",
    "sample_alpha_conditional",
    "beta_log_kernel",
    "mh_step_beta",
    "tune_proposal_sd",
    "run_chain",
    "run_chains",
    "pool_draws",
    "mcmc_estimate",
    "gelman_rubin",
    "chains_to_csv",
    "chains_from_csv",
]


@dataclass(frozen=True)
class McmcConfig:
    """Chain budget and proposal settings.

    ``proposal_sd = None`` requests pilot tuning: short runs whose scale
    is doubled or halved until the acceptance rate lands in [0.2, 0.5].
    """

    iterations: int = 11000
    burn_in: int = 1000
    thinning: int = 1
    proposal_sd: float | None = None
    chains: int = 2
    seed: int = 0

    def __post_init__(self):
        if self.iterations < 1:
            raise DomainError("iterations must be positive")
        if not 0 <= self.burn_in < self.iterations:
            raise DomainError("burn_in must satisfy 0 <= burn_in < iterations")
        if self.thinning < 1:
            raise DomainError("thinning must be positive")
        if self.chains < 1:
            raise DomainError("chains must be positive")
        if self.proposal_sd is not None and not self.proposal_sd > 0.0:
            raise DomainError("proposal_sd must be positive when given")
        if (self.iterations - self.burn_in) // self.thinning < 100:
            raise DomainError("config must retain at least 100 draws per chain")


@dataclass(frozen=True)
class PosteriorDraws:
    """Retained draws of one chain plus its proposal acceptance rate."""

    alpha_draws: np.ndarray
    beta_draws: np.ndarray
    acceptance_rate_beta: float

    def __post_init__(self):
        if len(self.alpha_draws) == 0 or len(self.alpha_draws) != len(self.beta_draws):
            raise DomainError("draw arrays must be nonempty and of equal length")
        if np.any(self.alpha_draws <= 0.0) or np.any(self.beta_draws <= 0.0):
            raise DomainError("all retained draws must be strictly positive")


def sample_alpha_conditional(
    rng: np.random.Generator,
    sample: DgosSample,
    scheme: DgosScheme,
    priors: GammaPriors,
    beta: float,
    stats: DgosStats | None = None,
) -> float:
    """One exact draw from the gamma full conditional of alpha."""
    if stats is None:
        stats = DgosStats(sample, scheme)
    rate = priors.b1 + stats.weighted_power_sum(beta)
    return float(rng.gamma(stats.n + priors.a1, 1.0 / rate))


def beta_log_kernel(
    stats: DgosStats, priors: GammaPriors, alpha: float, beta: float
) -> float:
    """Unnormalized log density of beta given alpha and the data."""
    return (
        (stats.n + priors.a2 - 1.0) * math.log(beta)
        + (beta - 1.0) * stats.sum_log_z
        - priors.b2 * beta
        - alpha * stats.weighted_power_sum(beta)
    )


def mh_step_beta(
    rng: np.random.Generator,
    sample: DgosSample,
    scheme: DgosScheme,
    priors: GammaPriors,
    alpha: float,
    beta_current: float,
    proposal_sd: float,
    stats: DgosStats | None = None,
) -> tuple[float, bool]:
    """One random-walk Metropolis step on beta at fixed alpha."""
    if stats is None:
        stats = DgosStats(sample, scheme)
    proposal = beta_current + proposal_sd * rng.standard_normal()
    if proposal <= 0.0:
        return beta_current, False
    log_ratio = beta_log_kernel(stats, priors, alpha, proposal) - beta_log_kernel(
        stats, priors, alpha, beta_current
    )
    if log_ratio >= 0.0 or math.log(rng.random()) < log_ratio:
        return proposal, True
    return beta_current, False


def _chain_start(sample: DgosSample, scheme: DgosScheme) -> UwParams:
    try:
        return fit_mle(sample, scheme).params
    except Exception:
        return UwParams(1.0, 1.0)


def _run_raw_chain(rng, stats, priors, start: UwParams, config: McmcConfig, proposal_sd):
    n_keep = (config.iterations - config.burn_in + config.thinning - 1) // config.thinning
    alphas = np.empty(n_keep)
    betas = np.empty(n_keep)
    beta = start.beta
    accepted = 0
    kept = 0
    s0 = stats.weighted_power_sum(beta)
    sum_log_z = stats.sum_log_z
    beta_shape = stats.n + priors.a2 - 1.0
    for it in range(config.iterations):
        alpha = rng.gamma(stats.n + priors.a1, 1.0 / (priors.b1 + s0))
        proposal = beta + proposal_sd * rng.standard_normal()
        if proposal > 0.0:
            s0_prop = stats.weighted_power_sum(proposal)
            log_ratio = (
                beta_shape * (math.log(proposal) - math.log(beta))
                + (proposal - beta) * sum_log_z
                - priors.b2 * (proposal - beta)
                - alpha * (s0_prop - s0)
            )
            if log_ratio >= 0.0 or math.log(rng.random()) < log_ratio:
                beta, s0 = proposal, s0_prop
                accepted += 1
        if it >= config.burn_in and (it - config.burn_in) % config.thinning == 0:
            alphas[kept] = alpha
            betas[kept] = beta
            kept += 1
    return PosteriorDraws(
        alpha_draws=alphas[:kept],
        beta_draws=betas[:kept],
        acceptance_rate_beta=accepted / config.iterations,
    )


def tune_proposal_sd(
    rng: np.random.Generator,
    sample: DgosSample,
    scheme: DgosScheme,
    priors: GammaPriors,
    start: UwParams | None = None,
    pilot_steps: int = 500,
    target: tuple[float, float] = (0.2, 0.5),
    max_rounds: int = 8,
) -> float:
    """Double or halve the walk scale until the pilot acceptance rate fits."""
    stats = DgosStats(sample, scheme)
    if start is None:
        start = _chain_start(sample, scheme)
    sd = max(0.25 * start.beta, 0.05)
    pilot_config = McmcConfig(iterations=pilot_steps, burn_in=0, thinning=1, seed=0)
    for _ in range(max_rounds):
        draws = _run_raw_chain(rng, stats, priors, start, pilot_config, sd)
        rate = draws.acceptance_rate_beta
        if rate > target[1]:
            sd *= 2.0
        elif rate < target[0]:
            sd *= 0.5
        else:
            return sd
    return sd


def run_chain(
    rng: np.random.Generator,
    sample: DgosSample,
    scheme: DgosScheme,
    priors: GammaPriors,
    config: McmcConfig,
    start: UwParams | None = None,
) -> PosteriorDraws:
    """One chain: exact alpha draw then one beta step, per iteration."""
    stats = DgosStats(sample, scheme)
    if start is None:
        start = _chain_start(sample, scheme)
    sd = config.proposal_sd
    if sd is None:
        sd = tune_proposal_sd(rng, sample, scheme, priors, start)
    return _run_raw_chain(rng, stats, priors, start, config, sd)


def run_chains(
    sample: DgosSample,
    scheme: DgosScheme,
    priors: GammaPriors,
    config: McmcConfig,
) -> list[PosteriorDraws]:
    """All chains of ``config`` on independent streams derived from its seed.

    The pilot tuning consumes a dedicated stream, so the chain draws do
    not depend on how many tuning rounds were needed.
    """
    streams = np.random.SeedSequence(config.seed).spawn(config.chains + 1)
    start = _chain_start(sample, scheme)
    sd = config.proposal_sd
    if sd is None:
        sd = tune_proposal_sd(np.random.default_rng(streams[0]), sample, scheme, priors, start)
    tuned = replace(config, proposal_sd=sd)
    return [
        run_chain(np.random.default_rng(stream), sample, scheme, priors, tuned, start)
        for stream in streams[1:]
    ]


def pool_draws(chains: list[PosteriorDraws]) -> PosteriorDraws:
    """Concatenate retained draws; acceptance rate is draw-weighted."""
    if not chains:
        raise DomainError("need at least one chain to pool")
    weights = np.array([len(c.alpha_draws) for c in chains], dtype=float)
    rate = float(
        np.sum(weights * [c.acceptance_rate_beta for c in chains]) / np.sum(weights)
    )
    return PosteriorDraws(
        alpha_draws=np.concatenate([c.alpha_draws for c in chains]),
        beta_draws=np.concatenate([c.beta_draws for c in chains]),
        acceptance_rate_beta=rate,
    )


def _target_draws(draws: PosteriorDraws, target: str, t: float | None) -> np.ndarray:
    if target == "alpha":
        return draws.alpha_draws
    if target == "beta":
        return draws.beta_draws
    if target == "reliability":
        if t is None:
            raise DomainError("reliability target requires the evaluation time t")
        values = [
            reliability(t, UwParams(a, b))
            for a, b in zip(draws.alpha_draws, draws.beta_draws)
        ]
        return np.asarray(values)
    raise DomainError(f"unknown target {target!r}")


def mcmc_estimate(
    draws: PosteriorDraws | list[PosteriorDraws],
    loss: LossSpec,
    target: str,
    t: float | None = None,
) -> float:
    """Sample-based Bayes estimate from retained draws.

    Squared error takes the plain mean; LINEX takes
    ``-(1/c) ln(mean exp(-c v))`` (computed through log-sum-exp); general
    entropy takes ``mean(v**(-c))**(-1/c)``.
    """
    if isinstance(draws, list):
        draws = pool_draws(draws)
    values = _target_draws(draws, target, t)
    if loss.kind == "self":
        return float(np.mean(values))
    if loss.kind == "linex":
        log_mean = float(logsumexp(-loss.c * values)) - math.log(len(values))
        return -log_mean / loss.c
    return float(np.mean(values ** (-loss.c))) ** (-1.0 / loss.c)


def chains_to_csv(chains: list[PosteriorDraws], path) -> None:
    """Write retained draws as CSV rows (chain, iteration, alpha, beta)."""
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["chain", "iteration", "alpha", "beta"])
        for index, draws in enumerate(chains):
            for it, (a, b) in enumerate(zip(draws.alpha_draws, draws.beta_draws)):
                writer.writerow([index, it, repr(float(a)), repr(float(b))])


def chains_from_csv(path) -> list[PosteriorDraws]:
    """Read chains written by :func:`chains_to_csv`.

    The acceptance rate is not stored in the file; restored chains carry
    a rate of 0.
    """
    by_chain: dict[int, list[tuple[float, float]]] = defaultdict(list)
    with open(path, newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header != ["chain", "iteration", "alpha", "beta"]:
            raise DomainError(f"unrecognized chain CSV header in {path}")
        for row in reader:
            by_chain[int(row[0])].append((float(row[2]), float(row[3])))
    chains = []
    for index in sorted(by_chain):
        pairs = by_chain[index]
        chains.append(
            PosteriorDraws(
                alpha_draws=np.array([p[0] for p in pairs]),
                beta_draws=np.array([p[1] for p in pairs]),
                acceptance_rate_beta=0.0,
            )
        )
    return chains


def gelman_rubin(chains: list[np.ndarray]) -> float:
    """Potential scale reduction factor of several equal-length chains.

    With chain length L, within-chain variance W (mean of the unbiased
    per-chain variances) and between-chain variance B (L times the
    variance of the chain means), returns

        sqrt((L - 1)/L + B / (L W)).

    Values near 1 indicate convergence; identical chains give
    sqrt((L - 1)/L), slightly below 1, because B vanishes.
    """
    if len(chains) < 2:
        raise DomainError("the diagnostic needs at least two chains")
    arrays = [np.asarray(c, dtype=float) for c in chains]
    length = len(arrays[0])
    if length < 10 or any(len(a) != length for a in arrays):
        raise DomainError("chains must have equal lengths of at least 10")
    means = np.array([a.mean() for a in arrays])
    within = float(np.mean([a.var(ddof=1) for a in arrays]))
    between = length * float(np.var(means, ddof=1))
    if within == 0.0:
        return math.sqrt((length - 1.0) / length) if between == 0.0 else math.inf
    return math.sqrt((length - 1.0) / length + between / (length * within))

"""Real-data pipeline: unit transform, record extraction, classical fits.

The workflow mirrors the bundled cotton-production walkthrough: check a
positive-valued series against classical families (Weibull, gamma,
normal, exponential) with maximum likelihood and information criteria,
push the series onto (0, 1) through ``x -> exp(-x)``, fit the
Unit-Weibull law there, and run the Bayes machinery on the ordered or
record-extracted transform.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.optimize import brentq

from .dgos import DgosSample, scheme_by_name, scheme_order_statistics
from .distribution import UwParams, cdf as uw_cdf
from .errors import DomainError, NoConvergence, SupportViolation, UwBayesError
from .estimates import METHODS, Estimator
from .losses import LossSpec
from .mcmc import McmcConfig
from .mle import fit_mle
from .priors import PRIOR_I, GammaPriors
from .risk import DEFAULT_SEED
from .special import digamma, kolmogorov_survival, log_gamma, trigamma

__all__ = [
    "Dataset",
    "FitReport",
    "COTTON_PRODUCTION",
    "transform_unit",
    "extract_lower_records",
    "fit_classical",
    "ks_test",
    "CottonReport",
    "analyze_cotton",
    "FAMILIES",
]

FAMILIES = ("weibull", "gamma", "normal", "exponential", "unit_weibull")


@dataclass(frozen=True)
class Dataset:
    """A nonempty series of finite positive reals with a label."""

    values: tuple[float, ...]
    label: str = ""

    def __post_init__(self):
        if not self.values:
            raise DomainError("dataset must be nonempty")
        if any(not math.isfinite(v) for v in self.values):
            raise DomainError("dataset values must be finite")

    def __len__(self) -> int:
        return len(self.values)

    @staticmethod
    def from_csv(path, label: str | None = None) -> "Dataset":
        """One-column CSV with header ``value``."""
        with open(path, newline="") as handle:
            reader = csv.reader(handle)
            header = next(reader, None)
            if header is None or header[0].strip() != "value":
                raise DomainError(f"expected a one-column CSV with header 'value' in {path}")
            values = tuple(float(row[0]) for row in reader if row)
        return Dataset(values=values, label=label if label is not None else str(path))


#: Annual US cotton production, seasons 2013-14 through 2019-20.
COTTON_PRODUCTION = Dataset(
    values=(2.81, 3.55, 2.81, 3.74, 4.56, 4.0, 4.34),
    label="us-cotton-production",
)


@dataclass(frozen=True)
class FitReport:
    """MLE fit summary with the information-criterion identities.

    ``aic = 2 p - 2 ll`` and ``bic = p ln(n) - 2 ll`` with ``p`` the
    number of fitted parameters.
    """

    distribution: str
    estimates: dict
    log_likelihood: float
    aic: float
    bic: float


def transform_unit(data: Dataset) -> Dataset:
    """Elementwise ``exp(-x)``; requires strictly positive input."""
    if any(v <= 0.0 for v in data.values):
        raise DomainError("the unit transform requires strictly positive values")
    return Dataset(
        values=tuple(math.exp(-v) for v in data.values),
        label=f"{data.label}:unit" if data.label else "unit",
    )


def extract_lower_records(data: Dataset, mode: str = "running") -> Dataset:
    """Strict running minima of the series, in order of occurrence.

    ``mode="sorted"`` instead returns the distinct values sorted in
    decreasing order, a compatibility variant some summaries use in
    place of the chronological record sequence.
    """
    if mode == "running":
        records = []
        for value in data.values:
            if not records or value < records[-1]:
                records.append(value)
    elif mode == "sorted":
        records = sorted(set(data.values), reverse=True)
    else:
        raise DomainError(f"unknown record mode {mode!r}")
    return Dataset(
        values=tuple(records),
        label=f"{data.label}:records" if data.label else "records",
    )


def _report(distribution, estimates, log_likelihood, n_params, n) -> FitReport:
    return FitReport(
        distribution=distribution,
        estimates=estimates,
        log_likelihood=log_likelihood,
        aic=2.0 * n_params - 2.0 * log_likelihood,
        bic=n_params * math.log(n) - 2.0 * log_likelihood,
    )


def _fit_weibull(x: np.ndarray) -> FitReport:
    """Two-parameter Weibull by profiling the scale out of the likelihood.

    Density ``(k/lam) (x/lam)**(k-1) exp(-(x/lam)**k)``; the shape solves
    ``sum(x**k ln x)/sum(x**k) - 1/k - mean(ln x) = 0``.
    """
    n = len(x)
    log_x = np.log(x)
    mean_log = float(np.mean(log_x))
    max_log = float(np.max(log_x))

    def shape_equation(k):
        # Powers are scaled by the largest observation so the ratio stays
        # finite over the whole bracket scan.
        xk = np.exp(k * (log_x - max_log))
        return float(np.sum(xk * log_x) / np.sum(xk)) - 1.0 / k - mean_log

    lo, hi = 1e-3, 1e3
    if shape_equation(lo) * shape_equation(hi) > 0.0:
        raise NoConvergence("no bracket for the Weibull shape equation")
    shape = brentq(shape_equation, lo, hi, xtol=1e-12)
    scale = float(np.mean(x**shape)) ** (1.0 / shape)
    ll = float(
        n * (math.log(shape) - shape * math.log(scale))
        + (shape - 1.0) * np.sum(log_x)
        - np.sum((x / scale) ** shape)
    )
    return _report("weibull", {"shape": shape, "scale": scale}, ll, 2, n)


def _fit_gamma(x: np.ndarray) -> FitReport:
    """Shape/rate gamma MLE: Newton on ``ln a - psi(a) = s`` with the
    rate profiled as ``a / mean``."""
    n = len(x)
    mean = float(np.mean(x))
    mean_log = float(np.mean(np.log(x)))
    s = math.log(mean) - mean_log
    if s <= 0.0:
        raise NoConvergence("degenerate spread in the gamma shape equation")
    shape = (3.0 - s + math.sqrt((s - 3.0) ** 2 + 24.0 * s)) / (12.0 * s)
    for _ in range(60):
        f = math.log(shape) - digamma(shape) - s
        step = f / (1.0 / shape - trigamma(shape))
        shape -= step
        if abs(step) < 1e-12 * shape:
            break
    else:
        raise NoConvergence("gamma shape iteration did not settle")
    rate = shape / mean
    ll = (
        n * (shape * math.log(rate) - log_gamma(shape))
        + (shape - 1.0) * n * mean_log
        - rate * n * mean
    )
    return _report("gamma", {"shape": shape, "rate": rate}, ll, 2, n)


def _fit_normal(x: np.ndarray) -> FitReport:
    n = len(x)
    mean = float(np.mean(x))
    sd = float(np.sqrt(np.mean((x - mean) ** 2)))  # MLE scale, divisor n
    if sd == 0.0:
        raise NoConvergence("zero variance in the normal fit")
    ll = -0.5 * n * (math.log(2.0 * math.pi * sd * sd) + 1.0)
    return _report("normal", {"mean": mean, "sd": sd}, ll, 2, n)


def _fit_exponential(x: np.ndarray) -> FitReport:
    n = len(x)
    rate = 1.0 / float(np.mean(x))
    ll = n * math.log(rate) - n
    return _report("exponential", {"rate": rate}, ll, 1, n)


def _fit_unit_weibull(x: np.ndarray) -> FitReport:
    if np.any(x <= 0.0) or np.any(x >= 1.0):
        raise SupportViolation("unit_weibull requires values inside (0, 1)")
    n = len(x)
    sample = DgosSample(values=tuple(sorted((float(v) for v in x), reverse=True)))
    result = fit_mle(sample, scheme_order_statistics(n))
    p = result.params
    z = -np.log(x)
    ll = float(
        np.sum(z)
        + n * (math.log(p.alpha) + math.log(p.beta))
        + (p.beta - 1.0) * np.sum(np.log(z))
        - p.alpha * np.sum(z**p.beta)
    )
    return _report("unit_weibull", {"alpha": p.alpha, "beta": p.beta}, ll, 2, n)


_FITTERS = {
    "weibull": _fit_weibull,
    "gamma": _fit_gamma,
    "normal": _fit_normal,
    "exponential": _fit_exponential,
    "unit_weibull": _fit_unit_weibull,
}


def fit_classical(data: Dataset, family: str) -> FitReport:
    """Maximum-likelihood fit of one family, with AIC and BIC."""
    if family not in _FITTERS:
        raise DomainError(f"unknown family {family!r}; expected one of {FAMILIES}")
    x = np.asarray(data.values, dtype=float)
    if family != "unit_weibull" and np.any(x <= 0.0):
        raise SupportViolation(f"{family} fitting expects positive data")
    return _FITTERS[family](x)


def ks_test(data: Dataset, cdf: Callable[[float], float]) -> tuple[float, float]:
    """One-sample two-sided Kolmogorov-Smirnov statistic and p-value.

    The p-value evaluates the asymptotic Kolmogorov tail at
    ``sqrt(n) * D`` with the reference distribution treated as fully
    known (no correction for estimated parameters).
    """
    x = np.sort(np.asarray(data.values, dtype=float))
    n = len(x)
    reference = np.array([cdf(v) for v in x])
    upper = np.arange(1, n + 1) / n
    lower = np.arange(0, n) / n
    statistic = float(max(np.max(upper - reference), np.max(reference - lower)))
    return statistic, kolmogorov_survival(math.sqrt(n) * statistic)


@dataclass
class CottonReport:
    """Everything the bundled walkthrough produces."""

    data: Dataset
    transformed: Dataset
    records: Dataset
    fits: list
    weibull_ks: tuple[float, float]
    unit_weibull_ks: tuple[float, float]
    order_statistics_estimates: dict  # (method, loss kind) -> EstimateSet or error string
    record_estimates: dict


def _bayes_table(sample_values, scheme_name, priors, losses, methods, t, seed, mcmc):
    sample = DgosSample(values=tuple(sorted(sample_values, reverse=True)))
    scheme = scheme_by_name(scheme_name, len(sample))
    cells = {}
    for method in methods:
        rng = np.random.default_rng([seed, METHODS.index(method)])
        estimator = Estimator(method, sample, scheme, priors, t, rng=rng, mcmc_config=mcmc)
        for loss in losses:
            try:
                cells[(method, loss.kind)] = estimator.estimate_set(loss)
            except UwBayesError as error:
                cells[(method, loss.kind)] = f"failed: {error}"
    return cells


def analyze_cotton(
    data: Dataset | None = None,
    priors: GammaPriors = PRIOR_I,
    c: float = 0.5,
    t: float = 0.5,
    methods: tuple[str, ...] = ("lindley", "tk", "mcmc"),
    record_mode: str = "running",
    seed: int = DEFAULT_SEED,
    mcmc: McmcConfig | None = None,
) -> CottonReport:
    """Run the full walkthrough on ``data`` (default: the bundled series).

    Classical fits and goodness of fit on the raw and transformed data,
    then Bayes estimates under both the ordered-sample scheme (all
    transformed values, descending) and the lower-record scheme (record
    subsequence of the transformed series).
    """
    if data is None:
        data = COTTON_PRODUCTION
    if mcmc is None:
        mcmc = McmcConfig()
    transformed = transform_unit(data)
    records = extract_lower_records(transformed, mode=record_mode)

    fits = [fit_classical(data, family) for family in ("weibull", "gamma", "normal", "exponential")]
    uw_fit = fit_classical(transformed, "unit_weibull")
    fits.append(uw_fit)

    weibull = fits[0]
    shape, scale = weibull.estimates["shape"], weibull.estimates["scale"]
    weibull_ks = ks_test(data, lambda v: 1.0 - math.exp(-((v / scale) ** shape)))
    uw_params = UwParams(uw_fit.estimates["alpha"], uw_fit.estimates["beta"])
    unit_weibull_ks = ks_test(transformed, lambda v: uw_cdf(v, uw_params))

    losses = (LossSpec("self"), LossSpec("linex", c), LossSpec("ge", c))
    order_cells = {}
    record_cells = {}
    if methods:
        order_cells = _bayes_table(
            transformed.values, "order_statistics", priors, losses, methods, t, seed, mcmc
        )
        record_cells = _bayes_table(
            records.values, "lower_records", priors, losses, methods, t, seed, mcmc
        )
    return CottonReport(
        data=data,
        transformed=transformed,
        records=records,
        fits=fits,
        weibull_ks=weibull_ks,
        unit_weibull_ks=unit_weibull_ks,
        order_statistics_estimates=order_cells,
        record_estimates=record_cells,
    )

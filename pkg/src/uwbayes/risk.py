"""Monte Carlo risk study across methods, losses, priors and schemes.

A plan spans a grid of true parameter pairs, sample sizes, sub-models and
priors.  Every cell is replicated: generate one descending sample, run
each requested method under each requested loss for all three targets,
and score the estimate against the truth with that same loss.  The risk
of a column is the mean loss over its successful replications; failed
replications (non-convergence, approximation breakdown) are counted and
excluded.

Reproducibility: replication ``r`` of cell ``i`` always draws from the
stream seeded by ``(plan.seed, i, r)``, so results are bitwise identical
for a given plan no matter how the work is scheduled, and sums are
accumulated in replication order before dividing.
"""

from __future__ import annotations

import csv
import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .dgos import SCHEME_NAMES, sample_dgos, scheme_by_name
from .distribution import UwParams, reliability
from .errors import DomainError, PlanInfeasible, UwBayesError
from .estimates import METHODS, TARGETS, Estimator
from .losses import LossSpec, loss_value
from .mcmc import McmcConfig
from .mle import fit_mle
from .priors import GammaPriors

__all__ = [
    "DEFAULT_SEED",
    "SimulationPlan",
    "RiskCell",
    "RiskTable",
    "default_plan",
    "run_plan",
    "emit_table",
    "read_table",
    "parse_plan_config",
]

#: Documented default seed used by the command line and bundled plans.
DEFAULT_SEED = 1729

_LOSS_ORDER = ("self", "linex", "ge")
_COLUMNS = [f"{kind}_{target}" for kind in _LOSS_ORDER for target in TARGETS]


@dataclass(frozen=True)
class SimulationPlan:
    """Grid, budget and loss configuration of one study."""

    truths: tuple[UwParams, ...]
    sizes: tuple[int, ...]
    schemes: tuple[str, ...]
    priors: tuple[GammaPriors, ...]
    losses: tuple[LossSpec, ...]
    methods: tuple[str, ...]
    replications: int
    t: float = 0.5
    c: float = 0.5
    seed: int = DEFAULT_SEED
    mcmc: McmcConfig = field(default_factory=McmcConfig)

    def __post_init__(self):
        if self.replications < 1:
            raise DomainError("replications must be at least 1")
        if not self.truths or not self.sizes or not self.schemes or not self.priors:
            raise DomainError("truths, sizes, schemes and priors must be nonempty")
        if not self.losses or not self.methods:
            raise DomainError("losses and methods must be nonempty")
        for name in self.schemes:
            if name not in SCHEME_NAMES:
                raise DomainError(f"unknown scheme {name!r}")
        for method in self.methods:
            if method not in METHODS:
                raise DomainError(f"unknown method {method!r}")
        if not (0.0 < self.t < 1.0):
            raise DomainError("t must lie in (0, 1)")

    def cells(self):
        """Deterministic enumeration of (truth, n, scheme, prior)."""
        return list(itertools.product(self.truths, self.sizes, self.schemes, self.priors))


def default_plan(replications: int = 1000, seed: int = DEFAULT_SEED, c: float = 0.5) -> SimulationPlan:
    """The bundled full-grid study: four truths, three sizes, both
    sub-models, informative and near-diffuse priors, all methods."""
    from .priors import PRIOR_I, PRIOR_II

    return SimulationPlan(
        truths=(UwParams(1, 1), UwParams(1.5, 1), UwParams(1, 1.5), UwParams(1.5, 1.5)),
        sizes=(5, 10, 15),
        schemes=SCHEME_NAMES,
        priors=(PRIOR_I, PRIOR_II),
        losses=(LossSpec("self"), LossSpec("linex", c), LossSpec("ge", c)),
        methods=METHODS,
        replications=replications,
        t=0.5,
        c=c,
        seed=seed,
    )


@dataclass
class RiskCell:
    """One (truth, n, scheme, prior, method) row of the output table."""

    risks: dict
    successes: dict
    replication_failures: int
    replications: int

    @property
    def failure_rate(self) -> float:
        return self.replication_failures / self.replications


@dataclass
class RiskTable:
    plan: SimulationPlan
    rows: dict  # (truth, n, scheme, prior, method) -> RiskCell

    def groups(self):
        seen = []
        for truth, n, scheme, prior, method in self.rows:
            key = (scheme, prior, method)
            if key not in seen:
                seen.append(key)
        return seen

    def subset(self, scheme: str, prior: GammaPriors, method: str) -> "RiskTable":
        rows = {
            key: cell
            for key, cell in self.rows.items()
            if key[2] == scheme and key[3] == prior and key[4] == method
        }
        return RiskTable(plan=self.plan, rows=rows)

    def flagged_cells(self, threshold: float = 0.05):
        """Rows whose replication failure rate exceeds the threshold."""
        return [key for key, cell in self.rows.items() if cell.failure_rate > threshold]


def _replicate_cell(plan: SimulationPlan, cell_index: int, cell):
    """All replications of one grid cell; returns per-method accumulators."""
    truth, n, scheme_name, prior = cell
    scheme = scheme_by_name(scheme_name, n)
    true_values = {
        "alpha": truth.alpha,
        "beta": truth.beta,
        "reliability": reliability(plan.t, truth),
    }
    loss_by_kind = {loss.kind: loss for loss in plan.losses}
    sums = {method: {col: 0.0 for col in _COLUMNS} for method in plan.methods}
    counts = {method: {col: 0 for col in _COLUMNS} for method in plan.methods}
    failures = {method: 0 for method in plan.methods}

    for rep in range(plan.replications):
        rng = np.random.default_rng([plan.seed, cell_index, rep])
        sample = sample_dgos(rng, scheme, truth)
        try:
            mle = fit_mle(sample, scheme)
        except UwBayesError:
            mle = None
        for method in plan.methods:
            estimator = Estimator(
                method,
                sample,
                scheme,
                prior,
                plan.t,
                rng=rng,
                mcmc_config=plan.mcmc,
                mle=mle,
            )
            failed = False
            for kind in _LOSS_ORDER:
                loss = loss_by_kind.get(kind)
                if loss is None:
                    continue
                for target in TARGETS:
                    column = f"{kind}_{target}"
                    try:
                        if method in ("lindley", "tk") and mle is None:
                            raise UwBayesError("maximum-likelihood anchor unavailable")
                        estimate = estimator.estimate(loss, target)
                        value = loss_value(loss, estimate, true_values[target])
                    except UwBayesError:
                        failed = True
                        continue
                    sums[method][column] += value
                    counts[method][column] += 1
            if failed:
                failures[method] += 1
    return sums, counts, failures


def run_plan(plan: SimulationPlan, jobs: int = 1, estimator_factory=None) -> RiskTable:
    """Execute the study.  Raises :class:`PlanInfeasible` if any row ends
    with zero successful replications in every column.

    ``estimator_factory`` replaces :class:`Estimator` construction; the
    test suite uses it to inject known-answer estimators.
    """
    cells = plan.cells()
    if estimator_factory is not None:
        results = [
            _replicate_cell_with_factory(plan, i, cell, estimator_factory)
            for i, cell in enumerate(cells)
        ]
    elif jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_replicate_cell, *zip(*[(plan, i, cell) for i, cell in enumerate(cells)])))
    else:
        results = [_replicate_cell(plan, i, cell) for i, cell in enumerate(cells)]

    rows = {}
    for cell, (sums, counts, failures) in zip(cells, results):
        truth, n, scheme_name, prior = cell
        for method in plan.methods:
            risks = {}
            requested = [
                col
                for col in _COLUMNS
                if col.split("_", 1)[0] in {loss.kind for loss in plan.losses}
            ]
            for column in requested:
                count = counts[method][column]
                risks[column] = sums[method][column] / count if count else None
            if all(risks[column] is None for column in requested):
                raise PlanInfeasible(
                    f"no successful replication for method {method} in cell "
                    f"(truth=({truth.alpha}, {truth.beta}), n={n}, {scheme_name})"
                )
            rows[(truth, n, scheme_name, prior, method)] = RiskCell(
                risks=risks,
                successes={col: counts[method][col] for col in requested},
                replication_failures=failures[method],
                replications=plan.replications,
            )
    return RiskTable(plan=plan, rows=rows)


def _replicate_cell_with_factory(plan, cell_index, cell, factory):
    """Same loop as :func:`_replicate_cell` but with injected estimators."""
    truth, n, scheme_name, prior = cell
    scheme = scheme_by_name(scheme_name, n)
    true_values = {
        "alpha": truth.alpha,
        "beta": truth.beta,
        "reliability": reliability(plan.t, truth),
    }
    loss_by_kind = {loss.kind: loss for loss in plan.losses}
    sums = {method: {col: 0.0 for col in _COLUMNS} for method in plan.methods}
    counts = {method: {col: 0 for col in _COLUMNS} for method in plan.methods}
    failures = {method: 0 for method in plan.methods}
    for rep in range(plan.replications):
        rng = np.random.default_rng([plan.seed, cell_index, rep])
        sample = sample_dgos(rng, scheme, truth)
        for method in plan.methods:
            estimator = factory(method, sample, scheme, prior, plan.t, rng)
            failed = False
            for kind in _LOSS_ORDER:
                loss = loss_by_kind.get(kind)
                if loss is None:
                    continue
                for target in TARGETS:
                    column = f"{kind}_{target}"
                    try:
                        estimate = estimator.estimate(loss, target)
                        value = loss_value(loss, estimate, true_values[target])
                    except UwBayesError:
                        failed = True
                        continue
                    sums[method][column] += value
                    counts[method][column] += 1
            if failed:
                failures[method] += 1
    return sums, counts, failures


def _format_truth(truth: UwParams) -> str:
    return f"({truth.alpha!r},{truth.beta!r})"


def _parse_truth(text: str) -> tuple[float, float]:
    inner = text.strip().strip("()")
    a, b = inner.split(",")
    return float(a), float(b)


def emit_table(table: RiskTable, path, float_fmt=repr) -> None:
    """Write one (scheme, prior, method) group as CSV.

    Layout: two key columns (truth, n) then the nine risk columns in the
    fixed order SELF/LINEX/GE x (alpha, beta, reliability).  Columns for
    losses the plan did not request are left empty.
    """
    groups = table.groups()
    if len(groups) > 1:
        raise DomainError(
            "emit_table writes a single (scheme, prior, method) group; "
            "split the table with subset() first"
        )
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["truth", "n", *_COLUMNS])
        ordered = sorted(
            table.rows.items(),
            key=lambda item: (
                table.plan.truths.index(item[0][0]),
                table.plan.sizes.index(item[0][1]),
            ),
        )
        for (truth, n, _, _, _), cell in ordered:
            row = [_format_truth(truth), n]
            for column in _COLUMNS:
                value = cell.risks.get(column)
                row.append("" if value is None else float_fmt(value))
            writer.writerow(row)


def read_table(path):
    """Parse a CSV written by :func:`emit_table`.

    Returns a dict mapping ``((alpha, beta), n)`` to a column/value dict
    (missing entries are None).
    """
    rows = {}
    with open(path, newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader)
        if header[:2] != ["truth", "n"] or header[2:] != _COLUMNS:
            raise DomainError(f"unrecognized risk-table header in {path}")
        for record in reader:
            truth = _parse_truth(record[0])
            n = int(record[1])
            values = {
                column: (float(text) if text else None)
                for column, text in zip(_COLUMNS, record[2:])
            }
            rows[(truth, n)] = values
    return rows


def parse_plan_config(text: str) -> SimulationPlan:
    """Build a plan from flat ``key = value`` lines.

    Recognized keys: truths (``a,b`` pairs split by ``;``), sizes,
    schemes, priors (``a1,b1,a2,b2`` split by ``;``), losses (kinds),
    methods, replications, t, c, seed, and the optional MCMC budget keys
    mcmc_iterations, mcmc_burn_in, mcmc_thinning, mcmc_chains.
    Lines starting with ``#`` are comments.
    """
    entries = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise DomainError(f"malformed config line {line!r}")
        key, _, value = line.partition("=")
        entries[key.strip()] = value.strip()

    def split_list(raw, sep=","):
        return [item.strip() for item in raw.split(sep) if item.strip()]

    required = ["truths", "sizes", "schemes", "priors", "losses", "methods", "replications"]
    missing = [key for key in required if key not in entries]
    if missing:
        raise DomainError(f"plan config is missing keys: {', '.join(missing)}")

    truths = tuple(
        UwParams(*(float(v) for v in split_list(pair)))
        for pair in split_list(entries["truths"], ";")
    )
    priors = tuple(
        GammaPriors(*(float(v) for v in split_list(quad)))
        for quad in split_list(entries["priors"], ";")
    )
    c = float(entries.get("c", 0.5))
    losses = tuple(
        LossSpec(kind) if kind == "self" else LossSpec(kind, c)
        for kind in split_list(entries["losses"])
    )
    mcmc_kwargs = {}
    for key, name in [
        ("mcmc_iterations", "iterations"),
        ("mcmc_burn_in", "burn_in"),
        ("mcmc_thinning", "thinning"),
        ("mcmc_chains", "chains"),
    ]:
        if key in entries:
            mcmc_kwargs[name] = int(entries[key])
    return SimulationPlan(
        truths=truths,
        sizes=tuple(int(v) for v in split_list(entries["sizes"])),
        schemes=tuple(split_list(entries["schemes"])),
        priors=priors,
        losses=losses,
        methods=tuple(split_list(entries["methods"])),
        replications=int(entries["replications"]),
        t=float(entries.get("t", 0.5)),
        c=c,
        seed=int(entries.get("seed", DEFAULT_SEED)),
        mcmc=McmcConfig(**mcmc_kwargs),
    )

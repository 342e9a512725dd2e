"""Command-line surface: generate, estimate, simulate, diagnose, analyze-cotton.

Every subcommand is deterministic given its flags and seed.  Exit codes:
0 on success, 1 for usage errors, 2 when every requested numerical cell
failed.  File output is CSV; numbers written by the CLI use fixed
six-decimal formatting so regression comparisons are byte-stable.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import sys

import numpy as np

from .datafit import Dataset, analyze_cotton
from .dgos import DgosSample, sample_dgos, scheme_by_name, scheme_general
from .distribution import UwParams
from .errors import UwBayesError
from .estimates import METHODS, Estimator
from .losses import LossSpec
from .mcmc import McmcConfig, gelman_rubin, run_chains
from .priors import GammaPriors
from .risk import DEFAULT_SEED, default_plan, emit_table, parse_plan_config, run_plan

_FMT = "{:.6f}"

_SCHEME_ALIASES = {
    "order-statistics": "order_statistics",
    "order_statistics": "order_statistics",
    "records": "lower_records",
    "lower-records": "lower_records",
    "lower_records": "lower_records",
    "general": "general",
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        # Usage problems exit with code 1 (argparse defaults to 2).
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _add_prior_flag(parser):
    parser.add_argument(
        "--prior",
        default="2,2,2,2",
        help="gamma hyperparameters a1,b1,a2,b2 (default informative 2,2,2,2)",
    )


def _parse_prior(text: str) -> GammaPriors:
    parts = [float(v) for v in text.split(",")]
    if len(parts) != 4:
        raise UwBayesError("prior must have four components a1,b1,a2,b2")
    return GammaPriors(*parts)


def _parse_scheme(args, n: int):
    name = _SCHEME_ALIASES.get(args.model)
    if name is None:
        raise UwBayesError(f"unknown model {args.model!r}")
    if name == "general":
        if args.m is None:
            raise UwBayesError("--m is required with the general model")
        m = [float(v) for v in args.m.split(",")] if args.m else []
        return scheme_general(n, args.k, m)
    return scheme_by_name(name, n)


def _losses_from(arg: str, c: float):
    losses = []
    for kind in (s.strip() for s in arg.split(",")):
        if not kind:
            continue
        losses.append(LossSpec(kind) if kind == "self" else LossSpec(kind, c))
    if not losses:
        raise UwBayesError("at least one loss is required")
    return losses


def _cmd_generate(args) -> int:
    scheme = _parse_scheme(args, args.n)
    params = UwParams(args.alpha, args.beta)
    with open(args.output, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow([f"x{i}" for i in range(1, args.n + 1)])
        for rep in range(args.reps):
            rng = np.random.default_rng([args.seed, rep])
            sample = sample_dgos(rng, scheme, params)
            writer.writerow([_FMT.format(v) for v in sample.values])
    print(f"wrote {args.reps} samples of size {args.n} to {args.output}")
    return 0


def _read_values(path) -> list[float]:
    with open(path, newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header is None:
            raise UwBayesError(f"empty data file {path}")
        try:
            first = [float(v) for v in header if v.strip()]
        except ValueError:
            first = []
        values = list(first)
        for row in reader:
            values.extend(float(v) for v in row if v.strip())
    if not values:
        raise UwBayesError(f"no numeric values found in {path}")
    return values


def _cmd_estimate(args) -> int:
    values = _read_values(args.data)
    scheme = _parse_scheme(args, len(values))
    sample = DgosSample(values=tuple(sorted(values, reverse=True)))
    priors = _parse_prior(args.prior)
    losses = _losses_from(args.losses, args.c)
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    for method in methods:
        if method not in METHODS:
            raise UwBayesError(f"unknown method {method!r}")

    mcmc = McmcConfig(
        iterations=args.iterations, burn_in=args.burn_in, chains=args.chains
    )
    rows = []
    successes = 0
    for index, method in enumerate(methods):
        rng = np.random.default_rng([args.seed, index])
        estimator = Estimator(
            method, sample, scheme, priors, args.t, rng=rng, mcmc_config=mcmc
        )
        for loss in losses:
            row = {"method": method, "loss": loss.kind}
            for target in ("alpha", "beta", "reliability"):
                try:
                    row[target] = _FMT.format(estimator.estimate(loss, target))
                    successes += 1
                except UwBayesError as error:
                    row[target] = f"failed: {error}"
            rows.append(row)

    with open(args.output, "w", newline="") as handle:
        writer = csv.DictWriter(
            handle, fieldnames=["method", "loss", "alpha", "beta", "reliability"]
        )
        writer.writeheader()
        writer.writerows(rows)
    for row in rows:
        print(
            f"{row['method']:8s} {row['loss']:6s} "
            f"alpha={row['alpha']} beta={row['beta']} R(t)={row['reliability']}"
        )
    if successes == 0:
        print("every requested cell failed", file=sys.stderr)
        return 2
    print(f"wrote estimates to {args.output}")
    return 0


def _cmd_simulate(args) -> int:
    try:
        if args.config:
            with open(args.config) as handle:
                plan = parse_plan_config(handle.read())
            if args.replications is not None:
                plan = dataclasses.replace(plan, replications=args.replications)
        else:
            replications = args.replications if args.replications is not None else 1000
            plan = default_plan(replications=replications, seed=args.seed)
    except UwBayesError as error:
        # A malformed or empty plan is a usage problem, not a numerical one.
        print(f"usage error: {error}", file=sys.stderr)
        return 1
    table = run_plan(plan, jobs=args.jobs)
    written = []
    for scheme, prior, method in table.groups():
        prior_tag = f"{prior.a1:g}-{prior.b1:g}-{prior.a2:g}-{prior.b2:g}"
        path = f"{args.output}_{method}_{scheme}_prior{prior_tag}.csv"
        emit_table(table.subset(scheme, prior, method), path, float_fmt=_FMT.format)
        written.append(path)
    flagged = table.flagged_cells()
    if flagged:
        print(f"warning: {len(flagged)} cells exceeded the 5% failure-rate threshold")
        for key in flagged:
            truth, n, scheme, prior, method = key
            print(
                f"  flagged: method={method} scheme={scheme} n={n} "
                f"truth=({truth.alpha:g},{truth.beta:g}) "
                f"failures={table.rows[key].replication_failures}/{table.rows[key].replications}"
            )
    for path in written:
        print(f"wrote {path}")
    return 0


def _cmd_diagnose(args) -> int:
    values = _read_values(args.data)
    scheme = _parse_scheme(args, len(values))
    sample = DgosSample(values=tuple(sorted(values, reverse=True)))
    priors = _parse_prior(args.prior)
    if args.chains < 2:
        raise UwBayesError("the diagnostic needs at least two chains")

    checkpoints = [cp for cp in (1000, 10000) if cp < args.iterations]
    checkpoints.append(args.iterations)
    rows = []
    for checkpoint in checkpoints:
        burn = min(args.burn_in, checkpoint // 10)
        config = McmcConfig(
            iterations=checkpoint, burn_in=burn, chains=args.chains, seed=args.seed
        )
        draws = run_chains(sample, scheme, priors, config)
        for parameter, extract in (("alpha", "alpha_draws"), ("beta", "beta_draws")):
            factor = gelman_rubin([getattr(d, extract) for d in draws])
            rows.append(
                {
                    "iterations": checkpoint,
                    "parameter": parameter,
                    "gelman_rubin": _FMT.format(factor),
                }
            )
            print(f"iterations={checkpoint:>7d} {parameter:5s} GR={factor:.6f}")
    with open(args.output, "w", newline="") as handle:
        writer = csv.DictWriter(handle, fieldnames=["iterations", "parameter", "gelman_rubin"])
        writer.writeheader()
        writer.writerows(rows)
    print(f"wrote {args.output}")
    return 0


def _cmd_analyze_cotton(args) -> int:
    methods = tuple(m.strip() for m in args.methods.split(",") if m.strip())
    report = analyze_cotton(
        priors=_parse_prior(args.prior),
        c=args.c,
        t=args.t,
        methods=methods,
        record_mode="sorted" if args.sorted_records else "running",
        seed=args.seed,
    )
    fits_path = f"{args.output}_fits.csv"
    with open(fits_path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["distribution", "estimates", "log_likelihood", "aic", "bic"])
        for fit in report.fits:
            estimates = " ".join(
                f"{name}={_FMT.format(value)}" for name, value in fit.estimates.items()
            )
            writer.writerow(
                [
                    fit.distribution,
                    estimates,
                    _FMT.format(fit.log_likelihood),
                    _FMT.format(fit.aic),
                    _FMT.format(fit.bic),
                ]
            )
    print(f"data: {', '.join(f'{v:g}' for v in report.data.values)}")
    print(
        "transformed: "
        + ", ".join(_FMT.format(v) for v in report.transformed.values)
    )
    print("records: " + ", ".join(_FMT.format(v) for v in report.records.values))
    print(
        f"weibull KS: D={report.weibull_ks[0]:.6f} p={report.weibull_ks[1]:.6f}  "
        f"unit-weibull KS: D={report.unit_weibull_ks[0]:.6f} p={report.unit_weibull_ks[1]:.6f}"
    )

    written = [fits_path]
    for tag, cells in (
        ("order_statistics", report.order_statistics_estimates),
        ("lower_records", report.record_estimates),
    ):
        if not cells:
            continue
        path = f"{args.output}_bayes_{tag}.csv"
        with open(path, "w", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(["method", "loss", "alpha", "beta", "reliability"])
            for (method, loss_kind), cell in cells.items():
                if isinstance(cell, str):
                    writer.writerow([method, loss_kind, cell, cell, cell])
                else:
                    writer.writerow(
                        [
                            method,
                            loss_kind,
                            _FMT.format(cell.alpha),
                            _FMT.format(cell.beta),
                            _FMT.format(cell.reliability),
                        ]
                    )
        written.append(path)
    for path in written:
        print(f"wrote {path}")
    return 0


def _build_parser() -> _Parser:
    parser = _Parser(prog="uwbayes", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    generate = sub.add_parser("generate", help="simulate descending samples")
    generate.add_argument("--model", default="order-statistics")
    generate.add_argument("--n", type=int, required=True)
    generate.add_argument("--k", type=float, default=1.0)
    generate.add_argument("--m", default=None, help="comma list of m values (general model)")
    generate.add_argument("--alpha", type=float, required=True)
    generate.add_argument("--beta", type=float, required=True)
    generate.add_argument("--reps", type=int, default=1)
    generate.add_argument("--seed", type=int, default=DEFAULT_SEED)
    generate.add_argument("--output", default="samples.csv")
    generate.set_defaults(func=_cmd_generate)

    estimate = sub.add_parser("estimate", help="Bayes estimates for one data file")
    estimate.add_argument("--data", required=True)
    estimate.add_argument("--model", default="order-statistics")
    estimate.add_argument("--k", type=float, default=1.0)
    estimate.add_argument("--m", default=None)
    _add_prior_flag(estimate)
    estimate.add_argument("--losses", default="self,linex,ge")
    estimate.add_argument("--methods", default="lindley,tk,mcmc")
    estimate.add_argument("--c", type=float, default=0.5)
    estimate.add_argument("--t", type=float, default=0.5)
    estimate.add_argument("--iterations", type=int, default=11000)
    estimate.add_argument("--burn-in", dest="burn_in", type=int, default=1000)
    estimate.add_argument("--chains", type=int, default=2)
    estimate.add_argument("--seed", type=int, default=DEFAULT_SEED)
    estimate.add_argument("--output", default="estimates.csv")
    estimate.set_defaults(func=_cmd_estimate)

    simulate = sub.add_parser("simulate", help="run a Monte Carlo risk plan")
    simulate.add_argument("--config", default=None, help="flat key=value plan file")
    simulate.add_argument("--replications", type=int, default=None)
    simulate.add_argument("--seed", type=int, default=DEFAULT_SEED)
    simulate.add_argument("--jobs", type=int, default=1)
    simulate.add_argument("--output", default="risks")
    simulate.set_defaults(func=_cmd_simulate)

    diagnose = sub.add_parser("diagnose", help="Gelman-Rubin convergence report")
    diagnose.add_argument("--data", required=True)
    diagnose.add_argument("--model", default="records")
    diagnose.add_argument("--k", type=float, default=1.0)
    diagnose.add_argument("--m", default=None)
    _add_prior_flag(diagnose)
    diagnose.add_argument("--chains", type=int, default=2)
    diagnose.add_argument("--iterations", type=int, default=10000)
    diagnose.add_argument("--burn-in", dest="burn_in", type=int, default=1000)
    diagnose.add_argument("--seed", type=int, default=DEFAULT_SEED)
    diagnose.add_argument("--output", default="diagnostics.csv")
    diagnose.set_defaults(func=_cmd_diagnose)

    cotton = sub.add_parser("analyze-cotton", help="bundled real-data walkthrough")
    _add_prior_flag(cotton)
    cotton.add_argument("--c", type=float, default=0.5)
    cotton.add_argument("--t", type=float, default=0.5)
    cotton.add_argument("--methods", default="lindley,tk,mcmc")
    cotton.add_argument(
        "--sorted-records",
        action="store_true",
        help="use distinct sorted values instead of chronological running minima",
    )
    cotton.add_argument("--seed", type=int, default=DEFAULT_SEED)
    cotton.add_argument("--output", default="cotton")
    cotton.set_defaults(func=_cmd_analyze_cotton)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "n", None) is not None and args.n < 1:
        parser.error("--n must be a positive integer")
    if getattr(args, "reps", None) is not None and args.reps < 1:
        parser.error("--reps must be a positive integer")
    try:
        return args.func(args)
    except UwBayesError as error:
        print(f"error: {error}", file=sys.stderr)
        return 2
    except FileNotFoundError as error:
        print(f"error: {error}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

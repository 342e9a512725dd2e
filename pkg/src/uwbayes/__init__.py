"""Bayesian estimation for the Unit-Weibull law from descending ordered data.

The package covers the full workflow: the distribution itself, sample
generation and likelihood for descending ordered-observation schemes
(order statistics, lower records and the general family), maximum
likelihood, three Bayes engines (expansion around the MLE,
maximization-ratio approximation, Gibbs-within-Metropolis sampling)
under squared-error, LINEX and general-entropy losses, a Monte Carlo
risk-study harness and a real-data fitting pipeline with a command-line
front end.
"""

from .distribution import (
    ReliabilityQuery,
    UwParams,
    cdf,
    log_pdf,
    pdf,
    quantile,
    reliability,
    sample_iid,
)
from .dgos import (
    SCHEME_NAMES,
    DgosSample,
    DgosScheme,
    DgosStats,
    log_likelihood,
    sample_dgos,
    sample_from_csv,
    sample_to_csv,
    scheme_by_name,
    scheme_general,
    scheme_lower_records,
    scheme_order_statistics,
)
from .errors import (
    ApproximationOutOfRange,
    DegenerateSample,
    DomainError,
    InvalidEstimate,
    InvalidScheme,
    NoConvergence,
    NonConcaveAtOptimum,
    PlanInfeasible,
    SupportViolation,
    UwBayesError,
)
from .estimates import EstimateSet, Estimator, make_estimator
from .lindley import LindleyWorkspace, lindley_derivatives, lindley_estimate, lindley_expectation
from .losses import SELF, LossSpec, loss_value
from .mcmc import (
    McmcConfig,
    PosteriorDraws,
    beta_log_kernel,
    gelman_rubin,
    mcmc_estimate,
    mh_step_beta,
    pool_draws,
    run_chain,
    run_chains,
    sample_alpha_conditional,
    tune_proposal_sd,
)
from .mle import MleResult, fit_mle, score
from .priors import PRIOR_I, PRIOR_II, GammaPriors
from .risk import (
    DEFAULT_SEED,
    RiskTable,
    SimulationPlan,
    default_plan,
    emit_table,
    parse_plan_config,
    read_table,
    run_plan,
)
from .datafit import (
    COTTON_PRODUCTION,
    Dataset,
    FitReport,
    analyze_cotton,
    extract_lower_records,
    fit_classical,
    ks_test,
    transform_unit,
)
from .tk import TkSolver, TkWorkspace, maximize_psi, psi, tk_estimate, tk_expectation

__version__ = "0.1.0"

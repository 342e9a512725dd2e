"""Exception hierarchy for uwbayes.

Everything raised on purpose derives from :class:`UwBayesError`, so callers
can catch the package's failures with a single except clause.  Validation
failures additionally derive from ``ValueError``.
"""


class UwBayesError(Exception):
    """Base class for all errors raised by uwbayes."""


class DomainError(UwBayesError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class InvalidScheme(UwBayesError, ValueError):
    """An ordered-observation scheme violates its positivity constraints."""


class DegenerateSample(UwBayesError):
    """The sample carries no information about the shape parameter.

    Raised when the profiled score equation has no interior root, e.g. for
    a single observation or when every observation coincides.
    """


class NoConvergence(UwBayesError):
    """An iterative solver exhausted its iteration budget."""


class NonConcaveAtOptimum(UwBayesError):
    """A maximizer returned a point whose Hessian is not negative definite."""


class ApproximationOutOfRange(UwBayesError):
    """An asymptotic approximation produced a value outside the valid range.

    The closed-form expansions are corrections, not true expectations, so
    they can leave the target's support (negative inner expectation where a
    logarithm is required, reliability outside (0, 1), ...).  Surfacing the
    breakdown beats returning NaN.
    """


class InvalidEstimate(UwBayesError, ValueError):
    """An estimate is outside the support required by a loss function."""


class SupportViolation(UwBayesError, ValueError):
    """Data lie outside the support of the requested distribution family."""


class PlanInfeasible(UwBayesError):
    """A simulation cell produced no successful replication at all."""

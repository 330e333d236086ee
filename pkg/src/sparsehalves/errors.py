"""Exception types shared across the package.

The CLI maps these to distinct exit codes, so scripted pipelines can branch
on what went wrong.
"""


class PreconditionError(ValueError):
    """A stated precondition of an operation does not hold for the input."""


class Graph6Error(ValueError):
    """Malformed graph6 text (bad length prefix, stray bits, bad chars)."""


class OracleCapError(ValueError):
    """Exact search requested above the configured size cap without override."""


class BudgetExhausted(RuntimeError):
    """A certification run hit its box budget before deciding the domain."""


class CounterexampleCandidate(RuntimeError):
    """A construction missed a bound that a known theorem says it must meet.

    This is never swallowed: it either exposes a bug in the construction or
    (far less likely) a counterexample worth a closer look.  The offending
    instance is attached for reproduction.
    """

    def __init__(self, message, graph6=None, details=None):
        super().__init__(message)
        self.graph6 = graph6
        self.details = details or {}


class TheoremViolation(RuntimeError):
    """An oracle-verified instance contradicts a checked characterization.

    Carries a reproducer (graph6 line plus the numbers that failed) so the
    run can be replayed.
    """

    def __init__(self, message, graph6=None, details=None):
        super().__init__(message)
        self.graph6 = graph6
        self.details = details or {}

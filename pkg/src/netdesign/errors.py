"""Exception types shared across the package."""


class NetDesignError(Exception):
    """Base class for every error raised by this package."""


class ParseError(NetDesignError):
    def __init__(self, line: int, reason: str):
        self.line = line
        self.reason = reason
        super().__init__(f"line {line}: {reason}")


class InstanceTooLarge(NetDesignError):
    """Exhaustive cut enumeration was requested past the configured vertex limit."""


class Infeasible(NetDesignError):
    """The instance admits no feasible solution."""


class TwoCoverInfeasible(Infeasible):
    """A cut in the cover family cannot be covered with the required multiplicity."""


class LpInfeasible(NetDesignError):
    """The linear program has an empty feasible region."""


class LpUnbounded(NetDesignError):
    """The linear program is unbounded; cannot happen with box constraints."""


class IterationLimitExceeded(NetDesignError):
    """Cutting-plane loop exceeded its iteration budget."""


class RoundingStuck(RuntimeError, NetDesignError):
    """A vertex solution had no variable at or above the rounding threshold.

    Signals an input whose requirement function is not weakly supermodular;
    must not occur for the requirement functions built by this package.
    """


class RestartLimitExceeded(NetDesignError):
    """Too many rounding restarts while repairing violated knapsack-cover rows."""


class TooManyLinks(NetDesignError):
    """Exact cover search is limited to small link sets."""


class TooManyEdges(NetDesignError):
    """Exact optimum search is limited to small edge sets."""


class InvariantViolated(NetDesignError):
    """A runtime invariant that the algorithms guarantee failed to hold."""

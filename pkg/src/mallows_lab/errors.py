"""Exception types shared across the library."""


class MallowsLabError(Exception):
    """Base class for all library-specific errors."""


class NotAPermutation(MallowsLabError, ValueError):
    """A value sequence is not a bijection of {1, ..., n}."""


class RangeViolation(MallowsLabError, ValueError):
    """An inversion-count sequence violates its admissible range."""


class IndexOutOfRange(MallowsLabError, ValueError):
    """An index set escapes {1, ..., n} or is not strictly increasing."""


class DomainError(MallowsLabError, ValueError):
    """A scalar argument is outside the domain of a closed-form formula."""


class BudgetExceeded(MallowsLabError, RuntimeError):
    """A brute-force enumeration would exceed its configured budget."""


class PreconditionViolated(MallowsLabError, ValueError):
    """A documented precondition (e.g. componentwise dominance) fails."""


class InsufficientSamples(MallowsLabError, ValueError):
    """Too few samples to produce the requested estimate."""


class OutOfHorizon(MallowsLabError, ValueError):
    """A time parameter exceeds the horizon a path was simulated up to."""


class ConfigError(MallowsLabError, ValueError):
    """An experiment or CLI configuration is invalid."""

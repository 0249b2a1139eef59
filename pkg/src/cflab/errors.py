"""Exception types shared across the package."""


class CFLabError(Exception):
    """Base class for every error raised by cflab."""


class BudgetExceeded(CFLabError):
    """An iteration, term or precision budget ran out before the target was met."""

    def __init__(self, message: str, last_gap=None):
        super().__init__(message)
        self.last_gap = last_gap


class SingularConvergent(CFLabError):
    """A convergent denominator B_n vanished beyond n = 0."""


class PoleError(CFLabError):
    """Parameters hit a pole of a Pochhammer symbol in the denominator."""


class DegenerateRelation(CFLabError):
    """A contiguous relation would divide by zero."""


class DivergentSeries(CFLabError):
    """A series was requested outside its convergence region."""


class ViolatedHypothesis(CFLabError):
    """A term of a particular solution vanished where it must not."""


class IndistinguishableFromZero(CFLabError):
    """A divisor cannot be separated from zero at the working precision."""


class RegistryError(CFLabError):
    """Schema or consistency failure while loading identity entries."""

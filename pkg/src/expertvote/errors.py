"""Exception hierarchy shared by every module of the package."""


class ExpertVoteError(Exception):
    """Base class for all errors raised by expertvote."""


class DomainError(ExpertVoteError, ValueError):
    """An argument lies outside the domain of the requested operation."""


class ParameterError(DomainError):
    """A parameter value lies outside the parameter interval of a family."""


class SampleError(DomainError):
    """A realization lies outside the sample interval of a family."""


class DegenerateSampleError(DomainError):
    """Summary statistics that cannot carry information (e.g. zero variance)."""


class NumericError(ExpertVoteError, ArithmeticError):
    """A numerical procedure failed to reach its accuracy target."""


class TruncationError(NumericError):
    """A mixture series did not reach its mass target within ``max_terms``."""


class QuadratureError(NumericError):
    """Adaptive quadrature exhausted its subdivision budget."""


class CompatibilityError(ExpertVoteError):
    """Neutral one-sided votes do not extend to a probability on the parameters.

    ``condition`` names the failed limit condition: ``"upper"`` when
    F(theta, x) does not vanish as theta approaches an open upper end of the
    parameter interval, ``"lower"`` when it does not tend to one at an open
    lower end.
    """

    def __init__(self, message, condition):
        super().__init__(message)
        self.condition = condition

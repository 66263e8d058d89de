"""Exception hierarchy shared across the package."""


class FucikError(Exception):
    """Base class for every error raised by this package."""


class ConfigError(FucikError, ValueError):
    """Invalid weight definition or experiment config. ``field`` names the culprit."""

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field


class SolverError(FucikError):
    """A numerical routine could not deliver a trustworthy answer."""


class BracketFailure(SolverError):
    pass


class StepFailure(SolverError):
    pass


class NonConvergence(SolverError):
    pass


class ExceedsDomain(SolverError):
    """The minimal admissible subinterval does not fit inside the domain."""


class InfeasibleBracket(SolverError):
    pass


class SandwichViolation(SolverError):
    """A computed first eigenvalue left the interval [mu_1/theta_+, mu_1/theta_-]."""


class MonotonicityViolation(SolverError):
    pass


class BoundViolation(FucikError):
    """A measured homogenization gap exceeded its theoretical bound."""

    def __init__(self, message, record=None, report=None):
        super().__init__(message)
        self.record = record
        self.report = report

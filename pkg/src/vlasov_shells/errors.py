"""Exception hierarchy. Each class carries the CLI exit code for its error class."""


class ShellError(Exception):
    """Base class for all errors raised by the package."""

    exit_code = 1
    error_class = "error"


class DomainError(ShellError, ValueError):
    """An argument violates the parameter constraints of the ansatz."""

    exit_code = 1
    error_class = "domain"


class UsageError(ShellError):
    exit_code = 1
    error_class = "usage"


class InfeasibleCenterError(ShellError):
    """The prescribed center value already lies at or above the cut-off energy."""

    exit_code = 2
    error_class = "infeasible-center"


class NoFiniteSupportError(ShellError):
    exit_code = 3
    error_class = "no-finite-support"


class HorizonError(ShellError):
    """1 - 2m/r dropped below the horizon guard during the relativistic solve."""

    exit_code = 4
    error_class = "horizon"


class NumericalError(ShellError):
    """Quadrature or ODE integration failed to reach the requested tolerance."""

    exit_code = 6
    error_class = "numerical"

    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved


class InputError(ShellError):
    """A previously written output could not be read back."""

    exit_code = 7
    error_class = "io"


VALIDATION_FAILURE_EXIT = 5

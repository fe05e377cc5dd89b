"""Exception taxonomy shared by the library and the CLI exit codes."""


class InvariantViolation(ValueError):
    """An input breaks a mathematical invariant (CLI exit code 2).

    Carries the offending residual when one was computed, so callers can
    report how far the input is from the admissible set instead of a bare
    boolean.
    """

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class NumericalError(RuntimeError):
    """A numerical operation failed, e.g. ill conditioning (CLI exit code 3)."""


class SingularMatrixError(NumericalError):
    """A required inverse does not exist at working precision.

    The fractional maps are only partially defined; this error is the
    structured "denominator not invertible" outcome and always carries the
    condition estimate that triggered the refusal.
    """

    def __init__(self, message, condition_estimate=float("inf")):
        super().__init__(f"{message} (condition estimate {condition_estimate:.3e})")
        self.condition_estimate = condition_estimate


class SchemaError(ValueError):
    """A document does not match the JSON matrix schema (CLI exit code 65)."""

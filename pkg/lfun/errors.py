# Exception Hierarchy
"""
Errors raised by lfun.

Two families map onto CLI exit codes: validation errors (exit 2) for bad
parameters or form files, computation errors (exit 3) for numerical
failures inside a pipeline.
"""


class LFunError(RuntimeError):
    """Base class of every error raised by the library."""

    exit_code = 3


# ============================================================================
# Validation (exit code 2)
# ============================================================================

class ValidationError(LFunError):
    exit_code = 2


class ParameterError(ValidationError):
    """Invalid pipeline parameter or CLI flag."""


class FormLoadError(ValidationError):
    """Form file violates the schema or a form invariant."""


class NotUnimodularError(ValidationError):
    """Matrix entries with determinant other than one."""


# ============================================================================
# Computation (exit code 3)
# ============================================================================

class ComputationError(LFunError):
    exit_code = 3


class SingularJetError(ComputationError):
    """Division by a jet whose constant term vanishes."""


class DomainError(ComputationError):
    """Argument outside the principal-branch domain of a function."""


class CompositionError(ComputationError):
    """Inner series of a composition has a nonzero constant term."""


class PoleError(ComputationError):
    """Evaluation at a pole of Gamma or of a hypergeometric function."""


class DegenerateTransformationError(ComputationError):
    """Hypergeometric transformation hits a Gamma pole (a - b integral)."""


class ReductionError(ComputationError):
    """Gauss reduction did not terminate within its iteration cap."""


class SelectionFailureError(ComputationError):
    """No T1 candidate gives a usable Mellin factor."""


class GroupingContractError(ComputationError):
    """A member point lies outside the neighbourhood of its representative."""


class PrecisionModeRequiredError(ComputationError):
    """A prefactor cannot be exponentiated in binary64."""


class InsufficientCoefficientsError(ComputationError):
    """The coefficient table is too short for the requested accuracy."""

    def __init__(self, required: int, available: int, height: float):
        self.required = required
        self.available = available
        self.height = height
        super().__init__(
            f"{required} Fourier coefficients needed at height {height:.6g}, "
            f"only {available} available"
        )

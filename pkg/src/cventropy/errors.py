"""Exception hierarchy. Each class carries the CLI exit code it maps to."""


class CVEntropyError(ValueError):
    exit_code = 1


class SingularMatrix(CVEntropyError):
    exit_code = 5


class NonPhysicalTrace(CVEntropyError):
    exit_code = 4


class BranchError(CVEntropyError):
    exit_code = 4


class InvariantViolation(CVEntropyError):
    exit_code = 4


class DegenerateReduction(CVEntropyError):
    exit_code = 5


class ProductState(CVEntropyError):
    """Raised when the two modes are uncorrelated; callers map this to zero entropy."""

    exit_code = 5


class DivergentPartition(CVEntropyError):
    exit_code = 3


class EntropyDiverges(CVEntropyError):
    exit_code = 3


class InvalidPhase(CVEntropyError):
    exit_code = 2


class CutoffTooSmall(CVEntropyError):
    exit_code = 3


class FormulaMismatch(CVEntropyError):
    exit_code = 6

"""Exception types shared across the package."""


class LeontiefIpmError(Exception):
    """Base class for every error raised by this package."""


class DimensionMismatch(LeontiefIpmError):
    """Operands have non-conformable shapes."""


class SingularMatrix(LeontiefIpmError):
    """A pivot fell below the relative threshold during LU factorization."""


class SingularNewtonSystem(LeontiefIpmError):
    """The scaled Newton system (ZM + W) could not be factorized."""


class LineSearchFailure(LeontiefIpmError):
    """Backtracking exhausted its budget without an acceptable step."""


class ZeroMerit(LeontiefIpmError):
    """Merit-gradient slope requested at an exactly solved point."""


class EnumerationCapExceeded(LeontiefIpmError):
    """A combinatorial sweep would exceed its configured cap."""


class CapExceeded(EnumerationCapExceeded):
    """Oracle enumeration would exceed its configured cap."""


class RecoveryVerificationFailed(LeontiefIpmError):
    """A recovered multi-technology solution failed verification.

    Carries the solver report and the offending solution so callers can
    still inspect or persist them.
    """

    def __init__(self, message, report=None, solution=None):
        super().__init__(message)
        self.report = report
        self.solution = solution


class ModelFormatError(LeontiefIpmError):
    """A model or solution file does not match the expected schema."""

"""Exception hierarchy shared by every evaluator."""


class ZetaShiftError(Exception):
    """Base class for all numeric failures raised by the package."""


class PoleError(ZetaShiftError, ValueError):
    """Evaluation requested at (or too close to) a genuine pole."""


class DomainError(ZetaShiftError, ValueError):
    """Argument outside the documented domain of a function."""


class CapExceededError(ZetaShiftError, ValueError):
    """A configured size cap (table length, modulus, resolution) was exceeded."""


class ToleranceError(ZetaShiftError):
    """No admissible parameter choice reaches the requested tolerance."""


class NonConvergenceError(ZetaShiftError):
    """An adaptive loop hit its iteration cap without a verdict.

    ``diagnostics`` carries whatever partial trace was accumulated.
    """

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics

class InternalInconsistency(AssertionError):
    """Two independent computations of the same quantity disagreed."""


class NotConstructible(ValueError):
    """The input admits no witness of the requested kind."""


class PaperContradiction(RuntimeError):
    """A case-analysis branch that is unreachable for valid inputs was reached.

    Carries the zero-set/difference profile that led there.
    """

    def __init__(self, message, profile=None):
        super().__init__(message)
        self.profile = profile


class AlreadyPeriodic(ValueError):
    """periodic_replacement was given a pair with a periodic component."""

    def __init__(self, message, component):
        super().__init__(message)
        self.component = component

"""Exception hierarchy shared by all modules."""


class RumorNetError(Exception):
    """Base class for every error raised by this package."""


class OddStubSum(RumorNetError, ValueError):
    """The degree sum is odd, so no perfect matching of stubs exists."""


class InfeasibleNormalization(RumorNetError, ValueError):
    pass


class DomainError(RumorNetError, ValueError):
    pass


class InfeasibleConstants(RumorNetError, ValueError):
    pass


class AlreadyMatched(RumorNetError):
    pass


class Exhausted(RumorNetError):
    pass


class TriesExhausted(RumorNetError):
    pass


class PhaseFailed(RumorNetError):
    """Phase 1 did not grow a large enough seed set (a whp-only event)."""


class CouplingBroken(RumorNetError):
    """The selected-stub pool emptied before the tree quota was met."""


class RoundCapExceeded(RumorNetError):
    pass


class DegenerateFit(RumorNetError, ValueError):
    pass

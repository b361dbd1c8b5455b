"""Exception types raised across the package."""


class OverlapSimError(Exception):
    """Base class for every error raised by overlap_sim."""


class DuplicateMode(OverlapSimError, ValueError):
    pass


class ModeMismatch(OverlapSimError, ValueError):
    pass


class UnknownMode(OverlapSimError, KeyError):
    pass


class ArityMismatch(OverlapSimError, ValueError):
    pass


class ZeroProbabilityCollapse(OverlapSimError, ArithmeticError):
    """A residual state was requested for an outcome of (numerically) zero probability."""


class ZeroState(OverlapSimError, ValueError):
    pass


class NotNormalizable(OverlapSimError, ValueError):
    """Input amplitudes are too far from unit norm to be a rounding error."""


class NonUnitary(OverlapSimError, ValueError):
    pass


class NoAcceptedShots(OverlapSimError, RuntimeError):
    """No shot survived postselection, so no overlap estimate exists."""

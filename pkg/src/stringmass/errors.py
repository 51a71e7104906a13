"""Exception hierarchy shared across the package."""


class StringMassError(Exception):
    """Base class for all package errors."""


class NoRealPositiveRoot(StringMassError):
    """The calibration cubic produced no positive real root (internal failure)."""


class ToleranceNotMet(StringMassError):
    """Iterative refinement stalled above the requested residual."""


class DegenerateBranch(StringMassError):
    """The Robin coupling diverges: 1 - alpha*mu*delta vanishes."""


class BranchAmbiguity(StringMassError):
    """Homotopy continuation of the calibration root is ill-defined."""


class ValidationFailed(StringMassError):
    """No calibration candidate reproduced the physical boundary conditions."""


class GridMismatch(StringMassError):
    """Operands live on different grids."""


class BracketCollision(StringMassError):
    """Two secular roots closer than the resolvable separation."""


class RobinViolation(StringMassError):
    """A constructed basis mode fails the Robin-domain test."""


class FrequencyDomainError(StringMassError):
    """A mode with lambda >= w2 leaked into an oscillatory evolution."""


class CFLViolation(StringMassError):
    """Explicit time step exceeds the stability bound."""


class BlowUp(StringMassError):
    """Finite-difference solution exceeded the instability sentinel."""


class BasisMismatch(StringMassError):
    """One-particle vectors truncated to different bases."""


class InsufficientModes(StringMassError):
    """Diagnostic requested with too few modes to be meaningful."""

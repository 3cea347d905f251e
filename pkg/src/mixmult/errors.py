"""Exception hierarchy.

Every failure mode of the exact engine is a distinct class so callers can
tell "this input is malformed" from "this quantity is genuinely infinite"
from "the sampling window did not stabilize".
"""


class MixmultError(Exception):
    """Base class for all package errors."""


class MixedSliceDegrees(MixmultError):
    """Slice-module generators do not share a T-degree."""


class DegreeMismatch(MixmultError):
    """A monomial or multi-index has the wrong degree for the operation."""


class ModeMismatch(MixmultError):
    """Ideal/slice modes cannot be combined this way."""


class NotContained(MixmultError):
    """The would-be submodule is not actually contained in the ambient one."""


class LengthNotFinite(MixmultError):
    """A length count could not be certified finite."""


class LengthInfinite(LengthNotFinite):
    """The quotient provably contains infinitely many monomials."""


class KMaxExceeded(LengthNotFinite):
    """No finiteness certificate below the configured K bound (infinite or unknown)."""


class CountingOverflow(MixmultError):
    """An enumeration box exceeded the machine-size safety cap."""


class GridTooSmall(MixmultError):
    """A finite-difference stencil fell outside the supplied grid."""


class UnstableWindow(MixmultError):
    """Finite differences failed to stabilize within the doubling budget."""


class TrivialModule(MixmultError):
    """A saturation collapsed to the unit ideal, so the module in play is zero."""


class HeightPreconditionFailed(MixmultError):
    """A verification requires a strict height bound that the setup violates."""


class ColengthError(MixmultError):
    """A generated submodule lacks finite colength, so its multiplicity is undefined."""


class JobError(MixmultError):
    """Base class for job-file problems; carries a 1-based line number."""

    def __init__(self, line: int, reason: str):
        self.line = line
        self.reason = reason
        super().__init__(f"line {line}: {reason}")


class ParseError(JobError):
    pass


class ArityError(ParseError):
    pass


class UnknownReference(ParseError):
    pass

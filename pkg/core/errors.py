"""Exception hierarchy.

Every error carries an optional JSON-serializable ``witness`` (indices are
1-based) and the process exit code the command line maps it to.
"""

from config.settings import EXIT_CODES


class WignerLiftError(Exception):
    """Base class for all library errors."""
    exit_code = EXIT_CODES["usage"]

    def __init__(self, message: str = "", witness=None):
        super().__init__(message or self.__class__.__name__)
        self.message = message or self.__class__.__name__
        self.witness = witness

    @property
    def name(self) -> str:
        return self.__class__.__name__

    def to_dict(self) -> dict:
        return {"error": self.name, "message": self.message, "witness": self.witness}


class UsageError(WignerLiftError):
    """Invalid arguments or malformed input."""
    exit_code = EXIT_CODES["usage"]


class InputOutputError(WignerLiftError):
    """A file could not be read or written."""
    exit_code = EXIT_CODES["io"]


class NotWignerSymmetry(WignerLiftError):
    """The map under study is certified not to be a Wigner symmetry."""
    exit_code = EXIT_CODES["rejected"]


class VerificationFailed(WignerLiftError):
    """The oracle passed every query but the lift does not reproduce it."""
    exit_code = EXIT_CODES["verification"]


# Usage errors

class NonUnitInput(UsageError):
    pass


class DimensionMismatch(UsageError):
    pass


class IndexOutOfRange(UsageError):
    pass


class VanishingComponent(UsageError):
    pass


class NotUnitary(UsageError):
    pass


class NotProperRotation(UsageError):
    pass


class DimensionTooLarge(UsageError):
    pass


class InvalidOracleSpec(UsageError):
    pass


# Rejections

class ImpureInput(NotWignerSymmetry):
    """A matrix expected to be a pure-state projector is not."""


class BasisImageNotOrthonormal(NotWignerSymmetry):
    pass


class NotOnCircle(NotWignerSymmetry):
    pass


class IndeterminateSign(NotWignerSymmetry):
    pass


class PhaseResidual(NotWignerSymmetry):
    pass


class InconsistentSigns(NotWignerSymmetry):
    pass


class PropertyViolation(NotWignerSymmetry):
    pass


class NotOrthogonal(NotWignerSymmetry):
    pass


class PhaseInconsistent(NotWignerSymmetry):
    pass

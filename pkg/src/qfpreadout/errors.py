"""Exception and warning types shared across the package."""


class QfpReadoutError(Exception):
    """Base class for all errors raised by this package."""


class TruncationTooSmall(QfpReadoutError):
    pass


class NotHermitian(QfpReadoutError):
    pass


class DimMismatch(QfpReadoutError):
    pass


class DegenerateQubit(QfpReadoutError):
    pass


class DegenerateSplitting(QfpReadoutError):
    pass


class SingularAngle(QfpReadoutError):
    pass


class NoStableMinimum(QfpReadoutError):
    pass


class NotPhotonBlockDiagonal(QfpReadoutError):
    """Raised by the fast channel; use ``apply_channel_oracle`` instead."""


class NotAState(QfpReadoutError):
    pass


class ZeroDetuning(QfpReadoutError):
    pass


class NoCrossoverInRange(QfpReadoutError):
    pass


class ModelError(QfpReadoutError):
    """Unsupported combination of model kind, basis and interaction mode."""


class ConfigError(QfpReadoutError):
    """Invalid sweep configuration. Carries optional line/field context."""

    def __init__(self, message, *, line=None, field=None):
        self.line = line
        self.field = field
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field '{field}'")
        prefix = f"[{', '.join(where)}] " if where else ""
        super().__init__(prefix + message)


class TruncationWarning(UserWarning):
    """Fock truncation is below the documented accuracy rule."""


class DispersiveRegimeViolated(UserWarning):
    """g|sin θ|/|δ| exceeds the dispersive validity threshold."""


class InteractionRegimeWarning(UserWarning):
    """zz/xx approximation used outside its flux/tunnel dominated regime."""

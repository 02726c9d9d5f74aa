"""Exception hierarchy shared across the package."""


class PicardEvolError(Exception):
    """Base class for all package errors."""


class AlgebraError(PicardEvolError, ValueError):
    """Invalid algebra data (non-associative table, broken unit law, bad shapes)."""


class AlgebraMismatchError(PicardEvolError, ValueError):
    """Operands live in different algebras."""


class SingularElementError(PicardEvolError, ArithmeticError):
    """The element is not a unit of the algebra."""


class SeminormError(PicardEvolError, ValueError):
    """A seminorm request that cannot be honoured (caps, unverifiable dominance)."""


class CertificationError(PicardEvolError):
    """No candidate seminorm produced a certificate."""


class CurveError(PicardEvolError, ValueError):
    """Invalid curve data or an operation the representation does not support."""


class DepthCapError(PicardEvolError):
    """The requested tolerance needs more Picard steps than the depth cap allows."""


class NumericalBreakdownError(PicardEvolError, ArithmeticError):
    """A floating-point check failed (invertibility, residual, imaginary residue)."""

"""Exception hierarchy shared across the library."""


class TroplinkError(Exception):
    """Base class for all library errors."""


class DivisionByZero(TroplinkError):
    pass


class ZeroInput(TroplinkError):
    pass


class LengthMismatch(TroplinkError):
    pass


class ZeroPolynomial(TroplinkError):
    pass


class VariableOutOfScope(TroplinkError):
    pass


class ZeroConstantTerm(TroplinkError):
    """The constant coefficient vanishes, so 0 lies on the variety."""


class DegeneratePolygon(TroplinkError):
    """Newton polygon has zero width; no slopes can be read off."""


class ResourceLimit(TroplinkError):
    """A configured size or degree cap was exceeded."""


class NonConstantValuation(TroplinkError):
    """Operation requires all coefficients to have valuation zero."""


class NotHomogeneous(TroplinkError):
    pass


class NotZeroDimensional(TroplinkError):
    pass


class NoResidueRoot(TroplinkError):
    """Residue polynomial has no usable root in the prime field."""


class MultipleResidueRoot(TroplinkError):
    """Every residue root is multiple; lifting hypothesis fails."""


class IrrationalResidueRoot(TroplinkError):
    """Residue equation has no rational root; extension fields unsupported."""


class InsufficientPrecision(TroplinkError):
    """Precision cap reached before the Newton polygon was certified."""


class NonTorusVariety(TroplinkError):
    """The variety meets a coordinate hyperplane."""


class NotCombinatoriallyCurve(TroplinkError):
    """Modulo its lineality space the tropical variety is not a curve."""


class DegenerateSlice(TroplinkError):
    """A link slice ideal failed to be zero-dimensional."""

    def __init__(self, coordinate, exponent, message=""):
        self.coordinate = coordinate
        self.exponent = exponent
        text = f"slice x{coordinate} -> t^{exponent} degenerate"
        if message:
            text += f": {message}"
        super().__init__(text)


class ExhaustedAttempts(TroplinkError):
    pass


class ProjectionCoversSpace(TroplinkError):
    """Projection of the homogeneity space fills the whole weight space."""


class IdealSyntaxError(TroplinkError):
    """Parse failure with position information."""

    def __init__(self, message, line, column):
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")


class UnknownVariable(IdealSyntaxError):
    pass


class NonPrimeModulus(TroplinkError):
    pass

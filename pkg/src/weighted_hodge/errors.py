"""Exception types raised across the package."""


class WeightedHodgeError(Exception):
    """Base class for all package errors."""


class KindMismatch(WeightedHodgeError, TypeError):
    """Scalar and vector quantities were combined, or an operator does not
    apply to the kind of field it was given."""


class InvalidIndex(WeightedHodgeError, ValueError):
    pass


class PoleProximity(WeightedHodgeError, ValueError):
    pass


class OriginSingular(WeightedHodgeError, ValueError):
    pass


class OriginProximity(WeightedHodgeError, ValueError):
    pass


class InvalidWeight(WeightedHodgeError, ValueError):
    """Weight exponent too close to the excluded set, or outside a formula's range."""


class PositiveSignUnsupported(WeightedHodgeError, ValueError):
    pass


class NonIntegralResult(WeightedHodgeError, ArithmeticError):
    pass


class SolverDiverged(WeightedHodgeError, RuntimeError):
    pass


class InadmissibleMedium(WeightedHodgeError, ValueError):
    pass


class EmptyBasis(WeightedHodgeError, ValueError):
    pass


class SingularGram(WeightedHodgeError, ArithmeticError):
    pass


class GridError(WeightedHodgeError, ValueError):
    pass


class FieldFileError(WeightedHodgeError, ValueError):
    """Malformed grid-field file; the message carries the 1-based line number."""

    def __init__(self, line, message):
        super().__init__(f"line {line}: {message}")
        self.line = line

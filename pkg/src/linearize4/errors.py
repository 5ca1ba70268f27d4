"""Exception hierarchy shared by all modules."""


class LinearizeError(Exception):
    """Base class for every error raised by this package."""


class ExprSyntaxError(LinearizeError):
    def __init__(self, message, position):
        self.position = position
        super().__init__(f"{message} at column {position}")


class UnknownIdentifier(LinearizeError):
    def __init__(self, name, position):
        self.name = name
        self.position = position
        super().__init__(f"unknown identifier {name!r} at column {position}")


class UnboundParameter(LinearizeError):
    pass


class SingularPoint(LinearizeError):
    """A quotient, log, sqrt or power left its domain during evaluation."""


class SamplingExhausted(LinearizeError):
    def __init__(self, message, offending=()):
        self.offending = list(offending)
        super().__init__(message)


class ShapeMismatch(LinearizeError):
    def __init__(self, monomials, detail=""):
        self.monomials = list(monomials)
        text = ", ".join(self.monomials) if self.monomials else detail
        super().__init__(f"right-hand side is outside the first candidate form: {text}")


class DegenerateMap(LinearizeError):
    pass


class BlowUp(LinearizeError):
    def __init__(self, x_star):
        self.x_star = x_star
        super().__init__(f"Riccati solution escapes near x = {x_star:.6g}")


class YDependence(LinearizeError):
    pass


class QuadratureSingularity(LinearizeError):
    pass


class BetaYDependence(LinearizeError):
    pass


class JacobianVanished(LinearizeError):
    pass


class ConsistencyViolation(LinearizeError):
    pass


class CharacteristicDirection(LinearizeError):
    pass


class TraceLeftBox(LinearizeError):
    pass


class RequestError(LinearizeError):
    """Malformed analysis request."""

"""Exception types shared by all modules."""


class DrawingError(ValueError):
    """Base class for invalid drawing input."""


class LoopEdge(DrawingError):
    pass


class UnknownVertex(DrawingError):
    pass


class DanglingCrossing(DrawingError):
    pass


class SelfCrossingEdge(DrawingError):
    pass


class BadRotation(DrawingError):
    pass


class NonAlternatingCrossing(DrawingError):
    pass


class NotSphere(DrawingError):
    pass


class DisconnectedPlanarization(DrawingError):
    pass


class DegenerateContact(DrawingError):
    """Geometric input violates general position (touching, overlap, triple point...)."""


class PreconditionFailed(ValueError):
    def __init__(self, message, failed=()):
        super().__init__(message)
        self.failed = tuple(failed)


class NTooSmall(ValueError):
    pass


class NOdd(ValueError):
    pass


class UnknownClass(ValueError):
    pass


class GenerationFailed(RuntimeError):
    pass


class NotBipartite(ValueError):
    def __init__(self, witness):
        super().__init__(f"odd closed walk: {' '.join(map(str, witness))}")
        self.witness = list(witness)


class ParseError(DrawingError):
    def __init__(self, message, line=0, column=0):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class UnboundedCell(ValueError):
    """Diagnostic: the operation is defined for bounded cells only."""

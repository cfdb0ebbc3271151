"""Exception hierarchy shared by all modules."""


class KacWardError(Exception):
    pass


class GraphError(KacWardError):
    """Invalid toric graph input."""


class DegenerateEmbedding(GraphError):
    pass


class RotationTie(DegenerateEmbedding):
    """Two oriented edges leave a vertex in the same direction."""


class ZeroLengthEdge(GraphError):
    pass


class Disconnected(GraphError):
    pass


class BacktrackPair(KacWardError):
    pass


class NotIncident(KacWardError):
    pass


class NotIsoradial(KacWardError):
    pass


class TooLarge(KacWardError):
    pass


class SignAmbiguous(KacWardError):
    pass


class NoOrientation(KacWardError):
    pass


class BracketFailure(KacWardError):
    pass


class NonPositiveSample(KacWardError):
    pass


class UnknownExample(KacWardError):
    pass


class ParseError(KacWardError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)

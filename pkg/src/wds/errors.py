"""Exception hierarchy.

Everything raised for bad *input* derives from :class:`InputError` so the
CLI can map it to exit status 2 without catching programming errors.
"""


class WDSError(Exception):
    pass


class InputError(WDSError, ValueError):
    """Malformed or inconsistent user input."""


# diagram
class MalformedCode(InputError):
    pass


class NonPlanar(InputError):
    pass


class DiagramHypothesisViolated(InputError):
    pass


class AngleOutOfRange(InputError):
    pass


# pattern
class DanglingReference(InputError):
    pass


# triangulation
class BadPermutation(InputError):
    pass


class UnpairedFace(InputError):
    pass


class OrientationInconsistent(InputError):
    pass


class VertexSumViolation(InputError):
    def __init__(self, vertex, total):
        super().__init__(f"angles at vertex {vertex} sum to {total} (units of pi), expected 1")
        self.vertex = vertex
        self.total = total


class NonTorusLink(WDSError):
    pass


# certify
class MissingCoefficient(InputError):
    pass


class UnreducedFraction(InputError):
    pass


class SlopeCuspMismatch(InputError):
    pass


# cusp geometry
class ZeroSlope(InputError):
    pass


class EqualSlopes(InputError):
    pass


class DomainError(InputError):
    pass

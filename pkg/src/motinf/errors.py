"""Exception hierarchy shared by the computation modules and the CLI."""

from __future__ import annotations


class MotinfError(Exception):
    """Base class. ``exit_code`` is what the CLI returns when this escapes."""

    exit_code = 2


class ValidationError(MotinfError, ValueError):
    """Malformed or inconsistent input.

    ``path`` names the offending field of the input record (e.g. ``edges[0]``).
    """

    def __init__(self, message: str, path: str | None = None):
        self.path = path
        super().__init__(f"{message} at {path}" if path else message)


class WrongField(ValidationError):
    pass


class OddDegree(MotinfError):
    """Quadratic pipeline asked for an odd line bundle on P^1."""

    exit_code = 3


class OddSelfIntersection(OddDegree):
    pass


class NonRationalPoint(MotinfError):
    exit_code = 3


class NonPermutationArtinDifferential(MotinfError):
    exit_code = 3


class MissingFaceData(ValidationError):
    pass


class TooManyHyperplanes(ValidationError):
    pass


class ParseError(ValidationError):
    def __init__(self, message: str, position: int, text: str = ""):
        self.position = position
        self.text = text
        super().__init__(f"{message} (position {position})")

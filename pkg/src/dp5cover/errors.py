"""Exception types shared across the package."""

from __future__ import annotations


class StructuralError(ValueError):
    """Input is malformed or violates a structural precondition."""


class ParseError(StructuralError):
    def __init__(self, message: str, position: int | None = None, source: str | None = None):
        self.position = position
        self.source = source
        where = f" at position {position}" if position is not None else ""
        super().__init__(f"{message}{where}")


class NonReducedError(StructuralError):
    """The total branch divisor repeats a curve."""

    def __init__(self, curve):
        self.curve = curve
        super().__init__(f"branch divisor not reduced: {curve} appears more than once")


class UnsupportedQuotientError(StructuralError):
    pass


class NotAPencilError(StructuralError):
    pass

"""Exception hierarchy shared by every engine module."""

from __future__ import annotations

from typing import Any


class KempeLabError(Exception):
    """Base class for all engine errors."""

    #: exit code used by the command line front end
    exit_code = 3


class ValidationError(KempeLabError):
    """Input does not describe a valid object."""

    exit_code = 2


class ParseError(ValidationError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class NotPlanarEmbedding(ValidationError):
    pass


class NotTriangulated(ValidationError):
    pass


class NotSimple(ValidationError):
    pass


class Disconnected(ValidationError):
    pass


class NotACycle(ValidationError):
    pass


class TriangleCycle(ValidationError):
    pass


class NotSMPG(ValidationError):
    pass


class OuterNotQuad(ValidationError):
    pass


class NotF2(ValidationError):
    pass


class NotBichromaticCycle(ValidationError):
    pass


class SiteMismatch(KempeLabError):
    pass


class FlipBlocked(KempeLabError):
    pass


class ColoringBlocked(KempeLabError):
    pass


class NotContractible(KempeLabError):
    pass


class OuterCycleViolation(KempeLabError):
    pass


class NoConfiguration(KempeLabError):
    pass


class OddCycleBlocked(KempeLabError):
    pass


class PathTooShort(KempeLabError):
    pass


class RuleConflict(KempeLabError):
    pass


class ChaseCapExceeded(KempeLabError):
    pass


class CycleCapExceeded(KempeLabError):
    pass


class FixtureMissing(KempeLabError):
    pass


class BranchUnmatched(KempeLabError):
    """A constructive case analysis met a state it has no rule for."""

    def __init__(self, message: str, context: dict[str, Any] | None = None):
        super().__init__(message)
        self.context = context or {}


class EarlyWin(KempeLabError):
    """Raised when a recoloring step already solves the problem.

    Carries the coloring that makes the short cut possible.
    """

    def __init__(self, message: str, coloring: Any = None, index: int = 0):
        super().__init__(message)
        self.coloring = coloring
        self.index = index


class CounterexampleAlarm(KempeLabError):
    """Outcomes that would contradict a theorem; never demoted."""

    exit_code = 4


class NotFourColorable(CounterexampleAlarm):
    pass


class NoDecycleColoring(CounterexampleAlarm):
    pass

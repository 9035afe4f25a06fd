# Error taxonomy shared across the package.
from __future__ import annotations


class ChromadelError(Exception):
    """Base class for all package errors."""

    exit_code = 1

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.message = message
        self.witness = witness

    def to_json_dict(self) -> dict:
        out = {"error": type(self).__name__, "message": self.message}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


# -- invalid input (exit code 1) --------------------------------------------

class DuplicatePoint(ChromadelError):
    pass


class NonSurjectiveColouring(ChromadelError):
    pass


class DimensionMismatch(ChromadelError):
    pass


class NotSimplicialInput(ChromadelError):
    """A vertex set collection that is not closed / not a complex."""


class DimensionTooLarge(ChromadelError):
    pass


class SizeLimitExceeded(ChromadelError):
    pass


class InvalidGamma(ChromadelError):
    pass


class NotRefinement(ChromadelError):
    pass


class MissingSimplex(ChromadelError):
    pass


class LengthMismatch(ChromadelError):
    pass


class ParseError(ChromadelError):
    pass


class NonMonotoneFiltration(ChromadelError):
    pass


class NoStack(ChromadelError):
    """The inclusion/exclusion constraints admit no stack at all."""


class NotTransverse(ChromadelError):
    pass


class NotInterval(ChromadelError):
    pass


class NotUnionOfIntervals(ChromadelError):
    pass


class NotCollapsible(ChromadelError):
    pass


# -- general position violations (exit code 2) ------------------------------

class DegenerateInput(ChromadelError):
    exit_code = 2


class NotSimplicial(ChromadelError):
    """Delaunay subdivision has a non-simplicial cell (cospherical input)."""

    exit_code = 2


class GeneralPositionViolation(ChromadelError):
    exit_code = 2


# -- internal invariants falsified (exit code 3) -----------------------------

class NumericalFailure(ChromadelError):
    exit_code = 3


class PartitionFailure(ChromadelError):
    exit_code = 3


class StuckCollapse(ChromadelError):
    exit_code = 3

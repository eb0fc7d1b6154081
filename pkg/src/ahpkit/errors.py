"""Exception types shared across the package."""
from __future__ import annotations


class AhpError(Exception):
    """Base class for all domain errors raised by this package."""


class ScaleViolationError(AhpError):
    """A judgment value is nonpositive, or off the 9-point scale in strict mode."""


class IncompleteJudgmentsError(AhpError):
    """A pairwise comparison set does not cover every unordered pair."""


class DuplicateJudgmentError(AhpError):
    """Two judgments were supplied for the same unordered pair."""


class MatrixError(AhpError):
    """A supplied comparison matrix violates a structural invariant
    (not square, nonpositive entry, diagonal not 1, reciprocity broken)."""


class UnsupportedOrderError(AhpError):
    """Matrix order outside the supported 2..10 range (random-index table ends at 10)."""


class DegeneratePriorityError(AhpError):
    """A priority vector contains a zero or negative component where strictly
    positive weights are required."""


class UndefinedIndexError(AhpError):
    """The consistency index is undefined (fewer than 2 items)."""


class ConvergenceError(AhpError):
    """Power iteration did not converge within the iteration budget."""

    def __init__(self, message: str, residual: float, iterations: int):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations


class IncompleteModelError(AhpError):
    """Evaluation requested on a model whose internal nodes lack judgments."""

    def __init__(self, message: str, node_ids: tuple[str, ...] = ()):
        super().__init__(message)
        self.node_ids = tuple(node_ids)


class IncompleteSheetError(AhpError):
    """A rating sheet is missing ratings for one or more leaves."""

    def __init__(self, message: str, missing: tuple[str, ...] = ()):
        super().__init__(message)
        self.missing = tuple(missing)


class RatingRangeError(AhpError):
    """A rating is outside the 0..10 integer scale."""


class UnknownTargetError(AhpError):
    """A rating, override, or judgment refers to an id the model does not contain."""


class EmptyResultError(AhpError):
    """Ranking was requested with no alternatives to rank."""


class DocumentError(AhpError):
    """A model document failed to parse or validate.

    ``diagnostics`` carries the individual findings when validation (rather
    than parsing) failed.
    """

    def __init__(self, message: str, diagnostics: list | None = None):
        super().__init__(message)
        self.diagnostics = list(diagnostics or [])


class OffScaleWarning(UserWarning):
    """A judgment value is accepted (relaxed mode) but is not a 9-point scale value."""

"""Pairwise-comparison matrices, priority derivation, and consistency analysis.

Implements the classic 9-point-scale workflow: build a positive reciprocal
judgment matrix, derive priority weights by normalizing columns and averaging
rows, estimate the principal eigenvalue from the weighted row sums, and judge
the result against the random-index table (acceptable when CR < 0.1).

All operations are pure functions of their inputs; values are safe to share
across threads.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    ConvergenceError,
    DegeneratePriorityError,
    DuplicateJudgmentError,
    IncompleteJudgmentsError,
    MatrixError,
    OffScaleWarning,
    ScaleViolationError,
    UndefinedIndexError,
    UnsupportedOrderError,
)

# Random consistency indices for matrix orders 1..10 (Saaty's reference table).
RANDOM_INDEX_TABLE = {
    1: 0.00, 2: 0.00, 3: 0.58, 4: 0.90, 5: 1.12,
    6: 1.24, 7: 1.32, 8: 1.41, 9: 1.45, 10: 1.49,
}

MIN_ORDER = 2
MAX_ORDER = 10

DEFAULT_THRESHOLD = 0.1

# Scale modes for judgment values.
SCALE_STRICT = "saaty-9"    # only 1..9 and their reciprocals
SCALE_RELAXED = "relaxed"   # any positive value; off-scale values warn

# The 9-point scale and its reciprocals.
SCALE_VALUES = tuple(float(k) for k in range(1, 10)) + tuple(1.0 / k for k in range(2, 10))

RECIPROCITY_RTOL = 1e-6
NORMALIZATION_ATOL = 1e-9

# Tiny negative CI values produced by float rounding on near-consistent
# matrices clamp to zero; anything more negative is a real input error.
CI_CLAMP = 1e-9


def is_scale_value(value: float, rtol: float = 1e-6) -> bool:
    """True if ``value`` is one of the 17 scale values (1..9 and reciprocals)."""
    return any(abs(value - s) <= rtol * s for s in SCALE_VALUES)


@dataclass(frozen=True)
class Judgment:
    """One pairwise preference: how strongly item ``row`` dominates item ``col``.

    Indices are 0-based positions among the compared items; ``value`` is the
    preference intensity (a reciprocal value means ``col`` dominates).
    """

    row: int
    col: int
    value: float

    def __post_init__(self):
        if self.row == self.col:
            raise DuplicateJudgmentError(
                f"judgment compares item {self.row} with itself; the diagonal is implicit"
            )
        if not self.value > 0:
            raise ScaleViolationError(f"judgment value must be positive, got {self.value!r}")


@dataclass(frozen=True, eq=False)
class ComparisonMatrix:
    """A square, positive, reciprocal judgment matrix over labeled items.

    Invariants enforced at construction: unit diagonal, all entries positive,
    entries[i][j] * entries[j][i] == 1 within relative tolerance 1e-6, and
    order between 2 and 10 (the random-index table ends at order 10).
    """

    entries: np.ndarray
    labels: tuple[str, ...]

    def __post_init__(self):
        entries = np.asarray(self.entries, dtype=float)
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "labels", tuple(str(l) for l in self.labels))
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise MatrixError(f"comparison matrix must be square, got shape {entries.shape}")
        n = entries.shape[0]
        if not MIN_ORDER <= n <= MAX_ORDER:
            raise UnsupportedOrderError(
                f"matrix order {n} unsupported; the random-index table covers orders up to {MAX_ORDER}"
            )
        if len(self.labels) != n:
            raise MatrixError(f"expected {n} labels, got {len(self.labels)}")
        if len(set(self.labels)) != n:
            raise MatrixError("item labels must be unique")
        if not np.all(np.isfinite(entries)) or not np.all(entries > 0):
            raise MatrixError("all comparison entries must be positive and finite")
        if not np.allclose(np.diag(entries), 1.0, rtol=0, atol=1e-12):
            raise MatrixError("an item compared with itself must be rated 1")
        products = entries * entries.T
        if not np.allclose(products, 1.0, rtol=RECIPROCITY_RTOL, atol=0):
            bad = np.argwhere(~np.isclose(products, 1.0, rtol=RECIPROCITY_RTOL, atol=0))
            i, j = bad[0]
            raise MatrixError(
                f"reciprocity violated between {self.labels[i]!r} and {self.labels[j]!r}: "
                f"{entries[i, j]!r} * {entries[j, i]!r} != 1"
            )
        entries.setflags(write=False)

    @property
    def n(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True, eq=False)
class PriorityVector:
    """Normalized weights over labeled items (sum 1, each within [0, 1])."""

    weights: np.ndarray
    labels: tuple[str, ...]

    def __post_init__(self):
        weights = np.asarray(self.weights, dtype=float)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "labels", tuple(str(l) for l in self.labels))
        if weights.ndim != 1 or len(self.labels) != weights.shape[0]:
            raise DegeneratePriorityError("weights and labels must have matching length")
        if np.any(weights < -NORMALIZATION_ATOL) or np.any(weights > 1 + NORMALIZATION_ATOL):
            raise DegeneratePriorityError("each weight must lie within [0, 1]")
        if abs(float(weights.sum()) - 1.0) > NORMALIZATION_ATOL:
            raise DegeneratePriorityError(f"weights must sum to 1, got {float(weights.sum())!r}")
        weights.setflags(write=False)

    def as_dict(self) -> dict[str, float]:
        return {label: float(w) for label, w in zip(self.labels, self.weights)}


@dataclass(frozen=True)
class ConsistencyReport:
    """Consistency analysis of one comparison matrix.

    ``ci = (lambda_max - n) / (n - 1)`` and ``cr = ci / ri`` (0 when ri is 0);
    the judgments are acceptable when ``cr`` is strictly below ``threshold``.
    """

    lambda_max: float
    ci: float
    ri: float
    cr: float
    consistent: bool
    n: int
    threshold: float = DEFAULT_THRESHOLD

    def as_dict(self) -> dict:
        return {
            "lambda_max": self.lambda_max,
            "ci": self.ci,
            "ri": self.ri,
            "cr": self.cr,
            "consistent": self.consistent,
            "n": self.n,
            "threshold": self.threshold,
        }


def _check_scale(value: float, scale: str) -> None:
    if not value > 0:
        raise ScaleViolationError(f"judgment value must be positive, got {value!r}")
    if is_scale_value(value):
        return
    if scale == SCALE_STRICT:
        raise ScaleViolationError(
            f"value {value!r} is not a 9-point scale value or reciprocal (strict mode)"
        )
    warnings.warn(
        f"judgment value {value!r} is off the 9-point scale; accepted in relaxed mode",
        OffScaleWarning,
        stacklevel=3,
    )


def build_matrix(
    labels: Sequence[str],
    judgments: Iterable[Judgment],
    scale: str = SCALE_RELAXED,
) -> ComparisonMatrix:
    """Build a comparison matrix from one judgment per unordered item pair.

    The diagonal is set to 1 and the unstated half of each pair is filled with
    the reciprocal of the stated one. Exactly n(n-1)/2 judgments must be
    supplied, one per pair, in either orientation.

    Raises ``IncompleteJudgmentsError`` naming the first missing pair,
    ``DuplicateJudgmentError`` on a pair judged twice, and
    ``ScaleViolationError`` on nonpositive values (always) or off-scale
    values (strict mode; relaxed mode warns instead).
    """
    labels = tuple(str(l) for l in labels)
    n = len(labels)
    if not MIN_ORDER <= n <= MAX_ORDER:
        raise UnsupportedOrderError(f"cannot compare {n} items; supported orders are 2..{MAX_ORDER}")
    entries = np.eye(n)
    seen: set[tuple[int, int]] = set()
    for j in judgments:
        if not (0 <= j.row < n and 0 <= j.col < n):
            raise IncompleteJudgmentsError(
                f"judgment ({j.row}, {j.col}) is out of range for {n} items"
            )
        pair = (min(j.row, j.col), max(j.row, j.col))
        if pair in seen:
            raise DuplicateJudgmentError(
                f"pair ({labels[pair[0]]!r}, {labels[pair[1]]!r}) judged more than once"
            )
        _check_scale(j.value, scale)
        seen.add(pair)
        entries[j.row, j.col] = j.value
        entries[j.col, j.row] = 1.0 / j.value
    for i in range(n):
        for k in range(i + 1, n):
            if (i, k) not in seen:
                raise IncompleteJudgmentsError(
                    f"missing judgment for pair ({labels[i]!r}, {labels[k]!r})"
                )
    return ComparisonMatrix(entries=entries, labels=labels)


def derive_priorities(matrix: ComparisonMatrix) -> PriorityVector:
    """Derive priority weights: divide each column by its sum, average each row.

    This is the normalized-column / row-average approximation of the principal
    eigenvector; for a perfectly consistent matrix the two coincide.
    """
    normalized = matrix.entries / matrix.entries.sum(axis=0)
    weights = normalized.mean(axis=1)
    weights = weights / weights.sum()  # remove last-ulp drift
    return PriorityVector(weights=weights, labels=matrix.labels)


def lambda_max(matrix: ComparisonMatrix, priorities: PriorityVector | np.ndarray) -> float:
    """Principal-eigenvalue estimate: the mean over rows of (A·x)_i / x_i."""
    x = priorities.weights if isinstance(priorities, PriorityVector) else np.asarray(priorities, float)
    if x.shape[0] != matrix.n:
        raise DegeneratePriorityError(
            f"priority vector has {x.shape[0]} components for a {matrix.n}x{matrix.n} matrix"
        )
    if np.any(x <= 0):
        raise DegeneratePriorityError("lambda_max requires strictly positive priorities")
    return float(np.mean((matrix.entries @ x) / x))


def consistency_index(lambda_value: float, n: int) -> float:
    """CI = (lambda_max - n) / (n - 1). Undefined for fewer than 2 items."""
    if n < 2:
        raise UndefinedIndexError(f"consistency index undefined for n={n}")
    return (lambda_value - n) / (n - 1)


def random_index(n: int) -> float:
    """Reference random-index value for matrix order ``n`` (1..10)."""
    try:
        return RANDOM_INDEX_TABLE[int(n)]
    except (KeyError, ValueError):
        raise UnsupportedOrderError(
            f"no random-index reference for order {n!r}; supported orders are 1..{MAX_ORDER}"
        ) from None


def consistency_ratio(
    ci: float, ri: float, threshold: float = DEFAULT_THRESHOLD
) -> tuple[float, bool]:
    """CR = CI/RI and the verdict ``cr < threshold``.

    When RI is 0 (orders 1 and 2) the matrix is perfectly consistent by
    construction and CR is defined as 0. Tiny negative CI values from float
    rounding clamp to 0.
    """
    if ri < 0:
        raise ValueError(f"random index must be nonnegative, got {ri!r}")
    if ci < -CI_CLAMP:
        raise ValueError(f"consistency index {ci!r} is negative beyond rounding noise")
    ci = max(ci, 0.0)
    cr = ci / ri if ri > 0 else 0.0
    return cr, cr < threshold


def analyze(
    matrix: ComparisonMatrix, threshold: float = DEFAULT_THRESHOLD
) -> tuple[PriorityVector, ConsistencyReport]:
    """Full single-matrix analysis: priorities plus consistency report."""
    priorities = derive_priorities(matrix)
    lam = lambda_max(matrix, priorities)
    ci = max(consistency_index(lam, matrix.n), 0.0)
    ri = random_index(matrix.n)
    cr, ok = consistency_ratio(ci, ri, threshold)
    report = ConsistencyReport(
        lambda_max=lam, ci=ci, ri=ri, cr=cr, consistent=ok, n=matrix.n, threshold=threshold
    )
    return priorities, report


def principal_eigenvector(
    matrix: ComparisonMatrix,
    tol: float = 1e-12,
    max_iterations: int = 1000,
) -> tuple[PriorityVector, float]:
    """Exact principal eigenvector by power iteration, as a cross-check on
    ``derive_priorities``.

    Starts from the uniform vector, repeatedly applies the matrix and
    renormalizes to sum 1, and stops when successive iterates differ by less
    than ``tol`` in max norm. The returned eigenvalue estimate is the mean of
    the component-wise ratios (A·x)_i / x_i at the fixed point.
    """
    x = np.full(matrix.n, 1.0 / matrix.n)
    residual = np.inf
    for _ in range(max_iterations):
        y = matrix.entries @ x
        y = y / y.sum()
        residual = float(np.max(np.abs(y - x)))
        x = y
        if residual < tol:
            lam = lambda_max(matrix, x)
            return PriorityVector(weights=x, labels=matrix.labels), lam
    raise ConvergenceError(
        f"power iteration did not converge within {max_iterations} iterations "
        f"(last residual {residual:.3e})",
        residual=residual,
        iterations=max_iterations,
    )

"""Factor-rating evaluation: score alternatives against leaf weights and rank.

Scores use unrounded global weights; a total is the plain weighted sum of the
0..10 ratings, so it always lands in [0, 10] when the leaf weights sum to 1.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .errors import (
    EmptyResultError,
    IncompleteSheetError,
    RatingRangeError,
    UnknownTargetError,
)
from .hierarchy import CriterionNode, WeightTable

RATING_MIN = 0
RATING_MAX = 10

ORDERING_RULE = "total-desc,id-asc"


def coerce_rating(value, leaf_id: str = "?") -> int:
    """Accept integers 0..10 (and integer-valued floats); reject the rest.

    Booleans are rejected explicitly: True would otherwise pass as 1.
    """
    if isinstance(value, bool):
        raise RatingRangeError(f"rating for {leaf_id!r} must be an integer, got a boolean")
    if isinstance(value, float):
        if not value.is_integer():
            raise RatingRangeError(
                f"rating for {leaf_id!r} must be a whole number, got {value!r}"
            )
        value = int(value)
    if not isinstance(value, int):
        raise RatingRangeError(f"rating for {leaf_id!r} must be an integer, got {value!r}")
    if not RATING_MIN <= value <= RATING_MAX:
        raise RatingRangeError(
            f"rating for {leaf_id!r} must be between {RATING_MIN} and {RATING_MAX}, got {value}"
        )
    return value


@dataclass(frozen=True)
class RatingSheet:
    """One alternative's ratings: leaf id → integer 0..10."""

    alternative_id: str
    ratings: dict[str, int]

    def __post_init__(self):
        clean = {
            str(leaf): coerce_rating(v, leaf) for leaf, v in self.ratings.items()
        }
        object.__setattr__(self, "ratings", clean)

    def with_override(self, leaf_id: str, rating: int) -> "RatingSheet":
        updated = dict(self.ratings)
        updated[leaf_id] = coerce_rating(rating, leaf_id)
        return RatingSheet(alternative_id=self.alternative_id, ratings=updated)


@dataclass(frozen=True)
class ScoreBreakdown:
    alternative_id: str
    contributions: dict[str, float]  # leaf id → global weight × rating
    subtotals: dict[str, float]      # top-level criterion id → summed contribution
    total: float

    def as_dict(self) -> dict:
        return {
            "alternative_id": self.alternative_id,
            "contributions": dict(self.contributions),
            "subtotals": dict(self.subtotals),
            "total": self.total,
        }


@dataclass(frozen=True)
class RankedResult:
    ordering: tuple[tuple[str, float], ...]
    breakdowns: dict[str, ScoreBreakdown]
    ordering_rule: str = ORDERING_RULE

    def ranking(self) -> tuple[str, ...]:
        return tuple(alt for alt, _ in self.ordering)

    def total(self, alternative_id: str) -> float:
        return self.breakdowns[alternative_id].total

    def as_dict(self) -> dict:
        return {
            "ordering": [
                {"alternative_id": alt, "total": total} for alt, total in self.ordering
            ],
            "ordering_rule": self.ordering_rule,
            "breakdowns": {
                alt: b.as_dict() for alt, b in self.breakdowns.items()
            },
        }


def score_alternative(sheet: RatingSheet, table: WeightTable) -> ScoreBreakdown:
    """Weighted sum of one sheet's ratings over the model's leaves.

    The sheet must rate exactly the model's leaves: missing ones raise
    ``IncompleteSheetError`` (naming them), unknown ones ``UnknownTargetError``.
    """
    missing = tuple(leaf for leaf in table.leaf_ids if leaf not in sheet.ratings)
    if missing:
        raise IncompleteSheetError(
            f"sheet for {sheet.alternative_id!r} is missing ratings: " + ", ".join(missing),
            missing=missing,
        )
    unknown = sorted(set(sheet.ratings) - set(table.leaf_ids))
    if unknown:
        raise UnknownTargetError(
            f"sheet for {sheet.alternative_id!r} rates unknown leaves: " + ", ".join(unknown)
        )
    contributions = {
        leaf: table.global_weight(leaf) * sheet.ratings[leaf] for leaf in table.leaf_ids
    }
    subtotals: dict[str, float] = {}
    for leaf in table.leaf_ids:
        top = table.top_ancestor[leaf]
        subtotals[top] = subtotals.get(top, 0.0) + contributions[leaf]
    return ScoreBreakdown(
        alternative_id=sheet.alternative_id,
        contributions=contributions,
        subtotals=subtotals,
        total=sum(contributions.values()),
    )


def rank(sheets: list[RatingSheet], table: WeightTable) -> RankedResult:
    """Score every sheet and order by total descending, id ascending on ties."""
    if not sheets:
        raise EmptyResultError("no rating sheets to rank")
    seen: set[str] = set()
    for sheet in sheets:
        if sheet.alternative_id in seen:
            raise ValueError(f"alternative {sheet.alternative_id!r} appears twice")
        seen.add(sheet.alternative_id)
    breakdowns = {s.alternative_id: score_alternative(s, table) for s in sheets}
    ordered = sorted(breakdowns.values(), key=lambda b: (-b.total, b.alternative_id))
    return RankedResult(
        ordering=tuple((b.alternative_id, b.total) for b in ordered),
        breakdowns=breakdowns,
    )


def breakdown_by_criterion(
    result: RankedResult, root: CriterionNode
) -> dict[str, dict[str, float]]:
    """Per-alternative subtotals keyed by top-level criterion, in tree order."""
    top_ids = [c.id for c in root.children] if root.children else [root.id]
    out: dict[str, dict[str, float]] = {}
    for alt, _ in result.ordering:
        b = result.breakdowns[alt]
        out[alt] = {crit: b.subtotals.get(crit, 0.0) for crit in top_ids}
    return out


def whatif(
    sheets: list[RatingSheet],
    table: WeightTable,
    overrides: dict[str, dict[str, int]],
) -> RankedResult:
    """Re-rank with sparse rating overrides; the input sheets are untouched.

    ``overrides`` maps alternative id → (leaf id → replacement rating).
    Unknown alternatives or leaves raise ``UnknownTargetError``.
    """
    by_id = {s.alternative_id: s for s in sheets}
    for alt, changes in overrides.items():
        if alt not in by_id:
            raise UnknownTargetError(f"no alternative {alt!r} to override")
        for leaf, rating in changes.items():
            if leaf not in table.leaf_ids:
                raise UnknownTargetError(f"no leaf {leaf!r} in the model")
            by_id[alt] = by_id[alt].with_override(leaf, rating)
    return rank(list(by_id.values()), table)

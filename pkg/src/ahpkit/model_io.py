"""Durable JSON documents for decision models, plus bundled case fixtures.

A model document carries the whole decision in one file: goal text, criteria
tree with judgment matrices, alternatives, and rating sheets. Matrices can be
written two ways:

* ``{"rows": [[...], ...]}``: a full row-major matrix, checked for
  reciprocity as-is; this is the canonical saved form.
* ``{"judgments": [{"row": 0, "col": 1, "value": 5}, ...]}``: one entry per
  upper-triangle pair, the way a human states them; values may be numbers or
  fraction strings such as ``"1/4"``. Reciprocals are derived.

``save_model`` always emits the canonical form, so a document is byte-stable
after one load/save normalization pass.
"""
from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field, replace
from fractions import Fraction
from importlib import resources

from .core import (
    ComparisonMatrix,
    DEFAULT_THRESHOLD,
    Judgment,
    SCALE_RELAXED,
    SCALE_STRICT,
    build_matrix,
)
from .errors import AhpError, DocumentError
from .hierarchy import (
    CriterionNode,
    blocking_diagnostics,
    compute_weights,
    iter_nodes,
    leaves,
    validate_model,
)
from .rating import RatingSheet, coerce_rating, rank

SCHEMA_VERSION = "1"

# The synthesized root node of every document uses this id; judgment uploads
# targeting the top-level criteria matrix address it directly.
ROOT_ID = "goal"

TEMPLATES = {
    "paper-api": "steel-pipe-api.model.json",
    "paper-is": "steel-pipe-is.model.json",
}

_SCALES = (SCALE_STRICT, SCALE_RELAXED)


@dataclass(frozen=True)
class ModelDocument:
    """One decision model: tree, alternatives, rating sheets, metadata.

    ``reference`` is an optional free-form block of published values with
    tolerances; the report renderer uses it to mark each reproduced table
    pass or fail. It travels with the document but never affects evaluation.
    """

    goal: str
    root: CriterionNode
    alternatives: tuple[tuple[str, str], ...] = ()  # (id, display name)
    sheets: dict[str, dict[str, int]] = field(default_factory=dict)
    scale: str = SCALE_RELAXED
    threshold: float = DEFAULT_THRESHOLD
    reference: dict | None = None
    schema_version: str = SCHEMA_VERSION

    def alternative_ids(self) -> tuple[str, ...]:
        return tuple(alt_id for alt_id, _ in self.alternatives)

    def display_name(self, alt_id: str) -> str:
        for candidate, name in self.alternatives:
            if candidate == alt_id:
                return name
        return alt_id

    def leaf_ids(self) -> tuple[str, ...]:
        return tuple(n.id for n in leaves(self.root))

    def unjudged_nodes(self) -> tuple[str, ...]:
        """Internal nodes that still need a judgment matrix."""
        return tuple(
            n.id
            for n in iter_nodes(self.root)
            if len(n.children) >= 2 and n.matrix is None
        )

    def unrated_alternatives(self) -> tuple[str, ...]:
        """Alternatives whose sheets are absent or missing some leaf."""
        needed = set(self.leaf_ids())
        out = []
        for alt_id in self.alternative_ids():
            sheet = self.sheets.get(alt_id)
            if sheet is None or not needed.issubset(sheet):
                out.append(alt_id)
        return tuple(out)


def _parse_judgment_value(raw, where: str) -> float:
    if isinstance(raw, bool):
        raise DocumentError(f"{where}: judgment value must be a number, got a boolean")
    if isinstance(raw, (int, float)):
        return float(raw)
    if isinstance(raw, str):
        try:
            return float(Fraction(raw))
        except (ValueError, ZeroDivisionError):
            raise DocumentError(
                f"{where}: cannot read {raw!r} as a number or fraction"
            ) from None
    raise DocumentError(f"{where}: judgment value must be a number, got {type(raw).__name__}")


def _matrix_from_record(record, labels, scale: str, where: str) -> ComparisonMatrix:
    if not isinstance(record, dict):
        raise DocumentError(f"{where}: matrix must be an object with rows or judgments")
    has_rows = "rows" in record
    has_judgments = "judgments" in record
    if has_rows == has_judgments:
        raise DocumentError(
            f"{where}: matrix needs exactly one of 'rows' or 'judgments'"
        )
    if has_rows:
        rows = record["rows"]
        if (
            not isinstance(rows, list)
            or not all(isinstance(r, list) for r in rows)
        ):
            raise DocumentError(f"{where}: 'rows' must be a list of lists")
        parsed = [[_parse_judgment_value(v, where) for v in r] for r in rows]
        return ComparisonMatrix(entries=parsed, labels=tuple(labels))
    judgments = []
    for i, item in enumerate(record["judgments"]):
        spot = f"{where}: judgments[{i}]"
        if isinstance(item, dict):
            try:
                row, col, value = item["row"], item["col"], item["value"]
            except KeyError as e:
                raise DocumentError(f"{spot}: missing field {e.args[0]!r}") from None
        elif isinstance(item, list) and len(item) == 3:
            row, col, value = item
        else:
            raise DocumentError(
                f"{spot}: expected an object with row/col/value or a 3-item list"
            )
        if not isinstance(row, int) or not isinstance(col, int) or isinstance(row, bool) or isinstance(col, bool):
            raise DocumentError(f"{spot}: row and col must be integers")
        judgments.append(Judgment(row=row, col=col, value=_parse_judgment_value(value, spot)))
    return build_matrix(tuple(labels), judgments, scale=scale)


def _node_from_record(record, scale: str, problems: list[str], where: str) -> CriterionNode:
    if not isinstance(record, dict):
        problems.append(f"{where}: criterion record must be an object")
        return CriterionNode(id=f"invalid-{len(problems)}")
    node_id = record.get("id")
    if not isinstance(node_id, str) or not node_id:
        problems.append(f"{where}: criterion is missing a string 'id'")
        node_id = f"invalid-{len(problems)}"
    name = record.get("name", node_id)
    children_records = record.get("children", [])
    if not isinstance(children_records, list):
        problems.append(f"{where}: 'children' must be a list")
        children_records = []
    children = tuple(
        _node_from_record(child, scale, problems, f"{where}.children[{i}]")
        for i, child in enumerate(children_records)
    )
    matrix = None
    if record.get("matrix") is not None:
        try:
            matrix = _matrix_from_record(
                record["matrix"],
                tuple(c.id for c in children),
                scale,
                f"{where} (node {node_id!r})",
            )
        except (DocumentError, AhpError) as e:
            problems.append(str(e))
    return CriterionNode(id=node_id, name=str(name), children=children, matrix=matrix)


def load_model(data, *, allow_empty: bool = False) -> ModelDocument:
    """Parse and validate a model document.

    ``data`` may be bytes, text, or an already-decoded object. Structural
    problems and matrix violations are aggregated into one ``DocumentError``
    rather than reported one at a time. Internal nodes without matrices are
    allowed (a session in progress is a valid document); every other
    blocking validation finding is fatal. ``allow_empty`` additionally
    permits a document with no criteria at all, for freshly created sessions.
    """
    if isinstance(data, (bytes, bytearray)):
        data = data.decode("utf-8")
    if isinstance(data, str):
        try:
            payload = json.loads(data)
        except json.JSONDecodeError as e:
            raise DocumentError(
                f"document is not valid JSON: {e.msg} at line {e.lineno} column {e.colno}"
            ) from None
    else:
        payload = data
    if not isinstance(payload, dict):
        raise DocumentError("document root must be an object")

    version = payload.get("schema_version")
    if version != SCHEMA_VERSION:
        raise DocumentError(
            f"unsupported schema_version {version!r}; this build reads version {SCHEMA_VERSION!r}"
        )

    problems: list[str] = []

    goal = payload.get("goal", "Decision goal")
    if not isinstance(goal, str) or not goal:
        problems.append("'goal' must be a non-empty string")
        goal = "Decision goal"

    scale = payload.get("scale", SCALE_RELAXED)
    if scale not in _SCALES:
        problems.append(f"'scale' must be one of {_SCALES}, got {scale!r}")
        scale = SCALE_RELAXED

    threshold = payload.get("threshold", DEFAULT_THRESHOLD)
    if isinstance(threshold, bool) or not isinstance(threshold, (int, float)) or not threshold > 0:
        problems.append(f"'threshold' must be a positive number, got {threshold!r}")
        threshold = DEFAULT_THRESHOLD

    criteria_records = payload.get("criteria", [])
    if not isinstance(criteria_records, list):
        problems.append("'criteria' must be a list")
        criteria_records = []
    if not criteria_records and not allow_empty:
        raise DocumentError("document has no criteria", diagnostics=problems)

    criteria = tuple(
        _node_from_record(rec, scale, problems, f"criteria[{i}]")
        for i, rec in enumerate(criteria_records)
    )
    root = CriterionNode(id=ROOT_ID, name=goal, children=criteria)
    if payload.get("criteria_matrix") is not None:
        try:
            root = root.with_matrix(
                _matrix_from_record(
                    payload["criteria_matrix"],
                    tuple(c.id for c in criteria),
                    scale,
                    "criteria_matrix",
                )
            )
        except (DocumentError, AhpError) as e:
            problems.append(str(e))

    alternatives: list[tuple[str, str]] = []
    alt_records = payload.get("alternatives", [])
    if not isinstance(alt_records, list):
        problems.append("'alternatives' must be a list")
        alt_records = []
    for i, rec in enumerate(alt_records):
        if isinstance(rec, str):
            alternatives.append((rec, rec))
        elif isinstance(rec, dict) and isinstance(rec.get("id"), str):
            alternatives.append((rec["id"], str(rec.get("name", rec["id"]))))
        else:
            problems.append(f"alternatives[{i}]: expected an id string or object with 'id'")
    alt_ids = [a for a, _ in alternatives]
    if len(set(alt_ids)) != len(alt_ids):
        problems.append("alternative ids must be unique")

    sheets: dict[str, dict[str, int]] = {}
    sheet_records = payload.get("sheets", {})
    if not isinstance(sheet_records, dict):
        problems.append("'sheets' must be an object keyed by alternative id")
        sheet_records = {}
    known_leaves = set(n.id for n in leaves(root))
    for alt_id, ratings in sheet_records.items():
        if alt_id not in alt_ids:
            problems.append(f"sheets[{alt_id!r}]: no such alternative declared")
            continue
        if not isinstance(ratings, dict):
            problems.append(f"sheets[{alt_id!r}]: expected an object of leaf ratings")
            continue
        clean: dict[str, int] = {}
        for leaf_id, value in ratings.items():
            if leaf_id not in known_leaves:
                problems.append(f"sheets[{alt_id!r}]: unknown leaf {leaf_id!r}")
                continue
            try:
                clean[leaf_id] = coerce_rating(value, leaf_id)
            except AhpError as e:
                problems.append(f"sheets[{alt_id!r}]: {e}")
        sheets[alt_id] = clean

    reference = payload.get("reference")
    if reference is not None and not isinstance(reference, dict):
        problems.append("'reference' must be an object when present")
        reference = None

    diagnostics = validate_model(root)
    blocking = [d for d in blocking_diagnostics(diagnostics) if d.code != "missing-matrix"]
    if scale == SCALE_STRICT:
        blocking += [d for d in diagnostics if d.code == "off-scale"]
    problems += [d.message for d in blocking]

    if problems:
        raise DocumentError(
            "document failed validation: " + problems[0]
            + (f" (+{len(problems) - 1} more)" if len(problems) > 1 else ""),
            diagnostics=problems,
        )

    return ModelDocument(
        goal=goal,
        root=root,
        alternatives=tuple(alternatives),
        sheets=sheets,
        scale=scale,
        threshold=float(threshold),
        reference=reference,
        schema_version=SCHEMA_VERSION,
    )


def _matrix_record(matrix: ComparisonMatrix) -> dict:
    return {"rows": [[float(v) for v in row] for row in matrix.entries]}


def _node_record(node: CriterionNode) -> dict:
    record: dict = {"id": node.id, "name": node.name}
    if node.matrix is not None:
        record["matrix"] = _matrix_record(node.matrix)
    if node.children:
        record["children"] = [_node_record(c) for c in node.children]
    return record


def document_payload(doc: ModelDocument) -> dict:
    """The canonical plain-object form of a document (stable field order)."""
    payload: dict = {
        "schema_version": doc.schema_version,
        "goal": doc.goal,
        "scale": doc.scale,
        "threshold": doc.threshold,
    }
    if doc.root.matrix is not None:
        payload["criteria_matrix"] = _matrix_record(doc.root.matrix)
    payload["criteria"] = [_node_record(c) for c in doc.root.children]
    payload["alternatives"] = [
        {"id": alt_id, "name": name} for alt_id, name in doc.alternatives
    ]
    leaf_order = doc.leaf_ids()
    payload["sheets"] = {
        alt_id: {
            leaf: doc.sheets[alt_id][leaf]
            for leaf in leaf_order
            if leaf in doc.sheets[alt_id]
        }
        for alt_id in doc.alternative_ids()
        if alt_id in doc.sheets
    }
    if doc.reference is not None:
        payload["reference"] = doc.reference
    return payload


def save_model(doc: ModelDocument) -> bytes:
    """Serialize to canonical, byte-stable JSON (indent 2, trailing newline)."""
    return (json.dumps(document_payload(doc), indent=2, ensure_ascii=False) + "\n").encode(
        "utf-8"
    )


def blank_document(goal: str = "New decision") -> ModelDocument:
    return ModelDocument(goal=goal, root=CriterionNode(id=ROOT_ID, name=goal))


def load_template(name: str) -> ModelDocument:
    """One of the bundled case-study models, or a fresh blank document."""
    if name == "blank":
        return blank_document()
    try:
        filename = TEMPLATES[name]
    except KeyError:
        raise DocumentError(
            f"unknown template {name!r}; available: blank, " + ", ".join(sorted(TEMPLATES))
        ) from None
    text = resources.files("ahpkit").joinpath("fixtures").joinpath(filename).read_text("utf-8")
    return load_model(text)


def evaluate_weights(doc: ModelDocument):
    """Weight table for a fully judged document.

    Raises ``IncompleteModelError`` (from the tree layer) when judgments are
    missing; callers surface that as exit status or HTTP 409.
    """
    return compute_weights(doc.root, doc.threshold)


def build_sheets(doc: ModelDocument) -> list[RatingSheet]:
    """Rating sheets for every declared alternative, in declaration order.

    Alternatives without stored ratings get an empty sheet; downstream
    scoring reports exactly which leaves are missing.
    """
    return [
        RatingSheet(alternative_id=alt_id, ratings=dict(doc.sheets.get(alt_id, {})))
        for alt_id in doc.alternative_ids()
    ]


def evaluate_document(doc: ModelDocument):
    """Full pipeline: weight table plus ranking (None without alternatives)."""
    table = evaluate_weights(doc)
    if not doc.alternatives:
        return table, None
    return table, rank(build_sheets(doc), table)

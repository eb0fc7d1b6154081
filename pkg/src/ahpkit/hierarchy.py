"""Criteria trees, local/global weight propagation, and model validation.

A decision model is a tree of ``CriterionNode``s. Each internal node carries a
comparison matrix over its children; analyzing every matrix yields local
weights, and multiplying local weights along root paths yields global weights.
The tree may be any depth: the product rule composes.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterator

import numpy as np

from .core import (
    ComparisonMatrix,
    ConsistencyReport,
    DEFAULT_THRESHOLD,
    analyze,
    is_scale_value,
)
from .errors import IncompleteModelError, MatrixError


@dataclass(frozen=True)
class CriterionNode:
    """One criterion in the tree. Empty ``children`` marks a leaf.

    ``matrix``, when present, must compare exactly the children: order n equal
    to the child count and labels equal to the child ids, in order. Nodes with
    a single child need no matrix (the child's local weight is 1).
    """

    id: str
    name: str = ""
    children: tuple["CriterionNode", ...] = ()
    matrix: ComparisonMatrix | None = None

    def __post_init__(self):
        if not self.id:
            raise MatrixError("criterion node id must be non-empty")
        object.__setattr__(self, "children", tuple(self.children))
        if not self.name:
            object.__setattr__(self, "name", self.id)

    @property
    def is_leaf(self) -> bool:
        return not self.children

    def with_matrix(self, matrix: ComparisonMatrix | None) -> "CriterionNode":
        return replace(self, matrix=matrix)


def iter_nodes(root: CriterionNode) -> Iterator[CriterionNode]:
    """Depth-first preorder walk (parents before children, declaration order)."""
    stack = [root]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(node.children))


def leaves(root: CriterionNode) -> tuple[CriterionNode, ...]:
    return tuple(n for n in iter_nodes(root) if n.is_leaf)


def internal_nodes(root: CriterionNode) -> tuple[CriterionNode, ...]:
    return tuple(n for n in iter_nodes(root) if not n.is_leaf)


def find_node(root: CriterionNode, node_id: str) -> CriterionNode | None:
    for n in iter_nodes(root):
        if n.id == node_id:
            return n
    return None


def parent_map(root: CriterionNode) -> dict[str, str]:
    """Child id → parent id for every non-root node."""
    out: dict[str, str] = {}
    for node in iter_nodes(root):
        for child in node.children:
            out[child.id] = node.id
    return out


def top_ancestor_map(root: CriterionNode) -> dict[str, str]:
    """Node id → id of its depth-1 ancestor (the top-level criterion).

    Depth-1 nodes map to themselves; the root is absent.
    """
    out: dict[str, str] = {}

    def walk(node: CriterionNode, top: str | None):
        for child in node.children:
            child_top = top if top is not None else child.id
            out[child.id] = child_top
            walk(child, child_top)

    walk(root, None)
    return out


@dataclass(frozen=True)
class Diagnostic:
    """One model-validation finding.

    ``severity`` is "error" for problems that block evaluation and "warning"
    for accepted-but-notable ones (off-scale judgment values).
    """

    code: str
    message: str
    node_id: str | None = None
    severity: str = "error"

    def as_dict(self) -> dict:
        return {
            "code": self.code,
            "message": self.message,
            "node_id": self.node_id,
            "severity": self.severity,
        }


@dataclass(frozen=True)
class WeightTable:
    """Weights and consistency results for one analyzed tree.

    ``local_weights`` covers every node (root included, at 1.0);
    ``global_weights`` is empty on the partial table returned by
    ``compute_local_weights`` and filled by ``compute_global_weights``.
    ``consistency`` is keyed by the internal node whose matrix was analyzed.
    """

    root_id: str
    local_weights: dict[str, float]
    global_weights: dict[str, float]
    consistency: dict[str, ConsistencyReport]
    inconsistent: tuple[str, ...]
    leaf_ids: tuple[str, ...]
    parent: dict[str, str]
    top_ancestor: dict[str, str]
    threshold: float = DEFAULT_THRESHOLD

    @property
    def complete(self) -> bool:
        return bool(self.global_weights)

    def local_weight(self, node_id: str) -> float:
        return self.local_weights[node_id]

    def global_weight(self, node_id: str) -> float:
        if not self.complete:
            raise IncompleteModelError(
                "global weights not computed yet", node_ids=(self.root_id,)
            )
        return self.global_weights[node_id]

    def consistency_of(self, node_id: str) -> ConsistencyReport | None:
        """Report for the matrix that produced ``node_id``'s local weight,
        i.e. the parent's matrix; None for the root or single children."""
        parent = self.parent.get(node_id)
        if parent is None:
            return None
        return self.consistency.get(parent)

    def leaf_globals(self) -> dict[str, float]:
        return {leaf: self.global_weights[leaf] for leaf in self.leaf_ids}


def _analyze_node(node: CriterionNode, threshold: float):
    matrix = node.matrix
    child_ids = tuple(c.id for c in node.children)
    if matrix.labels != child_ids:
        raise MatrixError(
            f"matrix at node {node.id!r} compares {matrix.labels}, "
            f"but the children are {child_ids}"
        )
    return analyze(matrix, threshold)


def compute_local_weights(
    root: CriterionNode, threshold: float = DEFAULT_THRESHOLD
) -> WeightTable:
    """Analyze every internal node's matrix and assign sibling-local weights.

    Inconsistent nodes (CR at or above the threshold) are flagged in the
    table, not rejected: downstream consumers can evaluate anyway and ask for
    re-judgment. Internal nodes with two or more children and no matrix make
    the model incomplete; that raises ``IncompleteModelError`` naming them.
    """
    missing = [
        n.id for n in internal_nodes(root) if len(n.children) >= 2 and n.matrix is None
    ]
    if missing:
        raise IncompleteModelError(
            "internal nodes are missing judgment matrices: " + ", ".join(missing),
            node_ids=tuple(missing),
        )
    local: dict[str, float] = {root.id: 1.0}
    reports: dict[str, ConsistencyReport] = {}
    flagged: list[str] = []
    for node in internal_nodes(root):
        if len(node.children) == 1:
            local[node.children[0].id] = 1.0
            continue
        priorities, report = _analyze_node(node, threshold)
        reports[node.id] = report
        if not report.consistent:
            flagged.append(node.id)
        for child, w in zip(node.children, priorities.weights):
            local[child.id] = float(w)
    return WeightTable(
        root_id=root.id,
        local_weights=local,
        global_weights={},
        consistency=reports,
        inconsistent=tuple(flagged),
        leaf_ids=tuple(n.id for n in leaves(root)),
        parent=parent_map(root),
        top_ancestor=top_ancestor_map(root),
        threshold=threshold,
    )


def compute_global_weights(table: WeightTable, root: CriterionNode) -> WeightTable:
    """Fill in global weights: the product of local weights down each path."""
    if root.id != table.root_id:
        raise MatrixError(
            f"weight table was built for {table.root_id!r}, not {root.id!r}"
        )
    global_w: dict[str, float] = {root.id: 1.0}

    def walk(node: CriterionNode):
        for child in node.children:
            global_w[child.id] = global_w[node.id] * table.local_weights[child.id]
            walk(child)

    walk(root)
    return replace(table, global_weights=global_w)


def compute_weights(
    root: CriterionNode, threshold: float = DEFAULT_THRESHOLD
) -> WeightTable:
    """Local analysis plus global propagation in one call."""
    return compute_global_weights(compute_local_weights(root, threshold), root)


def prioritize_leaves(table: WeightTable) -> list[tuple[str, float]]:
    """Leaves ordered by global weight descending.

    Exact ties keep tree declaration order; id breaks any remaining tie, so
    the output is deterministic for a given table.
    """
    if not table.complete:
        raise IncompleteModelError(
            "cannot prioritize before global weights are computed",
            node_ids=(table.root_id,),
        )
    position = {leaf: i for i, leaf in enumerate(table.leaf_ids)}
    ordered = sorted(
        table.leaf_ids,
        key=lambda leaf: (-table.global_weights[leaf], position[leaf], leaf),
    )
    return [(leaf, table.global_weights[leaf]) for leaf in ordered]


def validate_model(root: CriterionNode) -> list[Diagnostic]:
    """Inspect a tree and report problems without raising.

    An empty list (or warnings only) means the model is ready for evaluation.
    """
    diagnostics: list[Diagnostic] = []
    seen: dict[str, int] = {}
    for node in iter_nodes(root):
        seen[node.id] = seen.get(node.id, 0) + 1
    for node_id, count in seen.items():
        if count > 1:
            diagnostics.append(
                Diagnostic(
                    code="duplicate-id",
                    message=f"id {node_id!r} appears {count} times in the tree",
                    node_id=node_id,
                )
            )

    for node in iter_nodes(root):
        n_children = len(node.children)
        if node.is_leaf:
            if node.matrix is not None:
                diagnostics.append(
                    Diagnostic(
                        code="dimension-mismatch",
                        message=f"leaf {node.id!r} carries a matrix but has no children",
                        node_id=node.id,
                    )
                )
            continue
        if n_children > 10:
            diagnostics.append(
                Diagnostic(
                    code="too-many-children",
                    message=(
                        f"node {node.id!r} has {n_children} children; comparison "
                        "matrices support at most 10 items"
                    ),
                    node_id=node.id,
                )
            )
            continue
        if node.matrix is None:
            if n_children >= 2:
                diagnostics.append(
                    Diagnostic(
                        code="missing-matrix",
                        message=f"internal node {node.id!r} has no judgment matrix yet",
                        node_id=node.id,
                    )
                )
            continue
        matrix = node.matrix
        child_ids = tuple(c.id for c in node.children)
        if matrix.n != n_children:
            diagnostics.append(
                Diagnostic(
                    code="dimension-mismatch",
                    message=(
                        f"node {node.id!r} has {n_children} children but a "
                        f"{matrix.n}x{matrix.n} matrix"
                    ),
                    node_id=node.id,
                )
            )
            continue
        if matrix.labels != child_ids:
            diagnostics.append(
                Diagnostic(
                    code="label-mismatch",
                    message=(
                        f"matrix labels at node {node.id!r} are {list(matrix.labels)}, "
                        f"expected the child ids {list(child_ids)}"
                    ),
                    node_id=node.id,
                )
            )
        products = matrix.entries * matrix.entries.T
        if not np.allclose(products, 1.0, rtol=1e-6, atol=0):
            diagnostics.append(
                Diagnostic(
                    code="reciprocity",
                    message=f"matrix at node {node.id!r} is not reciprocal",
                    node_id=node.id,
                )
            )
        off_scale = [
            float(matrix.entries[i, j])
            for i in range(matrix.n)
            for j in range(i + 1, matrix.n)
            if not is_scale_value(float(matrix.entries[i, j]))
        ]
        if off_scale:
            diagnostics.append(
                Diagnostic(
                    code="off-scale",
                    message=(
                        f"node {node.id!r} has judgment values off the 9-point "
                        f"scale: {off_scale[:4]}"
                    ),
                    node_id=node.id,
                    severity="warning",
                )
            )
    return diagnostics


def blocking_diagnostics(diagnostics: list[Diagnostic]) -> list[Diagnostic]:
    """The subset that prevents evaluation (everything except warnings)."""
    return [d for d in diagnostics if d.severity == "error"]

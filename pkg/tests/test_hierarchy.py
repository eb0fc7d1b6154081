import numpy as np
import pytest
from hypothesis import given, strategies as st

from ahpkit.core import Judgment, build_matrix
from ahpkit.errors import IncompleteModelError
from ahpkit.hierarchy import (
    CriterionNode,
    blocking_diagnostics,
    compute_global_weights,
    compute_local_weights,
    compute_weights,
    find_node,
    internal_nodes,
    iter_nodes,
    leaves,
    prioritize_leaves,
    top_ancestor_map,
    validate_model,
)

import casedata as cd


@pytest.fixture(scope="module")
def case_tree():
    return cd.build_tree()


@pytest.fixture(scope="module")
def case_table(case_tree):
    return compute_weights(case_tree)


def test_tree_shape(case_tree):
    assert len(case_tree.children) == 4
    assert len(leaves(case_tree)) == 24
    assert [n.id for n in internal_nodes(case_tree)] == [
        cd.GOAL_ID, "quality", "cost", "delivery", "vrm",
    ]


def test_iteration_is_preorder_declaration_order(case_tree):
    ids = [n.id for n in iter_nodes(case_tree)]
    assert ids[0] == cd.GOAL_ID
    assert ids[1] == "quality"
    assert ids[2] == "technical-specification"
    assert ids.index("cost") > ids.index("continuous-improvement")


def test_criteria_local_weights(case_table):
    for crit, expected in zip(cd.CRITERIA, cd.EXPECTED_LOCALS[cd.GOAL_ID]):
        assert case_table.local_weight(crit) == pytest.approx(expected, abs=1e-5)
    published = dict(zip(cd.CRITERIA, cd.PUBLISHED_CRITERIA_WEIGHTS))
    for crit, value in published.items():
        assert case_table.local_weight(crit) == pytest.approx(value, abs=1e-3)


@pytest.mark.parametrize("node_id", list(cd.SUBCRITERIA))
def test_subcriteria_local_weights(case_table, node_id):
    tol = 2e-3 if node_id == "quality" else 5e-3
    for child, expected in zip(cd.SUBCRITERIA[node_id], cd.EXPECTED_LOCALS[node_id]):
        assert case_table.local_weight(child) == pytest.approx(expected, abs=1e-5)
        assert case_table.local_weight(child) == pytest.approx(expected, abs=tol)


@pytest.mark.parametrize("node_id", [cd.GOAL_ID] + list(cd.SUBCRITERIA))
def test_per_node_consistency(case_table, node_id):
    lam, ci, cr = cd.EXPECTED_CONSISTENCY[node_id]
    report = case_table.consistency[node_id]
    assert report.lambda_max == pytest.approx(lam, abs=1e-5)
    assert report.ci == pytest.approx(ci, abs=1e-5)
    assert report.cr == pytest.approx(cr, abs=1e-5)
    assert report.consistent


def test_no_nodes_flagged_inconsistent(case_table):
    assert case_table.inconsistent == ()


def test_global_weights_match_oracle(case_table):
    for leaf, expected in cd.EXPECTED_GLOBALS.items():
        assert case_table.global_weight(leaf) == pytest.approx(expected, abs=1e-5)
    assert sum(case_table.leaf_globals().values()) == pytest.approx(1.0, abs=1e-9)


def test_global_is_product_of_locals(case_table):
    for leaf in case_table.leaf_ids:
        crit = case_table.top_ancestor[leaf]
        product = case_table.local_weight(crit) * case_table.local_weight(leaf)
        assert case_table.global_weight(leaf) == pytest.approx(product, abs=1e-12)


def test_consistency_of_resolves_parent_matrix(case_table):
    report = case_table.consistency_of("flexibility")
    assert report is case_table.consistency["delivery"]
    assert case_table.consistency_of(cd.GOAL_ID) is None


def test_prioritization_full_order(case_table):
    ordered = prioritize_leaves(case_table)
    assert tuple(leaf for leaf, _ in ordered) == cd.EXPECTED_PRIORITY_ORDER
    weights = [w for _, w in ordered]
    assert weights == sorted(weights, reverse=True)


def test_prioritization_is_a_permutation_of_leaves(case_table):
    ordered = [leaf for leaf, _ in prioritize_leaves(case_table)]
    assert sorted(ordered) == sorted(case_table.leaf_ids)


def test_tied_leaves_follow_declaration_order():
    """Permuting the declaration of exactly tied leaves permutes the output."""
    # The three identically judged quality leaves tie exactly; reversing the
    # child declaration must reverse their order in the prioritization.
    reordered_children = {
        "quality": (
            "technical-specification",
            "inspection",
            "test-certificate",
            "certified",
            "api-is-spec",
            "continuous-improvement",
        )
    }
    criteria_nodes = []
    for crit in cd.CRITERIA:
        child_ids = reordered_children.get(crit, cd.SUBCRITERIA[crit])
        # The quality matrix is symmetric across the three swapped items
        # (identical rows), so the same judgment list applies unchanged.
        matrix = cd.build_node_matrix(crit, child_ids)
        criteria_nodes.append(
            CriterionNode(
                id=crit,
                children=tuple(CriterionNode(id=c) for c in child_ids),
                matrix=matrix,
            )
        )
    root = CriterionNode(
        id=cd.GOAL_ID,
        children=tuple(criteria_nodes),
        matrix=cd.build_node_matrix(cd.GOAL_ID, cd.CRITERIA),
    )
    ordered = [leaf for leaf, _ in prioritize_leaves(compute_weights(root))]
    assert ordered[:3] == ["test-certificate", "certified", "api-is-spec"]


def test_incomplete_model_names_missing_nodes():
    tree = cd.build_tree(with_matrices=False)
    with pytest.raises(IncompleteModelError) as exc:
        compute_local_weights(tree)
    assert set(exc.value.node_ids) == {cd.GOAL_ID, *cd.CRITERIA}


def test_single_child_node_needs_no_matrix():
    root = CriterionNode(
        id="goal",
        children=(
            CriterionNode(id="wrap", children=(CriterionNode(id="only"),)),
            CriterionNode(id="other"),
        ),
        matrix=build_matrix(("wrap", "other"), [Judgment(0, 1, 3.0)]),
    )
    table = compute_weights(root)
    assert table.local_weight("only") == 1.0
    assert table.global_weight("only") == pytest.approx(table.global_weight("wrap"))


def test_deepening_invariance(case_tree, case_table):
    """Wrapping a leaf in a single-child node changes no other global weight."""

    def wrap_leaf(node):
        if node.id == "flexibility":
            return CriterionNode(id="flexibility-wrap", children=(node,))
        if node.is_leaf:
            return node
        children = tuple(wrap_leaf(c) for c in node.children)
        matrix = node.matrix
        if any(c.id == "flexibility" for c in node.children):
            relabeled = tuple(
                "flexibility-wrap" if l == "flexibility" else l for l in matrix.labels
            )
            matrix = build_matrix(
                relabeled,
                [
                    Judgment(i, j, float(matrix.entries[i, j]))
                    for i in range(matrix.n)
                    for j in range(i + 1, matrix.n)
                ],
            )
        return CriterionNode(id=node.id, name=node.name, children=children, matrix=matrix)

    deepened = wrap_leaf(case_tree)
    deep_table = compute_weights(deepened)
    for leaf in case_table.leaf_ids:
        assert deep_table.global_weight(leaf) == pytest.approx(
            case_table.global_weight(leaf), abs=1e-12
        )


def test_subtree_locality(case_tree, case_table):
    """Re-judging one criterion's matrix moves weights only inside it."""
    flipped = [
        Judgment(r, c, float(v)) for r, c, v in cd.JUDGMENTS["delivery"]
    ]
    flipped[0] = Judgment(0, 1, 1.0 / 8.0)
    new_matrix = build_matrix(cd.SUBCRITERIA["delivery"], flipped)

    def swap(node):
        if node.id == "delivery":
            return node.with_matrix(new_matrix)
        if node.is_leaf:
            return node
        return CriterionNode(
            id=node.id,
            name=node.name,
            children=tuple(swap(c) for c in node.children),
            matrix=node.matrix,
        )

    edited_table = compute_weights(swap(case_tree))
    delivery_leaves = set(cd.SUBCRITERIA["delivery"])
    for leaf in case_table.leaf_ids:
        before = case_table.global_weight(leaf)
        after = edited_table.global_weight(leaf)
        if leaf in delivery_leaves:
            continue
        assert after == pytest.approx(before, abs=1e-15)
    assert edited_table.global_weight("tracking-information") > case_table.global_weight(
        "tracking-information"
    )


def test_prioritize_requires_complete_table(case_tree):
    partial = compute_local_weights(case_tree)
    with pytest.raises(IncompleteModelError):
        prioritize_leaves(partial)
    with pytest.raises(IncompleteModelError):
        partial.global_weight("flexibility")


def test_validate_case_tree_is_clean(case_tree):
    assert validate_model(case_tree) == []


def test_validate_reports_duplicate_id():
    root = CriterionNode(
        id="goal",
        children=(CriterionNode(id="quality"), CriterionNode(id="quality")),
    )
    codes = [d.code for d in validate_model(root)]
    assert "duplicate-id" in codes


def test_validate_reports_dimension_mismatch():
    matrix = cd.build_node_matrix(cd.GOAL_ID, cd.CRITERIA)  # 4x4
    root = CriterionNode(
        id="goal",
        children=tuple(CriterionNode(id=f"c{i}") for i in range(3)),
        matrix=matrix,
    )
    diags = validate_model(root)
    assert [d.code for d in diags] == ["dimension-mismatch"]
    assert diags[0].node_id == "goal"


def test_validate_reports_label_mismatch():
    matrix = build_matrix(("x", "y"), [Judgment(0, 1, 2.0)])
    root = CriterionNode(
        id="goal",
        children=(CriterionNode(id="a"), CriterionNode(id="b")),
        matrix=matrix,
    )
    assert [d.code for d in validate_model(root)] == ["label-mismatch"]


def test_validate_reports_missing_matrix():
    root = CriterionNode(
        id="goal",
        children=(CriterionNode(id="a"), CriterionNode(id="b")),
    )
    diags = validate_model(root)
    assert [d.code for d in diags] == ["missing-matrix"]
    assert blocking_diagnostics(diags) == diags


def test_validate_off_scale_is_warning_severity():
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        matrix = build_matrix(("a", "b"), [Judgment(0, 1, 2.5)])
    root = CriterionNode(
        id="goal",
        children=(CriterionNode(id="a"), CriterionNode(id="b")),
        matrix=matrix,
    )
    diags = validate_model(root)
    assert [d.code for d in diags] == ["off-scale"]
    assert diags[0].severity == "warning"
    assert blocking_diagnostics(diags) == []


def test_validate_too_many_children():
    root = CriterionNode(
        id="goal",
        children=tuple(CriterionNode(id=f"c{i}") for i in range(11)),
    )
    assert [d.code for d in validate_model(root)] == ["too-many-children"]


def test_find_node_and_top_ancestor(case_tree):
    assert find_node(case_tree, "credit-period").id == "credit-period"
    assert find_node(case_tree, "nope") is None
    tops = top_ancestor_map(case_tree)
    assert tops["credit-period"] == "cost"
    assert tops["quality"] == "quality"
    assert cd.GOAL_ID not in tops


# Random trees of depth <= 4 for the weight-conservation property.

scale_value = st.sampled_from([float(k) for k in range(1, 10)] + [1 / k for k in range(2, 10)])


@st.composite
def random_trees(draw, max_depth=4):
    counter = [0]

    def fresh_id():
        counter[0] += 1
        return f"n{counter[0]}"

    def build(depth):
        node_id = fresh_id()
        if depth >= max_depth or draw(st.booleans()):
            return CriterionNode(id=node_id)
        n_children = draw(st.integers(min_value=1, max_value=4))
        children = tuple(build(depth + 1) for _ in range(n_children))
        matrix = None
        if n_children >= 2:
            judgments = [
                Judgment(i, j, draw(scale_value))
                for i in range(n_children)
                for j in range(i + 1, n_children)
            ]
            matrix = build_matrix(tuple(c.id for c in children), judgments)
        return CriterionNode(id=node_id, children=children, matrix=matrix)

    root = build(0)
    if root.is_leaf:
        # Guarantee at least one level so there is something to analyze.
        a, b = CriterionNode(id=fresh_id()), CriterionNode(id=fresh_id())
        root = CriterionNode(
            id=root.id + "-root",
            children=(a, b),
            matrix=build_matrix((a.id, b.id), [Judgment(0, 1, draw(scale_value))]),
        )
    return root


@given(random_trees())
def test_weight_conservation_everywhere(tree):
    table = compute_weights(tree)
    for node in internal_nodes(tree):
        sibling_sum = sum(table.local_weight(c.id) for c in node.children)
        assert abs(sibling_sum - 1.0) <= 1e-9
    leaf_sum = sum(table.leaf_globals().values())
    assert abs(leaf_sum - 1.0) <= 1e-9
    assert table.global_weight(tree.id) == 1.0

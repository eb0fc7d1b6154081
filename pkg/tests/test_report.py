import csv
import io

import pytest

from ahpkit.errors import DocumentError, IncompleteModelError
from ahpkit.hierarchy import internal_nodes
from ahpkit.model_io import evaluate_document, load_model, load_template, save_model
from ahpkit.report import render_report, run_reference_checks

import casedata as cd


@pytest.fixture(scope="module")
def api_doc():
    return load_template("paper-api")


@pytest.fixture(scope="module")
def api_markdown(api_doc):
    return render_report(api_doc).decode("utf-8")


def test_report_is_idempotent(api_doc):
    assert render_report(api_doc) == render_report(api_doc)


def test_ranking_section_order(api_markdown):
    assert "## Ranking" in api_markdown
    ranking_part = api_markdown.split("## Ranking", 1)[1]
    rows = [line for line in ranking_part.splitlines() if line.startswith("| ")]
    # header + separator + five vendors
    assert "| 1 | Vendor A | 8.872 |" in rows
    assert "| 2 | Vendor E | 8.782 |" in rows
    assert "| 5 | Vendor D | 8.496 |" in rows
    order = [r.split("|")[2].strip() for r in rows[2:7]]
    assert order == ["Vendor A", "Vendor E", "Vendor B", "Vendor C", "Vendor D"]


def test_consistency_cell_for_criteria_matrix(api_markdown):
    summary = api_markdown.split("## Consistency summary", 1)[1]
    goal_row = next(
        line for line in summary.splitlines() if line.startswith("| Best raw material")
    )
    assert "0.0898" in goal_row
    assert "consistent" in goal_row


def test_one_matrix_section_per_internal_node(api_doc, api_markdown):
    sections = api_markdown.count("\n### ")
    assert sections == len(internal_nodes(api_doc.root)) == 5


def test_score_columns_cover_all_alternatives(api_doc, api_markdown):
    scores = api_markdown.split("## Score sheets", 1)[1].split("##", 1)[0]
    header = scores.splitlines()[1]
    for alt in api_doc.alternative_ids():
        assert f"{api_doc.display_name(alt)} rating" in header
        assert f"{api_doc.display_name(alt)} weighted" in header


def test_prioritization_top_row(api_markdown):
    prioritized = api_markdown.split("## Prioritization", 1)[1]
    first = next(line for line in prioritized.splitlines() if line.startswith("| 1 |"))
    assert "API/IS spec" in first
    assert "0.130" in first
    assert "13.0%" in first


def test_subtotal_section_lists_criteria(api_markdown):
    subtotals = api_markdown.split("## Subtotals by criterion", 1)[1].split("##", 1)[0]
    assert "Quality" in subtotals
    assert "Vendor relationship management" in subtotals
    assert "| Quality | 5.864 | " in subtotals


def test_reference_section_all_green(api_markdown):
    assert "## Reference comparison" in api_markdown
    reference = api_markdown.split("## Reference comparison", 1)[1]
    assert "All " in reference and " checks passed." in reference
    assert "FAIL" not in reference


def test_reference_checks_outcomes(api_doc):
    table, result = evaluate_document(api_doc)
    outcomes = run_reference_checks(api_doc, table, result)
    assert outcomes
    assert all(o["ok"] for o in outcomes)
    labels = [o["label"] for o in outcomes]
    assert "ranking order" in labels
    assert "global weight sum" in labels


def test_reference_failure_is_visible(api_doc):
    payload = __import__("ahpkit.model_io", fromlist=["document_payload"]).document_payload(
        api_doc
    )
    payload = __import__("copy").deepcopy(payload)
    payload["reference"]["checks"] = [
        {"kind": "ranking", "ids": ["E", "A", "B", "C", "D"]}
    ]
    doc = load_model(payload)
    text = render_report(doc).decode("utf-8")
    assert "1 failed" in text
    assert "FAIL" in text


def test_unknown_check_kind_fails_loudly(api_doc):
    table, result = evaluate_document(api_doc)
    doc = api_doc
    patched = __import__("dataclasses").replace(
        doc, reference={"checks": [{"kind": "mystery"}]}
    )
    outcomes = run_reference_checks(patched, table, result)
    assert len(outcomes) == 1
    assert not outcomes[0]["ok"]


def test_csv_files_and_headers(api_doc, api_markdown):
    files = render_report(api_doc, fmt="csv")
    expected = {
        "consistency.csv",
        "global-weights.csv",
        "prioritization.csv",
        "scores.csv",
        "subtotals.csv",
        "ranking.csv",
        "reference-checks.csv",
    }
    assert expected.issubset(files)
    assert "matrix-goal.csv" in files
    assert "normalized-quality.csv" in files
    header = files["consistency.csv"].decode().splitlines()[0]
    assert header == "Node,n,lambda_max,CI,RI,CR,Verdict"


def test_csv_global_weights_full_precision(api_doc):
    table, _ = evaluate_document(api_doc)
    files = render_report(api_doc, fmt="csv")
    reader = csv.DictReader(io.StringIO(files["global-weights.csv"].decode()))
    for row in reader:
        assert float(row["Global weight"]) == pytest.approx(
            table.global_weights[row["Leaf"]], abs=1e-12
        )


def test_unknown_format_rejected(api_doc):
    with pytest.raises(DocumentError, match="format"):
        render_report(api_doc, fmt="html")


def test_incomplete_model_cannot_render():
    doc = load_model(
        {
            "schema_version": "1",
            "goal": "No judgments yet",
            "scale": "relaxed",
            "threshold": 0.1,
            "criteria": [{"id": "a"}, {"id": "b"}],
            "alternatives": [],
            "sheets": {},
        }
    )
    with pytest.raises(IncompleteModelError):
        render_report(doc)


def test_model_without_alternatives_skips_scores():
    doc = load_model(
        {
            "schema_version": "1",
            "goal": "Weights only",
            "scale": "relaxed",
            "threshold": 0.1,
            "criteria_matrix": {"judgments": [{"row": 0, "col": 1, "value": 3}]},
            "criteria": [{"id": "a"}, {"id": "b"}],
            "alternatives": [],
            "sheets": {},
        }
    )
    text = render_report(doc).decode("utf-8")
    assert "## Global weights" in text
    assert "## Score sheets" not in text
    assert "## Ranking" not in text


def test_single_child_node_still_gets_a_section():
    doc = load_model(
        {
            "schema_version": "1",
            "goal": "Wrapped",
            "scale": "relaxed",
            "threshold": 0.1,
            "criteria_matrix": {"judgments": [{"row": 0, "col": 1, "value": 2}]},
            "criteria": [
                {"id": "wrap", "children": [{"id": "inner"}]},
                {"id": "other"},
            ],
            "alternatives": [],
            "sheets": {},
        }
    )
    text = render_report(doc).decode("utf-8")
    assert "### wrap (wrap)" in text
    assert "Single child" in text

"""Reproduction report: renders every evaluation table in markdown or CSV.

The markdown form is one human-readable document; the CSV form is one file
per table (same column labels, full-precision numbers). When the document
carries a ``reference`` block, the report ends with a comparison section that
marks every published value pass or fail at its stated tolerance.
"""
from __future__ import annotations

import csv
import io

from .errors import DocumentError
from .hierarchy import WeightTable, internal_nodes, iter_nodes, leaves, prioritize_leaves
from .model_io import ModelDocument, evaluate_document
from .rating import RankedResult, breakdown_by_criterion

FORMATS = ("markdown", "csv")

# Display rounding: weights 3 decimals, consistency figures 4, scores 3.


def _w(x: float) -> str:
    return f"{x:.3f}"


def _c(x: float) -> str:
    return f"{x:.4f}"


def _s(x: float) -> str:
    return f"{x:.3f}"


def _entry(x: float) -> str:
    if float(x).is_integer():
        return str(int(x))
    return f"{round(x, 3):g}"


def _pct(x: float) -> str:
    return f"{100 * x:.1f}%"


def _md_table(headers: list[str], rows: list[list[str]]) -> str:
    lines = [
        "| " + " | ".join(headers) + " |",
        "| " + " | ".join("---" for _ in headers) + " |",
    ]
    lines += ["| " + " | ".join(row) + " |" for row in rows]
    return "\n".join(lines)


def _csv_table(headers: list[str], rows: list[list[str]]) -> bytes:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(headers)
    writer.writerows(rows)
    return out.getvalue().encode("utf-8")


class _Tables:
    """Collects (name, headers, markdown rows, csv rows) per rendered table."""

    def __init__(self):
        self.items: list[tuple[str, list[str], list[list[str]], list[list[str]]]] = []

    def add(self, name, headers, md_rows, csv_rows=None):
        self.items.append((name, headers, md_rows, csv_rows if csv_rows is not None else md_rows))


def _matrix_sections(doc: ModelDocument, table: WeightTable, tables: _Tables, md: list[str]):
    md.append("## Judgment matrices")
    names = {n.id: n.name for n in iter_nodes(doc.root)}
    for node in internal_nodes(doc.root):
        child_ids = [c.id for c in node.children]
        md.append(f"\n### {node.name} ({node.id})")
        if node.matrix is None:
            md.append("Single child; local weight 1, no judgments needed.")
            continue
        entries = node.matrix.entries
        headers = [""] + [names[c] for c in child_ids]
        md_rows = [
            [names[child_ids[i]]] + [_entry(entries[i, j]) for j in range(len(child_ids))]
            for i in range(len(child_ids))
        ]
        csv_rows = [
            [child_ids[i]] + [repr(float(entries[i, j])) for j in range(len(child_ids))]
            for i in range(len(child_ids))
        ]
        md.append(_md_table(headers, md_rows))
        tables.add(f"matrix-{node.id}", [node.id] + child_ids, md_rows, csv_rows)

        normalized = entries / entries.sum(axis=0)
        md.append("\nNormalized columns and local weights:")
        n_headers = headers + ["Local weight"]
        n_md = [
            [names[child_ids[i]]]
            + [_w(normalized[i, j]) for j in range(len(child_ids))]
            + [_w(table.local_weights[child_ids[i]])]
            for i in range(len(child_ids))
        ]
        n_csv = [
            [child_ids[i]]
            + [repr(float(normalized[i, j])) for j in range(len(child_ids))]
            + [repr(table.local_weights[child_ids[i]])]
            for i in range(len(child_ids))
        ]
        md.append(_md_table(n_headers, n_md))
        tables.add(
            f"normalized-{node.id}", [node.id] + child_ids + ["Local weight"], n_md, n_csv
        )


def _consistency_section(doc: ModelDocument, table: WeightTable, tables: _Tables, md: list[str]):
    md.append("\n## Consistency summary")
    headers = ["Node", "n", "lambda_max", "CI", "RI", "CR", "Verdict"]
    names = {n.id: n.name for n in iter_nodes(doc.root)}
    md_rows, csv_rows = [], []
    for node in internal_nodes(doc.root):
        report = table.consistency.get(node.id)
        if report is None:
            continue
        verdict = "consistent" if report.consistent else "INCONSISTENT"
        md_rows.append(
            [names[node.id], str(report.n), _c(report.lambda_max), _c(report.ci),
             _c(report.ri), _c(report.cr), verdict]
        )
        csv_rows.append(
            [node.id, str(report.n), repr(report.lambda_max), repr(report.ci),
             repr(report.ri), repr(report.cr), verdict]
        )
    md.append(_md_table(headers, md_rows))
    tables.add("consistency", headers, md_rows, csv_rows)


def _weights_sections(doc: ModelDocument, table: WeightTable, tables: _Tables, md: list[str]):
    names = {n.id: n.name for n in iter_nodes(doc.root)}
    md.append("\n## Global weights")
    headers = ["Criterion", "Leaf", "Local weight", "Global weight"]
    md_rows, csv_rows = [], []
    for leaf in table.leaf_ids:
        top = table.top_ancestor[leaf]
        md_rows.append(
            [names[top], names[leaf], _w(table.local_weights[leaf]),
             _w(table.global_weights[leaf])]
        )
        csv_rows.append(
            [top, leaf, repr(table.local_weights[leaf]), repr(table.global_weights[leaf])]
        )
    md.append(_md_table(headers, md_rows))
    tables.add("global-weights", headers, md_rows, csv_rows)

    md.append("\n## Prioritization")
    headers = ["Rank", "Leaf", "Global weight", "Share"]
    md_rows, csv_rows = [], []
    for i, (leaf, weight) in enumerate(prioritize_leaves(table), start=1):
        md_rows.append([str(i), names[leaf], _w(weight), _pct(weight)])
        csv_rows.append([str(i), leaf, repr(weight), repr(weight)])
    md.append(_md_table(headers, md_rows))
    tables.add("prioritization", headers, md_rows, csv_rows)


def _score_sections(
    doc: ModelDocument, table: WeightTable, result: RankedResult, tables: _Tables, md: list[str]
):
    names = {n.id: n.name for n in iter_nodes(doc.root)}
    alt_ids = list(doc.alternative_ids())

    md.append("\n## Score sheets")
    headers = ["Leaf", "Global weight"]
    for alt in alt_ids:
        headers += [f"{doc.display_name(alt)} rating", f"{doc.display_name(alt)} weighted"]
    md_rows, csv_rows = [], []
    for leaf in table.leaf_ids:
        md_row = [names[leaf], _w(table.global_weights[leaf])]
        csv_row = [leaf, repr(table.global_weights[leaf])]
        for alt in alt_ids:
            b = result.breakdowns[alt]
            rating = doc.sheets.get(alt, {}).get(leaf)
            md_row += [str(rating), _s(b.contributions[leaf])]
            csv_row += [str(rating), repr(b.contributions[leaf])]
        md_rows.append(md_row)
        csv_rows.append(csv_row)
    total_md = ["Total", ""]
    total_csv = ["Total", ""]
    for alt in alt_ids:
        total_md += ["", _s(result.total(alt))]
        total_csv += ["", repr(result.total(alt))]
    md_rows.append(total_md)
    csv_rows.append(total_csv)
    md.append(_md_table(headers, md_rows))
    tables.add("scores", headers, md_rows, csv_rows)

    md.append("\n## Subtotals by criterion")
    rows_by_alt = breakdown_by_criterion(result, doc.root)
    top_ids = [c.id for c in doc.root.children] if doc.root.children else [doc.root.id]
    headers = ["Criterion"] + [doc.display_name(alt) for alt in alt_ids]
    md_rows, csv_rows = [], []
    for crit in top_ids:
        md_rows.append([names.get(crit, crit)] + [_s(rows_by_alt[alt][crit]) for alt in alt_ids])
        csv_rows.append([crit] + [repr(rows_by_alt[alt][crit]) for alt in alt_ids])
    md.append(_md_table(headers, md_rows))
    tables.add("subtotals", ["Criterion"] + alt_ids, md_rows, csv_rows)

    md.append("\n## Ranking")
    headers = ["Rank", "Alternative", "Total"]
    md_rows = [
        [str(i), doc.display_name(alt), _s(total)]
        for i, (alt, total) in enumerate(result.ordering, start=1)
    ]
    csv_rows = [
        [str(i), alt, repr(total)]
        for i, (alt, total) in enumerate(result.ordering, start=1)
    ]
    md.append(_md_table(headers, md_rows))
    tables.add("ranking", headers, md_rows, csv_rows)


def run_reference_checks(
    doc: ModelDocument, table: WeightTable, result: RankedResult | None
) -> list[dict]:
    """Evaluate every check in the document's reference block.

    Each outcome has ``label``, ``ok``, and a human-readable ``detail``.
    Unknown check kinds come back failed rather than silently skipped.
    """
    outcomes: list[dict] = []
    if not doc.reference:
        return outcomes

    def emit(label, ok, detail):
        outcomes.append({"label": label, "ok": bool(ok), "detail": detail})

    for check in doc.reference.get("checks", []):
        kind = check.get("kind")
        if kind == "consistency":
            node = check.get("node")
            report = table.consistency.get(node)
            if report is None:
                emit(f"consistency @ {node}", False, f"no analyzed matrix at {node!r}")
                continue
            for field_name, attr, tol_key in (
                ("lambda_max", report.lambda_max, "tol_lambda"),
                ("ci", report.ci, "tol_ci"),
                ("cr", report.cr, "tol_cr"),
            ):
                if field_name not in check:
                    continue
                expected = check[field_name]
                tol = check.get(tol_key, 0.001)
                ok = abs(attr - expected) <= tol
                emit(
                    f"consistency {field_name} @ {node}",
                    ok,
                    f"expected {expected} +/- {tol}, computed {attr:.6f}",
                )
        elif kind == "local-weights":
            node = check.get("node")
            tol = check.get("tol", 0.001)
            for child, expected in check.get("values", {}).items():
                actual = table.local_weights.get(child)
                ok = actual is not None and abs(actual - expected) <= tol
                emit(
                    f"local weight {child} @ {node}",
                    ok,
                    f"expected {expected} +/- {tol}, computed "
                    + ("missing" if actual is None else f"{actual:.6f}"),
                )
        elif kind == "global-weights":
            tol = check.get("tol", 0.002)
            for leaf, expected in check.get("values", {}).items():
                actual = table.global_weights.get(leaf)
                ok = actual is not None and abs(actual - expected) <= tol
                emit(
                    f"global weight {leaf}",
                    ok,
                    f"expected {expected} +/- {tol}, computed "
                    + ("missing" if actual is None else f"{actual:.6f}"),
                )
        elif kind == "global-sum":
            expected = check.get("value", 1.0)
            tol = check.get("tol", 0.001)
            total = sum(table.leaf_globals().values())
            emit(
                "global weight sum",
                abs(total - expected) <= tol,
                f"expected {expected} +/- {tol}, computed {total:.6f}",
            )
        elif kind == "prioritization-top":
            ids = list(check.get("ids", []))
            actual = [leaf for leaf, _ in prioritize_leaves(table)][: len(ids)]
            emit(
                f"top-{len(ids)} prioritization",
                actual == ids,
                f"expected {ids}, computed {actual}",
            )
        elif kind == "totals":
            tol = check.get("tol", 0.05)
            for alt, expected in check.get("values", {}).items():
                if result is None or alt not in result.breakdowns:
                    emit(f"total {alt}", False, "no ranking available")
                    continue
                actual = result.total(alt)
                emit(
                    f"total {alt}",
                    abs(actual - expected) <= tol,
                    f"expected {expected} +/- {tol}, computed {actual:.6f}",
                )
        elif kind == "ranking":
            ids = tuple(check.get("ids", []))
            actual = result.ranking() if result is not None else ()
            emit("ranking order", actual == ids, f"expected {list(ids)}, computed {list(actual)}")
        elif kind == "subtotals":
            crit = check.get("criterion")
            tol = check.get("tol", 0.05)
            for alt, expected in check.get("values", {}).items():
                b = result.breakdowns.get(alt) if result is not None else None
                actual = b.subtotals.get(crit) if b is not None else None
                ok = actual is not None and abs(actual - expected) <= tol
                emit(
                    f"{crit} subtotal {alt}",
                    ok,
                    f"expected {expected} +/- {tol}, computed "
                    + ("missing" if actual is None else f"{actual:.6f}"),
                )
        else:
            emit(f"check #{len(outcomes)}", False, f"unrecognized check kind {kind!r}")
    return outcomes


def _reference_section(doc, table, result, tables: _Tables, md: list[str]):
    outcomes = run_reference_checks(doc, table, result)
    if not outcomes:
        return
    md.append("\n## Reference comparison")
    for note in doc.reference.get("notes", []):
        md.append(f"> {note}")
    failed = sum(1 for o in outcomes if not o["ok"])
    md.append(
        f"\n{len(outcomes)} checks, {failed} failed."
        if failed
        else f"\nAll {len(outcomes)} checks passed."
    )
    headers = ["Status", "Check", "Detail"]
    rows = [
        ["ok" if o["ok"] else "FAIL", o["label"], o["detail"]] for o in outcomes
    ]
    md.append(_md_table(headers, rows))
    tables.add("reference-checks", headers, rows)


def render_report(
    doc: ModelDocument,
    table: WeightTable | None = None,
    result: RankedResult | None = None,
    fmt: str = "markdown",
):
    """Render the full report.

    Returns bytes for ``markdown`` and a ``{filename: bytes}`` map for
    ``csv``. Evaluation runs here when ``table``/``result`` are not supplied.
    """
    if fmt not in FORMATS:
        raise DocumentError(f"unknown report format {fmt!r}; choose one of {FORMATS}")
    if table is None:
        table, result = evaluate_document(doc)

    tables = _Tables()
    md: list[str] = [f"# Decision report: {doc.goal}", ""]
    md.append(
        f"Scale: {doc.scale}. Consistency threshold: {doc.threshold:g}. "
        f"{len(leaves(doc.root))} leaf criteria, {len(doc.alternatives)} alternatives."
    )
    if table.inconsistent:
        md.append(
            "Nodes flagged inconsistent: " + ", ".join(table.inconsistent) + "."
        )
    md.append("")

    _matrix_sections(doc, table, tables, md)
    _consistency_section(doc, table, tables, md)
    _weights_sections(doc, table, tables, md)
    if result is not None and doc.alternatives:
        _score_sections(doc, table, result, tables, md)
    _reference_section(doc, table, result, tables, md)

    if fmt == "markdown":
        return ("\n".join(md) + "\n").encode("utf-8")
    return {
        f"{name}.csv": _csv_table(headers, csv_rows)
        for name, headers, _, csv_rows in tables.items
    }

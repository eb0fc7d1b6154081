"""Command-line interface: check, weights, rank, report, serve.

Exit codes: 0 success; 1 when evaluation is unavailable or a consistency gate
fails (incomplete judgments, missing ratings, --strict with an inconsistent
node); 2 for invalid input or usage. All tables go to standard output,
diagnostics to standard error. Output is byte-identical across runs unless
--timestamps is given.
"""
from __future__ import annotations

import argparse
import datetime
import os
import sys
from pathlib import Path

from .errors import (
    AhpError,
    DocumentError,
    EmptyResultError,
    IncompleteModelError,
    IncompleteSheetError,
    UnknownTargetError,
)
from .hierarchy import internal_nodes, iter_nodes, prioritize_leaves
from .model_io import build_sheets, evaluate_weights, load_model
from .rating import rank, whatif
from .report import render_report

EXIT_OK = 0
EXIT_UNAVAILABLE = 1
EXIT_USAGE = 2

STATE_DIR_ENV = "AHPKIT_STATE_DIR"
ASSETS_DIR_ENV = "AHPKIT_ASSETS_DIR"


def _fail(message: str, code: int) -> int:
    print(f"error: {message}", file=sys.stderr)
    return code


def _load(path: str):
    p = Path(path)
    try:
        data = p.read_bytes()
    except OSError as e:
        raise DocumentError(f"cannot read {path}: {e.strerror or e}") from None
    return load_model(data)


def _maybe_timestamp(args) -> None:
    if getattr(args, "timestamps", False):
        now = datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds")
        print(f"Generated: {now}")


def cmd_check(args) -> int:
    doc = _load(args.model)
    threshold = args.threshold if args.threshold is not None else doc.threshold
    try:
        table = evaluate_weights(
            doc if threshold == doc.threshold else _with_threshold(doc, threshold)
        )
    except IncompleteModelError as e:
        return _fail(str(e), EXIT_UNAVAILABLE)
    _maybe_timestamp(args)
    names = {n.id: n.name for n in iter_nodes(doc.root)}
    print(f"{'Node':32} {'n':>2} {'lambda_max':>11} {'CI':>7} {'RI':>5} {'CR':>7}  Verdict")
    all_ok = True
    for node in internal_nodes(doc.root):
        report = table.consistency.get(node.id)
        if report is None:
            continue
        verdict = "consistent" if report.consistent else "INCONSISTENT"
        all_ok = all_ok and report.consistent
        print(
            f"{names[node.id][:32]:32} {report.n:>2} {report.lambda_max:>11.4f} "
            f"{report.ci:>7.4f} {report.ri:>5.2f} {report.cr:>7.4f}  {verdict}"
        )
    if not all_ok:
        print("one or more nodes exceed the consistency threshold", file=sys.stderr)
        if args.strict:
            return EXIT_UNAVAILABLE
    return EXIT_OK


def _with_threshold(doc, threshold: float):
    import dataclasses

    return dataclasses.replace(doc, threshold=threshold)


def cmd_weights(args) -> int:
    doc = _load(args.model)
    try:
        table = evaluate_weights(doc)
    except IncompleteModelError as e:
        return _fail(str(e), EXIT_UNAVAILABLE)
    ordered = prioritize_leaves(table)
    names = {n.id: n.name for n in iter_nodes(doc.root)}
    if args.format == "csv":
        print("Rank,Leaf,Local weight,Global weight")
        for i, (leaf, weight) in enumerate(ordered, start=1):
            print(f"{i},{leaf},{table.local_weights[leaf]!r},{weight!r}")
        return EXIT_OK
    _maybe_timestamp(args)
    print(f"{'Rank':>4}  {'Leaf':34} {'Local':>7} {'Global':>7} {'Share':>6}")
    for i, (leaf, weight) in enumerate(ordered, start=1):
        print(
            f"{i:>4}  {names[leaf][:34]:34} {table.local_weights[leaf]:>7.3f} "
            f"{weight:>7.3f} {100 * weight:>5.1f}%"
        )
    return EXIT_OK


def _parse_overrides(pairs: list[str]) -> dict[str, dict[str, int]]:
    overrides: dict[str, dict[str, int]] = {}
    for raw in pairs:
        head, sep, rating_text = raw.partition("=")
        alt, sep2, leaf = head.partition(":")
        if not sep or not sep2 or not alt or not leaf:
            raise DocumentError(
                f"cannot parse what-if override {raw!r}; expected alt:leaf=rating"
            )
        try:
            rating = int(rating_text)
        except ValueError:
            raise DocumentError(
                f"what-if rating in {raw!r} must be an integer"
            ) from None
        overrides.setdefault(alt, {})[leaf] = rating
    return overrides


def cmd_rank(args) -> int:
    doc = _load(args.model)
    overrides = _parse_overrides(args.whatif or [])
    try:
        table = evaluate_weights(doc)
        sheets = build_sheets(doc)
        if overrides:
            result = whatif(sheets, table, overrides)
        else:
            result = rank(sheets, table)
    except (IncompleteModelError, IncompleteSheetError, EmptyResultError) as e:
        return _fail(str(e), EXIT_UNAVAILABLE)
    if args.format == "csv":
        print("Rank,Alternative,Total")
        for i, (alt, total) in enumerate(result.ordering, start=1):
            print(f"{i},{alt},{total!r}")
        return EXIT_OK
    _maybe_timestamp(args)
    print(f"{'Rank':>4}  {'Alternative':24} {'Total':>7}")
    for i, (alt, total) in enumerate(result.ordering, start=1):
        print(f"{i:>4}  {doc.display_name(alt)[:24]:24} {total:>7.3f}")
    return EXIT_OK


def cmd_report(args) -> int:
    doc = _load(args.model)
    try:
        rendered = render_report(doc, fmt=args.format)
    except (IncompleteModelError, IncompleteSheetError, EmptyResultError) as e:
        return _fail(str(e), EXIT_UNAVAILABLE)
    if args.format == "markdown":
        if args.output:
            try:
                Path(args.output).write_bytes(rendered)
            except OSError as e:
                return _fail(f"cannot write {args.output}: {e.strerror or e}", EXIT_USAGE)
            print(f"wrote {args.output}", file=sys.stderr)
        else:
            _maybe_timestamp(args)
            sys.stdout.write(rendered.decode("utf-8"))
        return EXIT_OK
    # CSV emits one file per table and therefore needs a directory.
    if not args.output:
        return _fail("--format csv requires -o DIRECTORY", EXIT_USAGE)
    out_dir = Path(args.output)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        for filename, content in sorted(rendered.items()):
            (out_dir / filename).write_bytes(content)
    except OSError as e:
        return _fail(f"cannot write into {args.output}: {e.strerror or e}", EXIT_USAGE)
    print(f"wrote {len(rendered)} tables into {args.output}", file=sys.stderr)
    return EXIT_OK


def cmd_serve(args) -> int:
    import socket

    state_dir = args.state_dir or os.environ.get(STATE_DIR_ENV) or str(
        Path.home() / ".ahpkit" / "sessions"
    )
    assets_dir = args.assets_dir or os.environ.get(ASSETS_DIR_ENV)

    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    try:
        probe.bind((args.host, args.port))
    except OSError as e:
        probe.close()
        return _fail(f"cannot bind {args.host}:{args.port}: {e.strerror or e}", EXIT_USAGE)
    probe.close()

    import uvicorn

    from .service import create_app

    app = create_app(state_dir=state_dir, assets_dir=assets_dir)
    print(f"serving on http://{args.host}:{args.port} (state: {state_dir})", file=sys.stderr)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ahpkit",
        description="Pairwise-comparison decision engine with factor-rating scoring.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_model_command(name, help_text, func):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("model", help="path to a model document")
        p.add_argument(
            "--timestamps",
            action="store_true",
            help="prepend a generation timestamp (off by default so runs are repeatable)",
        )
        p.set_defaults(func=func)
        return p

    p_check = add_model_command("check", "consistency summary per judged node", cmd_check)
    p_check.add_argument("--strict", action="store_true", help="exit 1 if any node is inconsistent")
    p_check.add_argument("--threshold", type=float, default=None, help="override the consistency threshold")

    p_weights = add_model_command("weights", "prioritized local/global weights", cmd_weights)
    p_weights.add_argument("--format", choices=("table", "csv"), default="table")

    p_rank = add_model_command("rank", "score and rank the alternatives", cmd_rank)
    p_rank.add_argument(
        "--whatif",
        action="append",
        metavar="ALT:LEAF=RATING",
        help="apply a rating override before ranking (repeatable); the file is untouched",
    )
    p_rank.add_argument("--format", choices=("table", "csv"), default="table")

    p_report = add_model_command("report", "full reproduction report", cmd_report)
    p_report.add_argument("-o", "--output", default=None, help="output file (markdown) or directory (csv)")
    p_report.add_argument("--format", choices=("markdown", "csv"), default="markdown")

    p_serve = sub.add_parser("serve", help="run the judgment session service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.add_argument("--state-dir", default=None, help=f"session storage (default ${STATE_DIR_ENV})")
    p_serve.add_argument("--assets-dir", default=None, help=f"static UI bundle (default ${ASSETS_DIR_ENV})")
    p_serve.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits 2 on usage errors and 0 on --help; keep its code.
        return int(e.code or 0)
    try:
        return args.func(args)
    except (DocumentError, UnknownTargetError) as e:
        return _fail(str(e), EXIT_USAGE)
    except AhpError as e:
        return _fail(str(e), EXIT_USAGE)


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()

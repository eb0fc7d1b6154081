"""HTTP session service: the interactive judgment loop over the engine.

Sessions are single decision models with a revision counter. Every mutation
must carry the revision the client last saw; a stale revision is refused with
409 so two people editing one procurement session cannot silently overwrite
each other. Each session lives in one JSON file under the state directory,
written atomically, so every acknowledged write survives a process restart.
"""
from __future__ import annotations

import json
import os
import tempfile
import threading
import uuid
from dataclasses import dataclass, replace
from datetime import datetime, timezone
from pathlib import Path

from fastapi import Body, FastAPI, HTTPException
from fastapi.responses import HTMLResponse

from . import __version__
from .core import analyze
from .errors import (
    AhpError,
    DocumentError,
    DuplicateJudgmentError,
    IncompleteJudgmentsError,
    MatrixError,
    RatingRangeError,
    ScaleViolationError,
    UnknownTargetError,
    UnsupportedOrderError,
)
from .hierarchy import (
    CriterionNode,
    find_node,
    iter_nodes,
    prioritize_leaves,
    validate_model,
)
from .model_io import (
    ModelDocument,
    _matrix_from_record,
    build_sheets,
    document_payload,
    evaluate_weights,
    load_model,
    load_template,
)
from .rating import breakdown_by_criterion, coerce_rating, rank, whatif

SERVICE_NAME = "ahpkit"


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


class RevisionConflict(Exception):
    def __init__(self, expected: int, got):
        super().__init__(f"revision conflict: session is at {expected}, request sent {got}")
        self.expected = expected
        self.got = got


@dataclass
class SessionState:
    id: str
    doc: ModelDocument
    revision: int
    created: str
    modified: str


class SessionStore:
    """One JSON file per session; atomic replace on write; lazy disk loads.

    Mutations within a session are serialized by a per-session lock; sessions
    are independent of each other.
    """

    def __init__(self, state_dir):
        self.state_dir = Path(state_dir)
        self.state_dir.mkdir(parents=True, exist_ok=True)
        self._sessions: dict[str, SessionState] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._registry = threading.Lock()

    def _lock_for(self, session_id: str) -> threading.Lock:
        with self._registry:
            if session_id not in self._locks:
                self._locks[session_id] = threading.Lock()
            return self._locks[session_id]

    def _path(self, session_id: str) -> Path:
        return self.state_dir / f"{session_id}.session.json"

    def _persist(self, state: SessionState) -> None:
        payload = {
            "id": state.id,
            "revision": state.revision,
            "created": state.created,
            "modified": state.modified,
            "model": document_payload(state.doc),
        }
        data = (json.dumps(payload, indent=2, ensure_ascii=False) + "\n").encode("utf-8")
        fd, tmp_name = tempfile.mkstemp(
            dir=self.state_dir, prefix=f".{state.id}.", suffix=".tmp"
        )
        try:
            with os.fdopen(fd, "wb") as f:
                f.write(data)
                f.flush()
                os.fsync(f.fileno())
            os.replace(tmp_name, self._path(state.id))
        except BaseException:
            try:
                os.unlink(tmp_name)
            except OSError:
                pass
            raise

    def _load_from_disk(self, session_id: str) -> SessionState | None:
        path = self._path(session_id)
        if not path.exists():
            return None
        payload = json.loads(path.read_text("utf-8"))
        doc = load_model(payload["model"], allow_empty=True)
        return SessionState(
            id=payload["id"],
            doc=doc,
            revision=int(payload["revision"]),
            created=payload["created"],
            modified=payload["modified"],
        )

    def create(self, doc: ModelDocument) -> SessionState:
        session_id = uuid.uuid4().hex
        now = _now()
        state = SessionState(id=session_id, doc=doc, revision=1, created=now, modified=now)
        with self._lock_for(session_id):
            self._persist(state)
            self._sessions[session_id] = state
        return state

    def get(self, session_id: str) -> SessionState | None:
        state = self._sessions.get(session_id)
        if state is not None:
            return state
        with self._lock_for(session_id):
            state = self._sessions.get(session_id)
            if state is None:
                state = self._load_from_disk(session_id)
                if state is not None:
                    self._sessions[session_id] = state
            return state

    def mutate(self, session_id: str, expected_revision, mutator) -> SessionState:
        """Apply ``mutator(doc) -> doc`` under the session lock.

        ``expected_revision`` must equal the current revision; the new state
        is persisted before the mutation is acknowledged.
        """
        with self._lock_for(session_id):
            state = self._sessions.get(session_id) or self._load_from_disk(session_id)
            if state is None:
                raise KeyError(session_id)
            if expected_revision != state.revision:
                raise RevisionConflict(expected=state.revision, got=expected_revision)
            new_doc = mutator(state.doc)
            new_state = SessionState(
                id=state.id,
                doc=new_doc,
                revision=state.revision + 1,
                created=state.created,
                modified=_now(),
            )
            self._persist(new_state)
            self._sessions[session_id] = new_state
            return new_state


def _replace_matrix(node: CriterionNode, target_id: str, matrix) -> CriterionNode:
    if node.id == target_id:
        return node.with_matrix(matrix)
    if node.is_leaf:
        return node
    return CriterionNode(
        id=node.id,
        name=node.name,
        children=tuple(_replace_matrix(c, target_id, matrix) for c in node.children),
        matrix=node.matrix,
    )


def _node_analysis(doc: ModelDocument) -> dict:
    nodes = {}
    for node in iter_nodes(doc.root):
        if node.matrix is None:
            continue
        priorities, report = analyze(node.matrix, doc.threshold)
        nodes[node.id] = {
            "local_weights": priorities.as_dict(),
            "consistency": report.as_dict(),
        }
    return {
        "unjudged_nodes": list(doc.unjudged_nodes()),
        "unrated_alternatives": list(doc.unrated_alternatives()),
        "diagnostics": [d.as_dict() for d in validate_model(doc.root)],
        "nodes": nodes,
    }


def _session_payload(state: SessionState) -> dict:
    return {
        "id": state.id,
        "revision": state.revision,
        "created": state.created,
        "modified": state.modified,
        "model": document_payload(state.doc),
        "analysis": _node_analysis(state.doc),
    }


def _require_revision(payload: dict):
    if "revision" not in payload:
        raise HTTPException(
            status_code=422,
            detail={"message": "mutations must carry the expected 'revision'"},
        )
    revision = payload["revision"]
    if isinstance(revision, bool) or not isinstance(revision, int):
        raise HTTPException(
            status_code=422,
            detail={"message": "'revision' must be an integer", "field": "revision"},
        )
    return revision


def _result_payload(state: SessionState) -> dict:
    doc = state.doc
    unjudged = doc.unjudged_nodes()
    if unjudged:
        raise HTTPException(
            status_code=409,
            detail={
                "message": "model is not fully judged",
                "unjudged_nodes": list(unjudged),
            },
        )
    table = evaluate_weights(doc)
    ranking = None
    subtotals = None
    if doc.alternatives:
        unrated = doc.unrated_alternatives()
        if unrated:
            raise HTTPException(
                status_code=409,
                detail={
                    "message": "alternatives are not fully rated",
                    "unrated_alternatives": list(unrated),
                },
            )
        result = rank(build_sheets(doc), table)
        ranking = result.as_dict()
        subtotals = breakdown_by_criterion(result, doc.root)
    return {
        "revision": state.revision,
        "weights": {
            "local": dict(table.local_weights),
            "global": dict(table.global_weights),
            "leaf_order": list(table.leaf_ids),
            "top_ancestor": dict(table.top_ancestor),
            "consistency": {k: v.as_dict() for k, v in table.consistency.items()},
            "inconsistent": list(table.inconsistent),
            "prioritization": [
                {"leaf": leaf, "global_weight": w} for leaf, w in prioritize_leaves(table)
            ],
        },
        "ranking": ranking,
        "subtotals": subtotals,
    }


_FALLBACK_PAGE = """<!DOCTYPE html>
<html>
<head><title>ahpkit service</title></head>
<body>
<h1>ahpkit session service</h1>
<p>The API lives under <code>/api</code>. No UI bundle is configured;
point --assets-dir (or AHPKIT_ASSETS_DIR) at a built bundle to serve one.</p>
</body>
</html>
"""


def create_app(state_dir, assets_dir=None) -> FastAPI:
    app = FastAPI(title="ahpkit session service", version=__version__)
    store = SessionStore(state_dir)
    app.state.store = store

    def get_or_404(session_id: str) -> SessionState:
        state = store.get(session_id)
        if state is None:
            raise HTTPException(status_code=404, detail={"message": "unknown session"})
        return state

    @app.get("/api/health")
    def health():
        return {"status": "ok", "service": SERVICE_NAME, "version": __version__}

    @app.post("/api/sessions", status_code=201)
    def create_session(payload: dict = Body(default={})):
        template = payload.get("from_template")
        inline = payload.get("model")
        if template is not None and inline is not None:
            raise HTTPException(
                status_code=422,
                detail={"message": "pass either 'from_template' or 'model', not both"},
            )
        try:
            if inline is not None:
                doc = load_model(inline, allow_empty=True)
            else:
                doc = load_template(template or "blank")
        except DocumentError as e:
            raise HTTPException(
                status_code=422,
                detail={"message": str(e), "diagnostics": list(e.diagnostics)},
            ) from None
        state = store.create(doc)
        return _session_payload(state)

    @app.get("/api/sessions/{session_id}")
    def read_session(session_id: str):
        return _session_payload(get_or_404(session_id))

    def run_mutation(session_id: str, revision, mutator):
        try:
            return store.mutate(session_id, revision, mutator)
        except KeyError:
            raise HTTPException(status_code=404, detail={"message": "unknown session"}) from None
        except RevisionConflict as e:
            raise HTTPException(
                status_code=409,
                detail={"message": str(e), "expected": e.expected, "got": e.got},
            ) from None

    @app.put("/api/sessions/{session_id}/hierarchy")
    def set_hierarchy(session_id: str, payload: dict = Body(...)):
        revision = _require_revision(payload)
        state = get_or_404(session_id)

        def mutator(doc: ModelDocument) -> ModelDocument:
            draft = document_payload(doc)
            # Sheets are re-attached after the reparse; validating them against
            # the incoming tree would reject ratings for removed leaves instead
            # of pruning them.
            draft.pop("sheets", None)
            for key in ("goal", "criteria", "criteria_matrix", "alternatives"):
                if key in payload:
                    draft[key] = payload[key]
                elif key == "criteria_matrix" and "criteria" in payload:
                    # A new tree invalidates the old top-level matrix unless
                    # the request supplies a replacement.
                    draft.pop("criteria_matrix", None)
            draft["schema_version"] = doc.schema_version
            try:
                rebuilt = load_model(draft, allow_empty=True)
            except DocumentError as e:
                raise HTTPException(
                    status_code=422,
                    detail={"message": str(e), "diagnostics": list(e.diagnostics)},
                ) from None
            # Keep only ratings that still point at a declared alternative and
            # a leaf of the new tree.
            leaf_ids = set(rebuilt.leaf_ids())
            alt_ids = set(rebuilt.alternative_ids())
            kept_sheets = {
                alt: {leaf: r for leaf, r in sheet.items() if leaf in leaf_ids}
                for alt, sheet in doc.sheets.items()
                if alt in alt_ids
            }
            return replace(rebuilt, sheets=kept_sheets)

        new_state = run_mutation(session_id, revision, mutator)
        return _session_payload(new_state)

    @app.put("/api/sessions/{session_id}/judgments/{node_id}")
    def put_judgments(session_id: str, node_id: str, payload: dict = Body(...)):
        revision = _require_revision(payload)
        state = get_or_404(session_id)
        node = find_node(state.doc.root, node_id)
        if node is None:
            raise HTTPException(status_code=404, detail={"message": f"unknown node {node_id!r}"})
        if len(node.children) < 2:
            raise HTTPException(
                status_code=422,
                detail={
                    "message": f"node {node_id!r} has {len(node.children)} children; "
                    "judgments need at least two items to compare"
                },
            )
        if "judgments" not in payload:
            raise HTTPException(
                status_code=422, detail={"message": "'judgments' list is required"}
            )

        def mutator(doc: ModelDocument) -> ModelDocument:
            target = find_node(doc.root, node_id)
            try:
                matrix = _matrix_from_record(
                    {"judgments": payload["judgments"]},
                    tuple(c.id for c in target.children),
                    doc.scale,
                    f"judgments for node {node_id!r}",
                )
            except (
                DocumentError,
                ScaleViolationError,
                DuplicateJudgmentError,
                IncompleteJudgmentsError,
                MatrixError,
                UnsupportedOrderError,
            ) as e:
                raise HTTPException(
                    status_code=422,
                    detail={"message": str(e), "node_id": node_id},
                ) from None
            return replace(doc, root=_replace_matrix(doc.root, node_id, matrix))

        new_state = run_mutation(session_id, revision, mutator)
        target = find_node(new_state.doc.root, node_id)
        priorities, report = analyze(target.matrix, new_state.doc.threshold)
        return {
            "revision": new_state.revision,
            "node_id": node_id,
            "local_weights": priorities.as_dict(),
            "consistency": report.as_dict(),
        }

    @app.put("/api/sessions/{session_id}/ratings")
    def put_ratings(session_id: str, payload: dict = Body(...)):
        revision = _require_revision(payload)
        state = get_or_404(session_id)
        sheets = payload.get("sheets")
        if not isinstance(sheets, dict):
            raise HTTPException(
                status_code=422,
                detail={"message": "'sheets' must map alternative id to leaf ratings"},
            )

        def mutator(doc: ModelDocument) -> ModelDocument:
            known_alts = set(doc.alternative_ids())
            known_leaves = set(doc.leaf_ids())
            merged = {alt: dict(sheet) for alt, sheet in doc.sheets.items()}
            for alt, sheet in sheets.items():
                if alt not in known_alts:
                    raise HTTPException(
                        status_code=404,
                        detail={"message": f"unknown alternative {alt!r}"},
                    )
                if not isinstance(sheet, dict):
                    raise HTTPException(
                        status_code=422,
                        detail={"message": f"sheet for {alt!r} must be an object"},
                    )
                clean = {}
                for leaf, value in sheet.items():
                    if leaf not in known_leaves:
                        raise HTTPException(
                            status_code=404,
                            detail={"message": f"unknown leaf {leaf!r}"},
                        )
                    try:
                        clean[leaf] = coerce_rating(value, leaf)
                    except RatingRangeError as e:
                        raise HTTPException(
                            status_code=422,
                            detail={
                                "message": str(e),
                                "alternative": alt,
                                "leaf": leaf,
                            },
                        ) from None
                merged[alt] = clean
            return replace(doc, sheets=merged)

        new_state = run_mutation(session_id, revision, mutator)
        return {
            "revision": new_state.revision,
            "sheets_accepted": sorted(sheets),
            "unrated_alternatives": list(new_state.doc.unrated_alternatives()),
        }

    @app.get("/api/sessions/{session_id}/result")
    def get_result(session_id: str):
        return _result_payload(get_or_404(session_id))

    @app.post("/api/sessions/{session_id}/whatif")
    def post_whatif(session_id: str, payload: dict = Body(default={})):
        state = get_or_404(session_id)
        overrides = payload.get("overrides", {})
        if not isinstance(overrides, dict):
            raise HTTPException(
                status_code=422,
                detail={"message": "'overrides' must map alternative id to leaf ratings"},
            )
        doc = state.doc
        if doc.unjudged_nodes():
            raise HTTPException(
                status_code=409,
                detail={
                    "message": "model is not fully judged",
                    "unjudged_nodes": list(doc.unjudged_nodes()),
                },
            )
        if doc.unrated_alternatives():
            raise HTTPException(
                status_code=409,
                detail={
                    "message": "alternatives are not fully rated",
                    "unrated_alternatives": list(doc.unrated_alternatives()),
                },
            )
        table = evaluate_weights(doc)
        try:
            result = whatif(build_sheets(doc), table, overrides)
        except UnknownTargetError as e:
            raise HTTPException(status_code=404, detail={"message": str(e)}) from None
        except (RatingRangeError, AhpError) as e:
            raise HTTPException(status_code=422, detail={"message": str(e)}) from None
        return {
            "revision": state.revision,
            "ranking": result.as_dict(),
            "subtotals": breakdown_by_criterion(result, doc.root),
        }

    assets_path = Path(assets_dir) if assets_dir else None
    if assets_path is not None and assets_path.is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=str(assets_path), html=True), name="ui")
    else:

        @app.get("/", response_class=HTMLResponse)
        def index():
            return _FALLBACK_PAGE

    return app

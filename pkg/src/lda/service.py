"""HTTP session API ("lda/1") for scripts and the companion UI.

Every response body is an envelope {ok, data|error, api-version}; no endpoint
returns anything else, including on errors.  Sessions live in memory keyed by
opaque ids; decisions on one session are serialized by a per-session lock, so
they apply strictly in arrival order, while distinct sessions proceed in
parallel over the immutable shared knowledge base.
"""

import json
import pathlib
import threading
import uuid

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from starlette.exceptions import HTTPException as StarletteHTTPException

from .description import compile_design, save_description
from .earley import parse_program
from .errors import LdaError, StaleSequence
from .kb import kb_hash, query_from_json, query_kb
from .printing import format_term
from .session import (apply_decision, decision_from_json, decisions_from_json,
                      decisions_to_json, diagnostics, finalize, open_session, replay)
from .terms import equal_mod_spans

API_VERSION = "lda/1"


def _ok(data, status=200):
    return JSONResponse({"ok": True, "data": data, "api-version": API_VERSION},
                        status_code=status)


def _err(code, message, status, details=None):
    return JSONResponse({"ok": False,
                         "error": {"code": code, "message": message,
                                   "details": details or {}},
                         "api-version": API_VERSION}, status_code=status)


def _domain_error(e):
    status = 409 if isinstance(e, StaleSequence) else 422
    return _err(e.code, e.message, status, e.details and _safe(e.details))


def _safe(obj):
    return json.loads(json.dumps(obj, default=str))


class SessionBox:
    def __init__(self, session):
        self.session = session
        self.lock = threading.Lock()


def session_view(sid, session):
    report = diagnostics(session)
    return {
        "session-id": sid,
        "kb-ref": session.kb_ref,
        "state-hash": session.state_hash,
        "log": [d.to_json() for d in session.log],
        "selected": sorted(session.selected),
        "selected-by-kind": report.selected_by_kind,
        "params": {"%s:%s" % k: v for k, v in sorted(session.params.items())},
        "pending": list(session.pending),
        "violations": [v.to_json() for v in session.violations],
        "advice": [{"id": i, "message": m, "severity": s} for i, m, s in report.advice],
    }


def make_app(kb, snapshot_dir=None):
    app = FastAPI(title="lda", version=API_VERSION)
    boxes = {}
    registry_lock = threading.Lock()
    snapshots = pathlib.Path(snapshot_dir) if snapshot_dir else None

    if snapshots:
        snapshots.mkdir(parents=True, exist_ok=True)
        for path in sorted(snapshots.glob("*.decisions.json")):
            sid = path.name.removesuffix(".decisions.json")
            log = decisions_from_json(path.read_text(encoding="utf-8"))
            boxes[sid] = SessionBox(replay(kb, log))

    def snapshot(sid, session):
        if snapshots:
            target = snapshots / ("%s.decisions.json" % sid)
            target.write_text(decisions_to_json(session.log) + "\n", encoding="utf-8")

    def get_box(sid):
        box = boxes.get(sid)
        if box is None:
            raise KeyError(sid)
        return box

    @app.exception_handler(LdaError)
    async def _lda_error(request: Request, e: LdaError):
        return _domain_error(e)

    @app.exception_handler(KeyError)
    async def _unknown_session(request: Request, e: KeyError):
        return _err("unknown-session", "no session %s" % e.args[0], 404)

    @app.exception_handler(StarletteHTTPException)
    async def _http_error(request: Request, e: StarletteHTTPException):
        return _err("http-error", str(e.detail), e.status_code)

    @app.exception_handler(Exception)
    async def _crash(request: Request, e: Exception):
        return _err("internal", "%s: %s" % (type(e).__name__, e), 500)

    async def _body(request):
        try:
            raw = await request.body()
            return json.loads(raw) if raw else {}
        except json.JSONDecodeError:
            return None

    @app.get("/health")
    async def health():
        return _ok({"status": "ok", "kb-ref": kb_hash(kb),
                    "concepts": len(kb.concepts)})

    @app.get("/kb/concepts")
    async def kb_concepts():
        return _ok([{"id": c.id, "kind": c.kind, "description": c.description,
                     "parameters": [{"name": p.name, "values": list(p.values),
                                     "default": p.default} for p in c.parameters]}
                    for c in sorted(kb.concepts.values(), key=lambda c: c.id)])

    @app.post("/kb/query")
    async def kb_query(request: Request):
        body = await _body(request)
        if body is None or "query" not in body:
            return _err("malformed", "body must be JSON with a 'query' field", 400)
        try:
            query = query_from_json(body["query"])
        except (ValueError, KeyError, TypeError) as e:
            return _err("malformed", "bad query: %s" % e, 400)
        return _ok({"ids": query_kb(kb, query)})

    @app.post("/sessions")
    async def create_session():
        sid = uuid.uuid4().hex[:12]
        with registry_lock:
            boxes[sid] = SessionBox(open_session(kb))
        snapshot(sid, boxes[sid].session)
        return _ok(session_view(sid, boxes[sid].session))

    @app.get("/sessions/{sid}")
    async def get_session(sid: str):
        return _ok(session_view(sid, get_box(sid).session))

    @app.post("/sessions/{sid}/decisions")
    async def post_decision(sid: str, request: Request):
        box = get_box(sid)
        body = await _body(request)
        if body is None:
            return _err("malformed", "body is not valid JSON", 400)
        try:
            decision = decision_from_json(body)
        except (ValueError, KeyError, TypeError) as e:
            return _err("malformed", "bad decision record: %s" % e, 400)
        with box.lock:
            update = apply_decision(box.session, decision)
            box.session = update.session
            snapshot(sid, box.session)
            view = session_view(sid, box.session)
        return _ok({"update": update.to_json(), "session": view,
                    "state-hash": view["state-hash"]})

    @app.get("/sessions/{sid}/diagnostics")
    async def get_diagnostics(sid: str):
        return _ok(diagnostics(get_box(sid).session).to_json())

    @app.post("/sessions/{sid}/finalize")
    async def post_finalize(sid: str, request: Request):
        box = get_box(sid)
        body = await _body(request)
        if body is None or "name" not in body or "start" not in body:
            return _err("malformed", "body must carry 'name' and 'start'", 400)
        with box.lock:
            design = finalize(box.session, body["name"], body["start"])
        desc = compile_design(design)
        return _ok({"name": design.name, "start": design.start,
                    "blocks": [b.concept_id for b in design.blocks],
                    "description": json.loads(save_description(desc))})

    @app.post("/sessions/{sid}/preview")
    async def post_preview(sid: str, request: Request):
        box = get_box(sid)
        body = await _body(request)
        if body is None or "start" not in body:
            return _err("malformed", "body must carry 'start' (and optionally "
                        "'program', 'name')", 400)
        with box.lock:
            design = finalize(box.session, body.get("name", "Preview"), body["start"])
        desc = compile_design(design)
        data = {
            "grammar": {
                "start": desc.grammar.start,
                "productions": [_production_text(p) for p in desc.grammar.productions],
                "tokens": sorted(t.name for t in desc.grammar.tokens),
            },
            "typed": desc.typing is not None,
        }
        program = body.get("program", "")
        if program.strip():
            term = parse_program(desc, program)
            formatted = format_term(desc, term)
            reparsed = parse_program(desc, formatted)
            if not equal_mod_spans(term, reparsed):
                return _err("internal-roundtrip", "formatted output does not reparse "
                            "to the same term", 500)
            data["term"] = term.to_json()
            data["formatted"] = formatted
        else:
            data["formatted"] = ""
        return _ok(data)

    return app


def _production_text(p):
    from .facets import print_production
    return print_production(p)

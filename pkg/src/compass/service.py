"""HTTP JSON service hosting models, learners, adaptive sessions, and recommendations.

Thin stateful shell over the pure engine modules: every response body is
produced by the canonical serializers, so repeated GETs are byte-identical.
State lives in memory and, when a data directory is configured, as canonical
JSON snapshots written after every mutation; restarting the process resumes
from those snapshots. A single lock serializes mutations (reads of immutable
snapshots need none), which satisfies the per-learner ordering guarantee at
desk scale.
"""

from __future__ import annotations

import json
import re
import threading
import time
import urllib.parse
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

from . import storage
from .assessment import (
    STATUS_ACTIVE,
    SessionState,
    next_item,
    session_result,
    start_session,
    submit_answer,
)
from .domain import DomainModel, validate_domain_model
from .errors import EngineError
from .items import AssessmentItem, ItemPool, validate_pool
from .learner import DecayParams, IndividualModel, record_evidence
from .overlay import LoStatus, challenge_check, overlay
from .recommend import recommend_path, recommend_resources
from .storage import canonical_bytes

_STATUS_BY_CODE = {
    "PARSE_ERROR": 400,
    "SCHEMA_ERROR": 400,
    "VERSION_ERROR": 400,
    "ID_MISMATCH": 400,
    "BAD_REQUEST": 400,
    "POOL_AMBIGUOUS": 400,
    "UNKNOWN_CONCEPT": 404,
    "UNKNOWN_LO": 404,
    "UNKNOWN_MODEL": 404,
    "UNKNOWN_POOL": 404,
    "UNKNOWN_SESSION": 404,
    "NOT_FOUND": 404,
    "DUPLICATE_EVIDENCE": 409,
    "WRONG_ITEM": 409,
    "SESSION_FINISHED": 409,
    "NO_ITEMS": 422,
    "MERGE_CONFLICT": 422,
    "MERGE_CYCLE": 422,
    "VALIDATION_FAILED": 422,
    "BAD_RESPONSE": 400,
}


def report_to_doc(report) -> dict:
    return {
        "ok": report.ok,
        "findings": [
            {
                "severity": f.severity,
                "code": f.code,
                "message": f.message,
                "subject_id": f.subject_id,
            }
            for f in report.findings
        ],
    }


def public_item_doc(item: AssessmentItem) -> dict:
    """Item as served to learners: everything except the answer key."""
    return {
        "id": item.id,
        "lo_id": item.lo_id,
        "cell": {"process_level": item.cell.process_level, "knowledge_dim": item.cell.knowledge_dim},
        "stem": item.stem,
        "options": list(item.options),
        "max_seconds": item.max_seconds,
    }


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str, extra: dict | None = None):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message
        self.extra = extra or {}

    @classmethod
    def from_engine(cls, err: EngineError) -> "ApiError":
        return cls(_STATUS_BY_CODE.get(err.code, 400), err.code, err.message)

    def body(self) -> dict:
        doc = {"error": {"code": self.code, "message": self.message}}
        doc.update(self.extra)
        return doc


class AppState:
    """In-memory store with optional file persistence under ``data_dir``."""

    def __init__(self, data_dir: str | Path | None = None, params: DecayParams | None = None):
        self.data_dir = Path(data_dir) if data_dir else None
        self.params = params or DecayParams()
        self.domains: dict[str, DomainModel] = {}
        self.pools: dict[str, ItemPool] = {}
        self.learners: dict[str, IndividualModel] = {}
        self.sessions: dict[str, SessionState] = {}
        self.lock = threading.RLock()
        if self.data_dir is not None:
            self._load_snapshots()

    # -- persistence ------------------------------------------------------

    def _dir(self, kind: str) -> Path:
        assert self.data_dir is not None
        return self.data_dir / kind

    def _load_snapshots(self) -> None:
        loaders = {
            "domain": (storage.load_domain_model, self.domains, lambda m: m.module_id),
            "pools": (storage.load_item_pool, self.pools, lambda p: p.pool_id),
            "learners": (storage.load_individual, self.learners, lambda m: m.learner_id),
            "sessions": (storage.load_session, self.sessions, lambda s: s.session_id),
        }
        for kind, (load, store, key_of) in loaders.items():
            directory = self._dir(kind)
            if not directory.is_dir():
                continue
            for path in sorted(directory.glob("*.json")):
                value = load(path.read_bytes())
                store[key_of(value)] = value

    def _persist(self, kind: str, name: str, data: bytes) -> None:
        if self.data_dir is None:
            return
        directory = self._dir(kind)
        directory.mkdir(parents=True, exist_ok=True)
        safe = urllib.parse.quote(name, safe="")
        tmp = directory / f".{safe}.tmp"
        tmp.write_bytes(data)
        tmp.replace(directory / f"{safe}.json")

    # -- lookups ----------------------------------------------------------

    def domain_or_404(self, module_id: str) -> DomainModel:
        model = self.domains.get(module_id)
        if model is None:
            raise ApiError(404, "UNKNOWN_MODEL", f"no domain model {module_id!r}")
        return model

    def pool_or_404(self, pool_id: str) -> ItemPool:
        pool = self.pools.get(pool_id)
        if pool is None:
            raise ApiError(404, "UNKNOWN_POOL", f"no item pool {pool_id!r}")
        return pool

    def resolve_pool(self, pool_id: str | None) -> ItemPool:
        if pool_id is not None:
            return self.pool_or_404(pool_id)
        if len(self.pools) == 1:
            return next(iter(self.pools.values()))
        raise ApiError(
            400,
            "POOL_AMBIGUOUS",
            "specify a pool id: the service hosts " + str(len(self.pools)) + " pools",
        )

    def model_for_lo(self, lo_id: str, course: str | None) -> DomainModel:
        if course is not None:
            model = self.domain_or_404(course)
            if lo_id not in model.lo_index:
                raise ApiError(404, "UNKNOWN_LO", f"outcome {lo_id!r} not in model {course!r}")
            return model
        for module_id in sorted(self.domains):
            if lo_id in self.domains[module_id].lo_index:
                return self.domains[module_id]
        raise ApiError(404, "UNKNOWN_LO", f"outcome {lo_id!r} not found in any domain model")

    def learner(self, learner_id: str) -> IndividualModel:
        return self.learners.get(learner_id) or IndividualModel(learner_id=learner_id)

    # -- mutations (callers hold no lock; each method locks) ----------------

    def put_domain(self, module_id: str, body: bytes) -> tuple[int, dict]:
        model = storage.load_domain_model(body)
        if model.module_id != module_id:
            raise ApiError(
                400, "ID_MISMATCH", f"path id {module_id!r} != document module_id {model.module_id!r}"
            )
        report = validate_domain_model(model)
        if not report.ok:
            raise ApiError(
                422, "VALIDATION_FAILED", "domain model has validation errors",
                extra={"report": report_to_doc(report)},
            )
        with self.lock:
            created = module_id not in self.domains
            self.domains[module_id] = model
            self._persist("domain", module_id, storage.save_domain_model(model))
        return (201 if created else 200), report_to_doc(report)

    def put_pool(self, pool_id: str, body: bytes, domain_id: str | None) -> tuple[int, dict]:
        pool = storage.load_item_pool(body)
        if pool.pool_id != pool_id:
            raise ApiError(400, "ID_MISMATCH", f"path id {pool_id!r} != document pool_id {pool.pool_id!r}")
        if domain_id is not None:
            model = self.domain_or_404(domain_id)
        elif len(self.domains) == 1:
            model = next(iter(self.domains.values()))
        else:
            raise ApiError(400, "BAD_REQUEST", "specify ?domain= to cross-validate the pool")
        report = validate_pool(pool, model)
        if not report.ok:
            raise ApiError(
                422, "VALIDATION_FAILED", "item pool has validation errors",
                extra={"report": report_to_doc(report)},
            )
        with self.lock:
            created = pool_id not in self.pools
            self.pools[pool_id] = pool
            self._persist("pools", pool_id, storage.save_item_pool(pool))
        return (201 if created else 200), report_to_doc(report)

    def post_evidence(self, learner_id: str, body: bytes) -> dict:
        doc = _json_body(body)
        raw = doc.get("evidence")
        if not isinstance(raw, list):
            raise ApiError(400, "BAD_REQUEST", "body must be {\"evidence\": [...]}")
        records = storage.evidence_records_from_doc(raw, "$.evidence")
        with self.lock:
            model = self.learner(learner_id)
            for rec in records:
                model = record_evidence(model, rec)  # DUPLICATE_EVIDENCE -> 409
            self.learners[learner_id] = model
            self._persist("learners", learner_id, storage.save_individual(model))
        return {"learner_id": learner_id, "recorded": len(records), "total": len(model.evidence)}

    def create_session(self, learner_id: str, body: bytes) -> dict:
        doc = _json_body(body)
        lo_id = doc.get("lo_id")
        if not isinstance(lo_id, str):
            raise ApiError(400, "BAD_REQUEST", "body must include a string lo_id")
        budget = doc.get("budget", 12)
        if not isinstance(budget, int) or isinstance(budget, bool) or budget < 1:
            raise ApiError(400, "BAD_REQUEST", "budget must be a positive integer")
        pool = self.resolve_pool(doc.get("pool_id"))
        model = self.model_for_lo(lo_id, doc.get("course"))
        _, lo = model.lo_index[lo_id]
        with self.lock:
            session = start_session(pool, model, self.learner(learner_id), lo, budget=budget)
            self.sessions[session.session_id] = session
            self._persist("sessions", session.session_id, storage.save_session(session))
        return self.session_doc(session)

    def session_doc(self, session: SessionState) -> dict:
        doc = {
            "session_id": session.session_id,
            "status": session.status,
            "interval": [session.interval[0], session.interval[1]],
        }
        if session.status == STATUS_ACTIVE and session.pending is not None:
            pool = self.pool_or_404(session.pool_id or "")
            doc["item"] = public_item_doc(pool.items[session.pending])
        if session.status != STATUS_ACTIVE:
            result = session_result(session)
            doc["result"] = {
                "lo_id": result.lo_id,
                "localized_level": result.localized_level,
                "exact": result.exact,
                "items_used": result.items_used,
            }
        return doc

    def session_or_404(self, session_id: str) -> SessionState:
        session = self.sessions.get(session_id)
        if session is None:
            raise ApiError(404, "UNKNOWN_SESSION", f"no session {session_id!r}")
        return session

    def get_next(self, session_id: str) -> dict:
        with self.lock:
            session = self.session_or_404(session_id)
            if session.status == STATUS_ACTIVE and session.pending is None:
                pool = self.pool_or_404(session.pool_id or "")
                session, _ = next_item(session, pool)
                self.sessions[session_id] = session
                self._persist("sessions", session_id, storage.save_session(session))
            return self.session_doc(session)

    def post_answer(self, session_id: str, body: bytes) -> dict:
        doc = _json_body(body)
        item_id = doc.get("item_id")
        chosen_raw = doc.get("chosen")
        seconds = doc.get("seconds", 0)
        if not isinstance(item_id, str) or not isinstance(chosen_raw, list):
            raise ApiError(400, "BAD_REQUEST", "body must include item_id and chosen[]")
        if any(isinstance(i, bool) or not isinstance(i, int) for i in chosen_raw):
            raise ApiError(400, "BAD_REQUEST", "chosen must be an array of option indices")
        if not isinstance(seconds, int) or isinstance(seconds, bool) or seconds < 0:
            raise ApiError(400, "BAD_REQUEST", "seconds must be a non-negative integer")
        now = _parse_now(doc.get("now"))
        with self.lock:
            session = self.session_or_404(session_id)
            if session.status != STATUS_ACTIVE:
                raise ApiError(409, "SESSION_FINISHED", "session already concluded or exhausted")
            pool = self.pool_or_404(session.pool_id or "")
            item = pool.items.get(item_id)
            if item is None or item_id != session.pending:
                raise ApiError(409, "WRONG_ITEM", f"item {item_id!r} is not the pending item")
            session, evidence = submit_answer(session, item, set(chosen_raw), seconds, now)
            learner = self.learner(session.learner_id)
            try:
                learner = record_evidence(learner, evidence)
            except EngineError as err:
                if err.code != "DUPLICATE_EVIDENCE":  # identical (item, second): already recorded
                    raise
            self.learners[session.learner_id] = learner
            self._persist("learners", session.learner_id, storage.save_individual(learner))
            if session.status == STATUS_ACTIVE:
                session, _ = next_item(session, pool)
            self.sessions[session_id] = session
            self._persist("sessions", session_id, storage.save_session(session))
            return self.session_doc(session)

    # -- read-side composites ----------------------------------------------

    def overlay_report(self, learner_id: str, course: str, concepts_csv: str | None, now: int):
        model = self.domain_or_404(course)
        course_concepts = _concept_subset(model, concepts_csv)
        return overlay(model, course_concepts, self.learner(learner_id), now, self.params)

    def recommendations(
        self,
        learner_id: str,
        course: str,
        concepts_csv: str | None,
        target: str,
        k: int,
        tags: frozenset[str],
        now: int,
    ) -> dict:
        model = self.domain_or_404(course)
        course_concepts = _concept_subset(model, concepts_csv)
        return build_recommendations_doc(
            model, course_concepts, self.learner(learner_id), target, k, tags, now, self.params
        )

    def challenge(self, learner_id: str, course: str, concept_id: str, pool_id: str | None, now: int):
        model = self.domain_or_404(course)
        pool = self.resolve_pool(pool_id)
        return challenge_check(model, pool, concept_id, self.learner(learner_id), now, self.params)


def build_recommendations_doc(
    model: DomainModel,
    course_concepts: frozenset[str],
    learner: IndividualModel,
    target: str,
    k: int,
    tags: frozenset[str],
    now: int,
    params: DecayParams,
) -> dict:
    """Plans for the target plus ranked resources for every unmet outcome on the way.

    Shared by the HTTP service and the CLI so both surfaces emit the same body.
    """
    report = overlay(model, course_concepts, learner, now, params)
    plans = recommend_path(model, course_concepts, report, target, k_alternatives=k)
    resources = []
    for cid in plans[0].steps:
        for lo in model.concepts[cid].outcomes:
            if report.statuses.get(lo.id) is LoStatus.ACHIEVED:
                continue
            rec = recommend_resources(model, lo.id, tags)
            resources.append(
                {
                    "lo_id": rec.lo_id,
                    "preference_tags_applied": sorted(rec.preference_tags_applied),
                    "ranked": [
                        {
                            "id": res.id,
                            "title": res.title,
                            "uri": res.uri,
                            "kind": res.kind,
                            "tags": sorted(res.tags),
                        }
                        for res in rec.ranked
                    ],
                }
            )
    return {
        "course_id": model.module_id,
        "target_concept": target,
        "plans": [storage.plan_to_doc(plan) for plan in plans],
        "resources": resources,
    }


def _json_body(body: bytes) -> dict:
    try:
        doc = json.loads(body.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ApiError(400, "PARSE_ERROR", f"request body is not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ApiError(400, "BAD_REQUEST", "request body must be a JSON object")
    return doc


def _parse_now(value) -> int:
    if value is None:
        return int(time.time())
    if not isinstance(value, str):
        raise ApiError(400, "BAD_REQUEST", "now must be an ISO-8601 UTC string")
    try:
        return storage.iso_to_epoch(value)
    except EngineError:
        raise ApiError(400, "BAD_REQUEST", f"now is not a UTC ISO-8601 timestamp: {value!r}") from None


def _concept_subset(model: DomainModel, concepts_csv: str | None) -> frozenset[str]:
    if concepts_csv is None or concepts_csv == "":
        return frozenset(model.concepts)
    wanted = frozenset(part for part in concepts_csv.split(",") if part)
    for cid in sorted(wanted):
        if cid not in model.concepts:
            raise ApiError(404, "UNKNOWN_CONCEPT", f"unknown concept {cid!r}")
    return wanted


_ROUTES: list[tuple[str, str, re.Pattern]] = [
    ("GET", "health", re.compile(r"^/health$")),
    ("PUT", "put_domain", re.compile(r"^/models/domain/([^/]+)$")),
    ("GET", "get_domain", re.compile(r"^/models/domain/([^/]+)$")),
    ("PUT", "put_pool", re.compile(r"^/models/items/([^/]+)$")),
    ("GET", "get_pool", re.compile(r"^/models/items/([^/]+)$")),
    ("POST", "post_evidence", re.compile(r"^/learners/([^/]+)/evidence$")),
    ("GET", "get_overlay", re.compile(r"^/learners/([^/]+)/overlay$")),
    ("POST", "create_session", re.compile(r"^/learners/([^/]+)/sessions$")),
    ("GET", "get_next", re.compile(r"^/sessions/([^/]+)/next$")),
    ("POST", "post_answer", re.compile(r"^/sessions/([^/]+)/answers$")),
    ("GET", "get_recommendations", re.compile(r"^/learners/([^/]+)/recommendations$")),
    ("GET", "get_challenge", re.compile(r"^/learners/([^/]+)/challenge$")),
]


def make_handler(state: AppState, ui_dir: Path | None = None, quiet: bool = True):
    class Handler(BaseHTTPRequestHandler):
        protocol_version = "HTTP/1.1"
        server_version = "compass"

        def log_message(self, fmt, *args):  # noqa: N802
            if not quiet:
                super().log_message(fmt, *args)

        # -- plumbing ------------------------------------------------------

        def _send(self, status: int, body: bytes, content_type: str = "application/json; charset=utf-8"):
            self.send_response(status)
            self.send_header("Content-Type", content_type)
            self.send_header("Content-Length", str(len(body)))
            self.send_header("Access-Control-Allow-Origin", "*")
            self.end_headers()
            if body:
                self.wfile.write(body)

        def _send_json(self, status: int, doc: dict):
            self._send(status, canonical_bytes(doc))

        def _send_error(self, err: ApiError):
            self._send(err.status, canonical_bytes(err.body()))

        def _body(self) -> bytes:
            length = int(self.headers.get("Content-Length") or 0)
            return self.rfile.read(length) if length else b""

        def _dispatch(self, method: str):
            url = urllib.parse.urlsplit(self.path)
            query = {k: v[-1] for k, v in urllib.parse.parse_qs(url.query).items()}
            path = urllib.parse.unquote(url.path)
            try:
                if method == "GET" and ui_dir is not None and (path == "/ui" or path.startswith("/ui/")):
                    self._serve_ui(path)
                    return
                for verb, name, pattern in _ROUTES:
                    match = pattern.match(path)
                    if match and verb == method:
                        getattr(self, f"_ep_{name}")(query, *match.groups())
                        return
                raise ApiError(404, "NOT_FOUND", f"no route for {method} {path}")
            except ApiError as err:
                self._send_error(err)
            except EngineError as err:
                self._send_error(ApiError.from_engine(err))

        def do_GET(self):  # noqa: N802
            self._dispatch("GET")

        def do_PUT(self):  # noqa: N802
            self._dispatch("PUT")

        def do_POST(self):  # noqa: N802
            self._dispatch("POST")

        def do_OPTIONS(self):  # noqa: N802
            self.send_response(204)
            self.send_header("Access-Control-Allow-Origin", "*")
            self.send_header("Access-Control-Allow-Methods", "GET, PUT, POST, OPTIONS")
            self.send_header("Access-Control-Allow-Headers", "Content-Type")
            self.send_header("Content-Length", "0")
            self.end_headers()

        # -- endpoints -------------------------------------------------------

        def _ep_health(self, query):
            self._send_json(200, {"status": "ok"})

        def _ep_put_domain(self, query, module_id):
            status, doc = state.put_domain(module_id, self._body())
            self._send_json(status, doc)

        def _ep_get_domain(self, query, module_id):
            model = state.domain_or_404(module_id)
            self._send(200, storage.save_domain_model(model))

        def _ep_put_pool(self, query, pool_id):
            status, doc = state.put_pool(pool_id, self._body(), query.get("domain"))
            self._send_json(status, doc)

        def _ep_get_pool(self, query, pool_id):
            pool = state.pool_or_404(pool_id)
            self._send(200, storage.save_item_pool(pool))

        def _ep_post_evidence(self, query, learner_id):
            self._send_json(200, state.post_evidence(learner_id, self._body()))

        def _ep_get_overlay(self, query, learner_id):
            course = query.get("course")
            if course is None:
                raise ApiError(400, "BAD_REQUEST", "query parameter course is required")
            now = _parse_now(query.get("now"))
            report = state.overlay_report(learner_id, course, query.get("concepts"), now)
            self._send(200, storage.save_overlay_report(report))

        def _ep_create_session(self, query, learner_id):
            self._send_json(201, state.create_session(learner_id, self._body()))

        def _ep_get_next(self, query, session_id):
            self._send_json(200, state.get_next(session_id))

        def _ep_post_answer(self, query, session_id):
            self._send_json(200, state.post_answer(session_id, self._body()))

        def _ep_get_recommendations(self, query, learner_id):
            course = query.get("course")
            target = query.get("target")
            if course is None or target is None:
                raise ApiError(400, "BAD_REQUEST", "query parameters course and target are required")
            try:
                k = int(query.get("k", "3"))
            except ValueError:
                raise ApiError(400, "BAD_REQUEST", "k must be an integer") from None
            tags = frozenset(part for part in (query.get("tags") or "").split(",") if part)
            now = _parse_now(query.get("now"))
            doc = state.recommendations(learner_id, course, query.get("concepts"), target, k, tags, now)
            self._send_json(200, doc)

        def _ep_get_challenge(self, query, learner_id):
            course = query.get("course")
            concept = query.get("concept")
            if course is None or concept is None:
                raise ApiError(400, "BAD_REQUEST", "query parameters course and concept are required")
            now = _parse_now(query.get("now"))
            suggestion = state.challenge(learner_id, course, concept, query.get("pool"), now)
            if suggestion is None:
                self._send(204, b"")
                return
            self._send_json(
                200,
                {
                    "concept_id": suggestion.concept_id,
                    "next_level": suggestion.next_level,
                    "time_factor": suggestion.time_factor,
                },
            )

        # -- static console --------------------------------------------------

        def _serve_ui(self, path: str):
            assert ui_dir is not None
            rel = path[len("/ui") :].lstrip("/") or "index.html"
            target = (ui_dir / rel).resolve()
            if not str(target).startswith(str(ui_dir.resolve())) or not target.is_file():
                raise ApiError(404, "NOT_FOUND", f"no static file {rel!r}")
            content_types = {
                ".html": "text/html; charset=utf-8",
                ".js": "text/javascript; charset=utf-8",
                ".css": "text/css; charset=utf-8",
                ".svg": "image/svg+xml",
                ".json": "application/json; charset=utf-8",
            }
            self._send(200, target.read_bytes(), content_types.get(target.suffix, "application/octet-stream"))

    return Handler


def create_server(
    host: str = "127.0.0.1",
    port: int = 8080,
    data_dir: str | Path | None = None,
    ui_dir: str | Path | None = None,
    quiet: bool = True,
) -> ThreadingHTTPServer:
    state = AppState(data_dir=data_dir)
    handler = make_handler(state, ui_dir=Path(ui_dir) if ui_dir else None, quiet=quiet)
    server = ThreadingHTTPServer((host, port), handler)
    server.app_state = state  # type: ignore[attr-defined]
    return server


def serve(host: str, port: int, data_dir: str | Path | None, ui_dir: str | Path | None = None) -> None:
    server = create_server(host, port, data_dir, ui_dir, quiet=False)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()

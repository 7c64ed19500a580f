"""Canonical JSON documents for every model and report, plus DOT export.

All savers emit the same byte-exact canonical form: UTF-8, sorted object keys,
2-space indentation, LF line endings, one trailing newline; concepts, edges,
items, and resources sorted by id; evidence sorted by (timestamp, item id).
Loading any valid document and saving it again reproduces the saved bytes.
Loaders never raise anything but ParseError / SchemaError / VersionError on
malformed input.
"""

from __future__ import annotations

import json
import warnings
from datetime import datetime, timezone

from .assessment import (
    SessionState,
    STATUS_ACTIVE,
    STATUS_CONCLUDED,
    STATUS_EXHAUSTED,
)
from .domain import (
    Concept,
    DomainModel,
    Edge,
    EDGE_KINDS,
    LearningOutcome,
    LearningResource,
    RESOURCE_KINDS,
    TaxonomyCell,
)
from .errors import EvidenceOrderWarning, ParseError, SchemaError, SchemaVersionWarning, VersionError
from .items import AssessmentItem, ItemPool
from .learner import EvidenceRecord, IndividualModel
from .overlay import LoStatus, OverlayReport
from .recommend import LearningPlan

CURRENT_MAJOR = 1
CURRENT_VERSION = "1.0"

_SESSION_STATUSES = (STATUS_ACTIVE, STATUS_CONCLUDED, STATUS_EXHAUSTED)
_ISO_FORMAT = "%Y-%m-%dT%H:%M:%SZ"


# -- time ---------------------------------------------------------------------

def iso_to_epoch(value: str, path: str = "$") -> int:
    """Parse a UTC second-precision ISO-8601 instant ("2025-01-31T12:00:00Z")."""
    try:
        parsed = datetime.strptime(value, _ISO_FORMAT)
    except (ValueError, TypeError):
        raise SchemaError(f"not a UTC ISO-8601 timestamp: {value!r}", path) from None
    return int(parsed.replace(tzinfo=timezone.utc).timestamp())


def epoch_to_iso(timestamp: int) -> str:
    return datetime.fromtimestamp(timestamp, tz=timezone.utc).strftime(_ISO_FORMAT)


# -- canonical encoding -------------------------------------------------------

def canonical_bytes(doc) -> bytes:
    text = json.dumps(doc, ensure_ascii=False, indent=2, sort_keys=True)
    return (text + "\n").encode("utf-8")


def _parse(data: bytes | str):
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"input is not valid UTF-8: {exc}") from None
    try:
        return json.loads(data)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno, column=exc.colno) from None


def _obj(value, path: str) -> dict:
    if not isinstance(value, dict):
        raise SchemaError("expected an object", path)
    return value


def _get(obj: dict, key: str, path: str):
    if key not in obj:
        raise SchemaError("missing required field", f"{path}.{key}")
    return obj[key]


def _str(value, path: str) -> str:
    if not isinstance(value, str):
        raise SchemaError("expected a string", path)
    return value


def _int(value, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemaError("expected an integer", path)
    return value


def _bool(value, path: str) -> bool:
    if not isinstance(value, bool):
        raise SchemaError("expected a boolean", path)
    return value


def _list(value, path: str) -> list:
    if not isinstance(value, list):
        raise SchemaError("expected an array", path)
    return value


def _int_in(value, path: str, low: int, high: int) -> int:
    number = _int(value, path)
    if not low <= number <= high:
        raise SchemaError(f"expected an integer in {low}..{high}", path)
    return number


def _enum(value, path: str, allowed: tuple[str, ...]) -> str:
    text = _str(value, path)
    if text not in allowed:
        raise SchemaError(f"expected one of {', '.join(allowed)}", path)
    return text


def _check_version(obj: dict, path: str) -> str:
    raw = _str(_get(obj, "schema_version", path), f"{path}.schema_version")
    parts = raw.split(".")
    if len(parts) != 2 or not all(p.isdigit() for p in parts):
        raise VersionError(f"schema_version must look like MAJOR.MINOR, got {raw!r}")
    if int(parts[0]) != CURRENT_MAJOR:
        raise VersionError(f"unsupported major schema version {raw!r} (supported: {CURRENT_VERSION})")
    if raw != CURRENT_VERSION:
        warnings.warn(f"unknown minor schema version {raw!r}", SchemaVersionWarning, stacklevel=3)
    return raw


# -- domain model -------------------------------------------------------------

def _cell_from_doc(value, path: str) -> TaxonomyCell:
    obj = _obj(value, path)
    return TaxonomyCell(
        process_level=_int_in(_get(obj, "process_level", path), f"{path}.process_level", 1, 6),
        knowledge_dim=_int_in(_get(obj, "knowledge_dim", path), f"{path}.knowledge_dim", 1, 4),
    )


def _cell_to_doc(cell: TaxonomyCell) -> dict:
    return {"process_level": cell.process_level, "knowledge_dim": cell.knowledge_dim}


def load_domain_model(data: bytes | str) -> DomainModel:
    root = _obj(_parse(data), "$")
    version = _check_version(root, "$")
    concepts: dict[str, Concept] = {}
    for i, raw in enumerate(_list(_get(root, "concepts", "$"), "$.concepts")):
        path = f"$.concepts[{i}]"
        obj = _obj(raw, path)
        outcomes = []
        for j, raw_lo in enumerate(_list(_get(obj, "outcomes", path), f"{path}.outcomes")):
            lo_path = f"{path}.outcomes[{j}]"
            lo_obj = _obj(raw_lo, lo_path)
            outcomes.append(
                LearningOutcome(
                    id=_str(_get(lo_obj, "id", lo_path), f"{lo_path}.id"),
                    description=_str(_get(lo_obj, "description", lo_path), f"{lo_path}.description"),
                    cell=_cell_from_doc(_get(lo_obj, "cell", lo_path), f"{lo_path}.cell"),
                    required_level=_int_in(
                        lo_obj.get("required_level", 3), f"{lo_path}.required_level", 1, 6
                    ),
                )
            )
        resources = []
        for j, raw_res in enumerate(_list(obj.get("resources", []), f"{path}.resources")):
            res_path = f"{path}.resources[{j}]"
            res_obj = _obj(raw_res, res_path)
            tags = frozenset(
                _str(tag, f"{res_path}.tags[{k}]")
                for k, tag in enumerate(_list(res_obj.get("tags", []), f"{res_path}.tags"))
            )
            resources.append(
                LearningResource(
                    id=_str(_get(res_obj, "id", res_path), f"{res_path}.id"),
                    title=_str(_get(res_obj, "title", res_path), f"{res_path}.title"),
                    uri=_str(_get(res_obj, "uri", res_path), f"{res_path}.uri"),
                    kind=_enum(_get(res_obj, "kind", res_path), f"{res_path}.kind", RESOURCE_KINDS),
                    tags=tags,
                )
            )
        concept = Concept(
            id=_str(_get(obj, "id", path), f"{path}.id"),
            title=_str(_get(obj, "title", path), f"{path}.title"),
            outcomes=tuple(outcomes),
            resources=tuple(resources),
        )
        if concept.id in concepts:
            raise SchemaError(f"duplicate concept id {concept.id!r}", f"{path}.id")
        concepts[concept.id] = concept
    edges = []
    for i, raw in enumerate(_list(_get(root, "edges", "$"), "$.edges")):
        path = f"$.edges[{i}]"
        obj = _obj(raw, path)
        edges.append(
            Edge(
                from_id=_str(_get(obj, "from", path), f"{path}.from"),
                to_id=_str(_get(obj, "to", path), f"{path}.to"),
                kind=_enum(_get(obj, "kind", path), f"{path}.kind", EDGE_KINDS),
            )
        )
    return DomainModel(
        module_id=_str(_get(root, "module_id", "$"), "$.module_id"),
        title=_str(_get(root, "title", "$"), "$.title"),
        concepts={cid: concepts[cid] for cid in sorted(concepts)},
        edges=tuple(sorted(edges, key=lambda e: e.key)),
        schema_version=version,
    )


def save_domain_model(model: DomainModel) -> bytes:
    doc = {
        "schema_version": model.schema_version,
        "module_id": model.module_id,
        "title": model.title,
        "concepts": [
            {
                "id": concept.id,
                "title": concept.title,
                "outcomes": [
                    {
                        "id": lo.id,
                        "description": lo.description,
                        "cell": _cell_to_doc(lo.cell),
                        "required_level": lo.required_level,
                    }
                    for lo in concept.outcomes
                ],
                "resources": [
                    {
                        "id": res.id,
                        "title": res.title,
                        "uri": res.uri,
                        "kind": res.kind,
                        "tags": sorted(res.tags),
                    }
                    for res in sorted(concept.resources, key=lambda r: r.id)
                ],
            }
            for concept in (model.concepts[cid] for cid in sorted(model.concepts))
        ],
        "edges": [
            {"from": edge.from_id, "to": edge.to_id, "kind": edge.kind}
            for edge in sorted(model.edges, key=lambda e: e.key)
        ],
    }
    return canonical_bytes(doc)


# -- item pool ----------------------------------------------------------------

def load_item_pool(data: bytes | str) -> ItemPool:
    root = _obj(_parse(data), "$")
    version = _check_version(root, "$")
    items: dict[str, AssessmentItem] = {}
    for i, raw in enumerate(_list(_get(root, "items", "$"), "$.items")):
        path = f"$.items[{i}]"
        obj = _obj(raw, path)
        options = tuple(
            _str(opt, f"{path}.options[{j}]")
            for j, opt in enumerate(_list(_get(obj, "options", path), f"{path}.options"))
        )
        if len(options) < 2:
            raise SchemaError("expected at least 2 options", f"{path}.options")
        key = frozenset(
            _int(idx, f"{path}.answer_key[{j}]")
            for j, idx in enumerate(_list(_get(obj, "answer_key", path), f"{path}.answer_key"))
        )
        max_seconds = _int(_get(obj, "max_seconds", path), f"{path}.max_seconds")
        if max_seconds <= 0:
            raise SchemaError("expected a positive integer", f"{path}.max_seconds")
        item = AssessmentItem(
            id=_str(_get(obj, "id", path), f"{path}.id"),
            lo_id=_str(_get(obj, "lo_id", path), f"{path}.lo_id"),
            cell=_cell_from_doc(_get(obj, "cell", path), f"{path}.cell"),
            stem=_str(_get(obj, "stem", path), f"{path}.stem"),
            options=options,
            answer_key=key,
            max_seconds=max_seconds,
        )
        if item.id in items:
            raise SchemaError(f"duplicate item id {item.id!r}", f"{path}.id")
        items[item.id] = item
    return ItemPool(
        pool_id=_str(_get(root, "pool_id", "$"), "$.pool_id"),
        items={iid: items[iid] for iid in sorted(items)},
        schema_version=version,
    )


def save_item_pool(pool: ItemPool) -> bytes:
    doc = {
        "schema_version": pool.schema_version,
        "pool_id": pool.pool_id,
        "items": [
            {
                "id": item.id,
                "lo_id": item.lo_id,
                "cell": _cell_to_doc(item.cell),
                "stem": item.stem,
                "options": list(item.options),
                "answer_key": sorted(item.answer_key),
                "max_seconds": item.max_seconds,
            }
            for item in (pool.items[iid] for iid in sorted(pool.items))
        ],
    }
    return canonical_bytes(doc)


# -- individual model ---------------------------------------------------------

def evidence_records_from_doc(raw_records: list, base_path: str = "$.evidence") -> list[EvidenceRecord]:
    records = []
    for i, raw in enumerate(raw_records):
        path = f"{base_path}[{i}]"
        obj = _obj(raw, path)
        seconds = _int(_get(obj, "seconds", path), f"{path}.seconds")
        if seconds < 0:
            raise SchemaError("expected a non-negative integer", f"{path}.seconds")
        records.append(
            EvidenceRecord(
                item_id=_str(_get(obj, "item_id", path), f"{path}.item_id"),
                lo_id=_str(_get(obj, "lo_id", path), f"{path}.lo_id"),
                process_level=_int_in(_get(obj, "process_level", path), f"{path}.process_level", 1, 6),
                correct=_bool(_get(obj, "correct", path), f"{path}.correct"),
                timestamp=iso_to_epoch(
                    _str(_get(obj, "timestamp", path), f"{path}.timestamp"), f"{path}.timestamp"
                ),
                seconds=seconds,
            )
        )
    return records


def load_individual(data: bytes | str) -> IndividualModel:
    root = _obj(_parse(data), "$")
    version = _check_version(root, "$")
    records = evidence_records_from_doc(_list(_get(root, "evidence", "$"), "$.evidence"))
    ordered = sorted(records, key=lambda r: r.sort_key)
    if ordered != records:
        warnings.warn(
            "EVIDENCE_ORDER: evidence was stored out of order and has been sorted",
            EvidenceOrderWarning,
            stacklevel=2,
        )
    return IndividualModel(
        learner_id=_str(_get(root, "learner_id", "$"), "$.learner_id"),
        evidence=tuple(ordered),
        schema_version=version,
    )


def save_individual(model: IndividualModel) -> bytes:
    doc = {
        "schema_version": model.schema_version,
        "learner_id": model.learner_id,
        "evidence": [
            {
                "item_id": rec.item_id,
                "lo_id": rec.lo_id,
                "process_level": rec.process_level,
                "correct": rec.correct,
                "timestamp": epoch_to_iso(rec.timestamp),
                "seconds": rec.seconds,
            }
            for rec in sorted(model.evidence, key=lambda r: r.sort_key)
        ],
    }
    return canonical_bytes(doc)


# -- session snapshots --------------------------------------------------------

def load_session(data: bytes | str) -> SessionState:
    root = _obj(_parse(data), "$")
    _check_version(root, "$")
    interval_raw = _list(_get(root, "interval", "$"), "$.interval")
    if len(interval_raw) != 2:
        raise SchemaError("expected [a, b]", "$.interval")
    a = _int_in(interval_raw[0], "$.interval[0]", 0, 6)
    b = _int_in(interval_raw[1], "$.interval[1]", 0, 6)
    if a > b:
        raise SchemaError("interval bounds must satisfy a <= b", "$.interval")
    asked = []
    for i, raw in enumerate(_list(_get(root, "asked", "$"), "$.asked")):
        asked.append(_str(raw, f"$.asked[{i}]"))
    if len(set(asked)) != len(asked):
        raise SchemaError("asked item ids must be unique", "$.asked")
    budget = _int(_get(root, "budget", "$"), "$.budget")
    if budget < 1:
        raise SchemaError("expected a positive integer", "$.budget")
    pending_raw = _get(root, "pending", "$")
    status = _enum(_get(root, "status", "$"), "$.status", _SESSION_STATUSES)
    if status == STATUS_CONCLUDED and a != b:
        raise SchemaError("a concluded session requires a collapsed interval", "$.status")
    pool_raw = root.get("pool_id")
    return SessionState(
        session_id=_str(_get(root, "session_id", "$"), "$.session_id"),
        learner_id=_str(_get(root, "learner_id", "$"), "$.learner_id"),
        lo_id=_str(_get(root, "lo_id", "$"), "$.lo_id"),
        interval=(a, b),
        asked=tuple(asked),
        budget=budget,
        pending=None if pending_raw is None else _str(pending_raw, "$.pending"),
        status=status,
        pool_id=None if pool_raw is None else _str(pool_raw, "$.pool_id"),
    )


def save_session(session: SessionState) -> bytes:
    doc = {
        "schema_version": CURRENT_VERSION,
        "session_id": session.session_id,
        "learner_id": session.learner_id,
        "lo_id": session.lo_id,
        "interval": [session.interval[0], session.interval[1]],
        "asked": list(session.asked),
        "budget": session.budget,
        "pending": session.pending,
        "status": session.status,
        "pool_id": session.pool_id,
    }
    return canonical_bytes(doc)


# -- reports and plans (output-only documents) --------------------------------

def save_overlay_report(report: OverlayReport) -> bytes:
    doc = {
        "schema_version": CURRENT_VERSION,
        "course_id": report.course_id,
        "learner_id": report.learner_id,
        "now": epoch_to_iso(report.now),
        "no_statement": report.no_statement,
        "statuses": {lo_id: status.value for lo_id, status in report.statuses.items()},
        "deficits": list(report.deficits),
        "frontier": sorted(report.frontier),
    }
    return canonical_bytes(doc)


def save_plan(plan: LearningPlan) -> bytes:
    return canonical_bytes(plan_to_doc(plan))


def plan_to_doc(plan: LearningPlan) -> dict:
    return {
        "target_concept": plan.target_concept,
        "steps": list(plan.steps),
        "variant_of": plan.variant_of,
        "unmet_lo_count": plan.unmet_lo_count,
    }


# -- DOT export ---------------------------------------------------------------

_STATUS_COLOR = {
    "achieved": "green",
    "not_achieved": "red",
    "suspected": "orange",
    "unknown": "gray",
}


def _dot_quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(
    model: DomainModel,
    course_concepts: set[str] | frozenset[str] | None = None,
    overlay_report: OverlayReport | None = None,
) -> str:
    """Render the concept map as a DOT digraph.

    Prerequisite edges are solid and emitted before the dashed supporting
    edges; nodes and edges appear in sorted-id order. With an overlay the
    nodes are filled by aggregated concept status (all outcomes achieved:
    green, any failed: red, any suspected: orange, otherwise gray); concepts
    outside the course get a dashed border.
    """
    course = frozenset(course_concepts) if course_concepts is not None else None
    lines = ["digraph fachlandkarte {"]
    for cid in sorted(model.concepts):
        concept = model.concepts[cid]
        attrs = [f"label={_dot_quote(concept.title)}"]
        styles = []
        if overlay_report is not None:
            statuses = [overlay_report.statuses.get(lo.id) for lo in concept.outcomes]
            if statuses and all(s is LoStatus.ACHIEVED for s in statuses):
                color = _STATUS_COLOR["achieved"]
            elif any(s is LoStatus.NOT_ACHIEVED for s in statuses):
                color = _STATUS_COLOR["not_achieved"]
            elif any(s is LoStatus.SUSPECTED for s in statuses):
                color = _STATUS_COLOR["suspected"]
            else:
                color = _STATUS_COLOR["unknown"]
            styles.append("filled")
            attrs.append(f"fillcolor={color}")
        if course is not None and cid not in course:
            styles.append("dashed")
        if styles:
            attrs.append(f'style="{",".join(styles)}"')
        lines.append(f"  {_dot_quote(cid)} [{', '.join(attrs)}];")
    ordered_edges = sorted(model.edges, key=lambda e: (e.kind != "prerequisite", e.from_id, e.to_id))
    for edge in ordered_edges:
        suffix = " [style=dashed]" if edge.kind == "supporting" else ""
        lines.append(f"  {_dot_quote(edge.from_id)} -> {_dot_quote(edge.to_id)}{suffix};")
    lines.append("}")
    return "\n".join(lines) + "\n"

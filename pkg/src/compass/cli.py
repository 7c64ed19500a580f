"""Command-line interface: validate, overlay, recommend, assess, merge, export-dot, serve.

Results go to standard output, diagnostics to standard error. Exit codes:
0 ok, 1 validation/model errors, 2 usage errors, 3 I/O errors.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from pathlib import Path

from . import storage
from .assessment import next_item, session_result, start_session, submit_answer
from .domain import merge_models, validate_domain_model
from .errors import EngineError
from .items import validate_pool
from .learner import DecayParams, IndividualModel, record_evidence
from .overlay import overlay
from .service import build_recommendations_doc, serve
from .simulate import SimulatedLearner

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_USAGE = 2
EXIT_IO = 3


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except EngineError as err:
        print(f"error [{err.code}]: {err.message}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as err:
        print(f"io error: {err}", file=sys.stderr)
        return EXIT_IO


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="compass", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="validate a domain model (and optionally an item pool)")
    p.add_argument("--domain", required=True, help="domain model JSON file")
    p.add_argument("--items", help="item pool JSON file to cross-validate")
    p.add_argument("--format", choices=["json", "text"], default="text")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("overlay", help="overlay a learner onto a course")
    _common_overlay_args(p)
    p.add_argument("--format", choices=["json", "text", "dot"], default="json")
    p.add_argument("--out", help="write the result to a file instead of stdout")
    p.set_defaults(func=cmd_overlay)

    p = sub.add_parser("recommend", help="learning plans and resources for a target concept")
    _common_overlay_args(p)
    p.add_argument("--target", required=True, help="target concept id")
    p.add_argument("--alternatives", type=int, default=3, help="maximum variant plans (default 3)")
    p.add_argument("--tags", default="", help="comma-separated preference tags")
    p.add_argument("--format", choices=["json", "text"], default="json")
    p.add_argument("--out", help="write the result to a file instead of stdout")
    p.set_defaults(func=cmd_recommend)

    p = sub.add_parser("assess", help="run an adaptive micro-assessment for one outcome")
    p.add_argument("--domain", required=True)
    p.add_argument("--items", required=True, help="item pool JSON file")
    p.add_argument("--lo", required=True, help="learning outcome id to localize")
    p.add_argument("--learner", help="individual model JSON file (updated with the new evidence)")
    p.add_argument("--budget", type=int, default=12)
    p.add_argument("--now", help="ISO-8601 UTC start instant (default: current time)")
    p.add_argument("--simulate-level", type=int, choices=range(0, 7), metavar="L",
                   help="answer deterministically as a learner of true level L (0..6)")
    p.add_argument("--out", help="where to write the updated learner model (default: --learner path)")
    p.set_defaults(func=cmd_assess)

    p = sub.add_parser("merge", help="merge domain models into one canonical model")
    p.add_argument("--domain", action="append", required=True,
                   help="domain model JSON file (repeat for each model)")
    p.add_argument("--out", help="write the merged model to a file instead of stdout")
    p.set_defaults(func=cmd_merge)

    p = sub.add_parser("export-dot", help="render a domain model (optionally with statuses) as DOT")
    p.add_argument("--domain", required=True)
    p.add_argument("--course", help="comma-separated course concept ids (default: all)")
    p.add_argument("--learner", help="individual model JSON file for status coloring")
    p.add_argument("--now", help="ISO-8601 UTC instant for the overlay")
    p.add_argument("--out")
    p.set_defaults(func=cmd_export_dot)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--port", type=int, default=8080)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--data-dir", help="snapshot directory (COMPASS_DATA_DIR overrides)")
    p.add_argument("--ui-dir", help="serve a built web console from this directory under /ui/")
    p.set_defaults(func=cmd_serve)

    return parser


def _common_overlay_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--domain", required=True, help="domain model JSON file")
    p.add_argument("--learner", required=True, help="individual model JSON file")
    p.add_argument("--course", help="comma-separated course concept ids (default: all concepts)")
    p.add_argument("--now", help="ISO-8601 UTC instant (default: current time)")


def _now_arg(value: str | None) -> int:
    return storage.iso_to_epoch(value) if value else int(time.time())


def _course_arg(model, value: str | None) -> frozenset[str]:
    if not value:
        return frozenset(model.concepts)
    return frozenset(part for part in value.split(",") if part)


def _emit(data: bytes, out: str | None) -> None:
    if out:
        Path(out).write_bytes(data)
    else:
        sys.stdout.write(data.decode("utf-8"))


def _print_report(report, fmt: str, subject: str) -> None:
    if fmt == "json":
        doc = {
            "ok": report.ok,
            "findings": [
                {"severity": f.severity, "code": f.code, "message": f.message, "subject_id": f.subject_id}
                for f in report.findings
            ],
        }
        sys.stdout.write(storage.canonical_bytes(doc).decode("utf-8"))
        return
    print(f"{subject}: {'ok' if report.ok else 'INVALID'}")
    for f in report.findings:
        print(f"  {f.severity:<8} {f.code:<16} {f.subject_id}: {f.message}")


def cmd_validate(args) -> int:
    model = storage.load_domain_model(Path(args.domain).read_bytes())
    report = validate_domain_model(model)
    _print_report(report, args.format, args.domain)
    ok = report.ok
    if args.items:
        pool = storage.load_item_pool(Path(args.items).read_bytes())
        pool_report = validate_pool(pool, model)
        _print_report(pool_report, args.format, args.items)
        ok = ok and pool_report.ok
    return EXIT_OK if ok else EXIT_VALIDATION


def cmd_overlay(args) -> int:
    model = storage.load_domain_model(Path(args.domain).read_bytes())
    individual = storage.load_individual(Path(args.learner).read_bytes())
    course = _course_arg(model, args.course)
    report = overlay(model, course, individual, _now_arg(args.now), DecayParams())
    if args.format == "json":
        _emit(storage.save_overlay_report(report), args.out)
    elif args.format == "dot":
        _emit(storage.export_dot(model, course, report).encode("utf-8"), args.out)
    else:
        lines = [f"course: {report.course_id}  learner: {report.learner_id}"]
        if report.no_statement:
            lines.append("no statement possible: the evidence does not touch this course")
        for lo_id in sorted(report.statuses):
            lines.append(f"  {lo_id}: {report.statuses[lo_id].value}")
        if report.deficits:
            lines.append("deficits: " + ", ".join(report.deficits))
        if report.frontier:
            lines.append("frontier: " + ", ".join(sorted(report.frontier)))
        _emit(("\n".join(lines) + "\n").encode("utf-8"), args.out)
    return EXIT_OK


def cmd_recommend(args) -> int:
    model = storage.load_domain_model(Path(args.domain).read_bytes())
    individual = storage.load_individual(Path(args.learner).read_bytes())
    course = _course_arg(model, args.course)
    tags = frozenset(part for part in args.tags.split(",") if part)
    doc = build_recommendations_doc(
        model, course, individual, args.target, args.alternatives, tags,
        _now_arg(args.now), DecayParams(),
    )
    if args.format == "json":
        _emit(storage.canonical_bytes(doc), args.out)
        return EXIT_OK
    lines = []
    for plan in doc["plans"]:
        label = "primary" if plan["variant_of"] is None else f"variant via {plan['variant_of']}"
        steps = " -> ".join(plan["steps"]) if plan["steps"] else "(nothing to do)"
        lines.append(f"{label}: {steps}  [unmet outcomes: {plan['unmet_lo_count']}]")
    for rec in doc["resources"]:
        lines.append(f"resources for {rec['lo_id']}:")
        for res in rec["ranked"]:
            lines.append(f"  [{res['kind']}] {res['title']} <{res['uri']}>")
    _emit(("\n".join(lines) + "\n").encode("utf-8"), args.out)
    return EXIT_OK


def cmd_assess(args) -> int:
    model = storage.load_domain_model(Path(args.domain).read_bytes())
    pool = storage.load_item_pool(Path(args.items).read_bytes())
    if args.learner:
        individual = storage.load_individual(Path(args.learner).read_bytes())
    else:
        individual = IndividualModel(learner_id="anonymous")
    if args.lo not in model.lo_index:
        raise EngineError("UNKNOWN_LO", f"unknown outcome {args.lo!r}")
    _, lo = model.lo_index[args.lo]
    sim = SimulatedLearner(true_level=args.simulate_level) if args.simulate_level is not None else None
    now = _now_arg(args.now)

    session = start_session(pool, model, individual, lo, budget=args.budget, session_id="cli")
    records = []
    while session.status == "Active":
        if session.pending is None:
            session, item = next_item(session, pool)
            if item is None:
                break
        item = pool.items[session.pending]
        if sim is not None:
            chosen, seconds = sim.choose(item), sim.response_seconds(item)
        else:
            chosen, seconds = _prompt_answer(item)
        session, record = submit_answer(session, item, chosen, seconds, now + len(records))
        records.append(record)
        print(
            f"asked {item.id} level={record.process_level} "
            f"correct={'true' if record.correct else 'false'} "
            f"interval=({session.interval[0]},{session.interval[1]})"
        )
    result = session_result(session)
    print(
        f"localized_level: {result.localized_level}, "
        f"exact: {'true' if result.exact else 'false'}, "
        f"items_used: {result.items_used}"
    )
    if args.learner:
        for record in records:
            individual = record_evidence(individual, record)
        _emit(storage.save_individual(individual), args.out or args.learner)
    return EXIT_OK


def _prompt_answer(item) -> tuple[frozenset[int], int]:
    print(f"\n{item.stem}", file=sys.stderr)
    for index, option in enumerate(item.options):
        print(f"  [{index}] {option}", file=sys.stderr)
    print("answer (comma-separated option indices): ", end="", file=sys.stderr, flush=True)
    started = time.monotonic()
    line = sys.stdin.readline()
    seconds = int(time.monotonic() - started)
    chosen = frozenset(int(part) for part in line.replace(",", " ").split()) if line.strip() else frozenset()
    return chosen, seconds


def cmd_merge(args) -> int:
    models = [storage.load_domain_model(Path(path).read_bytes()) for path in args.domain]
    merged = merge_models(models)
    report = validate_domain_model(merged)
    if not report.ok:
        for f in report.errors:
            print(f"error {f.code} {f.subject_id}: {f.message}", file=sys.stderr)
        return EXIT_VALIDATION
    _emit(storage.save_domain_model(merged), args.out)
    return EXIT_OK


def cmd_export_dot(args) -> int:
    model = storage.load_domain_model(Path(args.domain).read_bytes())
    course = _course_arg(model, args.course)
    report = None
    if args.learner:
        individual = storage.load_individual(Path(args.learner).read_bytes())
        report = overlay(model, course, individual, _now_arg(args.now), DecayParams())
    _emit(storage.export_dot(model, course, report).encode("utf-8"), args.out)
    return EXIT_OK


def cmd_serve(args) -> int:
    data_dir = os.environ.get("COMPASS_DATA_DIR") or args.data_dir
    print(
        f"serving on http://{args.host}:{args.port}/"
        + (f" (data dir: {data_dir})" if data_dir else " (in-memory only)"),
        file=sys.stderr,
    )
    serve(args.host, args.port, data_dir, args.ui_dir)
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())

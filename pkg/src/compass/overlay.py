"""Overlay of the individual model onto a course's slice of the domain model.

Produces a per-outcome status (Achieved / NotAchieved / Suspected / Unknown /
OutOfCourse), infers suspected gaps transitively through prerequisites, finds
anchors in merged multi-module models, and detects under-challenged learners.
Everything is a pure function of its inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .domain import DomainModel, merge_models, prerequisite_closure, topological_order
from .errors import EngineError
from .items import ItemPool
from .learner import DecayParams, IndividualModel, has_evidence, is_achieved


class LoStatus(str, Enum):
    ACHIEVED = "Achieved"
    NOT_ACHIEVED = "NotAchieved"
    SUSPECTED = "Suspected"
    UNKNOWN = "Unknown"
    OUT_OF_COURSE = "OutOfCourse"


@dataclass(frozen=True)
class OverlayReport:
    course_id: str
    learner_id: str
    now: int
    statuses: dict[str, LoStatus]
    deficits: tuple[str, ...]  # NotAchieved/Suspected outcomes in topological concept order
    frontier: frozenset[str]  # fully achieved concepts bordering unachieved ones
    no_statement: bool


@dataclass(frozen=True)
class ChallengeSuggestion:
    concept_id: str
    next_level: int
    time_factor: float = 0.75


def overlay(
    model: DomainModel,
    course_concepts: set[str] | frozenset[str],
    individual: IndividualModel,
    now: int,
    params: DecayParams,
) -> OverlayReport:
    """Compute per-outcome statuses for a course subset of the model.

    Pass 1 judges every course outcome on its own evidence. Pass 2 marks
    evidence-free, non-achieved outcomes of all (transitive) prerequisites of a
    failed outcome's concept as Suspected: direct evidence always dominates
    the inference. Outcomes of non-course concepts that support a course
    concept are reported OutOfCourse. If the learner's evidence and the
    course's outcomes do not intersect at all, no statement is possible: every
    course outcome is Unknown and deficits/frontier stay empty.
    """
    course = sorted(course_concepts)
    for cid in course:
        if cid not in model.concepts:
            raise EngineError("UNKNOWN_CONCEPT", f"unknown concept {cid!r}")

    course_set = frozenset(course)
    statuses: dict[str, LoStatus] = {}
    course_lo_ids: list[str] = []
    for cid in course:
        for lo in model.concepts[cid].outcomes:
            course_lo_ids.append(lo.id)
            if is_achieved(individual, lo, now, params):
                statuses[lo.id] = LoStatus.ACHIEVED
            elif has_evidence(individual, lo.id):
                statuses[lo.id] = LoStatus.NOT_ACHIEVED
            else:
                statuses[lo.id] = LoStatus.UNKNOWN

    no_statement = not any(has_evidence(individual, lo_id) for lo_id in course_lo_ids)

    if no_statement:
        for lo_id in course_lo_ids:
            statuses[lo_id] = LoStatus.UNKNOWN
    else:
        failed_concepts = sorted(
            {
                cid
                for cid in course
                for lo in model.concepts[cid].outcomes
                if statuses[lo.id] is LoStatus.NOT_ACHIEVED
            }
        )
        suspects: set[str] = set()
        for cid in failed_concepts:
            suspects.update(prerequisite_closure(model, cid))
        for cid in sorted(suspects & course_set):
            for lo in model.concepts[cid].outcomes:
                if statuses[lo.id] is LoStatus.UNKNOWN:
                    statuses[lo.id] = LoStatus.SUSPECTED

    for cid in _supporting_out_of_course(model, course_set):
        for lo in model.concepts[cid].outcomes:
            statuses.setdefault(lo.id, LoStatus.OUT_OF_COURSE)

    deficits: tuple[str, ...] = ()
    frontier: frozenset[str] = frozenset()
    if not no_statement:
        deficit_concepts = [
            cid
            for cid in course
            if any(
                statuses[lo.id] in (LoStatus.NOT_ACHIEVED, LoStatus.SUSPECTED)
                for lo in model.concepts[cid].outcomes
            )
        ]
        ordered = topological_order(model, set(deficit_concepts))
        deficits = tuple(
            lo.id
            for cid in ordered
            for lo in model.concepts[cid].outcomes
            if statuses[lo.id] in (LoStatus.NOT_ACHIEVED, LoStatus.SUSPECTED)
        )
        achieved_concepts = {
            cid
            for cid in course
            if model.concepts[cid].outcomes
            and all(statuses[lo.id] is LoStatus.ACHIEVED for lo in model.concepts[cid].outcomes)
        }
        frontier = frozenset(
            cid
            for cid in achieved_concepts
            if any(
                child in course_set and child not in achieved_concepts
                for child in model.prereq_children.get(cid, ())
            )
        )

    return OverlayReport(
        course_id=model.module_id,
        learner_id=individual.learner_id,
        now=now,
        statuses=statuses,
        deficits=deficits,
        frontier=frontier,
        no_statement=no_statement,
    )


def _supporting_out_of_course(model: DomainModel, course_set: frozenset[str]) -> list[str]:
    out = {
        edge.from_id
        for edge in model.edges
        if edge.kind == "supporting"
        and edge.to_id in course_set
        and edge.from_id in model.concepts
        and edge.from_id not in course_set
    }
    return sorted(out)


def find_anchors(
    course_model: DomainModel,
    extension_models: list[DomainModel],
    individual: IndividualModel,
    now: int,
    params: DecayParams,
) -> tuple[DomainModel, frozenset[str]]:
    """Merge the course model with extension modules and find attachment points.

    An anchor is a concept of the merged model with at least one outcome, all
    of whose outcomes the learner has achieved; a path from an anchor into the
    course model can then be recommended.
    """
    merged = merge_models([course_model, *extension_models])
    anchors = frozenset(
        cid
        for cid, concept in merged.concepts.items()
        if concept.outcomes
        and all(is_achieved(individual, lo, now, params) for lo in concept.outcomes)
    )
    return merged, anchors


def challenge_check(
    model: DomainModel,
    pool: ItemPool,
    concept_id: str,
    individual: IndividualModel,
    now: int,
    params: DecayParams,
    streak_len: int = 5,
    fast_factor: float = 0.5,
) -> ChallengeSuggestion | None:
    """Detect an under-challenged learner on one concept.

    Fires only when every outcome of the concept is achieved AND the last
    ``streak_len`` evidence records on the concept's outcomes are all correct
    and fast (response time at most ``fast_factor`` of the item's time limit).
    The suggestion raises the probe level one above the concept's highest
    required level (clamped to 6) and compresses the time frame.
    """
    if concept_id not in model.concepts:
        raise EngineError("UNKNOWN_CONCEPT", f"unknown concept {concept_id!r}")
    concept = model.concepts[concept_id]
    if not concept.outcomes:
        return None
    if not all(is_achieved(individual, lo, now, params) for lo in concept.outcomes):
        return None

    lo_ids = {lo.id for lo in concept.outcomes}
    streak = [r for r in individual.evidence if r.lo_id in lo_ids][-streak_len:]
    if len(streak) < streak_len:
        return None
    for rec in streak:
        if not rec.correct:
            return None
        item = pool.items.get(rec.item_id)
        if item is None or rec.seconds > fast_factor * item.max_seconds:
            return None

    top_required = max(lo.required_level for lo in concept.outcomes)
    return ChallengeSuggestion(concept_id=concept_id, next_level=min(6, top_required + 1))

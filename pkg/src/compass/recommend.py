"""Learning plans and resource recommendations derived from an overlay."""

from __future__ import annotations

from dataclasses import dataclass

from .domain import DomainModel, LearningResource, RESOURCE_KINDS, prerequisite_closure, topological_order
from .errors import EngineError
from .overlay import LoStatus, OverlayReport

_DEFICIENT = (LoStatus.NOT_ACHIEVED, LoStatus.SUSPECTED, LoStatus.UNKNOWN)
_KIND_RANK = {kind: rank for rank, kind in enumerate(RESOURCE_KINDS)}


@dataclass(frozen=True)
class LearningPlan:
    target_concept: str
    steps: tuple[str, ...]  # topologically sorted, ending with the target when non-empty
    variant_of: str | None  # supporting concept inserted relative to the primary plan
    unmet_lo_count: int


@dataclass(frozen=True)
class ResourceRecommendation:
    lo_id: str
    ranked: tuple[LearningResource, ...]
    preference_tags_applied: frozenset[str]


def recommend_path(
    model: DomainModel,
    course_concepts: set[str] | frozenset[str],
    overlay_report: OverlayReport,
    target_concept: str,
    k_alternatives: int = 0,
) -> list[LearningPlan]:
    """The primary study plan to a target concept plus supporting-concept variants.

    The primary plan linearizes the deficient concepts among the target's
    transitive prerequisites (plus the target itself when deficient); a concept
    is deficient when any of its outcomes is NotAchieved, Suspected, or Unknown
    (outcomes missing from the overlay count as Unknown, the conservative read). A
    fully achieved target yields one plan with empty steps. Each variant
    inserts one supporting concept directly before the step it supports, at
    most ``k_alternatives`` of them, enumerated in (supported id, supporter id)
    order.
    """
    if target_concept not in model.concepts:
        raise EngineError("UNKNOWN_CONCEPT", f"unknown concept {target_concept!r}")
    if target_concept not in course_concepts:
        raise EngineError("UNKNOWN_CONCEPT", f"concept {target_concept!r} is not part of the course")

    def deficient(cid: str) -> bool:
        outcomes = model.concepts[cid].outcomes
        return any(
            overlay_report.statuses.get(lo.id, LoStatus.UNKNOWN) in _DEFICIENT for lo in outcomes
        )

    def unmet_count(step_ids: tuple[str, ...]) -> int:
        return sum(
            1
            for cid in step_ids
            for lo in model.concepts[cid].outcomes
            if overlay_report.statuses.get(lo.id) is not LoStatus.ACHIEVED
        )

    if not deficient(target_concept):
        return [LearningPlan(target_concept=target_concept, steps=(), variant_of=None, unmet_lo_count=0)]

    wanted = {cid for cid in prerequisite_closure(model, target_concept) if deficient(cid)}
    wanted.add(target_concept)
    steps = tuple(topological_order(model, wanted))
    primary = LearningPlan(
        target_concept=target_concept,
        steps=steps,
        variant_of=None,
        unmet_lo_count=unmet_count(steps),
    )

    inserts = sorted(
        (supported, supporter)
        for supported in steps
        for supporter in model.supporters_of(supported)
        if supporter not in steps
    )
    ancestors = {cid: prerequisite_closure(model, cid) for cid in steps}
    variants: list[LearningPlan] = []
    for supported, supporter in inserts:
        if len(variants) >= max(0, k_alternatives):
            break
        pos = steps.index(supported)
        # the insertion point must not contradict prerequisite edges the
        # supporter happens to have with other plan steps
        supporter_ancestors = prerequisite_closure(model, supporter)
        if any(supporter in ancestors[w] for w in steps[:pos]):
            continue
        if any(w in supporter_ancestors for w in steps[pos:]):
            continue
        variant_steps = steps[:pos] + (supporter,) + steps[pos:]
        variants.append(
            LearningPlan(
                target_concept=target_concept,
                steps=variant_steps,
                variant_of=supporter,
                unmet_lo_count=unmet_count(variant_steps),
            )
        )
    return [primary, *variants]


def recommend_resources(
    model: DomainModel,
    lo_id: str,
    preference_tags: set[str] | frozenset[str] = frozenset(),
) -> ResourceRecommendation:
    """Rank the resources reachable from an outcome's concept.

    Candidates are the owning concept's resources plus those of its supporting
    concepts, ranked by matching preference-tag count (descending), then kind
    (introductory before deepening before alternative), then id.
    """
    if lo_id not in model.lo_index:
        raise EngineError("UNKNOWN_LO", f"unknown outcome {lo_id!r}")
    owner_id, _ = model.lo_index[lo_id]
    tags = frozenset(preference_tags)

    candidates = list(model.concepts[owner_id].resources)
    for supporter in model.supporters_of(owner_id):
        candidates.extend(model.concepts[supporter].resources)

    def rank_key(res: LearningResource) -> tuple[int, int, str]:
        return (-len(tags & res.tags), _KIND_RANK[res.kind], res.id)

    return ResourceRecommendation(
        lo_id=lo_id,
        ranked=tuple(sorted(candidates, key=rank_key)),
        preference_tags_applied=tags,
    )

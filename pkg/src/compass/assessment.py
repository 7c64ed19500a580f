"""Adaptive micro-assessment: binary search over the six process levels.

A session maintains a hypothesis interval (a, b): a is the highest level
confirmed mastered, b the highest level still possible. Each answer shrinks
the interval until it collapses (Concluded) or items/budget run out
(Exhausted). States are immutable values; transitions return new states.
"""

from __future__ import annotations

import math
import uuid
from dataclasses import dataclass, replace

from .domain import DomainModel, LearningOutcome
from .errors import EngineError
from .items import AssessmentItem, ItemPool, items_for, score_response
from .learner import EvidenceRecord, IndividualModel

SCHEMA_VERSION = "1.0"

STATUS_ACTIVE = "Active"
STATUS_CONCLUDED = "Concluded"
STATUS_EXHAUSTED = "Exhausted"

DEFAULT_BUDGET = 12


@dataclass(frozen=True)
class SessionState:
    session_id: str
    learner_id: str
    lo_id: str
    interval: tuple[int, int] = (0, 6)
    asked: tuple[str, ...] = ()
    budget: int = DEFAULT_BUDGET
    pending: str | None = None
    status: str = STATUS_ACTIVE
    pool_id: str | None = None  # lets the service resume against the right pool

    def __post_init__(self):
        a, b = self.interval
        if not 0 <= a <= b <= 6:
            raise ValueError(f"interval must satisfy 0 <= a <= b <= 6, got {self.interval}")
        if self.budget < 1:
            raise ValueError(f"budget must be positive, got {self.budget}")


@dataclass(frozen=True)
class SessionResult:
    lo_id: str
    localized_level: int
    exact: bool
    items_used: int


def start_session(
    pool: ItemPool,
    model: DomainModel,
    individual: IndividualModel,
    lo: LearningOutcome,
    budget: int = DEFAULT_BUDGET,
    session_id: str | None = None,
) -> SessionState:
    """Open a session on one outcome with the full interval (0, 6).

    The first probe targets the outcome's required level, so a learner who
    meets the course demand is confirmed with a single item. Raises NO_ITEMS
    when the pool holds nothing for the outcome.
    """
    if lo.id not in model.lo_index:
        raise EngineError("UNKNOWN_LO", f"unknown outcome {lo.id!r}")
    if not items_for(pool, lo.id):
        raise EngineError("NO_ITEMS", f"pool {pool.pool_id!r} has no items for outcome {lo.id!r}")
    state = SessionState(
        session_id=session_id or uuid.uuid4().hex,
        learner_id=individual.learner_id,
        lo_id=lo.id,
        budget=budget,
        pool_id=pool.pool_id,
    )
    first = _pick_probe_item(pool, state, target=lo.required_level)
    # items_for above guarantees at least one candidate inside (0, 6]
    return replace(state, pending=first.id)


def next_item(session: SessionState, pool: ItemPool) -> tuple[SessionState, AssessmentItem | None]:
    """Select the next probe and set it pending.

    The probe level is a + ceil((b - a) / 2); when no unasked item exists there,
    the nearest level inside (a, b] is tried (lower level first on distance
    ties). Returns the already-pending item unchanged if one is set. When no
    unasked item remains in (a, b], the session flips to Exhausted and the item
    is None.
    """
    if session.status != STATUS_ACTIVE:
        return session, None
    if session.pending is not None:
        return session, pool.items[session.pending]
    a, b = session.interval
    target = a + math.ceil((b - a) / 2)
    item = _pick_probe_item(pool, session, target=target)
    if item is None:
        return replace(session, status=STATUS_EXHAUSTED), None
    return replace(session, pending=item.id), item


def _pick_probe_item(pool: ItemPool, session: SessionState, target: int) -> AssessmentItem | None:
    a, b = session.interval
    target = min(max(target, a + 1), b) if a < b else b
    asked = frozenset(session.asked)
    for level in sorted(range(a + 1, b + 1), key=lambda lv: (abs(lv - target), lv)):
        candidates = items_for(pool, session.lo_id, (level, level), exclude=asked)
        if candidates:
            return candidates[0]
    return None


def submit_answer(
    session: SessionState,
    item: AssessmentItem,
    chosen: set[int] | frozenset[int],
    seconds: int,
    now: int,
) -> tuple[SessionState, EvidenceRecord]:
    """Score the pending item and shrink the interval.

    Correct raises the confirmed floor to the item's level; incorrect lowers
    the ceiling to one below it. A collapsed interval concludes the session;
    hitting the budget without collapse exhausts it. Emits the evidence record
    for ingestion into the learner's log.
    """
    if session.status != STATUS_ACTIVE or item.id != session.pending:
        raise EngineError("WRONG_ITEM", f"item {item.id!r} is not the pending item of this session")
    correct = score_response(item, chosen)
    a, b = session.interval
    level = item.cell.process_level
    if correct:
        a = level
    else:
        b = level - 1
    asked = session.asked + (item.id,)
    if a == b:
        status = STATUS_CONCLUDED
    elif len(asked) >= session.budget:
        status = STATUS_EXHAUSTED
    else:
        status = STATUS_ACTIVE
    state = replace(session, interval=(a, b), asked=asked, pending=None, status=status)
    record = EvidenceRecord(
        item_id=item.id,
        lo_id=item.lo_id,
        process_level=level,
        correct=correct,
        timestamp=now,
        seconds=seconds,
    )
    return state, record


def session_result(session: SessionState) -> SessionResult:
    """Summarize a finished session; the localized level is the confirmed floor."""
    if session.status == STATUS_ACTIVE:
        raise EngineError("SESSION_ACTIVE", "session has not finished yet")
    a, b = session.interval
    return SessionResult(
        lo_id=session.lo_id,
        localized_level=a,
        exact=a == b,
        items_used=len(session.asked),
    )

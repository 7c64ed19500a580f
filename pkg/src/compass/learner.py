"""Event-sourced individual model.

The only persisted state is an append-only evidence log, totally ordered by
(timestamp, item id). Everything else (decayed mastery, confirmed taxonomy
level, achievement) is recomputed from the log on every query, so replaying
the same records always yields the same answers. Timestamps are integer UTC
epoch seconds and ``now`` is always an explicit argument; nothing in here
reads a wall clock.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, replace

from .domain import LearningOutcome
from .errors import EngineError

SCHEMA_VERSION = "1.0"

DEFAULT_HALF_LIFE_SECONDS = 7_776_000  # 90 days


@dataclass(frozen=True)
class EvidenceRecord:
    item_id: str
    lo_id: str
    process_level: int
    correct: bool
    timestamp: int  # UTC epoch seconds
    seconds: int  # response time

    def __post_init__(self):
        if not 1 <= self.process_level <= 6:
            raise ValueError(f"process_level must be in 1..6, got {self.process_level}")
        if self.seconds < 0:
            raise ValueError(f"seconds must be non-negative, got {self.seconds}")

    @property
    def sort_key(self) -> tuple[int, str]:
        return (self.timestamp, self.item_id)


@dataclass(frozen=True)
class IndividualModel:
    learner_id: str
    evidence: tuple[EvidenceRecord, ...] = ()
    schema_version: str = SCHEMA_VERSION


@dataclass(frozen=True)
class DecayParams:
    """Forgetting-curve and achievement parameters.

    ``half_life_seconds=None`` disables decay entirely (the designated
    "no decay" value); otherwise mastery halves every half-life after the
    last evidence for an outcome.
    """

    half_life_seconds: int | None = DEFAULT_HALF_LIFE_SECONDS
    mastery_threshold: float = 0.75
    ema_alpha: float = 0.5

    def __post_init__(self):
        if self.half_life_seconds is not None and self.half_life_seconds <= 0:
            raise ValueError("half_life_seconds must be positive or None")
        if not 0.0 < self.mastery_threshold <= 1.0:
            raise ValueError("mastery_threshold must be in (0, 1]")
        if not 0.0 < self.ema_alpha < 1.0:
            raise ValueError("ema_alpha must be in (0, 1)")


@dataclass(frozen=True)
class LoState:
    """Derived per-outcome snapshot; never persisted."""

    lo_id: str
    mastery: float
    confirmed_level: int
    last_evidence: int | None


def record_evidence(model: IndividualModel, rec: EvidenceRecord) -> IndividualModel:
    """Insert a record at its sorted position, returning a new model.

    Raises DUPLICATE_EVIDENCE when a record with the same (item id, timestamp)
    already exists.
    """
    keys = [r.sort_key for r in model.evidence]
    pos = bisect.bisect_left(keys, rec.sort_key)
    if pos < len(keys) and keys[pos] == rec.sort_key:
        raise EngineError(
            "DUPLICATE_EVIDENCE",
            f"evidence for item {rec.item_id!r} at timestamp {rec.timestamp} already recorded",
        )
    evidence = model.evidence[:pos] + (rec,) + model.evidence[pos:]
    return replace(model, evidence=evidence)


def _evidence_for(model: IndividualModel, lo_id: str) -> list[EvidenceRecord]:
    return [r for r in model.evidence if r.lo_id == lo_id]


def mastery(model: IndividualModel, lo_id: str, now: int, params: DecayParams) -> float:
    """Decayed mastery in [0, 1].

    The raw value is an exponential moving average over the outcome's evidence
    in log order (first record taken verbatim, then
    m_i = alpha * x_i + (1 - alpha) * m_{i-1}); the result is the EMA scaled by
    2^(-elapsed / half_life) since the last evidence. No evidence means 0.0.
    """
    records = _evidence_for(model, lo_id)
    if not records:
        return 0.0
    value = 1.0 if records[0].correct else 0.0
    for rec in records[1:]:
        x = 1.0 if rec.correct else 0.0
        value = params.ema_alpha * x + (1.0 - params.ema_alpha) * value
    if params.half_life_seconds is None:
        return value
    elapsed = max(0, now - records[-1].timestamp)
    return value * 2.0 ** (-elapsed / params.half_life_seconds)


def confirmed_level(model: IndividualModel, lo_id: str) -> int:
    """Highest process level whose most recent probe for this outcome was correct.

    Correctness at a level is taken as evidence of capability at the levels
    below it, so only the per-level latest record matters; 0 when no level
    qualifies.
    """
    latest: dict[int, EvidenceRecord] = {}
    for rec in _evidence_for(model, lo_id):  # evidence is kept sorted, last write wins
        latest[rec.process_level] = rec
    qualifying = [level for level, rec in latest.items() if rec.correct]
    return max(qualifying, default=0)


def is_achieved(model: IndividualModel, lo: LearningOutcome, now: int, params: DecayParams) -> bool:
    """Achieved = decayed mastery at threshold or above AND confirmed at the required level."""
    return (
        mastery(model, lo.id, now, params) >= params.mastery_threshold
        and confirmed_level(model, lo.id) >= lo.required_level
    )


def lo_state(model: IndividualModel, lo_id: str, now: int, params: DecayParams) -> LoState:
    records = _evidence_for(model, lo_id)
    return LoState(
        lo_id=lo_id,
        mastery=mastery(model, lo_id, now, params),
        confirmed_level=confirmed_level(model, lo_id),
        last_evidence=records[-1].timestamp if records else None,
    )


def has_evidence(model: IndividualModel, lo_id: str) -> bool:
    return any(r.lo_id == lo_id for r in model.evidence)

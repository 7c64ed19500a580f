"""Deterministic simulated learner, used by the CLI harness and as a test oracle."""

from __future__ import annotations

from dataclasses import dataclass

from .items import AssessmentItem


@dataclass(frozen=True)
class SimulatedLearner:
    """Answers correctly exactly when the item's process level is within reach."""

    true_level: int  # 0..6
    seconds_factor: float = 0.4  # fraction of the item's time limit spent answering

    def __post_init__(self):
        if not 0 <= self.true_level <= 6:
            raise ValueError(f"true_level must be in 0..6, got {self.true_level}")
        if not 0.0 < self.seconds_factor <= 1.0:
            raise ValueError(f"seconds_factor must be in (0, 1], got {self.seconds_factor}")

    def knows(self, item: AssessmentItem) -> bool:
        return item.cell.process_level <= self.true_level

    def choose(self, item: AssessmentItem) -> frozenset[int]:
        if self.knows(item):
            return item.answer_key
        # deterministic wrong answer: the first option outside the key, else nothing
        for index in range(len(item.options)):
            if index not in item.answer_key:
                return frozenset({index})
        return frozenset()

    def response_seconds(self, item: AssessmentItem) -> int:
        return int(self.seconds_factor * item.max_seconds)

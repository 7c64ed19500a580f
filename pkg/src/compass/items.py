"""Assessment items: one item probes exactly one learning outcome at one taxonomy cell."""

from __future__ import annotations

from dataclasses import dataclass, field

from .domain import DomainModel, Finding, TaxonomyCell, ValidationReport, make_report
from .errors import EngineError

SCHEMA_VERSION = "1.0"

DEFAULT_MIN_ITEMS_PER_LEVEL = 2


@dataclass(frozen=True)
class AssessmentItem:
    id: str
    lo_id: str
    cell: TaxonomyCell
    stem: str
    options: tuple[str, ...]
    answer_key: frozenset[int]
    max_seconds: int

    def __post_init__(self):
        if self.max_seconds <= 0:
            raise ValueError(f"max_seconds must be positive, got {self.max_seconds}")


@dataclass(frozen=True)
class ItemPool:
    pool_id: str
    items: dict[str, AssessmentItem] = field(default_factory=dict)
    schema_version: str = SCHEMA_VERSION


@dataclass(frozen=True)
class CoverageMatrix:
    """Per LO id, a 6x4 grid of item counts (process level x knowledge dimension)."""

    counts: dict[str, tuple[tuple[int, ...], ...]]

    def count(self, lo_id: str, process_level: int, knowledge_dim: int) -> int:
        return self.counts[lo_id][process_level - 1][knowledge_dim - 1]

    def total(self) -> int:
        return sum(sum(row) for grid in self.counts.values() for row in grid)


def validate_pool(
    pool: ItemPool,
    model: DomainModel,
    min_items_per_level: int = DEFAULT_MIN_ITEMS_PER_LEVEL,
) -> ValidationReport:
    """Cross-check a pool against a domain model.

    Errors: UNKNOWN_LO (item points at an outcome the model does not declare),
    BAD_KEY (empty answer key, out-of-range indices, or fewer than 2 options).
    Warnings: NO_ITEMS (outcome without any item), THIN_COVERAGE (outcome with
    items but fewer than ``min_items_per_level`` at its required level).
    """
    findings: list[Finding] = []

    per_lo_total: dict[str, int] = {lo_id: 0 for lo_id in model.lo_index}
    per_lo_required: dict[str, int] = {lo_id: 0 for lo_id in model.lo_index}

    for item_id in sorted(pool.items):
        item = pool.items[item_id]
        if item.lo_id not in model.lo_index:
            findings.append(
                Finding("error", "UNKNOWN_LO", f"item references unknown outcome {item.lo_id!r}", item_id)
            )
        else:
            per_lo_total[item.lo_id] += 1
            _, lo = model.lo_index[item.lo_id]
            if item.cell.process_level == lo.required_level:
                per_lo_required[item.lo_id] += 1
        if len(item.options) < 2:
            findings.append(Finding("error", "BAD_KEY", "item needs at least 2 options", item_id))
        elif not item.answer_key:
            findings.append(Finding("error", "BAD_KEY", "answer key is empty", item_id))
        elif any(i < 0 or i >= len(item.options) for i in item.answer_key):
            findings.append(Finding("error", "BAD_KEY", "answer key index out of range", item_id))

    for lo_id in sorted(model.lo_index):
        if per_lo_total[lo_id] == 0:
            findings.append(Finding("warning", "NO_ITEMS", f"no items for outcome {lo_id!r}", lo_id))
        elif per_lo_required[lo_id] < min_items_per_level:
            _, lo = model.lo_index[lo_id]
            findings.append(
                Finding(
                    "warning",
                    "THIN_COVERAGE",
                    f"only {per_lo_required[lo_id]} item(s) at required level {lo.required_level} "
                    f"(want {min_items_per_level})",
                    lo_id,
                )
            )

    return make_report(findings)


def coverage_matrix(pool: ItemPool, model: DomainModel) -> CoverageMatrix:
    """Exact item counts per (LO, process level, knowledge dimension)."""
    grids: dict[str, list[list[int]]] = {
        lo_id: [[0] * 4 for _ in range(6)] for lo_id in model.lo_index
    }
    for item in pool.items.values():
        if item.lo_id not in grids:
            raise EngineError("UNKNOWN_LO", f"item {item.id!r} references unknown outcome {item.lo_id!r}")
        grids[item.lo_id][item.cell.process_level - 1][item.cell.knowledge_dim - 1] += 1
    return CoverageMatrix(
        counts={lo_id: tuple(tuple(row) for row in grid) for lo_id, grid in grids.items()}
    )


def items_for(
    pool: ItemPool,
    lo_id: str,
    level_range: tuple[int, int] = (1, 6),
    exclude: set[str] | frozenset[str] = frozenset(),
) -> list[AssessmentItem]:
    """Items probing ``lo_id`` within the inclusive process-level range, sorted by (level, id)."""
    lo_level, hi_level = level_range
    matches = [
        item
        for item in pool.items.values()
        if item.lo_id == lo_id
        and lo_level <= item.cell.process_level <= hi_level
        and item.id not in exclude
    ]
    matches.sort(key=lambda item: (item.cell.process_level, item.id))
    return matches


def score_response(item: AssessmentItem, chosen: set[int] | frozenset[int]) -> bool:
    """Exact-set scoring: correct iff the chosen indices equal the answer key."""
    chosen = frozenset(chosen)
    if any(i < 0 or i >= len(item.options) for i in chosen):
        raise EngineError("BAD_RESPONSE", f"option index out of range for item {item.id!r}")
    return chosen == item.answer_key

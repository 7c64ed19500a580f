"""Item pool validation, coverage counting, filtering, and scoring."""

from __future__ import annotations

import random

import pytest

from compass.domain import Concept, DomainModel, LearningOutcome, TaxonomyCell
from compass.errors import EngineError
from compass.items import (
    AssessmentItem,
    ItemPool,
    coverage_matrix,
    items_for,
    score_response,
    validate_pool,
)

from genutil import gen_domain_model, gen_pool


def one_lo_model(required_level=3):
    return DomainModel(
        module_id="m",
        title="m",
        concepts={
            "c": Concept("c", "C", (LearningOutcome("lo1", "d", TaxonomyCell(2, 1), required_level),))
        },
    )


def make_item(iid="i1", lo_id="lo1", level=3, dim=1, options=4, key=(0,)):
    return AssessmentItem(
        id=iid,
        lo_id=lo_id,
        cell=TaxonomyCell(level, dim),
        stem="?",
        options=tuple(f"o{k}" for k in range(options)),
        answer_key=frozenset(key),
        max_seconds=60,
    )


class TestValidatePool:
    def test_unknown_lo_is_an_error(self):
        pool = ItemPool("p", {"i1": make_item(lo_id="ghost")})
        report = validate_pool(pool, one_lo_model())
        assert [f.code for f in report.errors] == ["UNKNOWN_LO"]

    def test_empty_pool_warns_per_lo_but_stays_ok(self):
        report = validate_pool(ItemPool("p"), one_lo_model())
        assert report.ok
        assert [f.code for f in report.findings] == ["NO_ITEMS"]

    def test_thin_coverage_at_required_level(self):
        pool = ItemPool("p", {"i1": make_item(level=3)})
        report = validate_pool(pool, one_lo_model(required_level=3), min_items_per_level=2)
        assert [f.code for f in report.findings] == ["THIN_COVERAGE"]
        # threshold satisfied with a second item at the required level
        pool2 = ItemPool("p", {"i1": make_item("i1"), "i2": make_item("i2")})
        assert validate_pool(pool2, one_lo_model(), min_items_per_level=2).findings == ()

    def test_bad_key_variants(self):
        empty_key = make_item(key=())
        out_of_range = make_item(key=(9,))
        for item in (empty_key, out_of_range):
            report = validate_pool(ItemPool("p", {item.id: item}), one_lo_model())
            assert any(f.code == "BAD_KEY" for f in report.errors)


class TestCoverage:
    def test_empty_pool_is_all_zero(self):
        matrix = coverage_matrix(ItemPool("p"), one_lo_model())
        assert matrix.total() == 0
        assert matrix.count("lo1", 1, 1) == 0

    def test_exact_counts(self):
        pool = ItemPool(
            "p",
            {
                "i1": make_item("i1", level=1, dim=1),
                "i2": make_item("i2", level=1, dim=1),
                "i3": make_item("i3", level=4, dim=3),
            },
        )
        matrix = coverage_matrix(pool, one_lo_model())
        assert matrix.count("lo1", 1, 1) == 2
        assert matrix.count("lo1", 4, 3) == 1
        assert matrix.total() == 3

    def test_row_sums_match_naive_scan_on_random_pools(self):
        rng = random.Random(21)
        for _ in range(50):
            model = gen_domain_model(rng, max_nodes=6, with_resources=False)
            pool = gen_pool(rng, model)
            matrix = coverage_matrix(pool, model)
            per_lo = {lo_id: 0 for lo_id in model.lo_index}
            for item in pool.items.values():  # independent linear count
                per_lo[item.lo_id] += 1
            for lo_id, expected in per_lo.items():
                assert sum(sum(row) for row in matrix.counts[lo_id]) == expected
            assert matrix.total() == len(pool.items)

    def test_unknown_lo_propagates(self):
        pool = ItemPool("p", {"i1": make_item(lo_id="ghost")})
        with pytest.raises(EngineError) as err:
            coverage_matrix(pool, one_lo_model())
        assert err.value.code == "UNKNOWN_LO"


class TestItemsFor:
    def test_exclude_everything(self):
        pool = ItemPool("p", {"i1": make_item()})
        assert items_for(pool, "lo1", (1, 6), exclude={"i1"}) == []

    def test_single_match(self):
        item = make_item()
        pool = ItemPool("p", {"i1": item})
        assert items_for(pool, "lo1") == [item]

    def test_matches_brute_force_filter(self):
        rng = random.Random(22)
        for _ in range(50):
            model = gen_domain_model(rng, max_nodes=5, with_resources=False)
            pool = gen_pool(rng, model)
            lo_id = rng.choice(sorted(model.lo_index))
            low = rng.randint(1, 6)
            high = rng.randint(low, 6)
            exclude = {iid for iid in pool.items if rng.random() < 0.3}
            expected = sorted(
                (
                    item
                    for item in pool.items.values()
                    if item.lo_id == lo_id
                    and low <= item.cell.process_level <= high
                    and item.id not in exclude
                ),
                key=lambda item: (item.cell.process_level, item.id),
            )
            assert items_for(pool, lo_id, (low, high), exclude) == expected

    def test_full_range_partitions_pool_by_lo(self):
        rng = random.Random(23)
        model = gen_domain_model(rng, max_nodes=6, with_resources=False)
        pool = gen_pool(rng, model)
        collected = []
        for lo_id in sorted(model.lo_index):
            collected.extend(item.id for item in items_for(pool, lo_id))
        assert sorted(collected) == sorted(pool.items)


class TestScoring:
    def test_exact_match(self):
        item = make_item(key=(0, 2))
        assert score_response(item, {0, 2}) is True

    def test_superset_is_wrong(self):
        item = make_item(key=(0,))
        assert score_response(item, {0, 1}) is False

    def test_empty_choice_is_wrong(self):
        assert score_response(make_item(), set()) is False

    def test_out_of_range_raises(self):
        with pytest.raises(EngineError) as err:
            score_response(make_item(options=2), {5})
        assert err.value.code == "BAD_RESPONSE"

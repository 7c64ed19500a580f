"""Domain model validation, closure, topological order, and merge."""

from __future__ import annotations

import random

import pytest

from compass.domain import (
    Concept,
    DomainModel,
    Edge,
    LearningOutcome,
    TaxonomyCell,
    merge_models,
    prerequisite_closure,
    topological_order,
    validate_domain_model,
)
from compass.errors import EngineError
from compass.storage import save_domain_model

from genutil import dfs_find_cycle, floyd_warshall_reachable, gen_domain_model, prereq_pairs


def simple_model(edges, node_ids=None, kind="prerequisite"):
    ids = node_ids or sorted({n for pair in edges for n in pair})
    concepts = {
        cid: Concept(
            id=cid,
            title=cid.upper(),
            outcomes=(LearningOutcome(f"{cid}-lo", f"outcome of {cid}", TaxonomyCell(2, 1), 2),),
        )
        for cid in ids
    }
    return DomainModel(
        module_id="m",
        title="m",
        concepts=concepts,
        edges=tuple(Edge(u, v, kind) for u, v in edges),
    )


class TestValidate:
    def test_two_cycle_is_reported_with_its_nodes(self):
        model = simple_model([("a", "b"), ("b", "a")])
        report = validate_domain_model(model)
        assert not report.ok
        cycles = [f for f in report.findings if f.code == "CYCLE"]
        assert len(cycles) == 1
        assert "a -> b -> a" in cycles[0].message or "b -> a -> b" in cycles[0].message
        assert cycles[0].subject_id == "a"

    def test_empty_model_is_vacuously_valid(self):
        report = validate_domain_model(DomainModel(module_id="m", title="m"))
        assert report.ok
        assert report.findings == ()

    def test_dangling_edge(self):
        model = simple_model([("a", "b")])
        model = DomainModel(
            module_id="m", title="m", concepts=model.concepts,
            edges=model.edges + (Edge("a", "ghost", "prerequisite"),),
        )
        report = validate_domain_model(model)
        assert [f.code for f in report.errors] == ["DANGLING_EDGE"]

    def test_duplicate_edge_and_lo_id(self):
        concepts = {
            "a": Concept("a", "A", (LearningOutcome("lo-x", "x", TaxonomyCell(1, 1), 1),)),
            "b": Concept("b", "B", (LearningOutcome("lo-x", "x", TaxonomyCell(1, 1), 1),)),
        }
        model = DomainModel(
            module_id="m", title="m", concepts=concepts,
            edges=(Edge("a", "b", "supporting"), Edge("a", "b", "supporting")),
        )
        codes = [f.code for f in validate_domain_model(model).errors]
        assert codes == ["DUP_EDGE", "DUP_LO_ID"]

    def test_empty_outcomes_is_a_warning_only(self):
        model = DomainModel(module_id="m", title="m", concepts={"a": Concept("a", "A")})
        report = validate_domain_model(model)
        assert report.ok
        assert [f.code for f in report.findings] == ["EMPTY_OUTCOMES"]

    def test_self_loop_reports_cycle(self):
        model = simple_model([("a", "a")], node_ids=["a"])
        report = validate_domain_model(model)
        assert [f.code for f in report.errors] == ["CYCLE"]
        assert "a -> a" in report.errors[0].message

    def test_findings_order_is_deterministic(self):
        model = DomainModel(
            module_id="m", title="m",
            concepts={"a": Concept("a", "A"), "b": Concept("b", "B")},
            edges=(Edge("b", "zz", "prerequisite"), Edge("a", "zz", "prerequisite")),
        )
        report = validate_domain_model(model)
        keys = [(f.code, f.subject_id) for f in report.findings]
        assert keys == sorted(keys)

    def test_injected_back_edges_all_caught(self):
        rng = random.Random(101)
        for trial in range(200):
            model = gen_domain_model(rng, with_supporting=False, with_resources=False)
            pairs = prereq_pairs(model)
            if not pairs:
                continue
            u, v = pairs[rng.randrange(len(pairs))]
            back = Edge(v, u, "prerequisite") if u != v else None
            broken = DomainModel(
                module_id=model.module_id, title=model.title,
                concepts=model.concepts, edges=model.edges + ((back,) if back else ()),
            )
            nodes = sorted(broken.concepts)
            assert dfs_find_cycle(nodes, prereq_pairs(broken)), "oracle must agree the graph is cyclic"
            report = validate_domain_model(broken)
            assert any(f.code == "CYCLE" for f in report.errors), f"trial {trial} missed the cycle"


class TestClosure:
    def test_chain_closure(self):
        model = simple_model([("a", "b"), ("b", "c")])
        assert prerequisite_closure(model, "c") == {"a", "b"}
        assert prerequisite_closure(model, "a") == frozenset()

    def test_supporting_edges_are_ignored(self):
        model = DomainModel(
            module_id="m", title="m",
            concepts={"a": Concept("a", "A"), "b": Concept("b", "B")},
            edges=(Edge("a", "b", "supporting"),),
        )
        assert prerequisite_closure(model, "b") == frozenset()

    def test_unknown_concept(self):
        model = simple_model([("a", "b")])
        with pytest.raises(EngineError) as err:
            prerequisite_closure(model, "nope")
        assert err.value.code == "UNKNOWN_CONCEPT"

    def test_matches_reachability_oracle_on_random_dags(self):
        rng = random.Random(7)
        for _ in range(200):
            model = gen_domain_model(rng, with_resources=False)
            nodes = sorted(model.concepts)
            reach = floyd_warshall_reachable(nodes, prereq_pairs(model))
            for node in nodes:
                expected = {u for u in nodes if (u, node) in reach and u != node}
                assert prerequisite_closure(model, node) == expected

    def test_closure_is_transitive(self):
        rng = random.Random(8)
        for _ in range(30):
            model = gen_domain_model(rng, max_nodes=12, with_resources=False)
            for node in model.concepts:
                closure = prerequisite_closure(model, node)
                for member in closure:
                    assert prerequisite_closure(model, member) <= closure


class TestTopologicalOrder:
    def test_chain_is_reproduced(self):
        model = simple_model([("a", "b"), ("b", "c")])
        assert topological_order(model, {"c", "a", "b"}) == ["a", "b", "c"]

    def test_lexicographic_tie_break(self):
        model = simple_model([], node_ids=["x", "y"])
        assert topological_order(model, {"y", "x"}) == ["x", "y"]

    def test_transitive_constraint_through_excluded_node(self):
        model = simple_model([("a", "b"), ("b", "c")])
        assert topological_order(model, {"c", "a"}) == ["a", "c"]

    def test_unknown_concept(self):
        model = simple_model([("a", "b")])
        with pytest.raises(EngineError) as err:
            topological_order(model, {"a", "zz"})
        assert err.value.code == "UNKNOWN_CONCEPT"

    def test_respects_every_adjacent_pair_on_random_dags(self):
        rng = random.Random(9)
        for _ in range(100):
            model = gen_domain_model(rng, with_resources=False)
            nodes = sorted(model.concepts)
            subset = set(rng.sample(nodes, rng.randint(1, len(nodes))))
            order = topological_order(model, subset)
            assert sorted(order) == sorted(subset)
            position = {cid: i for i, cid in enumerate(order)}
            for u, v in prereq_pairs(model):
                if u in subset and v in subset:
                    assert position[u] < position[v]


class TestMerge:
    def test_identity_with_empty_model(self):
        rng = random.Random(10)
        model = gen_domain_model(rng, max_nodes=6)
        empty = DomainModel(module_id="empty", title="empty")
        merged = merge_models([model, empty])
        left = save_domain_model(merged).decode().splitlines()
        right = save_domain_model(merge_models([model])).decode().splitlines()
        # identical except for module id and title lines
        skip = ('  "module_id"', '  "title"')
        assert [l for l in left if not l.startswith(skip)] == [l for l in right if not l.startswith(skip)]

    def test_union_with_edge_declared_in_other_model(self):
        a_only = DomainModel(module_id="ma", title="ma", concepts={"a": Concept("a", "A")})
        b_model = DomainModel(
            module_id="mb", title="mb",
            concepts={"b": Concept("b", "B")},
            edges=(Edge("a", "b", "prerequisite"),),
        )
        merged = merge_models([a_only, b_model])
        assert set(merged.concepts) == {"a", "b"}
        report = validate_domain_model(merged)
        assert not any(f.code == "DANGLING_EDGE" for f in report.findings)
        # without the concept-bearing model the same edge dangles
        alone = merge_models([b_model])
        assert any(f.code == "DANGLING_EDGE" for f in validate_domain_model(alone).errors)

    def test_commutative_byte_for_byte(self):
        rng = random.Random(11)
        for _ in range(50):
            m1 = gen_domain_model(rng, max_nodes=8, prefix="a", module_id="ma")
            m2 = gen_domain_model(rng, max_nodes=8, prefix="b", module_id="mb")
            assert save_domain_model(merge_models([m1, m2])) == save_domain_model(merge_models([m2, m1]))

    def test_conflict_on_differing_title(self):
        m1 = DomainModel(module_id="m1", title="t", concepts={"a": Concept("a", "one")})
        m2 = DomainModel(module_id="m2", title="t", concepts={"a": Concept("a", "two")})
        with pytest.raises(EngineError) as err:
            merge_models([m1, m2])
        assert err.value.code == "MERGE_CONFLICT"

    def test_cycle_created_by_union(self):
        m1 = simple_model([("a", "b")])
        m2 = simple_model([("b", "a")])
        with pytest.raises(EngineError) as err:
            merge_models([m1, m2])
        assert err.value.code == "MERGE_CYCLE"

    def test_module_id_is_sorted_join(self):
        m1 = DomainModel(module_id="zeta", title="z")
        m2 = DomainModel(module_id="alpha", title="a")
        assert merge_models([m1, m2]).module_id == "alpha+zeta"

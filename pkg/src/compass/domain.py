"""Didactically enriched domain model: a concept map with typed edges.

Concepts carry learning outcomes (classified by a 6-level cognitive-process
dimension and a 4-level knowledge dimension) and learning resources. Edges are
either hard prerequisites (the subgraph of those must be a DAG) or optional
supporting links. All graph operations are deterministic: ties are broken by
lexicographic id everywhere.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from .errors import EngineError

KIND_PREREQUISITE = "prerequisite"
KIND_SUPPORTING = "supporting"
EDGE_KINDS = (KIND_PREREQUISITE, KIND_SUPPORTING)

RESOURCE_KINDS = ("introductory", "deepening", "alternative")

PROCESS_LEVELS = range(1, 7)  # Remember .. Create
KNOWLEDGE_DIMS = range(1, 5)  # Factual .. Metacognitive

SCHEMA_VERSION = "1.0"


@dataclass(frozen=True)
class TaxonomyCell:
    """One cell of the 6x4 grid: cognitive process level x knowledge dimension."""

    process_level: int
    knowledge_dim: int

    def __post_init__(self):
        if self.process_level not in PROCESS_LEVELS:
            raise ValueError(f"process_level must be in 1..6, got {self.process_level}")
        if self.knowledge_dim not in KNOWLEDGE_DIMS:
            raise ValueError(f"knowledge_dim must be in 1..4, got {self.knowledge_dim}")


@dataclass(frozen=True)
class LearningOutcome:
    id: str
    description: str
    cell: TaxonomyCell
    required_level: int = 3  # process level the course demands; defaults to Apply

    def __post_init__(self):
        if self.required_level not in PROCESS_LEVELS:
            raise ValueError(f"required_level must be in 1..6, got {self.required_level}")


@dataclass(frozen=True)
class LearningResource:
    id: str
    title: str
    uri: str
    kind: str  # one of RESOURCE_KINDS
    tags: frozenset[str] = frozenset()

    def __post_init__(self):
        if self.kind not in RESOURCE_KINDS:
            raise ValueError(f"resource kind must be one of {RESOURCE_KINDS}, got {self.kind!r}")


@dataclass(frozen=True)
class Concept:
    id: str
    title: str
    outcomes: tuple[LearningOutcome, ...] = ()
    resources: tuple[LearningResource, ...] = ()


@dataclass(frozen=True)
class Edge:
    from_id: str
    to_id: str
    kind: str  # prerequisite: from_id must be mastered before to_id; supporting: optional aid

    def __post_init__(self):
        if self.kind not in EDGE_KINDS:
            raise ValueError(f"edge kind must be one of {EDGE_KINDS}, got {self.kind!r}")

    @property
    def key(self) -> tuple[str, str, str]:
        return (self.from_id, self.to_id, self.kind)


@dataclass(frozen=True)
class DomainModel:
    module_id: str
    title: str
    concepts: dict[str, Concept] = field(default_factory=dict)
    edges: tuple[Edge, ...] = ()
    schema_version: str = SCHEMA_VERSION

    @cached_property
    def lo_index(self) -> dict[str, tuple[str, LearningOutcome]]:
        """Maps LO id -> (owning concept id, outcome). First owner wins on duplicates."""
        index: dict[str, tuple[str, LearningOutcome]] = {}
        for cid in sorted(self.concepts):
            for lo in self.concepts[cid].outcomes:
                index.setdefault(lo.id, (cid, lo))
        return index

    @cached_property
    def prereq_parents(self) -> dict[str, tuple[str, ...]]:
        """Direct prerequisites per concept (edges arriving via the prerequisite kind)."""
        parents: dict[str, list[str]] = {cid: [] for cid in self.concepts}
        for edge in self.edges:
            if edge.kind == KIND_PREREQUISITE and edge.to_id in parents and edge.from_id in self.concepts:
                parents[edge.to_id].append(edge.from_id)
        return {cid: tuple(sorted(set(ps))) for cid, ps in parents.items()}

    @cached_property
    def prereq_children(self) -> dict[str, tuple[str, ...]]:
        children: dict[str, list[str]] = {cid: [] for cid in self.concepts}
        for edge in self.edges:
            if edge.kind == KIND_PREREQUISITE and edge.from_id in children and edge.to_id in self.concepts:
                children[edge.from_id].append(edge.to_id)
        return {cid: tuple(sorted(set(cs))) for cid, cs in children.items()}

    def supporters_of(self, concept_id: str) -> tuple[str, ...]:
        """Concepts offering optional support for ``concept_id``, sorted by id."""
        found = {
            e.from_id
            for e in self.edges
            if e.kind == KIND_SUPPORTING and e.to_id == concept_id and e.from_id in self.concepts
        }
        return tuple(sorted(found))


@dataclass(frozen=True)
class Finding:
    severity: str  # "error" | "warning"
    code: str
    message: str
    subject_id: str


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    findings: tuple[Finding, ...]

    @property
    def errors(self) -> tuple[Finding, ...]:
        return tuple(f for f in self.findings if f.severity == "error")


def make_report(findings: list[Finding]) -> ValidationReport:
    ordered = tuple(sorted(findings, key=lambda f: (f.code, f.subject_id, f.message)))
    ok = all(f.severity != "error" for f in ordered)
    return ValidationReport(ok=ok, findings=ordered)


def validate_domain_model(model: DomainModel) -> ValidationReport:
    """Check referential integrity and prerequisite acyclicity.

    Never raises on malformed graph structure; every violation becomes a
    finding. Finding order is deterministic (code, then subject id).
    """
    findings: list[Finding] = []

    seen_edges: set[tuple[str, str, str]] = set()
    for edge in model.edges:
        subject = f"{edge.from_id}->{edge.to_id}"
        for endpoint in (edge.from_id, edge.to_id):
            if endpoint not in model.concepts:
                findings.append(
                    Finding("error", "DANGLING_EDGE", f"edge references unknown concept {endpoint!r}", subject)
                )
        if edge.key in seen_edges:
            findings.append(
                Finding("error", "DUP_EDGE", f"duplicate {edge.kind} edge", subject)
            )
        seen_edges.add(edge.key)

    lo_owner: dict[str, str] = {}
    resource_owner: dict[str, str] = {}
    for cid in sorted(model.concepts):
        concept = model.concepts[cid]
        if not concept.outcomes:
            findings.append(
                Finding("warning", "EMPTY_OUTCOMES", f"concept {cid!r} declares no learning outcomes", cid)
            )
        for lo in concept.outcomes:
            if lo.id in lo_owner:
                findings.append(
                    Finding(
                        "error",
                        "DUP_LO_ID",
                        f"outcome id declared by concepts {lo_owner[lo.id]!r} and {cid!r}",
                        lo.id,
                    )
                )
            else:
                lo_owner[lo.id] = cid
        for res in concept.resources:
            if res.id in resource_owner:
                findings.append(
                    Finding(
                        "error",
                        "DUP_RESOURCE_ID",
                        f"resource id declared by concepts {resource_owner[res.id]!r} and {cid!r}",
                        res.id,
                    )
                )
            else:
                resource_owner[res.id] = cid

    for cycle in _prerequisite_cycles(model):
        loop = " -> ".join(cycle + (cycle[0],))
        findings.append(Finding("error", "CYCLE", f"prerequisite cycle: {loop}", cycle[0]))

    return make_report(findings)


def _prerequisite_cycles(model: DomainModel) -> list[tuple[str, ...]]:
    """One representative cycle per strongly connected component (plus self-loops).

    Iterative Tarjan over the prerequisite subgraph restricted to known
    concepts; component members and neighbor order are sorted, so the reported
    cycles are deterministic.
    """
    adjacency: dict[str, list[str]] = {cid: [] for cid in model.concepts}
    self_loops: set[str] = set()
    for edge in model.edges:
        if edge.kind != KIND_PREREQUISITE:
            continue
        if edge.from_id not in adjacency or edge.to_id not in adjacency:
            continue
        if edge.from_id == edge.to_id:
            self_loops.add(edge.from_id)
        else:
            adjacency[edge.from_id].append(edge.to_id)
    for neighbors in adjacency.values():
        neighbors.sort()

    index: dict[str, int] = {}
    low: dict[str, int] = {}
    on_stack: set[str] = set()
    stack: list[str] = []
    counter = 0
    components: list[list[str]] = []

    for root in sorted(adjacency):
        if root in index:
            continue
        work: list[tuple[str, int]] = [(root, 0)]
        while work:
            node, child_pos = work.pop()
            if child_pos == 0:
                index[node] = low[node] = counter
                counter += 1
                stack.append(node)
                on_stack.add(node)
            advanced = False
            for pos in range(child_pos, len(adjacency[node])):
                child = adjacency[node][pos]
                if child not in index:
                    work.append((node, pos + 1))
                    work.append((child, 0))
                    advanced = True
                    break
                if child in on_stack:
                    low[node] = min(low[node], index[child])
            if advanced:
                continue
            if low[node] == index[node]:
                component = []
                while True:
                    member = stack.pop()
                    on_stack.discard(member)
                    component.append(member)
                    if member == node:
                        break
                if len(component) > 1:
                    components.append(sorted(component))
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])

    cycles = [(node,) for node in sorted(self_loops)]
    for component in components:
        cycles.append(_concrete_cycle(component, adjacency))
    return sorted(cycles)


def _concrete_cycle(component: list[str], adjacency: dict[str, list[str]]) -> tuple[str, ...]:
    # Shortest loop through the component's smallest node, found by BFS.
    members = set(component)
    start = component[0]
    parent: dict[str, str] = {}
    queue = [start]
    seen = {start}
    while queue:
        node = queue.pop(0)
        for child in adjacency[node]:
            if child not in members:
                continue
            if child == start:
                path = [node]
                while path[-1] != start:
                    path.append(parent[path[-1]])
                path.reverse()
                return tuple(path)
            if child not in seen:
                seen.add(child)
                parent[child] = node
                queue.append(child)
    return tuple(component)  # unreachable for a genuine SCC


def prerequisite_closure(model: DomainModel, concept_id: str) -> frozenset[str]:
    """All direct and transitive prerequisites of a concept (excluding itself)."""
    if concept_id not in model.concepts:
        raise EngineError("UNKNOWN_CONCEPT", f"unknown concept {concept_id!r}")
    closure: set[str] = set()
    frontier = [concept_id]
    while frontier:
        node = frontier.pop()
        for parent in model.prereq_parents.get(node, ()):
            if parent not in closure:
                closure.add(parent)
                frontier.append(parent)
    closure.discard(concept_id)
    return frozenset(closure)


def topological_order(model: DomainModel, subset: set[str] | frozenset[str]) -> list[str]:
    """Linearize ``subset`` so every (transitive) prerequisite precedes its dependents.

    Constraints between subset members are taken from reachability over the
    full prerequisite subgraph, not just direct edges, so members connected
    through concepts outside the subset still order correctly. Among ready
    nodes the lexicographically smallest id is emitted first.
    """
    members = sorted(subset)
    for cid in members:
        if cid not in model.concepts:
            raise EngineError("UNKNOWN_CONCEPT", f"unknown concept {cid!r}")
    ancestors = {cid: prerequisite_closure(model, cid) for cid in members}
    remaining = dict.fromkeys(members)
    order: list[str] = []
    emitted: set[str] = set()
    while remaining:
        ready = [
            cid
            for cid in remaining
            if all(other in emitted or other not in remaining for other in ancestors[cid])
        ]
        if not ready:  # only possible on cyclic input, which validation rejects
            ready = list(remaining)
        nxt = min(ready)
        order.append(nxt)
        emitted.add(nxt)
        del remaining[nxt]
    return order


def merge_models(models: list[DomainModel]) -> DomainModel:
    """Union several models into one canonical model.

    Concepts sharing an id are unified; differing title or outcomes raise
    MERGE_CONFLICT, resources are unioned by id. The merged module id is the
    "+"-joined sorted set of constituent module ids (ids are split on "+"
    first, so merging is associative); the title repeats the module id. A
    prerequisite cycle introduced by the union raises MERGE_CYCLE.
    """
    if not models:
        raise EngineError("MERGE_EMPTY", "merge requires at least one model")

    constituents: set[str] = set()
    for model in models:
        constituents.update(part for part in model.module_id.split("+") if part)
    module_id = "+".join(sorted(constituents))

    concepts: dict[str, Concept] = {}
    for model in models:
        for cid in sorted(model.concepts):
            concept = model.concepts[cid]
            if cid not in concepts:
                concepts[cid] = concept
                continue
            existing = concepts[cid]
            if existing.title != concept.title or existing.outcomes != concept.outcomes:
                raise EngineError(
                    "MERGE_CONFLICT",
                    f"concept {cid!r} differs between models (title or outcomes)",
                )
            merged_resources = {res.id: res for res in existing.resources}
            for res in concept.resources:
                if res.id in merged_resources and merged_resources[res.id] != res:
                    raise EngineError(
                        "MERGE_CONFLICT",
                        f"resource {res.id!r} of concept {cid!r} differs between models",
                    )
                merged_resources[res.id] = res
            concepts[cid] = Concept(
                id=cid,
                title=existing.title,
                outcomes=existing.outcomes,
                resources=tuple(merged_resources[rid] for rid in sorted(merged_resources)),
            )

    edge_keys = sorted({edge.key for model in models for edge in model.edges})
    edges = tuple(Edge(from_id=f, to_id=t, kind=k) for f, t, k in edge_keys)

    merged = DomainModel(
        module_id=module_id,
        title=module_id,
        concepts={cid: _canonical_concept(concepts[cid]) for cid in sorted(concepts)},
        edges=edges,
    )
    if _prerequisite_cycles(merged):
        raise EngineError("MERGE_CYCLE", "union of models creates a prerequisite cycle")
    return merged


def _canonical_concept(concept: Concept) -> Concept:
    return Concept(
        id=concept.id,
        title=concept.title,
        outcomes=concept.outcomes,  # outcome order is didactic, keep it
        resources=tuple(sorted(concept.resources, key=lambda r: r.id)),
    )

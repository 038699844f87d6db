"""Concept graphs for components, and the mapping in both directions."""

from __future__ import annotations

from dataclasses import dataclass

from .components import Attribute, BusinessComponent, Operation
from .errors import DocumentError
from .jsonio import check_keys, dump_json, load_json
from .ontology import (
    ANCHOR_AMBIGUOUS,
    ANCHOR_UNIQUE,
    OPERATION_MARKER,
    DomainOntology,
    anchor,
    normalize_term,
    term_stem,
)

KIND_COMPONENT = "component"
KIND_ATTRIBUTE = "attribute"
KIND_OPERATION = "operation"

CONCEPT_KINDS = (KIND_COMPONENT, KIND_ATTRIBUTE, KIND_OPERATION)


@dataclass(frozen=True)
class Concept:
    """A node of a concept graph: one term plus optional member concepts.

    A concept with no members is atomic. The component kind may only
    appear at the root of a graph; members carry the attribute or
    operation kind, and member terms are pairwise distinct per kind
    under one parent.
    """

    term: str
    raw_label: str
    kind: str
    definitions: tuple[str, ...] = ()
    members: tuple[Concept, ...] = ()
    anchor: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "definitions", tuple(self.definitions))
        object.__setattr__(self, "members", tuple(self.members))
        problems = []
        if not self.term:
            problems.append("term must be non-empty")
        if self.kind not in CONCEPT_KINDS:
            problems.append(f"unknown concept kind '{self.kind}'")
        seen: set[tuple[str, str]] = set()
        for m in self.members:
            if m.kind == KIND_COMPONENT:
                problems.append("the component kind may only appear at the root")
            key = (m.kind, m.term)
            if key in seen:
                problems.append(f"duplicate member term '{m.term}' ({m.kind})")
            seen.add(key)
        if problems:
            raise DocumentError("<concept>", problems)

    @property
    def is_atomic(self) -> bool:
        return not self.members


@dataclass(frozen=True)
class ComponentOntology:
    """Concept graph of one component, plus carried-through metadata.

    kind, provides and requires play no part in similarity; they ride
    along so a merge can rebuild full components at the end.
    """

    source: str
    origin: str
    root: Concept
    kind: str = "entity"
    provides: tuple[str, ...] = ()
    requires: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "provides", tuple(self.provides))
        object.__setattr__(self, "requires", tuple(self.requires))
        problems = []
        if not self.source:
            problems.append("source must be non-empty")
        if not self.origin:
            problems.append("origin must be non-empty")
        if self.root.kind != KIND_COMPONENT:
            problems.append("the root concept must have the component kind")
        if problems:
            raise DocumentError("<concept-graph>", problems)

    @property
    def path(self) -> str:
        return f"{self.source}/{self.origin}"


def to_ontology(
    component: BusinessComponent,
    domain: DomainOntology,
    *,
    diagnostics: list[str] | None = None,
) -> ComponentOntology:
    """Map a component onto its concept graph.

    The root concept carries the component's name; attributes and then
    operations become atomic members in declaration order. Every term is
    anchored against the domain thesaurus. An explicit anchor entry on
    the component wins over the automatic lookup; ambiguous terms stay
    unanchored and are reported as diagnostics.
    """
    sink = diagnostics if diagnostics is not None else []
    hints = dict(component.anchors)
    used: set[str] = set()
    ctx = f"{component.source}/{component.name}"

    members = []
    for attr in component.attributes:
        members.append(
            Concept(
                attr.term,
                attr.name,
                KIND_ATTRIBUTE,
                anchor=_resolve_anchor(attr.term, hints, used, domain, sink, ctx),
            )
        )
    for op in component.operations:
        members.append(
            Concept(
                op.term,
                op.name,
                KIND_OPERATION,
                anchor=_resolve_anchor(op.term, hints, used, domain, sink, ctx),
            )
        )
    root_term = normalize_term(component.name)
    root = Concept(
        root_term,
        component.name,
        KIND_COMPONENT,
        definitions=(component.doc,) if component.doc else (),
        members=tuple(members),
        anchor=_resolve_anchor(root_term, hints, used, domain, sink, ctx),
    )
    for key in hints:
        if key not in used:
            sink.append(f"{ctx}: anchor hint '{key}' matches no member term")
    return ComponentOntology(
        source=component.source,
        origin=component.name,
        root=root,
        kind=component.kind,
        provides=component.provides,
        requires=component.requires,
    )


def _resolve_anchor(term, hints, used, domain, sink, ctx):
    hint = hints.get(term)
    if hint is not None:
        used.add(term)
    elif term_stem(term) in hints:
        hint = hints[term_stem(term)]
        used.add(term_stem(term))
    if hint is not None:
        if domain.has_concept(hint):
            return hint
        sink.append(
            f"{ctx}: anchor hint '{hint}' for '{term}' is not a known concept;"
            " falling back to the thesaurus lookup"
        )
    found = anchor(term, domain)
    if found.kind == ANCHOR_UNIQUE:
        return found.concepts[0]
    if found.kind == ANCHOR_AMBIGUOUS:
        sink.append(
            f"{ctx}: term '{term}' is listed under several concepts"
            f" ({', '.join(found.concepts)}); left unanchored"
        )
    return None


def to_component(graph: ComponentOntology) -> BusinessComponent:
    """Rebuild a component from a concept graph.

    Attribute metadata the graph never carried (datatypes, units) does
    not come back; names, member structure, kind, doc and interfaces do.
    """
    attributes = []
    operations = []
    for member in graph.root.members:
        if member.kind == KIND_ATTRIBUTE:
            attributes.append(Attribute(name=member.raw_label))
        else:
            operations.append(Operation(name=_operation_name(member.raw_label)))
    doc = graph.root.definitions[0] if graph.root.definitions else None
    return BusinessComponent(
        name=graph.root.raw_label,
        kind=graph.kind,
        source=graph.source,
        doc=doc,
        attributes=tuple(attributes),
        operations=tuple(operations),
        provides=graph.provides,
        requires=graph.requires,
    )


def _operation_name(raw_label: str) -> str:
    name = raw_label.strip()
    if name.endswith(OPERATION_MARKER):
        name = name[: -len(OPERATION_MARKER)].rstrip()
    return name or raw_label


_TOP_REQ = frozenset({"source", "origin", "root"})
_TOP_OPT = frozenset({"metadata"})
_CONCEPT_REQ = frozenset({"term", "raw_label", "kind", "members"})
_CONCEPT_OPT = frozenset({"anchor", "definitions"})
_META_OPT = frozenset({"kind", "provides", "requires"})


def component_ontology_to_json(graph: ComponentOntology) -> dict:
    obj: dict = {
        "source": graph.source,
        "origin": graph.origin,
        "root": _concept_json(graph.root),
    }
    meta: dict = {}
    if graph.kind != "entity":
        meta["kind"] = graph.kind
    if graph.provides:
        meta["provides"] = list(graph.provides)
    if graph.requires:
        meta["requires"] = list(graph.requires)
    if meta:
        obj["metadata"] = meta
    return obj


def _concept_json(c: Concept) -> dict:
    obj: dict = {"term": c.term, "raw_label": c.raw_label, "kind": c.kind}
    if c.anchor is not None:
        obj["anchor"] = c.anchor
    if c.definitions:
        obj["definitions"] = list(c.definitions)
    obj["members"] = [_concept_json(m) for m in c.members]
    return obj


def serialize_component_ontology(graph: ComponentOntology) -> str:
    return dump_json(component_ontology_to_json(graph))


def parse_component_ontology(
    document: str, *, source: str = "<concept-graph>"
) -> ComponentOntology:
    """Parse a concept-graph document under the strict schema."""
    data = load_json(document, source)
    if not isinstance(data, dict):
        raise DocumentError(source, ["top level must be an object"])
    graph = component_ontology_from_json(data, "", source)
    return graph


def component_ontology_from_json(data: dict, where: str, source: str) -> ComponentOntology:
    problems = check_keys(data, where, _TOP_REQ, _TOP_OPT)
    dot = f"{where}." if where else ""
    for key in ("source", "origin"):
        value = data.get(key)
        if key in data and (not isinstance(value, str) or not value):
            problems.append(f"{dot}{key}: must be a non-empty string")

    kind = "entity"
    provides: tuple[str, ...] = ()
    requires: tuple[str, ...] = ()
    meta = data.get("metadata")
    if meta is not None and not isinstance(meta, dict):
        problems.append(f"{dot}metadata: must be an object")
    elif meta:
        problems += check_keys(meta, f"{dot}metadata", frozenset(), _META_OPT)
        if "kind" in meta:
            if not isinstance(meta["kind"], str):
                problems.append(f"{dot}metadata.kind: must be a string")
            else:
                kind = meta["kind"]
        provides = _strings(meta.get("provides"), f"{dot}metadata.provides", problems)
        requires = _strings(meta.get("requires"), f"{dot}metadata.requires", problems)

    root = None
    raw_root = data.get("root")
    if raw_root is not None:
        root = _parse_concept(raw_root, f"{dot}root", problems)
    if problems or root is None:
        raise DocumentError(source, problems or [f"{dot}root: missing"])
    try:
        return ComponentOntology(
            source=data["source"],
            origin=data["origin"],
            root=root,
            kind=kind,
            provides=provides,
            requires=requires,
        )
    except DocumentError as exc:
        raise DocumentError(source, exc.diagnostics) from None


def _parse_concept(item, where: str, problems: list[str]) -> Concept | None:
    if not isinstance(item, dict):
        problems.append(f"{where}: must be an object")
        return None
    local = check_keys(item, where, _CONCEPT_REQ, _CONCEPT_OPT)
    term = item.get("term")
    raw_label = item.get("raw_label")
    kind = item.get("kind")
    if "term" in item and (not isinstance(term, str) or not normalize_term(term)):
        local.append(f"{where}.term: must be a non-empty string")
    if "raw_label" in item and not isinstance(raw_label, str):
        local.append(f"{where}.raw_label: must be a string")
    if "kind" in item and kind not in CONCEPT_KINDS:
        local.append(f"{where}.kind: must be one of {', '.join(CONCEPT_KINDS)}")
    anchor_id = item.get("anchor")
    if anchor_id is not None and (not isinstance(anchor_id, str) or not anchor_id):
        local.append(f"{where}.anchor: must be a non-empty string")
        anchor_id = None
    definitions = _strings(item.get("definitions"), f"{where}.definitions", local)

    members = []
    raw_members = item.get("members")
    if raw_members is not None and not isinstance(raw_members, list):
        local.append(f"{where}.members: must be a list")
    elif raw_members:
        for i, m in enumerate(raw_members):
            child = _parse_concept(m, f"{where}.members[{i}]", local)
            if child is not None:
                members.append(child)
    if local:
        problems += local
        return None
    try:
        return Concept(
            term=normalize_term(term),
            raw_label=raw_label,
            kind=kind,
            definitions=definitions,
            members=tuple(members),
            anchor=anchor_id,
        )
    except DocumentError as exc:
        problems.extend(f"{where}: {d}" for d in exc.diagnostics)
        return None


def _strings(value, where: str, problems: list[str]) -> tuple[str, ...]:
    if value is None:
        return ()
    if not isinstance(value, list) or any(not isinstance(s, str) for s in value):
        problems.append(f"{where}: must be a list of strings")
        return ()
    return tuple(value)

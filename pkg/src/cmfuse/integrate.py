"""Alignment of concept graphs and the merge into one result set.

Alignment scores every cross-source pair of graphs and classifies each
by two independent bits: do the apparent names match, and did the
similarity verdict come out synonym. Merge then grows equivalence
classes over the synonym edges, collapses each class into one component
under a canonical name, and source-qualifies the components that sit on
a homonym conflict.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .components import BusinessComponent
from .errors import DocumentError, MergeError
from .jsonio import check_keys, dump_json, load_json
from .ontology import (
    ANCHOR_UNIQUE,
    OPERATION_MARKER,
    DomainOntology,
    anchor,
    domain_ontology_to_json,
    load_domain_ontology,
    normalize_term,
)
from .similarity import (
    MODE_BIPARTITE,
    MODE_LITERAL,
    Score,
    VERDICT_SYNONYM,
    parse_score,
    semantic_similarity,
    similarity_matrix,
)
from .transform import (
    KIND_COMPONENT,
    KIND_OPERATION,
    ComponentOntology,
    Concept,
    component_ontology_from_json,
    component_ontology_to_json,
    to_component,
)

CLASS_EQUIVALENT = "equivalent"
CLASS_SYNONYM_PAIR = "synonym_pair"
CLASS_HOMONYM_CONFLICT = "homonym_conflict"
CLASS_DISTINCT = "distinct"

CLASSIFICATIONS = (
    CLASS_EQUIVALENT,
    CLASS_SYNONYM_PAIR,
    CLASS_HOMONYM_CONFLICT,
    CLASS_DISTINCT,
)


def classify(names_equal: bool, synonym: bool) -> str:
    """Name a correspondence from name equality and the synonym verdict.

    Equal names that are synonyms are the same thing (equivalent);
    different names that are synonyms are a synonym pair; equal names
    that are not synonyms clash (homonym conflict); the rest are simply
    distinct.
    """
    if synonym:
        return CLASS_EQUIVALENT if names_equal else CLASS_SYNONYM_PAIR
    return CLASS_HOMONYM_CONFLICT if names_equal else CLASS_DISTINCT


@dataclass(frozen=True)
class Endpoint:
    """One side of a correspondence: a root, or one member of a root."""

    source: str
    origin: str
    member: str | None = None

    @property
    def path(self) -> str:
        base = f"{self.source}/{self.origin}"
        return base if self.member is None else f"{base}/{self.member}"


@dataclass(frozen=True)
class Correspondence:
    left: Endpoint
    right: Endpoint
    score: Score
    classification: str


@dataclass(frozen=True)
class Alignment:
    """All pairwise correspondences plus the diagnostics that led there."""

    correspondences: tuple[Correspondence, ...]
    diagnostics: tuple[str, ...] = ()

    @property
    def roots(self) -> tuple[Correspondence, ...]:
        return tuple(c for c in self.correspondences if c.left.member is None)

    @property
    def conflicts(self) -> tuple[Correspondence, ...]:
        return tuple(
            c for c in self.roots if c.classification == CLASS_HOMONYM_CONFLICT
        )


def align(
    graphs: Sequence[ComponentOntology],
    od: DomainOntology,
    *,
    mode: str = MODE_LITERAL,
    recursive: bool = True,
    diagnostics: Iterable[str] = (),
) -> Alignment:
    """Score and classify every cross-source pair of graphs.

    Emits one root correspondence per unordered pair from different
    sources, in input order, plus one member correspondence for every
    matrix cell that scores exactly one.
    """
    corrs: list[Correspondence] = []
    for i in range(len(graphs)):
        for j in range(i + 1, len(graphs)):
            a, b = graphs[i], graphs[j]
            if a.source == b.source:
                continue
            matrix = similarity_matrix(a, b, od, mode=mode, recursive=recursive)
            synonym = matrix.verdict == VERDICT_SYNONYM
            corrs.append(
                Correspondence(
                    Endpoint(a.source, a.origin),
                    Endpoint(b.source, b.origin),
                    matrix.aggregate,
                    classify(a.root.term == b.root.term, synonym),
                )
            )
            for mi, left_member in enumerate(a.root.members):
                for mj, right_member in enumerate(b.root.members):
                    cell = matrix.cells[mi][mj]
                    if cell.is_one:
                        corrs.append(
                            Correspondence(
                                Endpoint(a.source, a.origin, left_member.term),
                                Endpoint(b.source, b.origin, right_member.term),
                                cell,
                                classify(left_member.term == right_member.term, True),
                            )
                        )
    return Alignment(tuple(corrs), tuple(diagnostics))


def detect_naming_conflicts(alignment: Alignment) -> list[Correspondence]:
    """Root-level correspondences that need a naming decision.

    Homonym conflicts (same name, not synonyms) and synonym pairs
    (different names, synonyms), ordered by endpoint paths.
    """
    flagged = [
        c
        for c in alignment.roots
        if c.classification in (CLASS_HOMONYM_CONFLICT, CLASS_SYNONYM_PAIR)
    ]
    flagged.sort(
        key=lambda c: (c.left.source, c.left.origin, c.right.source, c.right.origin)
    )
    return flagged


class _UnionFind:
    def __init__(self, keys: Iterable):
        self.rank = {k: i for i, k in enumerate(keys)}
        self.parent = {k: k for k in self.rank}

    def find(self, key):
        root = key
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[key] != root:
            self.parent[key], key = root, self.parent[key]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        # the earlier key stays representative, keeping output order stable
        if self.rank[rb] < self.rank[ra]:
            ra, rb = rb, ra
        self.parent[rb] = ra


@dataclass(frozen=True)
class MergedRoot:
    """One result graph plus the endpoints it was folded from."""

    ontology: ComponentOntology
    merged_from: tuple[Endpoint, ...]


@dataclass(frozen=True)
class RepresentationOntology:
    """Concept graphs of the merge result, with equivalence links."""

    roots: tuple[MergedRoot, ...]
    equivalences: tuple[tuple[str, str], ...]


@dataclass(frozen=True)
class MergedComponent:
    representation: RepresentationOntology
    result: tuple[BusinessComponent, ...]


def merge(
    alignment: Alignment,
    graphs: Sequence[ComponentOntology],
    od: DomainOntology,
    *,
    mode: str = MODE_LITERAL,
    recursive: bool = True,
) -> MergedComponent:
    """Fold synonym classes into single components and qualify conflicts.

    Every equivalent or synonym_pair root correspondence joins its two
    roots into one class. A multi-root class becomes one component under
    the canonical name (the domain label when a root anchors uniquely,
    otherwise the smallest root term), with synonymous members collapsed
    the same way and interfaces rewritten to canonical names. A root on
    a homonym conflict keeps its members but is renamed
    "<source>.<origin>". Untouched roots pass through unchanged.
    """
    index: dict[tuple[str, str], ComponentOntology] = {}
    for g in graphs:
        key = (g.source, g.origin)
        if key in index:
            raise MergeError(f"duplicate graph for {g.source}/{g.origin}")
        index[key] = g

    def resolve(endpoint: Endpoint) -> tuple[str, str]:
        key = (endpoint.source, endpoint.origin)
        if key not in index:
            raise MergeError(
                f"alignment references {endpoint.source}/{endpoint.origin},"
                " which is not in the merged set"
            )
        return key

    uf = _UnionFind(index)
    conflicted: set[tuple[str, str]] = set()
    for corr in alignment.roots:
        left, right = resolve(corr.left), resolve(corr.right)
        if corr.classification in (CLASS_EQUIVALENT, CLASS_SYNONYM_PAIR):
            uf.union(left, right)
        elif corr.classification == CLASS_HOMONYM_CONFLICT:
            conflicted.add(left)
            conflicted.add(right)

    classes: dict[tuple[str, str], list[ComponentOntology]] = {}
    for key, graph in index.items():
        classes.setdefault(uf.find(key), []).append(graph)

    roots: list[MergedRoot] = []
    equivalences: list[tuple[str, str]] = []
    for members in classes.values():
        if len(members) == 1:
            graph = members[0]
            key = (graph.source, graph.origin)
            if key in conflicted:
                merged = _qualify(graph, od)
            else:
                merged = graph
            roots.append(MergedRoot(merged, (Endpoint(graph.source, graph.origin),)))
            continue
        merged = _merge_class(members, od, mode, recursive, equivalences)
        roots.append(
            MergedRoot(merged, tuple(Endpoint(g.source, g.origin) for g in members))
        )
    return MergedComponent(
        representation=RepresentationOntology(tuple(roots), tuple(equivalences)),
        result=tuple(to_component(r.ontology) for r in roots),
    )


def _qualify(graph: ComponentOntology, od: DomainOntology) -> ComponentOntology:
    name = f"{graph.source}.{graph.origin}"
    root = Concept(
        term=normalize_term(name),
        raw_label=name,
        kind=KIND_COMPONENT,
        definitions=graph.root.definitions,
        members=graph.root.members,
        anchor=graph.root.anchor,
    )
    return ComponentOntology(
        source=graph.source,
        origin=name,
        root=root,
        kind=graph.kind,
        provides=tuple(_canonical_interfaces(graph.provides, od)),
        requires=tuple(_canonical_interfaces(graph.requires, od)),
    )


def _merge_class(
    members: list[ComponentOntology],
    od: DomainOntology,
    mode: str,
    recursive: bool,
    equivalences: list[tuple[str, str]],
) -> ComponentOntology:
    for i in range(len(members)):
        for j in range(i + 1, len(members)):
            equivalences.append((members[i].path, members[j].path))

    raw_name, root_anchor = _canonical_root(members, od)
    merged_members = _merge_members(members, od, mode, recursive, equivalences)

    definitions: list[str] = []
    for g in members:
        for d in g.root.definitions:
            if d not in definitions:
                definitions.append(d)
    kinds = {g.kind for g in members}
    kind = members[0].kind if len(kinds) == 1 else "entity"
    sources = list(dict.fromkeys(g.source for g in members))

    root = Concept(
        term=normalize_term(raw_name),
        raw_label=raw_name,
        kind=KIND_COMPONENT,
        definitions=tuple(definitions),
        members=tuple(merged_members),
        anchor=root_anchor,
    )
    return ComponentOntology(
        source="+".join(sources),
        origin=raw_name,
        root=root,
        kind=kind,
        provides=tuple(
            _canonical_interfaces((p for g in members for p in g.provides), od)
        ),
        requires=tuple(
            _canonical_interfaces((r for g in members for r in g.requires), od)
        ),
    )


def _canonical_root(members: list[ComponentOntology], od: DomainOntology) -> tuple[str, str | None]:
    anchors = {
        g.root.anchor
        for g in members
        if g.root.anchor is not None and od.has_concept(g.root.anchor)
    }
    common = next(iter(anchors)) if len(anchors) == 1 else None
    if anchors:
        label = min(od.label(a) for a in anchors)
        return label, common
    best = min(g.root.term for g in members)
    for g in members:
        if g.root.term == best:
            return g.root.raw_label, common
    raise AssertionError("unreachable")


def _merge_members(
    members: list[ComponentOntology],
    od: DomainOntology,
    mode: str,
    recursive: bool,
    equivalences: list[tuple[str, str]],
) -> list[Concept]:
    entries: list[tuple[int, Concept, str]] = []
    for gi, g in enumerate(members):
        for concept in g.root.members:
            entries.append((gi, concept, f"{g.path}/{concept.term}"))

    uf = _UnionFind(range(len(entries)))
    for i in range(len(entries)):
        for j in range(i + 1, len(entries)):
            gi, ci, _ = entries[i]
            gj, cj, _ = entries[j]
            if gi == gj:
                continue
            if semantic_similarity(ci, cj, od, mode=mode, recursive=recursive).is_one:
                uf.union(i, j)

    groups: dict[int, list[int]] = {}
    for i in range(len(entries)):
        groups.setdefault(uf.find(i), []).append(i)

    for ids in groups.values():
        for a in range(len(ids)):
            for b in range(a + 1, len(ids)):
                equivalences.append((entries[ids[a]][2], entries[ids[b]][2]))

    merged: list[Concept] = []
    seen: set[tuple[str, str]] = set()
    for ids in groups.values():
        group = [entries[i][1] for i in ids]
        concept = _collapse_members(group, od)
        key = (concept.kind, concept.term)
        if key in seen:
            # homonymous representatives: qualify by the first origin
            gi = entries[ids[0]][0]
            qualifier = f"{members[gi].source}.{members[gi].origin}"
            concept = Concept(
                term=normalize_term(f"{qualifier}.{concept.term}"),
                raw_label=f"{qualifier}.{concept.raw_label}",
                kind=concept.kind,
                definitions=concept.definitions,
                members=concept.members,
                anchor=concept.anchor,
            )
            key = (concept.kind, concept.term)
        seen.add(key)
        merged.append(concept)
    return merged


def _collapse_members(group: list[Concept], od: DomainOntology) -> Concept:
    if len(group) == 1:
        return group[0]
    anchors = {c.anchor for c in group if c.anchor is not None and od.has_concept(c.anchor)}
    common = next(iter(anchors)) if len(anchors) == 1 else None
    kind = group[0].kind
    if anchors:
        raw = min(od.label(a) for a in anchors)
        term = normalize_term(raw)
        if kind == KIND_OPERATION and not term.endswith(OPERATION_MARKER):
            term += OPERATION_MARKER
    else:
        term = min(c.term for c in group)
        raw = next(c.raw_label for c in group if c.term == term)
    definitions: list[str] = []
    for c in group:
        for d in c.definitions:
            if d not in definitions:
                definitions.append(d)
    return Concept(
        term=term,
        raw_label=raw,
        kind=kind,
        definitions=tuple(definitions),
        members=group[0].members,
        anchor=common,
    )


def _canonical_interfaces(names: Iterable[str], od: DomainOntology) -> list[str]:
    """Rewrite interface names to domain labels where anchored; dedup."""
    out: list[str] = []
    for name in names:
        term = normalize_term(name)
        found = anchor(term, od)
        if found.kind == ANCHOR_UNIQUE:
            canonical = normalize_term(od.label(found.concepts[0]))
            if term.endswith(OPERATION_MARKER) and not canonical.endswith(OPERATION_MARKER):
                canonical += OPERATION_MARKER
        else:
            canonical = term
        if canonical not in out:
            out.append(canonical)
    return out


_ALIGNMENT_REQ = frozenset({"correspondences", "conflicts", "diagnostics", "ontologies", "domain"})
_ALIGNMENT_OPT = frozenset({"settings"})
_SETTINGS_KEYS = frozenset({"mode", "recursive"})
_CORR_KEYS = frozenset({"left", "right", "score", "class"})
_ENDPOINT_KEYS = frozenset({"source", "origin", "member"})


@dataclass(frozen=True)
class AlignmentDocument:
    """Everything a merge needs, as read back from one alignment file."""

    alignment: Alignment
    graphs: tuple[ComponentOntology, ...]
    domain: DomainOntology
    mode: str = MODE_LITERAL
    recursive: bool = True


def alignment_to_json(
    alignment: Alignment,
    graphs: Sequence[ComponentOntology],
    od: DomainOntology,
    *,
    mode: str = MODE_LITERAL,
    recursive: bool = True,
) -> dict:
    return {
        "correspondences": [_corr_json(c) for c in alignment.correspondences],
        "conflicts": [_corr_json(c) for c in alignment.conflicts],
        "diagnostics": list(alignment.diagnostics),
        "settings": {"mode": mode, "recursive": recursive},
        "ontologies": [component_ontology_to_json(g) for g in graphs],
        "domain": domain_ontology_to_json(od),
    }


def serialize_alignment(
    alignment: Alignment,
    graphs: Sequence[ComponentOntology],
    od: DomainOntology,
    *,
    mode: str = MODE_LITERAL,
    recursive: bool = True,
) -> str:
    """Self-contained alignment document: correspondences, the graphs
    they speak about, the domain ontology needed to merge them, and the
    similarity settings the scores were computed under."""
    return dump_json(alignment_to_json(alignment, graphs, od, mode=mode, recursive=recursive))


def _corr_json(c: Correspondence) -> dict:
    return {
        "left": _endpoint_json(c.left),
        "right": _endpoint_json(c.right),
        "score": str(c.score),
        "class": c.classification,
    }


def _endpoint_json(e: Endpoint) -> dict:
    return {"source": e.source, "origin": e.origin, "member": e.member}


def parse_alignment(document: str, *, source: str = "<alignment>") -> AlignmentDocument:
    """Parse an alignment document back into its parts."""
    data = load_json(document, source)
    if not isinstance(data, dict):
        raise DocumentError(source, ["top level must be an object"])
    problems = check_keys(data, "", _ALIGNMENT_REQ, _ALIGNMENT_OPT)
    if problems:
        raise DocumentError(source, problems)

    mode = MODE_LITERAL
    recursive = True
    settings = data.get("settings")
    if settings is not None:
        if not isinstance(settings, dict):
            problems.append("settings: must be an object")
        else:
            problems += check_keys(settings, "settings", frozenset(), _SETTINGS_KEYS)
            if "mode" in settings:
                if settings["mode"] not in (MODE_LITERAL, MODE_BIPARTITE):
                    problems.append("settings.mode: must be literal or bipartite")
                else:
                    mode = settings["mode"]
            if "recursive" in settings:
                if not isinstance(settings["recursive"], bool):
                    problems.append("settings.recursive: must be a boolean")
                else:
                    recursive = settings["recursive"]

    corrs: list[Correspondence] = []
    raw_corrs = data["correspondences"]
    if not isinstance(raw_corrs, list):
        raise DocumentError(source, ["correspondences: must be a list"])
    for i, item in enumerate(raw_corrs):
        corr = _parse_corr(item, f"correspondences[{i}]", problems)
        if corr is not None:
            corrs.append(corr)

    diagnostics: list[str] = []
    raw_diag = data["diagnostics"]
    if not isinstance(raw_diag, list) or any(not isinstance(d, str) for d in raw_diag):
        problems.append("diagnostics: must be a list of strings")
    else:
        diagnostics = list(raw_diag)

    graphs: list[ComponentOntology] = []
    raw_graphs = data["ontologies"]
    if not isinstance(raw_graphs, list):
        problems.append("ontologies: must be a list")
    else:
        for i, item in enumerate(raw_graphs):
            where = f"ontologies[{i}]"
            if not isinstance(item, dict):
                problems.append(f"{where}: must be an object")
                continue
            try:
                graphs.append(component_ontology_from_json(item, where, source))
            except DocumentError as exc:
                problems.extend(exc.diagnostics)

    domain = None
    if not isinstance(data["domain"], dict):
        problems.append("domain: must be an object")
    else:
        try:
            domain = load_domain_ontology(dump_json(data["domain"]), source=source)
        except DocumentError as exc:
            problems.extend(f"domain: {d}" for d in exc.diagnostics)

    if problems or domain is None:
        raise DocumentError(source, problems or ["domain: missing"])
    return AlignmentDocument(
        alignment=Alignment(tuple(corrs), tuple(diagnostics)),
        graphs=tuple(graphs),
        domain=domain,
        mode=mode,
        recursive=recursive,
    )


def _parse_corr(item, where: str, problems: list[str]) -> Correspondence | None:
    if not isinstance(item, dict):
        problems.append(f"{where}: must be an object")
        return None
    local = check_keys(item, where, _CORR_KEYS, frozenset())
    left = _parse_endpoint(item.get("left"), f"{where}.left", local)
    right = _parse_endpoint(item.get("right"), f"{where}.right", local)
    score = None
    raw_score = item.get("score")
    if "score" in item:
        if not isinstance(raw_score, str):
            local.append(f"{where}.score: must be a string")
        else:
            try:
                score = parse_score(raw_score)
            except ValueError:
                local.append(f"{where}.score: not a rational in [0, 1]")
    classification = item.get("class")
    if "class" in item and classification not in CLASSIFICATIONS:
        local.append(f"{where}.class: must be one of {', '.join(CLASSIFICATIONS)}")
    if local or left is None or right is None or score is None:
        problems += local
        return None
    return Correspondence(left, right, score, classification)


def _parse_endpoint(item, where: str, problems: list[str]) -> Endpoint | None:
    if not isinstance(item, dict):
        problems.append(f"{where}: must be an object")
        return None
    local = check_keys(item, where, _ENDPOINT_KEYS, frozenset())
    for key in ("source", "origin"):
        value = item.get(key)
        if key in item and (not isinstance(value, str) or not value):
            local.append(f"{where}.{key}: must be a non-empty string")
    member = item.get("member")
    if member is not None and not isinstance(member, str):
        local.append(f"{where}.member: must be a string or null")
    if local:
        problems += local
        return None
    return Endpoint(item["source"], item["origin"], member)


def representation_to_json(rep: RepresentationOntology) -> dict:
    roots = []
    for r in rep.roots:
        obj = component_ontology_to_json(r.ontology)
        obj["merged_from"] = [e.path for e in r.merged_from]
        roots.append(obj)
    return {
        "roots": roots,
        "equivalences": [list(pair) for pair in rep.equivalences],
    }


def serialize_representation(rep: RepresentationOntology) -> str:
    return dump_json(representation_to_json(rep))

"""Domain ontology: concept taxonomy, thesaurus, and term normalization.

The thesaurus carries every judgement that plain text comparison cannot
make. A term is anchored to the concept(s) whose entry lists it; two
terms listed under one concept are synonyms of each other, and a single
term listed under two concepts makes those concepts homonyms.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass
from typing import Iterable

from .errors import DocumentError, IntegrationError
from .jsonio import check_keys, dump_json, load_json

OPERATION_MARKER = "()"

ANCHOR_UNIQUE = "unique"
ANCHOR_AMBIGUOUS = "ambiguous"
ANCHOR_NONE = "none"

RELATION_SAME = "same"
RELATION_HOMONYM = "homonym_shared_term"
RELATION_UNRELATED = "unrelated"


def normalize_term(raw: str) -> str:
    """Fold a raw label into its canonical matchable form.

    Unicode is composed (NFC), case is folded, surrounding whitespace is
    dropped and internal runs collapse to single spaces. Accents are
    kept. A single trailing call marker "()" survives, glued to the text
    in front of it, so "Lire ()" becomes "lire()".
    """
    text = unicodedata.normalize("NFC", raw.casefold()).strip()
    marker = text.endswith(OPERATION_MARKER)
    if marker:
        text = text[: -len(OPERATION_MARKER)]
    text = " ".join(text.split())
    return text + OPERATION_MARKER if marker else text


def operation_term(name: str) -> str:
    """Normalized operation term; the call marker is appended if missing."""
    term = normalize_term(name)
    if term.endswith(OPERATION_MARKER):
        return term
    return term + OPERATION_MARKER


def term_stem(term: str) -> str:
    """The term without a trailing call marker."""
    if term.endswith(OPERATION_MARKER):
        return term[: -len(OPERATION_MARKER)].rstrip()
    return term


@dataclass(frozen=True)
class DomainConcept:
    """One concept of the domain model."""

    id: str
    label: str
    parent: str | None = None
    definitions: tuple[str, ...] = ()


@dataclass(frozen=True)
class ThesaurusEntry:
    """The terms that denote one concept; terms are stored normalized."""

    concept: str
    terms: tuple[str, ...]


@dataclass(frozen=True)
class Thesaurus:
    entries: tuple[ThesaurusEntry, ...]


@dataclass(frozen=True)
class AnchorResult:
    """Outcome of resolving a term against the thesaurus.

    kind is one of "unique", "ambiguous" or "none"; concepts holds the
    candidate concept ids (one, several or none respectively).
    """

    kind: str
    concepts: tuple[str, ...] = ()

    def __post_init__(self):
        if self.kind not in (ANCHOR_UNIQUE, ANCHOR_AMBIGUOUS, ANCHOR_NONE):
            raise ValueError(f"bad anchor kind {self.kind!r}")
        if self.kind == ANCHOR_AMBIGUOUS and len(self.concepts) < 2:
            raise ValueError("an ambiguous anchor needs at least two candidates")
        if self.kind == ANCHOR_UNIQUE and len(self.concepts) != 1:
            raise ValueError("a unique anchor needs exactly one concept")


class DomainOntology:
    """Concept taxonomy plus thesaurus, indexed for constant-time lookups.

    Instances never change after construction, so they are safe to share
    across threads and every query is pure.
    """

    def __init__(
        self,
        concepts: Iterable[DomainConcept],
        entries: Iterable[ThesaurusEntry] = (),
        *,
        source: str = "<ontology>",
    ):
        concepts = tuple(concepts)
        problems: list[str] = []
        by_id: dict[str, DomainConcept] = {}
        for c in concepts:
            if not c.id:
                problems.append("concept with empty id")
            elif c.id in by_id:
                problems.append(f"duplicate concept id '{c.id}'")
            else:
                by_id[c.id] = c
            if not normalize_term(c.label):
                problems.append(f"concept '{c.id}': label must be non-empty")
        for c in concepts:
            if c.parent is not None and c.parent not in by_id:
                problems.append(f"concept '{c.id}': parent '{c.parent}' does not exist")
        if not problems:
            problems.extend(_taxonomy_cycles(concepts, by_id))

        # one merged term bucket per concept; explicit duplicates are errors
        merged: dict[str, list[str]] = {c.id: [] for c in concepts}
        for entry in entries:
            if entry.concept not in by_id:
                problems.append(f"thesaurus entry for unknown concept '{entry.concept}'")
                continue
            bucket = merged[entry.concept]
            for raw in entry.terms:
                term = normalize_term(raw)
                if not term:
                    problems.append(f"thesaurus entry '{entry.concept}': empty term")
                elif term in bucket:
                    problems.append(
                        f"thesaurus entry '{entry.concept}': duplicate term '{term}'"
                    )
                else:
                    bucket.append(term)
        if problems:
            raise DocumentError(source, problems)

        for c in concepts:
            label = normalize_term(c.label)
            if label not in merged[c.id]:
                merged[c.id].append(label)

        self.concepts = concepts
        self.thesaurus = Thesaurus(
            tuple(ThesaurusEntry(c.id, tuple(merged[c.id])) for c in concepts)
        )
        self._by_id = by_id
        self._terms_of = {cid: frozenset(terms) for cid, terms in merged.items()}
        by_term: dict[str, list[str]] = {}
        for c in concepts:
            for term in merged[c.id]:
                by_term.setdefault(term, []).append(c.id)
        self._ids_by_term = {t: tuple(ids) for t, ids in by_term.items()}

    def has_concept(self, concept_id: str) -> bool:
        return concept_id in self._by_id

    def concept(self, concept_id: str) -> DomainConcept:
        try:
            return self._by_id[concept_id]
        except KeyError:
            raise IntegrationError(f"unknown concept id '{concept_id}'") from None

    def label(self, concept_id: str) -> str:
        return self.concept(concept_id).label

    def terms_of(self, concept_id: str) -> frozenset[str]:
        self.concept(concept_id)
        return self._terms_of[concept_id]

    def __eq__(self, other):
        if not isinstance(other, DomainOntology):
            return NotImplemented
        return self.concepts == other.concepts and self.thesaurus == other.thesaurus

    def __hash__(self):
        return hash((self.concepts, self.thesaurus))

    def __repr__(self):
        return f"DomainOntology({len(self.concepts)} concepts)"


def _taxonomy_cycles(concepts, by_id) -> list[str]:
    problems = []
    cleared: set[str] = set()
    for c in concepts:
        path: list[str] = []
        on_path: set[str] = set()
        node = c.id
        while node is not None and node not in cleared:
            if node in on_path:
                cycle = path[path.index(node):] + [node]
                problems.append(f"taxonomy cycle: {' -> '.join(cycle)}")
                break
            on_path.add(node)
            path.append(node)
            node = by_id[node].parent
        else:
            cleared.update(on_path)
    return problems


def anchor(term: str, od: DomainOntology) -> AnchorResult:
    """Resolve a term to the concept(s) whose thesaurus entry lists it."""
    ids = od._ids_by_term.get(normalize_term(term), ())
    if not ids:
        return AnchorResult(ANCHOR_NONE)
    if len(ids) == 1:
        return AnchorResult(ANCHOR_UNIQUE, ids)
    return AnchorResult(ANCHOR_AMBIGUOUS, ids)


def relation(a: str, b: str, od: DomainOntology) -> str:
    """How two concepts relate: same, homonym via a shared term, or unrelated."""
    terms_a = od.terms_of(a)
    terms_b = od.terms_of(b)
    if a == b:
        return RELATION_SAME
    if terms_a & terms_b:
        return RELATION_HOMONYM
    return RELATION_UNRELATED


_TOP_KEYS = frozenset({"concepts", "thesaurus"})
_CONCEPT_KEYS_REQ = frozenset({"id", "label"})
_CONCEPT_KEYS_OPT = frozenset({"parent", "definitions"})
_ENTRY_KEYS = frozenset({"concept", "terms"})


def load_domain_ontology(document: str, *, source: str = "<ontology>") -> DomainOntology:
    """Parse an ontology document (strict schema) and build the indexes."""
    data = load_json(document, source)
    problems: list[str] = []
    if not isinstance(data, dict):
        raise DocumentError(source, ["top level must be an object"])
    problems += check_keys(data, "", _TOP_KEYS, frozenset())

    concepts: list[DomainConcept] = []
    raw_concepts = data.get("concepts")
    if raw_concepts is None:
        pass
    elif not isinstance(raw_concepts, list):
        problems.append("concepts: must be a list")
    else:
        for i, item in enumerate(raw_concepts):
            where = f"concepts[{i}]"
            if not isinstance(item, dict):
                problems.append(f"{where}: must be an object")
                continue
            local = check_keys(item, where, _CONCEPT_KEYS_REQ, _CONCEPT_KEYS_OPT)
            cid = item.get("id")
            label = item.get("label")
            parent = item.get("parent")
            if "id" in item and (not isinstance(cid, str) or not cid):
                local.append(f"{where}.id: must be a non-empty string")
            if "label" in item and not isinstance(label, str):
                local.append(f"{where}.label: must be a string")
            if parent is not None and not isinstance(parent, str):
                local.append(f"{where}.parent: must be a string")
            definitions = _string_list(item.get("definitions"), f"{where}.definitions", local)
            problems += local
            if not local:
                concepts.append(DomainConcept(cid, label, parent, definitions))

    entries: list[ThesaurusEntry] = []
    raw_entries = data.get("thesaurus")
    if raw_entries is None:
        pass
    elif not isinstance(raw_entries, list):
        problems.append("thesaurus: must be a list")
    else:
        for i, item in enumerate(raw_entries):
            where = f"thesaurus[{i}]"
            if not isinstance(item, dict):
                problems.append(f"{where}: must be an object")
                continue
            local = check_keys(item, where, _ENTRY_KEYS, frozenset())
            concept_id = item.get("concept")
            if "concept" in item and (not isinstance(concept_id, str) or not concept_id):
                local.append(f"{where}.concept: must be a non-empty string")
            terms = _string_list(item.get("terms"), f"{where}.terms", local)
            problems += local
            if not local:
                entries.append(ThesaurusEntry(concept_id, terms))

    if problems:
        raise DocumentError(source, problems)
    return DomainOntology(concepts, entries, source=source)


def _string_list(value, where: str, problems: list[str]) -> tuple[str, ...]:
    if value is None:
        return ()
    if not isinstance(value, list):
        problems.append(f"{where}: must be a list of strings")
        return ()
    out = []
    for i, s in enumerate(value):
        if not isinstance(s, str):
            problems.append(f"{where}[{i}]: must be a string")
        else:
            out.append(s)
    return tuple(out)


def domain_ontology_to_json(od: DomainOntology) -> dict:
    concepts = []
    for c in od.concepts:
        obj: dict = {"id": c.id, "label": c.label}
        if c.parent is not None:
            obj["parent"] = c.parent
        if c.definitions:
            obj["definitions"] = list(c.definitions)
        concepts.append(obj)
    thesaurus = [
        {"concept": e.concept, "terms": list(e.terms)} for e in od.thesaurus.entries
    ]
    return {"concepts": concepts, "thesaurus": thesaurus}


def serialize_domain_ontology(od: DomainOntology) -> str:
    """Canonical document for an ontology; terms come out normalized."""
    return dump_json(domain_ontology_to_json(od))

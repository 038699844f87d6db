"""Small builders and random generators shared across the tests."""

from __future__ import annotations

import random

from cmfuse import (
    Attribute,
    BusinessComponent,
    ComponentSet,
    Concept,
    DomainConcept,
    DomainOntology,
    KIND_ATTRIBUTE,
    KIND_COMPONENT,
    KIND_OPERATION,
    Operation,
    ThesaurusEntry,
    normalize_term,
)


def atom(term: str, kind: str = KIND_ATTRIBUTE, anchor: str | None = None) -> Concept:
    return Concept(term=normalize_term(term), raw_label=term, kind=kind, anchor=anchor)


def root(term: str, members=(), anchor: str | None = None) -> Concept:
    return Concept(
        term=normalize_term(term),
        raw_label=term,
        kind=KIND_COMPONENT,
        members=tuple(members),
        anchor=anchor,
    )


def component(
    name: str,
    attrs=(),
    ops=(),
    *,
    kind: str = "entity",
    source: str = "S",
    **kwargs,
) -> BusinessComponent:
    return BusinessComponent(
        name=name,
        kind=kind,
        source=source,
        attributes=tuple(Attribute(name=a) for a in attrs),
        operations=tuple(Operation(name=o) for o in ops),
        **kwargs,
    )


def quick_ontology(synsets: dict[str, list[str]]) -> DomainOntology:
    """An ontology from {concept id: [terms]}; the first term is the label."""
    concepts = [DomainConcept(cid, terms[0]) for cid, terms in synsets.items()]
    entries = [ThesaurusEntry(cid, tuple(terms)) for cid, terms in synsets.items()]
    return DomainOntology(concepts, entries)


EMPTY_ONTOLOGY = DomainOntology((), ())


def client_pair() -> tuple[BusinessComponent, BusinessComponent]:
    """Two same-named components that share only one of two attributes."""
    first = component("client", attrs=["nom", "âge"], source="S1")
    second = component("client", attrs=["nom", "prénom"], source="S2")
    return first, second


def random_domain(rng: random.Random) -> tuple[DomainOntology, list[str]]:
    """A small ontology plus the pool of terms it knows about."""
    pool = [f"t{i}" for i in range(12)]
    synsets: dict[str, list[str]] = {}
    start = 0
    cid = 0
    while start < len(pool) and cid < 4:
        width = rng.randrange(1, 4)
        synsets[f"K{cid}"] = pool[start : start + width]
        start += width
        cid += 1
    if rng.random() < 0.3 and len(synsets) >= 2:
        # plant one homonymous term across the first two concepts
        synsets["K1"] = synsets["K1"] + [synsets["K0"][0]]
    return quick_ontology(synsets), pool


def random_concept(
    rng: random.Random, pool: list[str], distinct: bool = False
) -> Concept:
    width = rng.randrange(0, 5)
    terms = (
        rng.sample(pool, width)
        if distinct
        else [rng.choice(pool) for _ in range(width)]
    )
    members = []
    seen = set()
    for t in terms:
        kind = rng.choice((KIND_ATTRIBUTE, KIND_OPERATION))
        term = t + "()" if kind == KIND_OPERATION else t
        if (kind, term) in seen:
            continue
        seen.add((kind, term))
        members.append(atom(term, kind))
    return root(rng.choice(pool), members=tuple(members))


def random_component_set(rng: random.Random, case: int) -> ComponentSet:
    kinds = ("entity", "process", "utility", "data")
    components = []
    for ci in range(rng.randrange(4)):
        stems = rng.sample(
            ["nom", "prénom", "âge", "solde", "titre", "calculer", "vérifier", "lire"],
            rng.randrange(5),
        )
        split = rng.randrange(len(stems) + 1) if stems else 0
        attrs = tuple(
            Attribute(
                name=s,
                datatype=rng.choice([None, "int", "texte"]),
                unit=rng.choice([None, "ans"]),
            )
            for s in stems[:split]
        )
        ops = tuple(
            Operation(name=s, params=tuple(rng.sample(["x", "y"], rng.randrange(3))))
            for s in stems[split:]
        )
        components.append(
            BusinessComponent(
                name=f"Comp{case}_{ci}",
                kind=rng.choice(kinds),
                source="Sys",
                doc=rng.choice([None, "a short doc"]),
                attributes=attrs,
                operations=ops,
                provides=tuple(f"i{k}" for k in range(rng.randrange(3))),
                requires=tuple(f"j{k}" for k in range(rng.randrange(2))),
                anchors={"nom": "K1"} if rng.random() < 0.3 else {},
            )
        )
    return ComponentSet(system="Sys", components=tuple(components))

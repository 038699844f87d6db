"""Shared fixtures: the library scenario used throughout the tests."""

from __future__ import annotations

from pathlib import Path

import pytest

from cmfuse import load_domain_ontology, parse_component_set, to_ontology

FIXTURES = Path(__file__).parent / "fixtures"


def read_fixture(name: str) -> str:
    return (FIXTURES / name).read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def library_ontology():
    return load_domain_ontology(
        read_fixture("library_ontology.json"), source="library_ontology.json"
    )


@pytest.fixture(scope="session")
def biblio1():
    return parse_component_set(read_fixture("biblio1.json"), source="biblio1.json")


@pytest.fixture(scope="session")
def biblio2():
    return parse_component_set(read_fixture("biblio2.json"), source="biblio2.json")


@pytest.fixture(scope="session")
def library_graphs(biblio1, biblio2, library_ontology):
    return [
        to_ontology(c, library_ontology)
        for cs in (biblio1, biblio2)
        for c in cs.components
    ]

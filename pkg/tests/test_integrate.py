"""Alignment, conflict detection and the merge into one result set."""

from __future__ import annotations

import pytest

from cmfuse import (
    CLASS_DISTINCT,
    CLASS_EQUIVALENT,
    CLASS_HOMONYM_CONFLICT,
    CLASS_SYNONYM_PAIR,
    DocumentError,
    Endpoint,
    MergeError,
    Score,
    align,
    classify,
    detect_naming_conflicts,
    merge,
    parse_alignment,
    serialize_alignment,
    serialize_representation,
    to_ontology,
)

from helpers import component, quick_ontology


class TestClassify:
    def test_four_way_table(self):
        assert classify(True, True) == CLASS_EQUIVALENT
        assert classify(False, True) == CLASS_SYNONYM_PAIR
        assert classify(True, False) == CLASS_HOMONYM_CONFLICT
        assert classify(False, False) == CLASS_DISTINCT


class TestEndpoint:
    def test_paths(self):
        assert Endpoint("S", "C").path == "S/C"
        assert Endpoint("S", "C", "nom").path == "S/C/nom"


class TestAlign:
    def test_fixture_root_correspondences(self, library_graphs, library_ontology):
        alignment = align(library_graphs, library_ontology)
        roots = alignment.roots
        assert len(roots) == 4
        by_pair = {(c.left.origin, c.right.origin): c for c in roots}
        personne = by_pair[("Personne", "Lecteur")]
        assert personne.score == Score(1)
        assert personne.classification == CLASS_SYNONYM_PAIR
        clash = by_pair[("Publication", "Publication")]
        assert clash.score == Score(2, 3)
        assert clash.classification == CLASS_HOMONYM_CONFLICT
        assert by_pair[("Personne", "Publication")].classification == CLASS_DISTINCT
        assert by_pair[("Publication", "Lecteur")].classification == CLASS_DISTINCT

    def test_fixture_member_correspondences(self, library_graphs, library_ontology):
        alignment = align(library_graphs, library_ontology)
        members = [c for c in alignment.correspondences if c.left.member is not None]
        assert len(members) == 6
        pairs = {(c.left.path, c.right.path): c.classification for c in members}
        assert pairs[
            ("Biblio1/Personne/consulter()", "Biblio2/Lecteur/lire()")
        ] == CLASS_SYNONYM_PAIR
        assert pairs[
            ("Biblio1/Personne/nom", "Biblio2/Lecteur/nom")
        ] == CLASS_EQUIVALENT
        assert pairs[
            ("Biblio1/Publication/titre", "Biblio2/Publication/titre")
        ] == CLASS_EQUIVALENT
        assert all(c.score == Score(1) for c in members)

    def test_same_source_pairs_are_skipped(self, library_graphs, library_ontology):
        alignment = align(library_graphs, library_ontology)
        for c in alignment.correspondences:
            assert c.left.source != c.right.source

    def test_correspondences_follow_input_order(
        self, library_graphs, library_ontology
    ):
        alignment = align(library_graphs, library_ontology)
        first = alignment.correspondences[0]
        assert (first.left.origin, first.right.origin) == ("Personne", "Lecteur")

    def test_conflicts_property(self, library_graphs, library_ontology):
        alignment = align(library_graphs, library_ontology)
        conflicts = alignment.conflicts
        assert len(conflicts) == 1
        assert conflicts[0].classification == CLASS_HOMONYM_CONFLICT

    def test_diagnostics_ride_along(self, library_graphs, library_ontology):
        alignment = align(
            library_graphs, library_ontology, diagnostics=["note one"]
        )
        assert alignment.diagnostics == ("note one",)


class TestDetect:
    def test_fixture_conflicts_in_path_order(self, library_graphs, library_ontology):
        alignment = align(library_graphs, library_ontology)
        flagged = detect_naming_conflicts(alignment)
        assert [c.classification for c in flagged] == [
            CLASS_SYNONYM_PAIR,
            CLASS_HOMONYM_CONFLICT,
        ]
        assert flagged[0].left.origin == "Personne"
        assert flagged[1].left.origin == "Publication"

    def test_member_level_synonyms_are_not_flagged(
        self, library_graphs, library_ontology
    ):
        alignment = align(library_graphs, library_ontology)
        for c in detect_naming_conflicts(alignment):
            assert c.left.member is None


def merge_fixture(library_graphs, library_ontology):
    alignment = align(library_graphs, library_ontology)
    return merge(alignment, library_graphs, library_ontology)


class TestMerge:
    def test_result_components(self, library_graphs, library_ontology):
        merged = merge_fixture(library_graphs, library_ontology)
        names = [c.name for c in merged.result]
        assert names == ["personne", "Biblio1.Publication", "Biblio2.Publication"]

    def test_synonym_class_collapses(self, library_graphs, library_ontology):
        merged = merge_fixture(library_graphs, library_ontology)
        personne = merged.result[0]
        assert [a.name for a in personne.attributes] == [
            "numéro lecteur",
            "Prénom",
            "Nom",
        ]
        assert [o.term for o in personne.operations] == ["lire()"]
        assert personne.provides == ("lire()",)
        assert personne.kind == "entity"
        assert personne.source == "Biblio1+Biblio2"
        # both docs survive as definitions; the first becomes the doc
        assert personne.doc == "Personne qui consulte les publications en ligne."

    def test_conflicted_roots_are_qualified(self, library_graphs, library_ontology):
        merged = merge_fixture(library_graphs, library_ontology)
        pub1, pub2 = merged.result[1], merged.result[2]
        assert pub1.source == "Biblio1"
        assert [a.name for a in pub1.attributes] == ["titre", "éditeur", "périodicité"]
        assert [a.name for a in pub2.attributes] == ["titre", "éditeur"]
        # requires got rewritten to the canonical interface name
        assert pub1.requires == ("lire()",)
        assert pub2.requires == ("lire()",)

    def test_merged_from_covers_every_input_once(
        self, library_graphs, library_ontology
    ):
        merged = merge_fixture(library_graphs, library_ontology)
        folded = [e.path for r in merged.representation.roots for e in r.merged_from]
        assert sorted(folded) == sorted(g.path for g in library_graphs)

    def test_equivalence_links(self, library_graphs, library_ontology):
        merged = merge_fixture(library_graphs, library_ontology)
        links = merged.representation.equivalences
        assert ("Biblio1/Personne", "Biblio2/Lecteur") in links
        assert (
            "Biblio1/Personne/consulter()",
            "Biblio2/Lecteur/lire()",
        ) in links
        assert len(links) == 5

    def test_merge_is_idempotent(self, library_graphs, library_ontology):
        merged = merge_fixture(library_graphs, library_ontology)
        graphs = [r.ontology for r in merged.representation.roots]
        again = merge(align(graphs, library_ontology), graphs, library_ontology)
        assert again.result == merged.result

    def test_untouched_graph_passes_through(self, library_ontology):
        lone = to_ontology(
            component("Archive", attrs=["cote"], source="S3"), library_ontology
        )
        merged = merge(align([lone], library_ontology), [lone], library_ontology)
        assert merged.representation.roots[0].ontology is lone
        assert merged.result[0].name == "Archive"

    def test_duplicate_graph_rejected(self, library_graphs, library_ontology):
        alignment = align(library_graphs, library_ontology)
        doubled = list(library_graphs) + [library_graphs[0]]
        with pytest.raises(MergeError, match="duplicate graph"):
            merge(alignment, doubled, library_ontology)

    def test_dangling_endpoint_rejected(self, library_graphs, library_ontology):
        alignment = align(library_graphs, library_ontology)
        with pytest.raises(MergeError, match="not in the merged set"):
            merge(alignment, library_graphs[:2], library_ontology)

    def test_uniform_kind_survives_mixed_kind_does_not(self):
        od = quick_ontology({"R": ["x", "y"]})
        a = to_ontology(component("x", kind="process", source="A"), od)
        b = to_ontology(component("y", kind="utility", source="B"), od)
        merged = merge(align([a, b], od), [a, b], od)
        assert merged.result[0].kind == "entity"
        c = to_ontology(component("x", kind="process", source="A"), od)
        d = to_ontology(component("y", kind="process", source="B"), od)
        merged = merge(align([c, d], od), [c, d], od)
        assert merged.result[0].kind == "process"

    def test_homonymous_members_get_qualified(self):
        od = quick_ontology(
            {"R": ["x", "y"], "C1": ["t"], "C2": ["t", "u"], "S": ["c", "d"]}
        )
        left = to_ontology(
            component("x", attrs=["t", "c", "d"], source="A", anchors={"t": "C1"}),
            od,
        )
        right = to_ontology(
            component("y", attrs=["t", "c", "d"], source="B", anchors={"t": "C2"}),
            od,
        )
        merged = merge(align([left, right], od), [left, right], od)
        assert len(merged.result) == 1
        # the synonymous c/d quartet folds to one attribute; the two
        # homonymous t members stay apart, the second source-qualified
        assert [a.name for a in merged.result[0].attributes] == ["t", "c", "B.y.t"]

    def test_transitive_synonyms_fold_into_one_class(self):
        od = quick_ontology({"R": ["x", "y", "z"]})
        graphs = [
            to_ontology(component(n, source=s), od)
            for n, s in (("x", "A"), ("y", "B"), ("z", "C"))
        ]
        merged = merge(align(graphs, od), graphs, od)
        assert len(merged.result) == 1
        assert merged.result[0].name == "x"
        assert merged.result[0].source == "A+B+C"


class TestAlignmentDocument:
    def test_round_trip(self, library_graphs, library_ontology):
        alignment = align(library_graphs, library_ontology, diagnostics=["d1"])
        text = serialize_alignment(
            alignment,
            library_graphs,
            library_ontology,
            mode="bipartite",
            recursive=False,
        )
        doc = parse_alignment(text)
        assert doc.alignment == alignment
        assert doc.graphs == tuple(library_graphs)
        assert doc.domain == library_ontology
        assert doc.mode == "bipartite"
        assert doc.recursive is False

    def test_settings_default_when_absent(self, library_graphs, library_ontology):
        alignment = align(library_graphs, library_ontology)
        text = serialize_alignment(alignment, library_graphs, library_ontology)
        stripped = text.replace(
            '  "settings": {\n    "mode": "literal",\n    "recursive": true\n  },\n',
            "",
        )
        assert "settings" not in stripped
        doc = parse_alignment(stripped)
        assert doc.mode == "literal"
        assert doc.recursive is True

    def test_bad_score_rejected(self, library_graphs, library_ontology):
        alignment = align(library_graphs, library_ontology)
        text = serialize_alignment(alignment, library_graphs, library_ontology)
        with pytest.raises(DocumentError, match="not a rational"):
            parse_alignment(text.replace('"score": "1"', '"score": "1.0"'))

    def test_bad_class_rejected(self, library_graphs, library_ontology):
        alignment = align(library_graphs, library_ontology)
        text = serialize_alignment(alignment, library_graphs, library_ontology)
        with pytest.raises(DocumentError, match="class: must be one of"):
            parse_alignment(text.replace('"class": "distinct"', '"class": "other"'))

    def test_bad_mode_rejected(self, library_graphs, library_ontology):
        alignment = align(library_graphs, library_ontology)
        text = serialize_alignment(alignment, library_graphs, library_ontology)
        with pytest.raises(DocumentError, match="mode: must be literal or bipartite"):
            parse_alignment(text.replace('"mode": "literal"', '"mode": "loose"'))

    def test_unknown_key_rejected(self, library_graphs, library_ontology):
        alignment = align(library_graphs, library_ontology)
        text = serialize_alignment(alignment, library_graphs, library_ontology)
        with pytest.raises(DocumentError, match="unknown key 'extra'"):
            parse_alignment(text.replace('"domain"', '"extra": 1, "domain"', 1))


class TestRepresentationDocument:
    def test_serialized_shape(self, library_graphs, library_ontology):
        merged = merge_fixture(library_graphs, library_ontology)
        text = serialize_representation(merged.representation)
        import json

        data = json.loads(text)
        assert set(data) == {"roots", "equivalences"}
        assert len(data["roots"]) == 3
        assert data["roots"][0]["merged_from"] == [
            "Biblio1/Personne",
            "Biblio2/Lecteur",
        ]
        assert ["Biblio1/Personne", "Biblio2/Lecteur"] in data["equivalences"]

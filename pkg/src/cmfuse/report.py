"""Text and JSON rendering for matrices, alignments and merge results."""

from __future__ import annotations

from typing import Sequence

from .components import ComponentSet
from .integrate import (
    Alignment,
    CLASS_HOMONYM_CONFLICT,
    Correspondence,
    MergedComponent,
    classify,
    detect_naming_conflicts,
)
from .ontology import DomainOntology
from .similarity import SimilarityMatrix, VERDICT_SYNONYM, similarity_matrix
from .transform import ComponentOntology

_RED = "\x1b[31m"
_GREEN = "\x1b[32m"
_YELLOW = "\x1b[33m"
_RESET = "\x1b[0m"


def _paint(text: str, code: str, color: bool) -> str:
    return f"{code}{text}{_RESET}" if color else text


def _verdict_text(verdict: str, color: bool) -> str:
    code = _GREEN if verdict == VERDICT_SYNONYM else _RED
    return _paint(verdict, code, color)


def render_matrix_text(
    left: ComponentOntology,
    right: ComponentOntology,
    matrix: SimilarityMatrix,
    *,
    color: bool = False,
) -> str:
    """A member-by-member score table with the aggregate underneath."""
    corner = f"{left.path} \\ {right.path}"
    headers = [corner, *matrix.right_members]
    rows = [
        [term, *(str(cell) for cell in matrix.cells[i])]
        for i, term in enumerate(matrix.left_members)
    ]
    widths = [
        max(len(str(line[col])) for line in [headers, *rows])
        for col in range(len(headers))
    ]
    out = [" | ".join(h.ljust(w) for h, w in zip(headers, widths)).rstrip()]
    out.append("-+-".join("-" * w for w in widths))
    for row in rows:
        out.append(" | ".join(v.ljust(w) for v, w in zip(row, widths)).rstrip())
    if not rows:
        out.append("(no members)")
    out.append("")
    out.append(f"aggregate: {matrix.aggregate}")
    out.append(f"verdict:   {_verdict_text(matrix.verdict, color)}")
    classification = classify(
        left.root.term == right.root.term, matrix.verdict == VERDICT_SYNONYM
    )
    out.append(f"class:     {_class_text(classification, color)}")
    return "\n".join(out) + "\n"


def _class_text(classification: str, color: bool) -> str:
    if classification == CLASS_HOMONYM_CONFLICT:
        return _paint(classification, _RED, color)
    return classification


def matrix_to_json(
    left: ComponentOntology,
    right: ComponentOntology,
    matrix: SimilarityMatrix,
) -> dict:
    return {
        "left": {"source": left.source, "origin": left.origin},
        "right": {"source": right.source, "origin": right.origin},
        "left_members": list(matrix.left_members),
        "right_members": list(matrix.right_members),
        "cells": [[str(cell) for cell in row] for row in matrix.cells],
        "aggregate": str(matrix.aggregate),
        "verdict": matrix.verdict,
        "class": classify(
            left.root.term == right.root.term, matrix.verdict == VERDICT_SYNONYM
        ),
    }


def _corr_line(c: Correspondence, color: bool) -> str:
    return f"{_class_text(c.classification, color):<18} {c.left.path} ~ {c.right.path} (score {c.score})"


def render_alignment_text(alignment: Alignment, *, color: bool = False) -> str:
    """Roots, flagged conflicts, member matches and diagnostics."""
    out = ["correspondences"]
    roots = alignment.roots
    for c in roots:
        out.append(f"  {_corr_line(c, color)}")
    if not roots:
        out.append("  (none)")
    out.append("")
    out.append("naming conflicts")
    flagged = detect_naming_conflicts(alignment)
    for c in flagged:
        out.append(f"  {_corr_line(c, color)}")
    if not flagged:
        out.append("  (none)")
    members = [c for c in alignment.correspondences if c.left.member is not None]
    if members:
        out.append("")
        out.append("member matches")
        for c in members:
            out.append(f"  {c.left.path} ~ {c.right.path} ({c.classification})")
    if alignment.diagnostics:
        out.append("")
        out.append("diagnostics")
        for d in alignment.diagnostics:
            out.append(f"  {d}")
    return "\n".join(out) + "\n"


def alignment_report_json(alignment: Alignment) -> dict:
    from .integrate import _corr_json

    return {
        "correspondences": [_corr_json(c) for c in alignment.correspondences],
        "conflicts": [_corr_json(c) for c in alignment.conflicts],
        "flagged": [_corr_json(c) for c in detect_naming_conflicts(alignment)],
        "diagnostics": list(alignment.diagnostics),
    }


def render_merge_text(merged: MergedComponent, *, color: bool = False) -> str:
    out = ["merged components"]
    for root in merged.representation.roots:
        graph = root.ontology
        origin_list = ", ".join(e.path for e in root.merged_from)
        out.append(f"  {graph.root.raw_label} ({graph.kind}, from {origin_list})")
        attrs = [m.term for m in graph.root.members if m.kind == "attribute"]
        ops = [m.term for m in graph.root.members if m.kind == "operation"]
        if attrs:
            out.append(f"    attributes: {', '.join(attrs)}")
        if ops:
            out.append(f"    operations: {', '.join(ops)}")
        if graph.provides:
            out.append(f"    provides: {', '.join(graph.provides)}")
        if graph.requires:
            out.append(f"    requires: {', '.join(graph.requires)}")
    if merged.representation.equivalences:
        out.append("")
        out.append("equivalences")
        for a, b in merged.representation.equivalences:
            out.append(f"  {a} == {b}")
    return "\n".join(out) + "\n"


def render_pipeline_report(
    graphs: Sequence[ComponentOntology],
    od: DomainOntology,
    alignment: Alignment,
    merged: MergedComponent,
    result: ComponentSet,
    *,
    mode: str = "literal",
    recursive: bool = True,
) -> str:
    """The full plain-text report written next to the pipeline artifacts."""
    sources: dict[str, int] = {}
    for g in graphs:
        sources[g.source] = sources.get(g.source, 0) + 1
    out = ["semantic integration report", "===========================", ""]
    out.append(
        "inputs: "
        + ", ".join(f"{name} ({count} components)" for name, count in sources.items())
    )
    out.append(f"domain: {len(od.concepts)} concepts")
    out.append("")
    out.append("pair similarity")
    out.append("---------------")
    for i in range(len(graphs)):
        for j in range(i + 1, len(graphs)):
            a, b = graphs[i], graphs[j]
            if a.source == b.source:
                continue
            matrix = similarity_matrix(a, b, od, mode=mode, recursive=recursive)
            out.append("")
            out.append(render_matrix_text(a, b, matrix).rstrip("\n"))
    out.append("")
    out.append("alignment")
    out.append("---------")
    out.append("")
    out.append(render_alignment_text(alignment).rstrip("\n"))
    out.append("")
    out.append("merge")
    out.append("-----")
    out.append("")
    out.append(render_merge_text(merged).rstrip("\n"))
    out.append("")
    out.append(f"result set '{result.system}': {len(result.components)} components")
    return "\n".join(out) + "\n"

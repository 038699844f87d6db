"""Command line front end.

Exit codes: 0 success, 1 usage error, 2 parse or validation failure,
3 conflicts detected under --fail-on-conflict. Output files are written
deterministically; ANSI color on stdout is opt-in via CMFUSE_COLOR=1 and
never reaches files.
"""

from __future__ import annotations

import argparse
import os
import re
import sys
from dataclasses import dataclass
from pathlib import Path

from .components import (
    ComponentSet,
    check_layering,
    parse_component_set,
    serialize_component_set,
    union,
)
from .errors import IntegrationError
from .integrate import (
    Alignment,
    CLASS_HOMONYM_CONFLICT,
    align,
    classify,
    merge,
    parse_alignment,
    serialize_alignment,
    serialize_representation,
)
from .jsonio import dump_json, load_json
from .ontology import DomainOntology, load_domain_ontology
from .report import (
    alignment_report_json,
    matrix_to_json,
    render_alignment_text,
    render_matrix_text,
    render_merge_text,
    render_pipeline_report,
)
from .similarity import MODE_BIPARTITE, MODE_LITERAL, VERDICT_SYNONYM, similarity_matrix
from .transform import ComponentOntology, parse_component_ontology, serialize_component_ontology, to_ontology

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_CONFLICT = 3


@dataclass(frozen=True)
class RunConfig:
    """Knobs shared by the similarity-driven commands.

    The defaults (literal aggregation, recursive semantics) are the
    reference behavior; every documented score assumes them.
    """

    mode: str = MODE_LITERAL
    recursive: bool = True
    fail_on_conflict: bool = False
    fmt: str = "text"


class _Parser(argparse.ArgumentParser):
    # the exit-code contract reserves 2 for input errors; argparse
    # defaults to 2 for usage, so remap
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_similarity_flags(parser: argparse.ArgumentParser):
    parser.add_argument(
        "--mode",
        choices=[MODE_LITERAL, MODE_BIPARTITE],
        default=MODE_LITERAL,
        help="member aggregation: literal sum or best one-to-one matching",
    )
    parser.add_argument(
        "--no-recursive-semantics",
        action="store_true",
        help="stop semantic recursion into members; undecided pairs fall back to syntactic scores",
    )
    parser.add_argument(
        "--fail-on-conflict",
        action="store_true",
        help="exit with status 3 when a homonym conflict is detected",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cmfuse", description="Semantic integration of business component models.")
    sub = parser.add_subparsers(dest="command", metavar="command")
    sub.required = True

    p = sub.add_parser("validate", help="parse documents and report every violation")
    p.add_argument("files", nargs="+", metavar="file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("transform", help="write the concept graph of every component")
    p.add_argument("set", metavar="component-set")
    p.add_argument("--domain", required=True, metavar="ontology")
    p.add_argument("-o", "--out", required=True, metavar="dir")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("sim", help="compare two concept graphs")
    p.add_argument("left", metavar="graphA")
    p.add_argument("right", metavar="graphB")
    p.add_argument("--domain", required=True, metavar="ontology")
    _add_similarity_flags(p)
    p.add_argument("--format", choices=["json", "text"], default="text")
    p.set_defaults(func=cmd_sim)

    p = sub.add_parser("align", help="score and classify every cross-source pair")
    p.add_argument("seta", metavar="component-setA")
    p.add_argument("setb", metavar="component-setB")
    p.add_argument("--domain", required=True, metavar="ontology")
    p.add_argument("-o", "--out", required=True, metavar="dir")
    _add_similarity_flags(p)
    p.set_defaults(func=cmd_align)

    p = sub.add_parser("merge", help="fold an alignment into a result component set")
    p.add_argument("alignment", metavar="alignment.json")
    p.add_argument("-o", "--out", required=True, metavar="dir")
    p.set_defaults(func=cmd_merge)

    p = sub.add_parser("report", help="print an alignment document")
    p.add_argument("alignment", metavar="alignment.json")
    p.add_argument("--format", choices=["json", "text"], default="text")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("pipeline", help="align, merge and report in one run")
    p.add_argument("seta", metavar="component-setA")
    p.add_argument("setb", metavar="component-setB")
    p.add_argument("--domain", required=True, metavar="ontology")
    p.add_argument("-o", "--out", required=True, metavar="dir")
    _add_similarity_flags(p)
    p.set_defaults(func=cmd_pipeline)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except IntegrationError as exc:
        for line in str(exc).splitlines():
            print(f"cmfuse: error: {line}", file=sys.stderr)
        return EXIT_INPUT


def _color_enabled() -> bool:
    return os.environ.get("CMFUSE_COLOR") == "1"


def _config(args) -> RunConfig:
    return RunConfig(
        mode=args.mode,
        recursive=not args.no_recursive_semantics,
        fail_on_conflict=args.fail_on_conflict,
        fmt=getattr(args, "format", "text"),
    )


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise IntegrationError(f"{path}: cannot read: {exc.strerror or exc}") from None


def _write(directory: Path, name: str, text: str) -> Path:
    directory.mkdir(parents=True, exist_ok=True)
    target = directory / name
    target.write_text(text, encoding="utf-8")
    return target


def _load_domain(path: str) -> DomainOntology:
    return load_domain_ontology(_read(path), source=path)


def _load_set(path: str) -> ComponentSet:
    return parse_component_set(_read(path), source=path)


def _slug(text: str) -> str:
    return re.sub(r"[^\w.()-]+", "_", text, flags=re.UNICODE)


def cmd_validate(args) -> int:
    """Parse every input; diagnostics carry the file and position."""
    failed = False
    for path in args.files:
        try:
            document = _read(path)
            data = load_json(document, path)
            kind = _sniff(data)
            if kind == "component set":
                cs = parse_component_set(document, source=path)
                detail = f"{len(cs.components)} components"
                for warning in check_layering(cs):
                    print(f"warning: {path}: {warning}")
            elif kind == "ontology":
                od = load_domain_ontology(document, source=path)
                detail = f"{len(od.concepts)} concepts"
            elif kind == "concept graph":
                graph = parse_component_ontology(document, source=path)
                detail = f"{len(graph.root.members)} members"
            elif kind == "alignment":
                doc = parse_alignment(document, source=path)
                detail = (
                    f"{len(doc.alignment.correspondences)} correspondences,"
                    f" {len(doc.graphs)} graphs"
                )
            else:
                print(f"error: {path}: unrecognized document shape")
                failed = True
                continue
            print(f"ok: {path}: {kind}, {detail}")
        except IntegrationError as exc:
            for line in str(exc).splitlines():
                print(f"error: {line}")
            failed = True
    return EXIT_INPUT if failed else EXIT_OK


def _sniff(data) -> str | None:
    if not isinstance(data, dict):
        return None
    if "system" in data or "components" in data:
        return "component set"
    if "concepts" in data or "thesaurus" in data:
        return "ontology"
    if "root" in data:
        return "concept graph"
    if "correspondences" in data:
        return "alignment"
    return None


def cmd_transform(args) -> int:
    domain = _load_domain(args.domain)
    cs = _load_set(args.set)
    out = Path(args.out)
    diagnostics: list[str] = []
    for component in cs.components:
        graph = to_ontology(component, domain, diagnostics=diagnostics)
        name = f"{_slug(graph.source)}.{_slug(graph.origin)}.ocm.json"
        target = _write(out, name, serialize_component_ontology(graph))
        print(target)
    for d in diagnostics:
        print(f"warning: {d}", file=sys.stderr)
    return EXIT_OK


def cmd_sim(args) -> int:
    config = _config(args)
    domain = _load_domain(args.domain)
    left = parse_component_ontology(_read(args.left), source=args.left)
    right = parse_component_ontology(_read(args.right), source=args.right)
    matrix = similarity_matrix(
        left, right, domain, mode=config.mode, recursive=config.recursive
    )
    if config.fmt == "json":
        print(dump_json(matrix_to_json(left, right, matrix)), end="")
    else:
        print(render_matrix_text(left, right, matrix, color=_color_enabled()), end="")
    classification = classify(
        left.root.term == right.root.term, matrix.verdict == VERDICT_SYNONYM
    )
    if config.fail_on_conflict and classification == CLASS_HOMONYM_CONFLICT:
        return EXIT_CONFLICT
    return EXIT_OK


def _aligned_graphs(
    seta: str, setb: str, domain_path: str, config: RunConfig
) -> tuple[list[ComponentOntology], DomainOntology, Alignment]:
    domain = _load_domain(domain_path)
    merged_set = union(_load_set(seta), _load_set(setb))
    diagnostics = list(check_layering(merged_set))
    graphs = [
        to_ontology(component, domain, diagnostics=diagnostics)
        for component in merged_set.components
    ]
    alignment = align(
        graphs, domain, mode=config.mode, recursive=config.recursive, diagnostics=diagnostics
    )
    return graphs, domain, alignment


def cmd_align(args) -> int:
    config = _config(args)
    graphs, domain, alignment = _aligned_graphs(args.seta, args.setb, args.domain, config)
    document = serialize_alignment(
        alignment, graphs, domain, mode=config.mode, recursive=config.recursive
    )
    target = _write(Path(args.out), "alignment.json", document)
    print(target)
    flagged = alignment.conflicts
    if flagged:
        print(f"{len(flagged)} homonym conflict(s) detected", file=sys.stderr)
        if config.fail_on_conflict:
            return EXIT_CONFLICT
    return EXIT_OK


def cmd_merge(args) -> int:
    doc = parse_alignment(_read(args.alignment), source=args.alignment)
    merged = merge(
        doc.alignment, doc.graphs, doc.domain, mode=doc.mode, recursive=doc.recursive
    )
    out = Path(args.out)
    result = ComponentSet(
        system=_result_system(doc.graphs),
        components=merged.result,
    )
    print(_write(out, "ocm_r.json", serialize_representation(merged.representation)))
    print(_write(out, "cm_r.json", serialize_component_set(result)))
    return EXIT_OK


def _result_system(graphs) -> str:
    sources = list(dict.fromkeys(g.source for g in graphs))
    return "+".join(sources) if sources else "empty"


def cmd_report(args) -> int:
    doc = parse_alignment(_read(args.alignment), source=args.alignment)
    if getattr(args, "format", "text") == "json":
        print(dump_json(alignment_report_json(doc.alignment)), end="")
    else:
        print(render_alignment_text(doc.alignment, color=_color_enabled()), end="")
    return EXIT_OK


def cmd_pipeline(args) -> int:
    """Transform, align, merge and report in one deterministic run."""
    config = _config(args)
    graphs, domain, alignment = _aligned_graphs(args.seta, args.setb, args.domain, config)
    merged = merge(alignment, graphs, domain, mode=config.mode, recursive=config.recursive)
    result = ComponentSet(system=_result_system(graphs), components=merged.result)
    out = Path(args.out)
    document = serialize_alignment(
        alignment, graphs, domain, mode=config.mode, recursive=config.recursive
    )
    print(_write(out, "alignment.json", document))
    print(_write(out, "ocm_r.json", serialize_representation(merged.representation)))
    print(_write(out, "cm_r.json", serialize_component_set(result)))
    report = render_pipeline_report(
        graphs, domain, alignment, merged, result, mode=config.mode, recursive=config.recursive
    )
    print(_write(out, "report.txt", report))
    flagged = alignment.conflicts
    if flagged:
        print(f"{len(flagged)} homonym conflict(s) detected", file=sys.stderr)
        if config.fail_on_conflict:
            return EXIT_CONFLICT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

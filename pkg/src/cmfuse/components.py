"""Business component model: parsing, validation, union and layering checks."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .errors import DocumentError
from .jsonio import check_keys, dump_json, load_json
from .ontology import normalize_term, operation_term, term_stem

KINDS = ("entity", "process", "utility", "data")

# architectural layers, top to bottom
_LAYER = {"process": 3, "entity": 2, "utility": 1, "data": 0}


@dataclass(frozen=True)
class Attribute:
    name: str
    datatype: str | None = None
    unit: str | None = None

    def __post_init__(self):
        if not normalize_term(self.name):
            raise DocumentError("<attribute>", ["name must be non-empty"])

    @property
    def term(self) -> str:
        return normalize_term(self.name)


@dataclass(frozen=True)
class Operation:
    name: str
    params: tuple[str, ...] = ()
    returns: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "params", tuple(self.params))
        if not term_stem(operation_term(self.name)):
            raise DocumentError("<operation>", ["name must be non-empty"])

    @property
    def term(self) -> str:
        return operation_term(self.name)


@dataclass(frozen=True)
class BusinessComponent:
    """One component of a source system.

    Attribute terms must be pairwise distinct, operation terms likewise,
    and no operation may share its stem with an attribute; those three
    rules keep member terms unambiguous inside one component.
    """

    name: str
    kind: str
    source: str
    doc: str | None = None
    attributes: tuple[Attribute, ...] = ()
    operations: tuple[Operation, ...] = ()
    provides: tuple[str, ...] = ()
    requires: tuple[str, ...] = ()
    anchors: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "attributes", tuple(self.attributes))
        object.__setattr__(self, "operations", tuple(self.operations))
        object.__setattr__(self, "provides", tuple(self.provides))
        object.__setattr__(self, "requires", tuple(self.requires))
        object.__setattr__(self, "anchors", dict(self.anchors))
        problems = _component_problems(self)
        if problems:
            raise DocumentError("<component>", problems)

    @property
    def term(self) -> str:
        return normalize_term(self.name)


def _component_problems(c: BusinessComponent) -> list[str]:
    problems = []
    if not normalize_term(c.name):
        problems.append("name must be non-empty")
    if c.kind not in KINDS:
        problems.append(f"unknown kind '{c.kind}' (expected one of {', '.join(KINDS)})")
    if not c.source:
        problems.append("source must be non-empty")
    seen_attr: set[str] = set()
    for a in c.attributes:
        if a.term in seen_attr:
            problems.append(f"duplicate attribute term '{a.term}'")
        seen_attr.add(a.term)
    seen_op: set[str] = set()
    for o in c.operations:
        if o.term in seen_op:
            problems.append(f"duplicate operation term '{o.term}'")
        seen_op.add(o.term)
    attr_stems = {term_stem(t) for t in seen_attr}
    for t in sorted(seen_op):
        if term_stem(t) in attr_stems:
            problems.append(f"operation '{t}' shares its term with an attribute")
    return problems


@dataclass(frozen=True)
class ComponentSet:
    """Candidate components of one or more source systems.

    (source, normalized name) identifies a component uniquely within a
    set.
    """

    system: str
    components: tuple[BusinessComponent, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        problems = []
        if not self.system:
            problems.append("system must be non-empty")
        seen: set[tuple[str, str]] = set()
        for c in self.components:
            key = (c.source, c.term)
            if key in seen:
                problems.append(f"duplicate component '{c.name}' for source '{c.source}'")
            seen.add(key)
        if problems:
            raise DocumentError("<component-set>", problems)


_TOP_KEYS = frozenset({"system", "components"})
_COMPONENT_REQ = frozenset({"name", "kind", "attributes", "operations"})
_COMPONENT_OPT = frozenset({"doc", "provides", "requires", "anchors"})
_ATTRIBUTE_REQ = frozenset({"name"})
_ATTRIBUTE_OPT = frozenset({"datatype", "unit"})
_OPERATION_REQ = frozenset({"name"})
_OPERATION_OPT = frozenset({"params", "returns"})


def parse_component_set(document: str, *, source: str = "<component-set>") -> ComponentSet:
    """Parse a component-set document under the strict schema.

    Every violation is collected before the error is raised, so one run
    reports them all, each tagged with its JSON path.
    """
    data = load_json(document, source)
    if not isinstance(data, dict):
        raise DocumentError(source, ["top level must be an object"])
    problems = check_keys(data, "", _TOP_KEYS, frozenset())

    system = data.get("system")
    if "system" in data and (not isinstance(system, str) or not system):
        problems.append("system: must be a non-empty string")
        system = ""
    system = system or ""

    components: list[BusinessComponent] = []
    raw = data.get("components")
    if raw is None:
        pass
    elif not isinstance(raw, list):
        problems.append("components: must be a list")
    else:
        for i, item in enumerate(raw):
            comp = _parse_component(item, f"components[{i}]", system, problems)
            if comp is not None:
                components.append(comp)

    if not problems:
        seen: dict[tuple[str, str], int] = {}
        for i, c in enumerate(components):
            key = (c.source, c.term)
            if key in seen:
                problems.append(
                    f"components[{i}]: duplicate component '{c.name}'"
                    f" (already declared at components[{seen[key]}])"
                )
            else:
                seen[key] = i
    if problems:
        raise DocumentError(source, problems)
    return ComponentSet(system=system, components=tuple(components))


def _parse_component(item, where: str, system: str, problems: list[str]):
    if not isinstance(item, dict):
        problems.append(f"{where}: must be an object")
        return None
    local = check_keys(item, where, _COMPONENT_REQ, _COMPONENT_OPT)

    name = item.get("name")
    if "name" in item and not isinstance(name, str):
        local.append(f"{where}.name: must be a string")
        name = ""
    kind = item.get("kind")
    if "kind" in item and not isinstance(kind, str):
        local.append(f"{where}.kind: must be a string")
        kind = ""
    doc = item.get("doc")
    if doc is not None and not isinstance(doc, str):
        local.append(f"{where}.doc: must be a string")
        doc = None

    attributes: list[Attribute] = []
    raw_attrs = item.get("attributes")
    if raw_attrs is not None and not isinstance(raw_attrs, list):
        local.append(f"{where}.attributes: must be a list")
    elif raw_attrs:
        for j, a in enumerate(raw_attrs):
            attr = _parse_attribute(a, f"{where}.attributes[{j}]", local)
            if attr is not None:
                attributes.append(attr)

    operations: list[Operation] = []
    raw_ops = item.get("operations")
    if raw_ops is not None and not isinstance(raw_ops, list):
        local.append(f"{where}.operations: must be a list")
    elif raw_ops:
        for j, o in enumerate(raw_ops):
            op = _parse_operation(o, f"{where}.operations[{j}]", local)
            if op is not None:
                operations.append(op)

    provides = _interface_list(item.get("provides"), f"{where}.provides", local)
    requires = _interface_list(item.get("requires"), f"{where}.requires", local)

    anchors: dict[str, str] = {}
    raw_anchors = item.get("anchors")
    if raw_anchors is not None and not isinstance(raw_anchors, dict):
        local.append(f"{where}.anchors: must be an object")
    elif raw_anchors:
        for k, v in raw_anchors.items():
            if not isinstance(v, str) or not v:
                local.append(f"{where}.anchors['{k}']: must be a non-empty concept id")
            else:
                anchors[normalize_term(k)] = v

    if local:
        problems += local
        return None
    try:
        return BusinessComponent(
            name=name,
            kind=kind,
            source=system,
            doc=doc,
            attributes=tuple(attributes),
            operations=tuple(operations),
            provides=provides,
            requires=requires,
            anchors=anchors,
        )
    except DocumentError as exc:
        problems.extend(f"{where}: {d}" for d in exc.diagnostics)
        return None


def _parse_attribute(item, where: str, problems: list[str]):
    if not isinstance(item, dict):
        problems.append(f"{where}: must be an object")
        return None
    local = check_keys(item, where, _ATTRIBUTE_REQ, _ATTRIBUTE_OPT)
    name = item.get("name")
    if "name" in item and not isinstance(name, str):
        local.append(f"{where}.name: must be a string")
    for key in ("datatype", "unit"):
        if item.get(key) is not None and not isinstance(item[key], str):
            local.append(f"{where}.{key}: must be a string")
    if local:
        problems += local
        return None
    try:
        return Attribute(name=name, datatype=item.get("datatype"), unit=item.get("unit"))
    except DocumentError as exc:
        problems.extend(f"{where}: {d}" for d in exc.diagnostics)
        return None


def _parse_operation(item, where: str, problems: list[str]):
    if not isinstance(item, dict):
        problems.append(f"{where}: must be an object")
        return None
    local = check_keys(item, where, _OPERATION_REQ, _OPERATION_OPT)
    name = item.get("name")
    if "name" in item and not isinstance(name, str):
        local.append(f"{where}.name: must be a string")
    params = item.get("params")
    if params is not None and (
        not isinstance(params, list) or any(not isinstance(p, str) for p in params)
    ):
        local.append(f"{where}.params: must be a list of strings")
        params = None
    returns = item.get("returns")
    if returns is not None and not isinstance(returns, str):
        local.append(f"{where}.returns: must be a string")
    if local:
        problems += local
        return None
    try:
        return Operation(name=name, params=tuple(params or ()), returns=returns)
    except DocumentError as exc:
        problems.extend(f"{where}: {d}" for d in exc.diagnostics)
        return None


def _interface_list(value, where: str, problems: list[str]) -> tuple[str, ...]:
    if value is None:
        return ()
    if not isinstance(value, list):
        problems.append(f"{where}: must be a list of strings")
        return ()
    out = []
    for i, s in enumerate(value):
        if not isinstance(s, str) or not normalize_term(s):
            problems.append(f"{where}[{i}]: must be a non-empty string")
        else:
            out.append(s)
    return tuple(out)


def component_set_to_json(cs: ComponentSet) -> dict:
    return {
        "system": cs.system,
        "components": [_component_json(c) for c in cs.components],
    }


def _component_json(c: BusinessComponent) -> dict:
    obj: dict = {"name": c.name, "kind": c.kind}
    if c.doc is not None:
        obj["doc"] = c.doc
    obj["attributes"] = [_attribute_json(a) for a in c.attributes]
    obj["operations"] = [_operation_json(o) for o in c.operations]
    if c.provides:
        obj["provides"] = list(c.provides)
    if c.requires:
        obj["requires"] = list(c.requires)
    if c.anchors:
        obj["anchors"] = {k: c.anchors[k] for k in sorted(c.anchors)}
    return obj


def _attribute_json(a: Attribute) -> dict:
    obj: dict = {"name": a.name}
    if a.datatype is not None:
        obj["datatype"] = a.datatype
    if a.unit is not None:
        obj["unit"] = a.unit
    return obj


def _operation_json(o: Operation) -> dict:
    obj: dict = {"name": o.name}
    if o.params:
        obj["params"] = list(o.params)
    if o.returns is not None:
        obj["returns"] = o.returns
    return obj


def serialize_component_set(cs: ComponentSet) -> str:
    """Canonical document for a component set.

    The file format records a single system label, so per-component
    sources of a mixed-source set (a union or a merge result) are not
    round-tripped; reparsing assigns every component the set's system.
    """
    return dump_json(component_set_to_json(cs))


def union(a: ComponentSet, b: ComponentSet) -> ComponentSet:
    """Concatenate two candidate sets, preserving each component's source.

    Identical (source, name) pairs across the inputs collide and raise.
    """
    if a.system == b.system:
        system = a.system
    elif not a.components:
        system = b.system
    elif not b.components:
        system = a.system
    else:
        system = f"{a.system}+{b.system}"
    return ComponentSet(system=system, components=a.components + b.components)


def check_layering(cs: ComponentSet) -> list[str]:
    """Warn when a component requires an interface provided above its layer.

    Layer order, top to bottom: process, entity, utility, data. The scan
    is advisory; it returns warnings and never fails.
    """
    providers: dict[str, list[BusinessComponent]] = {}
    for comp in cs.components:
        for name in comp.provides:
            providers.setdefault(normalize_term(name), []).append(comp)
    warnings = []
    for comp in cs.components:
        for name in comp.requires:
            for provider in providers.get(normalize_term(name), []):
                if provider is comp:
                    continue
                if _LAYER[comp.kind] < _LAYER[provider.kind]:
                    warnings.append(
                        f"{comp.source}/{comp.name} ({comp.kind}) requires '{name}'"
                        f" provided by {provider.source}/{provider.name}"
                        f" ({provider.kind}), which sits on a higher layer"
                    )
    return warnings

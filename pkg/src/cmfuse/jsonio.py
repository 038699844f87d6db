"""Strict JSON helpers shared by the file-format parsers and writers."""

from __future__ import annotations

import json
from typing import Any

from .errors import DocumentError


def load_json(document: str, source: str) -> Any:
    """Parse a JSON document, reporting syntax errors with line and column."""
    try:
        return json.loads(document)
    except json.JSONDecodeError as exc:
        raise DocumentError(
            source, [f"syntax error at line {exc.lineno}, column {exc.colno}: {exc.msg}"]
        ) from None


def dump_json(obj: Any) -> str:
    """Canonical serialization: UTF-8 text, two-space indent, trailing newline."""
    return json.dumps(obj, ensure_ascii=False, indent=2) + "\n"


def check_keys(obj: dict, where: str, required: frozenset, optional: frozenset) -> list[str]:
    """Diagnostics for missing required keys and for keys outside the schema."""
    prefix = f"{where}: " if where else ""
    problems = [f"{prefix}missing required key '{k}'" for k in sorted(required - obj.keys())]
    problems += [
        f"{prefix}unknown key '{k}'" for k in sorted(obj.keys() - required - optional)
    ]
    return problems

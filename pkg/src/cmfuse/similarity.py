"""Syntactic and semantic similarity between concepts, with exact scores.

Two layers of comparison share one shape. The syntactic layer only sees
normalized terms: atomic concepts match when term and kind agree, and
composite concepts average the pairwise member scores over the larger
arity, clamped at one. The semantic layer asks the domain ontology
first: two concepts anchored to the same domain concept score one, two
concepts anchored to homonymous domain concepts score zero, and only
when the ontology has no verdict does the comparison fall back to
member recursion and finally to the syntactic layer.

Scores are exact rationals. The synonym verdict is equality to exactly
one, which floats cannot promise, so Score never leaves the rational
domain.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction

from .assignment import max_assignment
from .ontology import ANCHOR_UNIQUE, DomainOntology, RELATION_HOMONYM, RELATION_SAME, anchor, relation
from .transform import Concept, ComponentOntology

MODE_LITERAL = "literal"
MODE_BIPARTITE = "bipartite"

VERDICT_SYNONYM = "synonym"
VERDICT_NOT_SYNONYM = "not_synonym"

_F0 = Fraction(0)
_F1 = Fraction(1)


@dataclass(frozen=True)
class Score:
    """Exact rational similarity value in [0, 1], kept in lowest terms."""

    num: int
    den: int = 1

    def __post_init__(self):
        if self.den <= 0:
            raise ValueError("denominator must be positive")
        if not 0 <= self.num <= self.den:
            raise ValueError(f"similarity {self.num}/{self.den} out of range")
        g = math.gcd(self.num, self.den)
        if g > 1:
            object.__setattr__(self, "num", self.num // g)
            object.__setattr__(self, "den", self.den // g)

    @classmethod
    def from_fraction(cls, value: Fraction) -> Score:
        return cls(value.numerator, value.denominator)

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.num, self.den)

    @property
    def is_one(self) -> bool:
        return self.num == self.den

    def __str__(self) -> str:
        if self.num == 0:
            return "0"
        if self.num == self.den:
            return "1"
        return f"{self.num}/{self.den}"


ZERO = Score(0)
ONE = Score(1)

_SCORE_RE = re.compile(r"^(\d+)(?:/(\d+))?$")


def parse_score(text: str) -> Score:
    """Parse the serialized form: "0", "1", or "num/den" in lowest terms."""
    m = _SCORE_RE.match(text)
    if not m:
        raise ValueError(f"bad score {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) else 1
    if den == 0:
        raise ValueError(f"bad score {text!r}")
    return Score(num, den)


@dataclass(frozen=True)
class SimilarityMatrix:
    """Member-by-member scores of two concept graphs plus the verdict."""

    left_members: tuple[str, ...]
    right_members: tuple[str, ...]
    cells: tuple[tuple[Score, ...], ...]
    aggregate: Score
    verdict: str


def syntactic_similarity(c1: Concept, c2: Concept) -> Score:
    """Term-level similarity; the ontology plays no part."""
    return Score.from_fraction(_syntactic(c1, c2))


def _syntactic(c1: Concept, c2: Concept) -> Fraction:
    if c1.kind != c2.kind:
        return _F0
    if c1.is_atomic and c2.is_atomic:
        return _F1 if c1.term == c2.term else _F0
    m1 = c1.members or (c1,)
    m2 = c2.members or (c2,)
    total = sum(_syntactic(a, b) for a in m1 for b in m2)
    return min(_F1, total / max(len(m1), len(m2)))


def semantic_similarity(
    c1: Concept,
    c2: Concept,
    od: DomainOntology,
    *,
    mode: str = MODE_LITERAL,
    recursive: bool = True,
) -> Score:
    """Ontology-aware similarity.

    Anchored concepts are judged by their domain concepts: same concept
    scores one, homonymous concepts score zero, unrelated atomic
    concepts score zero. Composite pairs the ontology leaves undecided
    recurse over members (unless recursion is disabled), and anything
    still open falls back to the syntactic layer.
    """
    return Score.from_fraction(_semantic(c1, c2, od, mode, recursive))


def _semantic(c1, c2, od, mode, recursive) -> Fraction:
    if c1.kind != c2.kind:
        return _F0
    a1 = _effective_anchor(c1, od)
    a2 = _effective_anchor(c2, od)
    if a1 is not None and a2 is not None:
        rel = relation(a1, a2, od)
        if rel == RELATION_SAME:
            return _F1
        if rel == RELATION_HOMONYM:
            return _F0
        if c1.is_atomic and c2.is_atomic:
            return _F0
    if recursive and not c1.is_atomic and not c2.is_atomic:
        cells = [[_semantic(a, b, od, mode, recursive) for b in c2.members] for a in c1.members]
        return _aggregate(cells, len(c1.members), len(c2.members), mode)
    return _syntactic(c1, c2)


def _effective_anchor(c: Concept, od: DomainOntology) -> str | None:
    if c.anchor is not None:
        return c.anchor if od.has_concept(c.anchor) else None
    found = anchor(c.term, od)
    if found.kind == ANCHOR_UNIQUE:
        return found.concepts[0]
    return None


def _aggregate(cells, n1: int, n2: int, mode: str) -> Fraction:
    arity = max(n1, n2)
    if mode == MODE_LITERAL:
        total = sum(value for row in cells for value in row)
        return min(_F1, total / arity)
    if mode != MODE_BIPARTITE:
        raise ValueError(f"unknown mode {mode!r}")
    value, _ = max_assignment(cells)
    return value / arity


def similarity_matrix(
    a: ComponentOntology,
    b: ComponentOntology,
    od: DomainOntology,
    *,
    mode: str = MODE_LITERAL,
    recursive: bool = True,
) -> SimilarityMatrix:
    """Score every member pair of two graphs and aggregate the verdict.

    Two empty-membered graphs are judged by their roots alone; an empty
    side against a non-empty one scores zero.
    """
    m1 = a.root.members
    m2 = b.root.members
    cells = [[_semantic(x, y, od, mode, recursive) for y in m2] for x in m1]
    if m1 and m2:
        aggregate = _aggregate(cells, len(m1), len(m2), mode)
    elif not m1 and not m2:
        aggregate = _semantic(a.root, b.root, od, mode, recursive)
    else:
        aggregate = _F0
    score = Score.from_fraction(aggregate)
    return SimilarityMatrix(
        left_members=tuple(c.term for c in m1),
        right_members=tuple(c.term for c in m2),
        cells=tuple(tuple(Score.from_fraction(v) for v in row) for row in cells),
        aggregate=score,
        verdict=VERDICT_SYNONYM if score.is_one else VERDICT_NOT_SYNONYM,
    )


def bipartite_score(
    c1: Concept,
    c2: Concept,
    od: DomainOntology,
    *,
    recursive: bool = True,
) -> Score:
    """Best one-to-one member matching divided by the larger arity.

    Differs from the literal aggregate only when some member is
    synonymous with two or more members across the pair; a one-to-one
    matching counts each member once where the literal sum counts every
    synonymous cell.
    """
    if c1.kind != c2.kind:
        return ZERO
    m1 = c1.members or (c1,)
    m2 = c2.members or (c2,)
    cells = [[_semantic(a, b, od, MODE_BIPARTITE, recursive) for b in m2] for a in m1]
    value, _ = max_assignment(cells)
    return Score.from_fraction(value / max(len(m1), len(m2)))

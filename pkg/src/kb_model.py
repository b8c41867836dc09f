"""
Knowledge Base Model

Immutable domain types for declarative knowledge bases: terms, atoms,
literals, properties (rules of the form body ⊢ head), knowledges and
knowledge bases. All models are frozen pydantic models, so every value is
hashable and safe to share between threads.
"""

import re
from collections import Counter
from collections.abc import Hashable
from enum import StrEnum

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

IDENTIFIER_RE = re.compile(r"^[A-Za-z0-9_]+$")
CONSTANT_RE = re.compile(r"^[a-z0-9][A-Za-z0-9_]*$")
VARIABLE_RE = re.compile(r"^[A-Z][A-Za-z0-9_]*$")
PREDICATE_RE = re.compile(r"^[a-z][A-Za-z0-9_]*$")


class TermKind(StrEnum):
    CONSTANT = "constant"
    VARIABLE = "variable"


class Polarity(StrEnum):
    POSITIVE = "positive"
    NEGATIVE = "negative"


class MatchMode(StrEnum):
    EXACT = "exact"
    ALPHA = "alpha"


class PropertyPolarity(StrEnum):
    ATTRACTION = "attraction"
    REPULSION = "repulsion"


class _Frozen(BaseModel):
    model_config = ConfigDict(frozen=True)


class Term(_Frozen):
    kind: TermKind
    name: str

    @model_validator(mode="after")
    def _check_name(self) -> "Term":
        pattern = CONSTANT_RE if self.kind is TermKind.CONSTANT else VARIABLE_RE
        if not pattern.match(self.name):
            raise ValueError(f"'{self.name}' is not a valid {self.kind.value} name")
        return self

    @classmethod
    def of(cls, name: str) -> "Term":
        """Build a term, inferring its kind from the first character."""
        kind = TermKind.VARIABLE if name[:1].isupper() else TermKind.CONSTANT
        return cls(kind=kind, name=name)

    def __str__(self) -> str:
        return self.name


class Atom(_Frozen):
    predicate: str
    args: tuple[Term, ...] = ()

    @field_validator("predicate")
    @classmethod
    def _check_predicate(cls, value: str) -> str:
        if not PREDICATE_RE.match(value):
            raise ValueError(f"'{value}' is not a valid predicate name")
        return value

    @property
    def arity(self) -> int:
        return len(self.args)

    def __str__(self) -> str:
        if not self.args:
            return self.predicate
        return f"{self.predicate}({', '.join(str(arg) for arg in self.args)})"


class Literal(_Frozen):
    atom: Atom
    polarity: Polarity = Polarity.POSITIVE

    @property
    def is_negative(self) -> bool:
        return self.polarity is Polarity.NEGATIVE

    def __str__(self) -> str:
        return f"!{self.atom}" if self.is_negative else str(self.atom)


class Property(_Frozen):
    index: int = Field(ge=1)
    body: frozenset[Literal]
    head: Atom

    @field_validator("body")
    @classmethod
    def _check_body(cls, value: frozenset[Literal]) -> frozenset[Literal]:
        if not value:
            raise ValueError("property body must contain at least one literal")
        return value


class Knowledge(_Frozen):
    name: str
    properties: tuple[Property, ...] = ()

    @field_validator("name")
    @classmethod
    def _check_name(cls, value: str) -> str:
        if not IDENTIFIER_RE.match(value):
            raise ValueError(f"'{value}' is not a valid knowledge name")
        return value

    @model_validator(mode="after")
    def _check_indices(self) -> "Knowledge":
        for position, prop in enumerate(self.properties, start=1):
            if prop.index != position:
                raise ValueError(
                    f"knowledge '{self.name}': property at position {position} "
                    f"has index {prop.index}"
                )
        return self


class KnowledgeBase(_Frozen):
    knowledges: tuple[Knowledge, ...] = ()

    @model_validator(mode="after")
    def _check_unique_names(self) -> "KnowledgeBase":
        seen: set[str] = set()
        for knowledge in self.knowledges:
            if knowledge.name in seen:
                raise ValueError(f"duplicate knowledge name '{knowledge.name}'")
            seen.add(knowledge.name)
        return self

    @property
    def names(self) -> list[str]:
        return [knowledge.name for knowledge in self.knowledges]

    def get(self, name: str) -> Knowledge | None:
        for knowledge in self.knowledges:
            if knowledge.name == name:
                return knowledge
        return None


def literal_set(p: Property) -> frozenset[Literal]:
    """Body literals of a property plus its head as a positive literal."""
    return p.body | {Literal(atom=p.head, polarity=Polarity.POSITIVE)}


def literals_match(a: Literal, b: Literal, mode: MatchMode = MatchMode.EXACT) -> bool:
    """
    Decide whether two literals denote the same thing.

    In exact mode this is syntactic equality. In alpha mode the literals must
    agree on polarity, predicate, arity and constants, and there must be an
    injective renaming of the variables of `a` onto those of `b`.
    """
    if mode is MatchMode.EXACT:
        return a == b
    if a.polarity is not b.polarity:
        return False
    if a.atom.predicate != b.atom.predicate or a.atom.arity != b.atom.arity:
        return False

    renaming: dict[str, str] = {}
    taken: dict[str, str] = {}
    for left, right in zip(a.atom.args, b.atom.args):
        if left.kind is not right.kind:
            return False
        if left.kind is TermKind.CONSTANT:
            if left.name != right.name:
                return False
            continue
        if renaming.setdefault(left.name, right.name) != right.name:
            return False
        if taken.setdefault(right.name, left.name) != left.name:
            return False
    return True


def match_key(literal: Literal, mode: MatchMode = MatchMode.EXACT) -> Hashable:
    """Key such that two literals match under `mode` iff their keys are equal."""
    if mode is MatchMode.EXACT:
        return literal
    numbering: dict[str, int] = {}
    args = []
    for term in literal.atom.args:
        if term.kind is TermKind.VARIABLE:
            args.append((TermKind.VARIABLE.value, numbering.setdefault(term.name, len(numbering))))
        else:
            args.append((TermKind.CONSTANT.value, term.name))
    return (literal.polarity.value, literal.atom.predicate, tuple(args))


def literal_sort_key(literal: Literal) -> tuple:
    """Canonical order: positive first, then predicate, then arguments."""
    return (
        literal.is_negative,
        literal.atom.predicate,
        literal.atom.arity,
        tuple((term.kind.value, term.name) for term in literal.atom.args),
    )


def sorted_body(p: Property) -> list[Literal]:
    return sorted(p.body, key=literal_sort_key)


def property_polarity(p: Property) -> PropertyPolarity:
    if any(literal.is_negative for literal in p.body):
        return PropertyPolarity.REPULSION
    return PropertyPolarity.ATTRACTION


def polarity_profile(k: Knowledge) -> dict[PropertyPolarity, int]:
    counts = Counter(property_polarity(p) for p in k.properties)
    return {polarity: counts.get(polarity, 0) for polarity in PropertyPolarity}

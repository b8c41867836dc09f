"""
Similarity Engine

Qualitative similarity between knowledges. Two properties are compared
through their literal sets (body literals plus the head as a positive
literal):

- equal:     every literal of the left property is found on the right
- similar:   some, but not all, of them are found
- different: none of them is found

Comparing every property of one knowledge with every property of another
gives a property comparison matrix; comparing every ordered pair of
knowledges gives the knowledge similarity space. The lower triangle of a
symmetric space holds all of its information (source information), and the
non-empty classes of a comparison give one of eight category
configurations, grouped into three super-categories.
"""

import logging
from collections.abc import Iterable, Sequence
from enum import IntEnum, StrEnum

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.kb_model import Knowledge, KnowledgeBase, MatchMode, Property, literal_set, match_key
from src.utils import (
    DirectionalModeSpaceError,
    NotIdentifiableError,
    SameKnowledgeComparisonError,
    TooFewKnowledgesError,
    make_error,
)

logger = logging.getLogger(__name__)


class SimilarityClass(StrEnum):
    EQUAL = "equal"
    SIMILAR = "similar"
    DIFFERENT = "different"

    @property
    def glyph(self) -> str:
        return _GLYPHS[self]


_GLYPHS = {
    SimilarityClass.EQUAL: "=",
    SimilarityClass.SIMILAR: "~",
    SimilarityClass.DIFFERENT: "#",
}

# numpy codes, indexed by SimilarityClass order
_EQUAL, _SIMILAR, _DIFFERENT = 0, 1, 2
_CLASS_BY_CODE = (SimilarityClass.EQUAL, SimilarityClass.SIMILAR, SimilarityClass.DIFFERENT)


class Direction(StrEnum):
    DIRECTIONAL = "directional"
    SYMMETRIC = "symmetric"


class _Frozen(BaseModel):
    model_config = ConfigDict(frozen=True, populate_by_name=True)


class ComparisonMode(_Frozen):
    match: MatchMode = MatchMode.EXACT
    direction: Direction = Direction.DIRECTIONAL

    def __str__(self) -> str:
        return f"{self.match.value}, {self.direction.value}"


DIRECTIONAL = ComparisonMode()
SYMMETRIC = ComparisonMode(direction=Direction.SYMMETRIC)


class PropertyComparisonMatrix(_Frozen):
    """
    Classes of P_j (left knowledge) against P_i (right knowledge).

    Rows follow the right knowledge's properties, columns the left
    knowledge's, so cells[i][j] compares left property j+1 with right
    property i+1.
    """

    left: str
    right: str
    rows: int = Field(ge=0)
    cols: int = Field(ge=0)
    cells: tuple[tuple[SimilarityClass, ...], ...]

    @model_validator(mode="after")
    def _check_shape(self) -> "PropertyComparisonMatrix":
        if len(self.cells) != self.rows or any(len(row) != self.cols for row in self.cells):
            raise ValueError(f"cells do not form a {self.rows}x{self.cols} grid")
        return self

    def class_of(self, left_index: int, right_index: int) -> SimilarityClass:
        """Class of left property `left_index` against right property `right_index` (1-based)."""
        return self.cells[right_index - 1][left_index - 1]

    @property
    def is_empty(self) -> bool:
        return self.rows == 0 or self.cols == 0


class CardinalitySignature(_Frozen):
    n_equal: int = Field(default=0, ge=0, alias="equal")
    n_similar: int = Field(default=0, ge=0, alias="similar")
    n_different: int = Field(default=0, ge=0, alias="different")

    @property
    def total(self) -> int:
        return self.n_equal + self.n_similar + self.n_different

    def count(self, cls: SimilarityClass) -> int:
        return {
            SimilarityClass.EQUAL: self.n_equal,
            SimilarityClass.SIMILAR: self.n_similar,
            SimilarityClass.DIFFERENT: self.n_different,
        }[cls]

    def __add__(self, other: "CardinalitySignature") -> "CardinalitySignature":
        return CardinalitySignature(
            n_equal=self.n_equal + other.n_equal,
            n_similar=self.n_similar + other.n_similar,
            n_different=self.n_different + other.n_different,
        )


class CategoryConfiguration(_Frozen):
    equal_nonempty: bool
    similar_nonempty: bool
    different_nonempty: bool

    @property
    def members(self) -> tuple[SimilarityClass, ...]:
        flags = (self.equal_nonempty, self.similar_nonempty, self.different_nonempty)
        return tuple(cls for cls, flag in zip(SimilarityClass, flags) if flag)


class SuperCategoryCase(IntEnum):
    CASE1 = 1
    CASE2 = 2
    CASE3 = 3


class SuperCategory(_Frozen):
    case: SuperCategoryCase
    members: tuple[SimilarityClass, ...]

    @model_validator(mode="after")
    def _check_members(self) -> "SuperCategory":
        if len(self.members) != int(self.case) or len(set(self.members)) != len(self.members):
            n = int(self.case)
            raise ValueError(f"case {n} needs exactly {n} distinct members")
        return self


class PairComparison(_Frozen):
    matrix: PropertyComparisonMatrix
    signature: CardinalitySignature

    @property
    def left(self) -> str:
        return self.matrix.left

    @property
    def right(self) -> str:
        return self.matrix.right


class KnowledgeSimilaritySpace(_Frozen):
    """
    Pairwise comparisons K_j / K_i for every ordered pair with j != i.

    Entries are kept in grid order: right knowledge (row) outer, left
    knowledge (column) inner, both in knowledge-base order. The diagonal is
    never present.
    """

    names: tuple[str, ...]
    mode: ComparisonMode
    entries: tuple[PairComparison, ...]

    @model_validator(mode="after")
    def _check_size(self) -> "KnowledgeSimilaritySpace":
        n = len(self.names)
        if len(self.entries) != n * n - n:
            raise ValueError(f"a space over {n} knowledges needs {n * n - n} entries")
        if any(entry.left == entry.right for entry in self.entries):
            raise ValueError("the diagonal is not part of a similarity space")
        return self

    def entry(self, left: str, right: str) -> PairComparison:
        for candidate in self.entries:
            if candidate.left == left and candidate.right == right:
                return candidate
        raise KeyError((left, right))


class SourceInformation(_Frozen):
    """Lower triangle of a symmetric space: one entry per unordered pair."""

    names: tuple[str, ...]
    mode: ComparisonMode
    entries: tuple[PairComparison, ...]

    @model_validator(mode="after")
    def _check_size(self) -> "SourceInformation":
        n = len(self.names)
        if 2 * len(self.entries) != n * n - n:
            raise ValueError(
                f"source information over {n} knowledges needs {(n * n - n) // 2} entries"
            )
        return self


class SpaceSummary(_Frozen):
    signature: CardinalitySignature
    configuration: CategoryConfiguration
    super_category: SuperCategory | None


# Single-pair classification


def _keys(p: Property, match: MatchMode) -> frozenset:
    return frozenset(match_key(literal, match) for literal in literal_set(p))


def _directional(left: frozenset, right: frozenset) -> SimilarityClass:
    # equal is checked first: it implies the existential condition of similar
    if left <= right:
        return SimilarityClass.EQUAL
    if left.isdisjoint(right):
        return SimilarityClass.DIFFERENT
    return SimilarityClass.SIMILAR


def symmetrize(forward: SimilarityClass, backward: SimilarityClass) -> SimilarityClass:
    if forward is SimilarityClass.EQUAL and backward is SimilarityClass.EQUAL:
        return SimilarityClass.EQUAL
    if forward is SimilarityClass.DIFFERENT and backward is SimilarityClass.DIFFERENT:
        return SimilarityClass.DIFFERENT
    return SimilarityClass.SIMILAR


def classify_pair(
    p_m: Property, p_n: Property, mode: ComparisonMode = DIRECTIONAL
) -> SimilarityClass:
    """
    Classify property `p_m` against property `p_n`.

    Directional mode looks for the literals of `p_m` among those of `p_n`.
    Symmetric mode classifies both ways: equal only if both directions are
    equal, different only if both are different, similar otherwise.
    """
    left = _keys(p_m, mode.match)
    right = _keys(p_n, mode.match)
    forward = _directional(left, right)
    if mode.direction is Direction.DIRECTIONAL:
        return forward
    return symmetrize(forward, _directional(right, left))


# Vectorised property spaces


class _KnowledgeIndex:
    """Incidence matrix of a knowledge's properties over its literal vocabulary."""

    def __init__(self, knowledge: Knowledge, vocabulary: dict, match: MatchMode):
        self.name = knowledge.name
        self.size = len(knowledge.properties)
        key_sets = [
            {
                vocabulary.setdefault(match_key(literal, match), len(vocabulary))
                for literal in literal_set(p)
            }
            for p in knowledge.properties
        ]
        self.vocab = np.array(sorted(set().union(*key_sets)), dtype=np.int64)
        column = {key: position for position, key in enumerate(self.vocab.tolist())}
        self.incidence = np.zeros((self.size, len(self.vocab)), dtype=np.float64)
        for row, keys in enumerate(key_sets):
            self.incidence[row, [column[key] for key in keys]] = 1.0
        self.sizes = np.array([len(keys) for keys in key_sets], dtype=np.int64)


def _compare_indexed(
    left: _KnowledgeIndex, right: _KnowledgeIndex, direction: Direction
) -> PairComparison:
    _, idx_right, idx_left = np.intersect1d(
        right.vocab, left.vocab, assume_unique=True, return_indices=True
    )
    # overlap[i, j] = |L(P_j of left) ∩ L(P_i of right)|
    overlap = right.incidence[:, idx_right] @ left.incidence[:, idx_left].T
    overlap = np.rint(overlap).astype(np.int64)
    covered = overlap == left.sizes[np.newaxis, :]
    if direction is Direction.SYMMETRIC:
        covered &= overlap == right.sizes[:, np.newaxis]
    codes = np.where(covered, _EQUAL, np.where(overlap == 0, _DIFFERENT, _SIMILAR))

    matrix = PropertyComparisonMatrix.model_construct(
        left=left.name,
        right=right.name,
        rows=right.size,
        cols=left.size,
        cells=tuple(tuple(_CLASS_BY_CODE[code] for code in row) for row in codes.tolist()),
    )
    return PairComparison.model_construct(matrix=matrix, signature=cardinality_signature(matrix))


def property_space(
    k_m: Knowledge, k_n: Knowledge, mode: ComparisonMode = DIRECTIONAL
) -> PropertyComparisonMatrix:
    """
    Build the property comparison matrix of `k_m` against `k_n`.

    Args:
        k_m: Left knowledge (columns)
        k_n: Right knowledge (rows)
        mode: Literal matching and direction

    Returns:
        A |k_n| x |k_m| matrix; cell [i][j] classifies P_j of k_m against P_i of k_n
    """
    if k_m.name == k_n.name:
        make_error(
            f"Cannot compare knowledge '{k_m.name}' with itself: "
            "the diagonal is not part of a space",
            SameKnowledgeComparisonError,
        )
    vocabulary: dict = {}
    left = _KnowledgeIndex(k_m, vocabulary, mode.match)
    right = _KnowledgeIndex(k_n, vocabulary, mode.match)
    return _compare_indexed(left, right, mode.direction).matrix


def cardinality_signature(m: PropertyComparisonMatrix) -> CardinalitySignature:
    return CardinalitySignature(
        n_equal=sum(row.count(SimilarityClass.EQUAL) for row in m.cells),
        n_similar=sum(row.count(SimilarityClass.SIMILAR) for row in m.cells),
        n_different=sum(row.count(SimilarityClass.DIFFERENT) for row in m.cells),
    )


def knowledge_space(
    kb: KnowledgeBase, mode: ComparisonMode = SYMMETRIC
) -> KnowledgeSimilaritySpace:
    """
    Compare every ordered pair of distinct knowledges.

    Args:
        kb: Knowledge base with at least two knowledges
        mode: Literal matching and direction (symmetric by default, which
            source_information requires)

    Returns:
        The knowledge similarity space with |K|^2 - |K| entries
    """
    n = len(kb.knowledges)
    if n < 2:
        make_error(
            f"A similarity space needs at least 2 knowledges, found {n}",
            TooFewKnowledgesError,
        )

    vocabulary: dict = {}
    indexes = [_KnowledgeIndex(k, vocabulary, mode.match) for k in kb.knowledges]
    logger.debug("indexed %d knowledges over %d distinct literals", n, len(vocabulary))

    entries = []
    for i, right in enumerate(indexes):
        for j, left in enumerate(indexes):
            if i == j:
                continue
            entries.append(_compare_indexed(left, right, mode.direction))
            logger.debug("compared %s / %s", left.name, right.name)

    logger.info("knowledge space: %d ordered pairs (%s)", len(entries), mode)
    return KnowledgeSimilaritySpace(names=tuple(kb.names), mode=mode, entries=tuple(entries))


def source_information(space: KnowledgeSimilaritySpace) -> SourceInformation:
    """
    Extract the lower triangle of a symmetric space.

    Row i (right knowledge) keeps the columns j < i, so each unordered pair
    appears once, as K_j / K_i with K_j first in knowledge-base order.
    """
    if space.mode.direction is not Direction.SYMMETRIC:
        make_error(
            "Source information needs a symmetric space: a directional space is not "
            "redundant across its diagonal",
            DirectionalModeSpaceError,
        )
    position = {name: index for index, name in enumerate(space.names)}
    entries = tuple(
        entry for entry in space.entries if position[entry.left] < position[entry.right]
    )
    return SourceInformation(names=space.names, mode=space.mode, entries=entries)


# Categories


def all_configurations() -> list[CategoryConfiguration]:
    return [
        CategoryConfiguration(equal_nonempty=e, similar_nonempty=s, different_nonempty=d)
        for e in (False, True)
        for s in (False, True)
        for d in (False, True)
    ]


def category_configuration(sig: CardinalitySignature) -> CategoryConfiguration:
    return CategoryConfiguration(
        equal_nonempty=sig.n_equal > 0,
        similar_nonempty=sig.n_similar > 0,
        different_nonempty=sig.n_different > 0,
    )


def is_identifiable(cfg: CategoryConfiguration, strict: bool = False) -> bool:
    """
    Whether a configuration allows similarity identification.

    By default one non-empty class suffices, which discards only the
    all-empty configuration. `strict` requires all three classes non-empty.
    """
    if strict:
        return len(cfg.members) == 3
    return len(cfg.members) > 0


def super_category(cfg: CategoryConfiguration) -> SuperCategory:
    members = cfg.members
    if not members:
        make_error(
            "The all-empty configuration is not identifiable and has no super-category",
            NotIdentifiableError,
        )
    return SuperCategory(case=SuperCategoryCase(len(members)), members=members)


def aggregate_signature(entries: Iterable[PairComparison]) -> CardinalitySignature:
    total = CardinalitySignature()
    for entry in entries:
        total = total + entry.signature
    return total


def space_summary(space: KnowledgeSimilaritySpace) -> SpaceSummary:
    """Categorise a whole space, over its source information when symmetric."""
    entries: Sequence[PairComparison] = space.entries
    if space.mode.direction is Direction.SYMMETRIC:
        entries = source_information(space).entries
    signature = aggregate_signature(entries)
    configuration = category_configuration(signature)
    return SpaceSummary(
        signature=signature,
        configuration=configuration,
        super_category=super_category(configuration) if is_identifiable(configuration) else None,
    )

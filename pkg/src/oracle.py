"""
Brute-force reference classifier used by the test suite.

Everything here is computed by plain nested loops over lists, without sets,
vocabularies or matrix algebra, so that it cannot share a shortcut (or a
bug) with the similarity engine.
"""

from src.kb_model import KnowledgeBase, Literal, MatchMode, Polarity, Property, TermKind
from src.similarity import ComparisonMode, Direction, SimilarityClass


def _literals(p: Property) -> list[Literal]:
    result: list[Literal] = []
    for literal in p.body:
        if literal not in result:
            result.append(literal)
    head = Literal(atom=p.head, polarity=Polarity.POSITIVE)
    if head not in result:
        result.append(head)
    return result


def _same(a: Literal, b: Literal, match: MatchMode) -> bool:
    if a.polarity != b.polarity or a.atom.predicate != b.atom.predicate:
        return False
    if len(a.atom.args) != len(b.atom.args):
        return False
    forward: list[tuple[str, str]] = []
    for position in range(len(a.atom.args)):
        x = a.atom.args[position]
        y = b.atom.args[position]
        if x.kind != y.kind:
            return False
        if x.kind == TermKind.CONSTANT or match == MatchMode.EXACT:
            if x.name != y.name:
                return False
            continue
        for left_name, right_name in forward:
            if left_name == x.name and right_name != y.name:
                return False
            if right_name == y.name and left_name != x.name:
                return False
        forward.append((x.name, y.name))
    return True


def _one_way(p_m: Property, p_n: Property, match: MatchMode) -> SimilarityClass:
    left = _literals(p_m)
    right = _literals(p_n)
    matched = 0
    for a in left:
        found = False
        for b in right:
            if _same(a, b, match):
                found = True
        if found:
            matched += 1
    if matched == len(left):
        return SimilarityClass.EQUAL
    if matched == 0:
        return SimilarityClass.DIFFERENT
    return SimilarityClass.SIMILAR


def oracle_classify(p_m: Property, p_n: Property, mode: ComparisonMode) -> SimilarityClass:
    forward = _one_way(p_m, p_n, mode.match)
    if mode.direction == Direction.DIRECTIONAL:
        return forward
    backward = _one_way(p_n, p_m, mode.match)
    if forward == SimilarityClass.EQUAL and backward == SimilarityClass.EQUAL:
        return SimilarityClass.EQUAL
    if forward == SimilarityClass.DIFFERENT and backward == SimilarityClass.DIFFERENT:
        return SimilarityClass.DIFFERENT
    return SimilarityClass.SIMILAR


def oracle_space(
    kb: KnowledgeBase, mode: ComparisonMode
) -> dict[tuple[str, str], list[list[SimilarityClass]]]:
    """Grid of classes for every ordered (left, right) pair of distinct knowledges."""
    grid: dict[tuple[str, str], list[list[SimilarityClass]]] = {}
    for k_n in kb.knowledges:
        for k_m in kb.knowledges:
            if k_m.name == k_n.name:
                continue
            rows = []
            for p_n in k_n.properties:
                row = []
                for p_m in k_m.properties:
                    row.append(oracle_classify(p_m, p_n, mode))
                rows.append(row)
            grid[(k_m.name, k_n.name)] = rows
    return grid

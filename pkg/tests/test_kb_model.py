import pytest
from hypothesis import given, settings
from pydantic import ValidationError
from strategies import literals

from src.kb_model import (
    Atom,
    Knowledge,
    KnowledgeBase,
    Literal,
    MatchMode,
    Polarity,
    Property,
    PropertyPolarity,
    Term,
    TermKind,
    literal_set,
    literals_match,
    match_key,
    polarity_profile,
    property_polarity,
    sorted_body,
)


def lit(predicate: str, *args: str, negative: bool = False) -> Literal:
    return Literal(
        atom=Atom(predicate=predicate, args=tuple(Term.of(arg) for arg in args)),
        polarity=Polarity.NEGATIVE if negative else Polarity.POSITIVE,
    )


def prop(head: str, *body: Literal, index: int = 1) -> Property:
    return Property(index=index, body=frozenset(body), head=Atom(predicate=head))


@pytest.mark.unit
def test_term_kinds():
    """Test that term kinds follow the first character"""
    assert Term.of("X").kind is TermKind.VARIABLE
    assert Term.of("abc").kind is TermKind.CONSTANT
    assert Term.of("42").kind is TermKind.CONSTANT

    with pytest.raises(ValidationError):
        Term(kind=TermKind.CONSTANT, name="Abc")
    with pytest.raises(ValidationError):
        Term(kind=TermKind.VARIABLE, name="x")
    with pytest.raises(ValidationError):
        Term(kind=TermKind.CONSTANT, name="a-b")


@pytest.mark.unit
def test_atom_identity_includes_arity():
    p1 = Atom(predicate="p", args=(Term.of("a"),))
    p2 = Atom(predicate="p", args=(Term.of("a"), Term.of("b")))
    assert p1 != p2
    assert p1.arity == 1
    assert str(p2) == "p(a, b)"
    assert str(Atom(predicate="p")) == "p"

    with pytest.raises(ValidationError):
        Atom(predicate="")
    with pytest.raises(ValidationError):
        Atom(predicate="Pred")


@pytest.mark.unit
def test_literal_equality_and_rendering():
    assert lit("q1") == lit("q1")
    assert lit("q1") != lit("q1", negative=True)
    assert str(lit("q1", negative=True)) == "!q1"
    assert str(lit("p", "X", "a")) == "p(X, a)"
    assert hash(lit("p", "X")) == hash(lit("p", "X"))


@pytest.mark.unit
def test_property_requires_body():
    with pytest.raises(ValidationError):
        Property(index=1, body=frozenset(), head=Atom(predicate="p"))
    with pytest.raises(ValidationError):
        prop("p", lit("q"), index=0)


@pytest.mark.unit
def test_knowledge_indices_and_names():
    Knowledge(name="K", properties=(prop("p", lit("q")), prop("r", lit("q"), index=2)))
    with pytest.raises(ValidationError):
        Knowledge(name="K", properties=(prop("p", lit("q"), index=2),))
    with pytest.raises(ValidationError):
        Knowledge(name="bad name")

    # empty knowledges are representable
    assert Knowledge(name="K").properties == ()


@pytest.mark.unit
def test_knowledge_base_unique_names():
    kb = KnowledgeBase(knowledges=(Knowledge(name="K1"), Knowledge(name="k1")))
    assert kb.names == ["K1", "k1"]
    assert kb.get("k1").name == "k1"
    assert kb.get("K3") is None

    with pytest.raises(ValidationError):
        KnowledgeBase(knowledges=(Knowledge(name="K1"), Knowledge(name="K1")))


@pytest.mark.unit
def test_literal_set():
    """Test the literal set examples: head joins the body as a positive literal"""
    assert literal_set(prop("p1", lit("q1"), lit("q2"))) == {lit("q1"), lit("q2"), lit("p1")}
    assert literal_set(prop("p", lit("q1", negative=True))) == {lit("q1", negative=True), lit("p")}
    assert literal_set(prop("p", lit("q1"), lit("q1"))) == {lit("q1"), lit("p")}

    # a head already present in the body collapses too
    assert len(literal_set(prop("p", lit("p"), lit("q")))) == 2


@pytest.mark.unit
def test_literals_match_examples():
    assert literals_match(lit("q1"), lit("q1"))
    assert not literals_match(lit("q1"), lit("q1", negative=True))
    assert not literals_match(lit("q1"), lit("q1", negative=True), MatchMode.ALPHA)
    assert literals_match(lit("p", "X", "a"), lit("p", "Y", "a"), MatchMode.ALPHA)
    assert not literals_match(lit("p", "X", "a"), lit("p", "Y", "a"), MatchMode.EXACT)


@pytest.mark.unit
def test_alpha_renaming_is_injective():
    assert literals_match(lit("p", "X", "Y"), lit("p", "Y", "X"), MatchMode.ALPHA)
    assert not literals_match(lit("p", "X", "X"), lit("p", "X", "Y"), MatchMode.ALPHA)
    assert not literals_match(lit("p", "X", "Y"), lit("p", "Z", "Z"), MatchMode.ALPHA)
    assert not literals_match(lit("p", "X", "a"), lit("p", "X", "b"), MatchMode.ALPHA)
    assert not literals_match(lit("p", "X"), lit("p", "a"), MatchMode.ALPHA)
    assert not literals_match(lit("p", "X"), lit("p", "X", "Y"), MatchMode.ALPHA)


@pytest.mark.unit
@settings(max_examples=500)
@given(a=literals, b=literals, c=literals)
def test_exact_match_is_an_equivalence(a, b, c):
    assert literals_match(a, a)
    assert literals_match(a, b) == literals_match(b, a)
    if literals_match(a, b) and literals_match(b, c):
        assert literals_match(a, c)


@pytest.mark.unit
@settings(max_examples=500)
@given(a=literals, b=literals)
def test_alpha_match_is_reflexive_and_symmetric(a, b):
    assert literals_match(a, a, MatchMode.ALPHA)
    assert literals_match(a, b, MatchMode.ALPHA) == literals_match(b, a, MatchMode.ALPHA)


@pytest.mark.unit
@settings(max_examples=500)
@given(a=literals, b=literals)
def test_match_key_agrees_with_literals_match(a, b):
    for mode in MatchMode:
        assert literals_match(a, b, mode) == (match_key(a, mode) == match_key(b, mode))


@pytest.mark.unit
def test_sorted_body_puts_positive_literals_first():
    p = prop("h", lit("b", negative=True), lit("c"), lit("a", negative=True), lit("d"))
    assert [str(literal) for literal in sorted_body(p)] == ["c", "d", "!a", "!b"]


@pytest.mark.unit
def test_property_polarity():
    assert property_polarity(prop("p1", lit("q1"), lit("q2"))) is PropertyPolarity.ATTRACTION
    assert (
        property_polarity(prop("p2", lit("q3"), lit("q1", negative=True)))
        is PropertyPolarity.REPULSION
    )


@pytest.mark.unit
def test_polarity_profile(example1_kb):
    assert polarity_profile(example1_kb.get("K1")) == {
        PropertyPolarity.ATTRACTION: 1,
        PropertyPolarity.REPULSION: 1,
    }
    assert polarity_profile(example1_kb.get("K2")) == {
        PropertyPolarity.ATTRACTION: 1,
        PropertyPolarity.REPULSION: 2,
    }
    assert sum(polarity_profile(Knowledge(name="K")).values()) == 0

"""
Knowledge Base Parser

Reads and writes the `.kb` text format:

    % comment
    knowledge K1 {
      p1 :- q1, q2.
      p2 :- q3, !q1.
    }

A rule is `<head-atom> :- <literal> ("," <literal>)* "."`, a literal is an
optionally negated (`!`) atom, and an atom is `pred` or `pred(t1, ..., tn)`.
Predicates and constants start lowercase (constants may also start with a
digit), variables start uppercase.

The parser recovers at rule boundaries and reports every error it finds.
"""

import logging
import re
from bisect import bisect_right
from enum import StrEnum
from typing import NamedTuple

from pydantic import BaseModel, ConfigDict, model_validator

from src.kb_model import (
    PREDICATE_RE,
    Atom,
    Knowledge,
    KnowledgeBase,
    Literal,
    Polarity,
    Property,
    Term,
    TermKind,
    sorted_body,
)
from src.utils import KbsimError

logger = logging.getLogger(__name__)

KEYWORD = "knowledge"

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n\f\v]+)
  | (?P<comment>%[^\n]*)
  | (?P<implies>:-)
  | (?P<name>[A-Za-z0-9_]+)
  | (?P<punct>[{}(),.!])
    """,
    re.VERBOSE,
)

_PUNCT_KINDS = {
    "{": "lbrace",
    "}": "rbrace",
    "(": "lparen",
    ")": "rparen",
    ",": "comma",
    ".": "dot",
    "!": "bang",
}


class ParseErrorKind(StrEnum):
    SYNTAX = "syntax"
    DUPLICATE_KNOWLEDGE = "duplicate-knowledge"
    NEGATED_HEAD = "negated-head"
    EMPTY_BODY = "empty-body"
    BAD_IDENTIFIER = "bad-identifier"


class SourceSpan(BaseModel):
    model_config = ConfigDict(frozen=True)

    start: int
    end: int

    @model_validator(mode="after")
    def _check_order(self) -> "SourceSpan":
        if self.start > self.end:
            raise ValueError("span start must not exceed its end")
        return self


class ParseError(BaseModel):
    model_config = ConfigDict(frozen=True)

    line: int
    column: int
    message: str
    kind: ParseErrorKind
    span: SourceSpan

    def __str__(self) -> str:
        return f"{self.line}:{self.column}: {self.kind.value}: {self.message}"


class KnowledgeBaseParseError(KbsimError):
    def __init__(self, errors: list[ParseError]):
        self.errors = errors
        summary = str(errors[0]) if errors else "invalid knowledge base"
        if len(errors) > 1:
            summary += f" (and {len(errors) - 1} more)"
        super().__init__(summary)


class _Token(NamedTuple):
    kind: str
    value: str
    start: int
    end: int


class _Recover(Exception):
    """Abandon the current rule and resynchronise."""


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.line_starts = [0] + [m.end() for m in re.finditer("\n", text)]
        self.errors: list[ParseError] = []
        self.tokens = self._tokenize()
        self.pos = 0

    # diagnostics

    def _error(self, kind: ParseErrorKind, message: str, start: int, end: int) -> None:
        line = bisect_right(self.line_starts, start) - 1
        column = start - self.line_starts[line] + 1
        self.errors.append(
            ParseError(
                line=line + 1,
                column=column,
                message=message,
                kind=kind,
                span=SourceSpan(start=start, end=end),
            )
        )

    def _error_at(self, token: _Token, kind: ParseErrorKind, message: str) -> None:
        self._error(kind, message, token.start, token.end)

    # lexing

    def _tokenize(self) -> list[_Token]:
        tokens: list[_Token] = []
        offset = 0
        while offset < len(self.text):
            match = _TOKEN_RE.match(self.text, offset)
            if match is None:
                char = self.text[offset]
                self._error(
                    ParseErrorKind.BAD_IDENTIFIER,
                    f"illegal character {char!r}",
                    offset,
                    offset + 1,
                )
                tokens.append(_Token(kind="error", value=char, start=offset, end=offset + 1))
                offset += 1
                continue
            group = match.lastgroup
            if group == "name":
                tokens.append(
                    _Token(kind="name", value=match.group(), start=match.start(), end=match.end())
                )
            elif group == "implies":
                tokens.append(
                    _Token(kind="implies", value=":-", start=match.start(), end=match.end())
                )
            elif group == "punct":
                tokens.append(
                    _Token(
                        kind=_PUNCT_KINDS[match.group()],
                        value=match.group(),
                        start=match.start(),
                        end=match.end(),
                    )
                )
            offset = match.end()

        # EOF sits on the last real token so diagnostics stay inside the input
        if tokens:
            last = tokens[-1]
            tokens.append(_Token(kind="eof", value="", start=last.start, end=last.end))
        else:
            tokens.append(_Token(kind="eof", value="", start=0, end=0))
        return tokens

    # token stream

    def _peek(self, ahead: int = 0) -> _Token:
        return self.tokens[min(self.pos + ahead, len(self.tokens) - 1)]

    def _advance(self) -> _Token:
        token = self._peek()
        if token.kind != "eof":
            self.pos += 1
        return token

    def _expect(self, kind: str, message: str) -> _Token:
        token = self._peek()
        if token.kind == kind:
            return self._advance()
        if token.kind != "error":
            self._error_at(token, ParseErrorKind.SYNTAX, message)
        raise _Recover()

    def _at_block_start(self) -> bool:
        token = self._peek()
        return token.kind == "name" and token.value == KEYWORD and self._peek(1).kind == "name"

    def _sync_top_level(self) -> None:
        while self._peek().kind != "eof":
            token = self._peek()
            if token.kind == "name" and token.value == KEYWORD:
                return
            self._advance()

    def _sync_rule(self) -> None:
        while True:
            token = self._peek()
            if token.kind in ("eof", "rbrace") or self._at_block_start():
                return
            self._advance()
            if token.kind == "dot":
                return

    # grammar

    def parse(self) -> list[Knowledge]:
        knowledges: list[Knowledge] = []
        seen: set[str] = set()
        while self._peek().kind != "eof":
            token = self._peek()
            if token.kind == "error":
                self._advance()
                continue
            if token.kind != "name" or token.value != KEYWORD:
                self._error_at(
                    token, ParseErrorKind.SYNTAX, f"expected '{KEYWORD}', found {token.value!r}"
                )
                self._advance()
                self._sync_top_level()
                continue
            knowledge = self._parse_block(seen)
            if knowledge is not None:
                knowledges.append(knowledge)
        return knowledges

    def _parse_block(self, seen: set[str]) -> Knowledge | None:
        self._advance()
        try:
            name_token = self._expect("name", f"expected a knowledge name after '{KEYWORD}'")
            lbrace = self._expect(
                "lbrace", f"expected '{{' after knowledge name {name_token.value!r}"
            )
        except _Recover:
            self._sync_top_level()
            return None

        name = name_token.value
        duplicate = name in seen
        if duplicate:
            self._error_at(
                name_token,
                ParseErrorKind.DUPLICATE_KNOWLEDGE,
                f"knowledge {name!r} is already defined",
            )
        seen.add(name)

        properties: list[Property] = []
        while True:
            token = self._peek()
            if token.kind == "rbrace":
                self._advance()
                break
            if token.kind == "eof" or self._at_block_start():
                self._error_at(
                    lbrace, ParseErrorKind.SYNTAX, f"knowledge {name!r} is missing a closing '}}'"
                )
                break
            try:
                prop = self._parse_rule(len(properties) + 1)
            except _Recover:
                self._sync_rule()
                continue
            if prop is not None:
                properties.append(prop)

        if duplicate:
            return None
        if not properties:
            logger.warning("knowledge %r has no properties", name)
        return Knowledge(name=name, properties=tuple(properties))

    def _parse_rule(self, index: int) -> Property | None:
        token = self._peek()
        if token.kind == "bang":
            self._error_at(token, ParseErrorKind.NEGATED_HEAD, "rule heads cannot be negated")
            raise _Recover()
        head = self._parse_atom()

        token = self._peek()
        if token.kind == "dot":
            self._error_at(
                token,
                ParseErrorKind.EMPTY_BODY,
                f"rule for {head.predicate!r} has no body (facts are not allowed)",
            )
            self._advance()
            return None
        self._expect("implies", f"expected ':-' after rule head {str(head)!r}")

        body = [self._parse_literal()]
        while self._peek().kind == "comma":
            self._advance()
            body.append(self._parse_literal())
        self._expect("dot", "expected ',' or '.' after body literal")
        return Property(index=index, body=frozenset(body), head=head)

    def _parse_literal(self) -> Literal:
        polarity = Polarity.POSITIVE
        if self._peek().kind == "bang":
            self._advance()
            polarity = Polarity.NEGATIVE
        return Literal(atom=self._parse_atom(), polarity=polarity)

    def _parse_atom(self) -> Atom:
        token = self._expect("name", "expected a predicate name")
        if not PREDICATE_RE.match(token.value):
            self._error_at(
                token,
                ParseErrorKind.BAD_IDENTIFIER,
                f"predicate {token.value!r} must start with a lowercase letter",
            )
            raise _Recover()
        args: list[Term] = []
        if self._peek().kind == "lparen":
            self._advance()
            args.append(self._parse_term())
            while self._peek().kind == "comma":
                self._advance()
                args.append(self._parse_term())
            self._expect("rparen", "expected ',' or ')' in argument list")
        return Atom(predicate=token.value, args=tuple(args))

    def _parse_term(self) -> Term:
        token = self._expect("name", "expected a constant or variable")
        first = token.value[0]
        if first.isupper():
            return Term(kind=TermKind.VARIABLE, name=token.value)
        if first.islower() or first.isdigit():
            return Term(kind=TermKind.CONSTANT, name=token.value)
        self._error_at(
            token,
            ParseErrorKind.BAD_IDENTIFIER,
            f"term {token.value!r} must start with a letter or digit",
        )
        raise _Recover()


def parse_knowledge_base(text: str) -> KnowledgeBase:
    """
    Parse knowledge base source text.

    Args:
        text: Contents of a `.kb` file (LF or CRLF line endings)

    Returns:
        The parsed KnowledgeBase, property indices assigned in source order

    Raises:
        KnowledgeBaseParseError: carrying every error found, in source order
    """
    parser = _Parser(text)
    knowledges = parser.parse()
    if parser.errors:
        errors = sorted(parser.errors, key=lambda e: (e.span.start, e.span.end))
        raise KnowledgeBaseParseError(errors)
    kb = KnowledgeBase(knowledges=tuple(knowledges))
    logger.debug(
        "parsed %d knowledges, %d properties",
        len(kb.knowledges),
        sum(len(k.properties) for k in kb.knowledges),
    )
    return kb


def serialize_knowledge_base(kb: KnowledgeBase) -> str:
    """Render a knowledge base as canonical `.kb` text, one rule per line."""
    blocks = []
    for knowledge in kb.knowledges:
        lines = [f"{KEYWORD} {knowledge.name} {{"]
        for prop in knowledge.properties:
            body = ", ".join(str(literal) for literal in sorted_body(prop))
            lines.append(f"  {prop.head} :- {body}.")
        lines.append("}")
        blocks.append("\n".join(lines) + "\n")
    return "\n".join(blocks)

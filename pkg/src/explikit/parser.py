"""Parser for the Prolog-subset knowledge-base and example file formats.

Grammar (whitespace between tokens is insignificant, ``%`` starts a comment
running to end of line)::

    program  := clause*
    clause   := atom [ ":-" atom ("," atom)* ] "."
    atom     := name [ "(" term ("," term)* ")" ]
    term     := name | variable
    name     := [a-z][a-zA-Z0-9_]*
    variable := [A-Z_][a-zA-Z0-9_]*

Example files use one wrapper per line: ``pos(<ground atom>).`` or
``neg(<ground atom>).``.

Composite (function) terms are rejected: the term language is function-free.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .terms import (
    Atom,
    Clause,
    Constant,
    ExampleSet,
    KbError,
    KnowledgeBase,
    NonGroundFactError,
    Term,
    Variable,
)


class ParseError(KbError):
    """Malformed input, with position and the token class that was expected."""

    def __init__(self, line: int, column: int, expected: str, found: str = ""):
        self.line = line
        self.column = column
        self.expected = expected
        self.found = found
        at = f"line {line}, column {column}"
        detail = f", found {found!r}" if found else ""
        super().__init__(f"syntax error at {at}: expected {expected}{detail}")


@dataclass(frozen=True)
class _Token:
    kind: str  # NAME, VAR, LPAREN, RPAREN, COMMA, DOT, IMPLIES, EOF
    text: str
    line: int
    column: int


def _is_ident(ch: str) -> bool:
    return "a" <= ch <= "z" or "A" <= ch <= "Z" or "0" <= ch <= "9" or ch == "_"


def _tokenize(source: str) -> Iterator[_Token]:
    line, col = 1, 1
    i, n = 0, len(source)
    while i < n:
        ch = source[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch.isspace():
            i += 1
            col += 1
            continue
        if ch == "%":
            while i < n and source[i] != "\n":
                i += 1
            continue
        start_col = col
        if "a" <= ch <= "z":
            j = i
            while j < n and _is_ident(source[j]):
                j += 1
            yield _Token("NAME", source[i:j], line, start_col)
            col += j - i
            i = j
            continue
        if ch == "_" or "A" <= ch <= "Z":
            j = i
            while j < n and _is_ident(source[j]):
                j += 1
            yield _Token("VAR", source[i:j], line, start_col)
            col += j - i
            i = j
            continue
        if ch == ":" and i + 1 < n and source[i + 1] == "-":
            yield _Token("IMPLIES", ":-", line, start_col)
            i += 2
            col += 2
            continue
        single = {"(": "LPAREN", ")": "RPAREN", ",": "COMMA", ".": "DOT"}
        if ch in single:
            yield _Token(single[ch], ch, line, start_col)
            i += 1
            col += 1
            continue
        raise ParseError(line, start_col, "a token", ch)
    yield _Token("EOF", "", line, col)


class _Parser:
    def __init__(self, source: str):
        self._tokens = list(_tokenize(source))
        self._pos = 0

    @property
    def current(self) -> _Token:
        return self._tokens[self._pos]

    def _advance(self) -> _Token:
        tok = self._tokens[self._pos]
        self._pos += 1
        return tok

    def _expect(self, kind: str, expected: str) -> _Token:
        tok = self.current
        if tok.kind != kind:
            raise ParseError(tok.line, tok.column, expected, tok.text)
        return self._advance()

    def term(self) -> Term:
        tok = self.current
        if tok.kind == "NAME":
            nxt = self._tokens[self._pos + 1]
            if nxt.kind == "LPAREN":
                raise ParseError(
                    nxt.line, nxt.column, "',' or ')' (composite terms are not supported)", "("
                )
            self._advance()
            return Constant(tok.text)
        if tok.kind == "VAR":
            self._advance()
            return Variable(tok.text)
        raise ParseError(tok.line, tok.column, "a constant or variable", tok.text)

    def atom(self) -> Atom:
        name = self._expect("NAME", "a predicate name")
        if self.current.kind != "LPAREN":
            return Atom(name.text)
        self._advance()
        args = [self.term()]
        while self.current.kind == "COMMA":
            self._advance()
            args.append(self.term())
        self._expect("RPAREN", "')'")
        return Atom(name.text, tuple(args))

    def clause(self) -> tuple[Clause, int]:
        """One clause and the line it started on."""
        start = self.current
        head = self.atom()
        body: list[Atom] = []
        if self.current.kind == "IMPLIES":
            self._advance()
            body.append(self.atom())
            while self.current.kind == "COMMA":
                self._advance()
                body.append(self.atom())
        self._expect("DOT", "'.'")
        return Clause(head, tuple(body)), start.line

    def at_eof(self) -> bool:
        return self.current.kind == "EOF"


def parse_program(source: str) -> KnowledgeBase:
    """Parse knowledge-base text into a validated KnowledgeBase.

    Raises ParseError on malformed input, NonGroundFactError when a bodiless
    clause contains a variable, and ArityConflictError when one predicate
    name is used with two arities.
    """
    parser = _Parser(source)
    clauses: list[Clause] = []
    lines: dict[int, int] = {}
    while not parser.at_eof():
        clause, line = parser.clause()
        lines[len(clauses)] = line
        clauses.append(clause)
    return KnowledgeBase.from_clauses(clauses, lines=lines)


def parse_clause(source: str) -> Clause:
    """Parse exactly one clause; used for canonical round-trips."""
    parser = _Parser(source)
    clause, _ = parser.clause()
    if not parser.at_eof():
        tok = parser.current
        raise ParseError(tok.line, tok.column, "end of input", tok.text)
    return clause


def parse_atom(source: str) -> Atom:
    """Parse one atom, e.g. a query crossing the API as text."""
    parser = _Parser(source)
    atom = parser.atom()
    if parser.current.kind == "DOT":
        parser._advance()
    if not parser.at_eof():
        tok = parser.current
        raise ParseError(tok.line, tok.column, "end of input", tok.text)
    return atom


_POLARITIES = {"pos": True, "neg": False}


def parse_examples(source: str) -> ExampleSet:
    """Parse a ``pos(...)`` / ``neg(...)`` examples file.

    File order is preserved; the target predicate is inferred from the first
    example. Raises DisjointnessViolationError when an atom occurs with both
    polarities and MixedTargetError when target predicates differ.
    """
    parser = _Parser(source)
    positives: list[Atom] = []
    negatives: list[Atom] = []
    while not parser.at_eof():
        tok = parser.current
        if tok.kind != "NAME" or tok.text not in _POLARITIES:
            raise ParseError(tok.line, tok.column, "'pos' or 'neg'", tok.text)
        parser._advance()
        parser._expect("LPAREN", "'('")
        atom = parser.atom()
        parser._expect("RPAREN", "')'")
        parser._expect("DOT", "'.'")
        if not atom.is_ground():
            raise NonGroundFactError(Clause(atom), tok.line)
        (positives if _POLARITIES[tok.text] else negatives).append(atom)
    return ExampleSet.from_atoms(positives, negatives)

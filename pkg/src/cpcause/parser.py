"""Text formats for theories (``.cpl``) and stories (``.story``).

Theory grammar::

    theory   = { law } ;
    law      = [ "#" label ] head "<-" [ body ] "." ;
    head     = [ disjunct { "|" disjunct } ] ;
    disjunct = atom [ ":" prob ] ;
    body     = literal { "," literal } ;
    literal  = [ "~" ] atom ;
    atom     = ident [ "(" ident { "," ident } ")" ] ;
    prob     = decimal | integer "/" integer | ident ;

A ``prob`` written as an identifier is a parameter placeholder that must be
bound through the ``params`` argument (the CLI's ``--set NAME=VALUE``).
``%`` starts a comment that runs to the end of the line.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .kernel import (
    Atom,
    CPLaw,
    CPLogicError,
    CPTheory,
    Disjunct,
    Literal,
    TheoryError,
    probability_from_text,
)


@dataclass(frozen=True)
class SourceDiagnostic:
    line: int
    column: int
    message: str

    def __str__(self) -> str:
        return f"{self.line}:{self.column}: {self.message}"


class ParseError(CPLogicError):
    def __init__(self, diagnostic: SourceDiagnostic):
        super().__init__(str(diagnostic))
        self.diagnostic = diagnostic


_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>%[^\n]*)
  | (?P<arrow><-)
  | (?P<number>\d+(?:\.\d+)?|\.\d+)
  | (?P<ident>[A-Za-z][A-Za-z0-9_]*)
  | (?P<var>_[A-Za-z0-9_]*)
  | (?P<punct>[#|:,.()~/])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Tok]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(SourceDiagnostic(line, pos - line_start + 1, f"unexpected character {text[pos]!r}"))
        kind = m.lastgroup
        chunk = m.group()
        if kind not in ("ws", "comment"):
            tokens.append(_Tok(kind if kind != "punct" else chunk, chunk, line, pos - line_start + 1))
        newlines = chunk.count("\n")
        if newlines:
            line += newlines
            line_start = pos + chunk.rindex("\n") + 1
        pos = m.end()
    tokens.append(_Tok("eof", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text: str, params: Mapping[str, Fraction] | None = None):
        self.toks = _tokenize(text)
        self.i = 0
        self.params = dict(params or {})
        self.used_params: set[str] = set()

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def error(self, message: str, tok: _Tok | None = None):
        tok = tok or self.tok
        raise ParseError(SourceDiagnostic(tok.line, tok.col, message))

    def expect(self, kind: str) -> _Tok:
        tok = self.tok
        if tok.kind != kind:
            found = "end of input" if tok.kind == "eof" else repr(tok.text)
            self.error(f"expected {kind!r}, found {found}")
        self.i += 1
        return tok

    def accept(self, kind: str) -> _Tok | None:
        if self.tok.kind == kind:
            self.i += 1
            return self.toks[self.i - 1]
        return None

    def atom(self) -> Atom:
        if self.tok.kind == "var":
            self.error(f"non-ground atom: variable {self.tok.text!r} is not allowed")
        name = self.expect("ident").text
        args = []
        if self.accept("("):
            while True:
                if self.tok.kind == "var":
                    self.error(f"non-ground atom: variable {self.tok.text!r} is not allowed")
                args.append(self.expect("ident").text)
                if not self.accept(","):
                    break
            self.expect(")")
        return Atom(name, tuple(args))

    def literal(self) -> Literal:
        negated = self.accept("~") is not None
        return Literal(self.atom(), not negated)

    def literals(self, stop: str) -> list[Literal]:
        body = []
        if self.tok.kind == stop:
            return body
        body.append(self.literal())
        while self.accept(","):
            body.append(self.literal())
        return body

    def prob(self) -> Fraction:
        tok = self.tok
        if tok.kind == "ident":
            self.i += 1
            if tok.text not in self.params:
                self.error(f"unbound probability parameter {tok.text!r}", tok)
            self.used_params.add(tok.text)
            return self.params[tok.text]
        text = self.expect("number").text
        if self.accept("/"):
            text += "/" + self.expect("number").text
        try:
            return probability_from_text(text)
        except ValueError as exc:
            self.error(str(exc), tok)

    def law(self, law_id: int) -> CPLaw:
        start = self.tok
        label = None
        if self.accept("#"):
            label = self.expect("ident").text
        head = []
        if self.tok.kind != "arrow":
            while True:
                dtok = self.tok
                atom = self.atom()
                prob = self.prob() if self.accept(":") else Fraction(1)
                if prob == 0:
                    self.error(f"disjunct {atom} has probability 0", dtok)
                head.append(Disjunct(atom, prob))
                if not self.accept("|"):
                    break
        self.expect("arrow")
        body = self.literals(".")
        self.expect(".")
        try:
            return CPLaw(law_id, tuple(head), tuple(body), label)
        except TheoryError as exc:
            self.error(str(exc), start)

    def theory(self) -> CPTheory:
        laws = []
        starts = []
        while self.tok.kind != "eof":
            starts.append(self.tok)
            laws.append(self.law(len(laws) + 1))
        labels = [law.label for law in laws if law.label]
        if len(set(labels)) != len(labels):
            self.error("duplicate law label", starts[0])
        try:
            return CPTheory(tuple(laws))
        except TheoryError as exc:
            culprit = _culprit(str(exc), starts)
            raise ParseError(SourceDiagnostic(culprit.line, culprit.col, str(exc))) from None


def _culprit(message: str, starts: list[_Tok]) -> _Tok:
    m = re.search(r"law (\d+)", message)
    if m and 1 <= int(m.group(1)) <= len(starts):
        return starts[int(m.group(1)) - 1]
    return starts[0]


def parse_theory(text: str, params: Mapping[str, Fraction] | None = None) -> CPTheory:
    """Parse a theory; law ids are assigned 1..n in textual order."""
    parser = _Parser(text, params)
    theory = parser.theory()
    unused = set(parser.params) - parser.used_params
    if unused:
        raise ParseError(SourceDiagnostic(1, 1, f"parameter(s) not used in theory: {', '.join(sorted(unused))}"))
    return theory


def parse_literals(text: str) -> list[Literal]:
    """Parse a comma-separated conjunction such as ``Breaks, ~Throws(Suzy)``."""
    parser = _Parser(text)
    lits = parser.literals("eof")
    parser.expect("eof")
    return lits


def parse_literal(text: str) -> Literal:
    lits = parse_literals(text)
    if len(lits) != 1:
        raise ParseError(SourceDiagnostic(1, 1, f"expected exactly one literal, got {len(lits)}"))
    return lits[0]


def parse_atom(text: str) -> Atom:
    lit = parse_literal(text)
    if not lit.positive:
        raise ParseError(SourceDiagnostic(1, 1, "expected an atom, got a negated literal"))
    return lit.atom


def format_theory(theory: CPTheory) -> str:
    """Canonical listing, one law per line; ``parse_theory`` inverts it."""
    if not theory.laws:
        return ""
    return "\n".join(str(law) for law in theory.laws) + "\n"


def parse_steps(text: str, theory: CPTheory) -> list[tuple[int, int | None]]:
    """Resolve ``lawref:outcome`` steps to ``(law id, outcome)`` pairs."""
    steps = []
    for line_no, line in enumerate(text.splitlines(), start=1):
        line = line.split("%", 1)[0]
        for m in re.finditer(r"\S+", line):
            word = m.group()
            diag = lambda msg: ParseError(SourceDiagnostic(line_no, m.start() + 1, msg))  # noqa: E731
            ref, sep, outcome = word.partition(":")
            if not sep or not ref or not outcome:
                raise diag(f"malformed step {word!r}; expected lawref:outcome")
            try:
                law = theory.by_ref(ref)
            except TheoryError as exc:
                raise diag(str(exc)) from None
            if outcome == "none":
                steps.append((law.id, None))
            elif outcome.isdigit():
                steps.append((law.id, int(outcome)))
            else:
                raise diag(f"bad outcome {outcome!r}; expected a disjunct index or 'none'")
    return steps


def parse_story(text: str, theory: CPTheory):
    """Parse and validate a story against ``theory``."""
    from .story import validate

    return validate(theory, parse_steps(text, theory))


def format_story(story) -> str:
    parts = [f"{law_id}:{'none' if outcome is None else outcome}" for law_id, outcome in story.steps]
    return " ".join(parts) + "\n"

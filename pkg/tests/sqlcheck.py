"""A standalone checker for the SELECT subset the compiler may emit.

Written from the SQL side of the fence, sharing nothing with the package:
its own tokenizer and grammar. `check_select` raises ValueError on the
first violation, so a test can simply assert it returns.

    select     := SELECT projection FROM ident EOF
                | SELECT projection FROM ident WHERE disjunction EOF
    projection := '*' | column (',' column)*
    column     := ident ('.' ident)?
    disjunction:= conjunction (OR conjunction)*
    conjunction:= factor (AND factor)*
    factor     := NOT '(' disjunction ')' | '(' disjunction ')' | comparison
    comparison := operand ('=' | '<>' | '<' | '<=' | '>' | '>=') operand
    operand    := column | string | number

Identifiers are bare words, double-quoted (ANSI) or backquoted (MySQL),
with the quote doubled as escape. `!=` is deliberately rejected: emitted
SQL must use `<>`.
"""

from __future__ import annotations

import re

_TOKEN = re.compile(
    r"""\s*(?:
        (?P<word>[A-Za-z_][A-Za-z0-9_]*)
      | (?P<dquoted>"(?:[^"]|"")*")
      | (?P<bquoted>`(?:[^`]|``)*`)
      | (?P<string>'(?:[^']|'')*')
      | (?P<number>[0-9]+(?:\.[0-9]+)?)
      | (?P<op><>|<=|>=|[=<>])
      | (?P<punct>[(),.*])
      | (?P<minus>-)
    )""",
    re.VERBOSE,
)

_KEYWORDS = {"SELECT", "FROM", "WHERE", "AND", "OR", "NOT"}


def check_select(sql: str) -> None:
    """Raise ValueError unless `sql` is a well-formed SELECT of the subset."""
    checker = _Checker(_tokens(sql))
    checker.select()
    checker.expect_end()


def _tokens(sql: str) -> list[tuple[str, str]]:
    out: list[tuple[str, str]] = []
    pos = 0
    while pos < len(sql):
        match = _TOKEN.match(sql, pos)
        if match is None:
            rest = sql[pos:].strip()
            if not rest:
                break
            raise ValueError(f"unrecognized SQL at {rest[:20]!r}")
        pos = match.end()
        kind = match.lastgroup
        text = match.group(kind)
        if kind == "word" and text.upper() in _KEYWORDS:
            out.append(("kw", text.upper()))
        elif kind in ("word", "dquoted", "bquoted"):
            out.append(("ident", text))
        else:
            out.append((kind, text))
    return out


class _Checker:
    def __init__(self, tokens: list[tuple[str, str]]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> tuple[str, str]:
        if self.pos < len(self.tokens):
            return self.tokens[self.pos]
        return ("end", "")

    def take(self) -> tuple[str, str]:
        token = self.peek()
        self.pos += 1
        return token

    def expect(self, kind: str, text: str | None = None) -> tuple[str, str]:
        token = self.take()
        if token[0] != kind or (text is not None and token[1] != text):
            raise ValueError(f"expected {text or kind}, got {token}")
        return token

    def expect_end(self) -> None:
        if self.peek()[0] != "end":
            raise ValueError(f"trailing tokens: {self.tokens[self.pos:]}")

    def select(self) -> None:
        self.expect("kw", "SELECT")
        self.projection()
        self.expect("kw", "FROM")
        self.expect("ident")
        if self.peek() == ("kw", "WHERE"):
            self.take()
            self.disjunction()

    def projection(self) -> None:
        if self.peek() == ("punct", "*"):
            self.take()
            return
        self.column()
        while self.peek() == ("punct", ","):
            self.take()
            self.column()

    def column(self) -> None:
        self.expect("ident")
        if self.peek() == ("punct", "."):
            self.take()
            self.expect("ident")

    def disjunction(self) -> None:
        self.conjunction()
        while self.peek() == ("kw", "OR"):
            self.take()
            self.conjunction()

    def conjunction(self) -> None:
        self.factor()
        while self.peek() == ("kw", "AND"):
            self.take()
            self.factor()

    def factor(self) -> None:
        if self.peek() == ("kw", "NOT"):
            self.take()
            self.expect("punct", "(")
            self.disjunction()
            self.expect("punct", ")")
            return
        if self.peek() == ("punct", "("):
            self.take()
            self.disjunction()
            self.expect("punct", ")")
            return
        self.comparison()

    def comparison(self) -> None:
        self.operand()
        self.expect("op")
        self.operand()

    def operand(self) -> None:
        kind = self.peek()[0]
        if kind == "ident":
            self.column()
        elif kind in ("string", "number"):
            self.take()
        elif kind == "minus":
            self.take()
            self.expect("number")
        else:
            raise ValueError(f"expected operand, got {self.peek()}")

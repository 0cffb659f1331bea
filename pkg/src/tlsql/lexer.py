"""Tokenizer for TLSQL source text.

Produces a position-annotated token stream ending in a single EOF token.
Keywords are matched case-insensitively; identifier case is preserved.
String literals are single-quoted with '' as the embedded-quote escape,
and ``--`` starts a comment running to end of line.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum, unique


@unique
class Keyword(Enum):
    PREDICT = "PREDICT"
    VALUE = "VALUE"
    TRAIN = "TRAIN"
    WITH = "WITH"
    VALIDATE = "VALIDATE"
    FROM = "FROM"
    WHERE = "WHERE"
    AND = "AND"
    OR = "OR"
    NOT = "NOT"
    CLF = "CLF"
    REG = "REG"


@unique
class TokenKind(Enum):
    KEYWORD = "keyword"
    IDENT = "identifier"
    INT = "integer"
    FLOAT = "float"
    STRING = "string"
    OP = "operator"
    PUNCT = "punctuation"
    EOF = "eof"


@dataclass(frozen=True)
class SourcePos:
    """1-based line and column plus byte offset from the start of input.

    Columns count characters (a tab is one column); offsets count bytes of
    the UTF-8 encoding, so the two diverge only on non-ASCII input.
    """

    line: int
    column: int
    offset: int

    def __str__(self) -> str:
        return f"{self.line}:{self.column}"


@dataclass(frozen=True)
class Token:
    """One lexical unit. Position does not participate in equality."""

    kind: TokenKind
    lexeme: str
    pos: SourcePos = field(compare=False)
    keyword: Keyword | None = None

    def surface(self) -> str:
        """The form this token takes in source text (strings re-quoted)."""
        if self.kind is TokenKind.STRING:
            return "'" + self.lexeme.replace("'", "''") + "'"
        return self.lexeme

    def describe(self) -> str:
        """Human-readable form for diagnostics."""
        if self.kind is TokenKind.EOF:
            return "end of input"
        if self.kind is TokenKind.KEYWORD:
            return f"keyword {self.keyword.value}"
        if self.kind is TokenKind.IDENT:
            return f"identifier '{self.lexeme}'"
        if self.kind is TokenKind.STRING:
            return f"string {self.surface()}"
        if self.kind in (TokenKind.INT, TokenKind.FLOAT):
            return f"number {self.lexeme}"
        return f"'{self.lexeme}'"


@unique
class LexErrorCode(Enum):
    INVALID_CHAR = "E001"
    UNTERMINATED_STRING = "E002"


class LexError(Exception):
    """Lexical error with the exact source position of the offense.

    Points at the offending character for INVALID_CHAR and at the opening
    quote for UNTERMINATED_STRING.
    """

    def __init__(self, code: LexErrorCode, pos: SourcePos, message: str):
        super().__init__(f"{pos}: {message}")
        self.code = code
        self.pos = pos
        self.message = message


_KEYWORDS = {k.value: k for k in Keyword}
_PUNCT = "(),.;"
_SINGLE_OPS = "=<>"


class _Scanner:
    def __init__(self, source: str):
        self.src = source
        self.i = 0
        self.n = len(source)
        self.line = 1
        self.column = 1
        self.offset = 0

    def pos(self) -> SourcePos:
        return SourcePos(self.line, self.column, self.offset)

    def peek(self, ahead: int = 0) -> str:
        j = self.i + ahead
        return self.src[j] if j < self.n else ""

    def advance(self) -> str:
        ch = self.src[self.i]
        self.i += 1
        self.offset += len(ch.encode("utf-8"))
        if ch == "\n":
            self.line += 1
            self.column = 1
        else:
            self.column += 1
        return ch

    def skip_trivia(self) -> None:
        while True:
            while self.peek() in " \t\r\n" and self.peek() != "":
                self.advance()
            if self.peek() == "-" and self.peek(1) == "-":
                while self.peek() not in ("", "\n"):
                    self.advance()
                continue
            return


def tokenize(source: str) -> list[Token]:
    """Split TLSQL source into tokens, ending with one EOF token.

    Raises LexError for characters outside the accepted alphabet and for
    string literals still open at end of input.
    """
    sc = _Scanner(source)
    out: list[Token] = []
    while True:
        sc.skip_trivia()
        start = sc.pos()
        ch = sc.peek()
        if ch == "":
            out.append(Token(TokenKind.EOF, "", start))
            return out
        if ch.isascii() and (ch.isalpha() or ch == "_"):
            out.append(_scan_word(sc, start))
        elif ch.isascii() and ch.isdigit():
            out.append(_scan_number(sc, start))
        elif ch == "'":
            out.append(_scan_string(sc, start))
        elif ch == "!":
            if sc.peek(1) == "=":
                sc.advance()
                sc.advance()
                out.append(Token(TokenKind.OP, "!=", start))
            else:
                raise LexError(
                    LexErrorCode.INVALID_CHAR, start, "invalid character '!' (did you mean '!='?)"
                )
        elif ch in _SINGLE_OPS:
            sc.advance()
            lexeme = ch
            if ch == "<" and sc.peek() in (">", "="):
                lexeme += sc.advance()
            elif ch == ">" and sc.peek() == "=":
                lexeme += sc.advance()
            out.append(Token(TokenKind.OP, lexeme, start))
        elif ch == "-":
            # '--' comments were consumed by skip_trivia; a lone '-' is the
            # unary minus handled at parser level.
            sc.advance()
            out.append(Token(TokenKind.OP, "-", start))
        elif ch in _PUNCT:
            sc.advance()
            out.append(Token(TokenKind.PUNCT, ch, start))
        else:
            raise LexError(LexErrorCode.INVALID_CHAR, start, f"invalid character {ch!r}")


def _scan_word(sc: _Scanner, start: SourcePos) -> Token:
    begin = sc.i
    sc.advance()
    while True:
        ch = sc.peek()
        if ch.isascii() and (ch.isalnum() or ch == "_"):
            sc.advance()
        else:
            break
    lexeme = sc.src[begin : sc.i]
    keyword = _KEYWORDS.get(lexeme.upper())
    if keyword is not None:
        return Token(TokenKind.KEYWORD, lexeme, start, keyword)
    return Token(TokenKind.IDENT, lexeme, start)


def _scan_number(sc: _Scanner, start: SourcePos) -> Token:
    begin = sc.i
    while sc.peek().isascii() and sc.peek().isdigit():
        sc.advance()
    if sc.peek() == "." and sc.peek(1).isascii() and sc.peek(1).isdigit():
        sc.advance()
        while sc.peek().isascii() and sc.peek().isdigit():
            sc.advance()
        return Token(TokenKind.FLOAT, sc.src[begin : sc.i], start)
    return Token(TokenKind.INT, sc.src[begin : sc.i], start)


def _scan_string(sc: _Scanner, start: SourcePos) -> Token:
    sc.advance()  # opening quote
    parts: list[str] = []
    while True:
        ch = sc.peek()
        if ch == "":
            raise LexError(
                LexErrorCode.UNTERMINATED_STRING, start, "unterminated string literal"
            )
        if ch == "'":
            if sc.peek(1) == "'":
                sc.advance()
                sc.advance()
                parts.append("'")
                continue
            sc.advance()
            return Token(TokenKind.STRING, "".join(parts), start)
        parts.append(sc.advance())

"""Recursive-descent parser for TLSQL.

Grammar (keywords case-insensitive, statements in any order, optional ';'
separators):

    program      := stmt+ EOF
    stmt         := predict | train | validate
    predict      := PREDICT VALUE '(' column_ref ',' (CLF|REG) ')' FROM ident [WHERE expr]
    train        := TRAIN WITH column_ref (',' column_ref)* FROM ident (',' ident)* [WHERE expr]
    validate     := VALIDATE WITH column_ref (',' column_ref)* FROM ident [WHERE expr]
    column_ref   := ident ['.' ident]
    expr         := and_expr (OR and_expr)*
    and_expr     := unary (AND unary)*
    unary        := NOT unary | '(' expr ')' | cmp
    cmp          := operand ('='|'!='|'<>'|'<'|'<='|'>'|'>=') operand
    operand      := column_ref | literal | '-' number_literal

Parsing fails fast on the first error. A comparison with the column on the
right is flipped so Cmp nodes always hold the column on the left; a
comparison between two literals is rejected.
"""

from __future__ import annotations

from enum import Enum, unique

from .ast import (
    CmpOp,
    ColumnRef,
    Cmp,
    Condition,
    Literal,
    LiteralKind,
    Not,
    PredictStmt,
    Program,
    TaskType,
    TrainStmt,
    ValidateStmt,
    conjoin,
    disjoin,
)
from .lexer import Keyword, SourcePos, Token, TokenKind, tokenize


@unique
class ParseErrorKind(Enum):
    UNEXPECTED_TOKEN = "E101"
    DUPLICATE_STATEMENT = "E102"
    MISSING_PREDICT = "E103"


class ParseError(Exception):
    """Syntax error at a single token, with the set of acceptable forms."""

    def __init__(
        self,
        pos: SourcePos,
        found: str,
        expected: list[str],
        message: str | None = None,
        kind: ParseErrorKind = ParseErrorKind.UNEXPECTED_TOKEN,
        span: int = 1,
    ):
        assert expected, "ParseError requires a non-empty expected set"
        if message is None:
            message = f"expected {_join_or(expected)}, found {found}"
        super().__init__(f"{pos}: {message}")
        self.pos = pos
        self.found = found
        self.expected = expected
        self.message = message
        self.kind = kind
        self.span = span


def _join_or(items: list[str]) -> str:
    if len(items) == 1:
        return items[0]
    return ", ".join(items[:-1]) + " or " + items[-1]


_CMP_OPS = {
    "=": CmpOp.EQ,
    "!=": CmpOp.NE,
    "<>": CmpOp.NE,
    "<": CmpOp.LT,
    "<=": CmpOp.LE,
    ">": CmpOp.GT,
    ">=": CmpOp.GE,
}


class Parser:
    def __init__(self, tokens: list[Token]):
        self._tokens = tokens
        self._i = 0

    # --- token plumbing -------------------------------------------------

    def _peek(self, ahead: int = 0) -> Token:
        j = min(self._i + ahead, len(self._tokens) - 1)
        return self._tokens[j]

    def _advance(self) -> Token:
        tok = self._tokens[self._i]
        if tok.kind is not TokenKind.EOF:
            self._i += 1
        return tok

    def _error(self, expected: list[str], tok: Token | None = None, **kw) -> ParseError:
        tok = tok or self._peek()
        return ParseError(
            tok.pos, tok.describe(), expected, span=max(1, len(tok.lexeme)), **kw
        )

    def _match_keyword(self, kw: Keyword) -> Token | None:
        tok = self._peek()
        if tok.kind is TokenKind.KEYWORD and tok.keyword is kw:
            return self._advance()
        return None

    def _expect_keyword(self, kw: Keyword) -> Token:
        tok = self._match_keyword(kw)
        if tok is None:
            raise self._error([kw.value])
        return tok

    def _match_punct(self, ch: str) -> Token | None:
        tok = self._peek()
        if tok.kind is TokenKind.PUNCT and tok.lexeme == ch:
            return self._advance()
        return None

    def _expect_punct(self, ch: str) -> Token:
        tok = self._match_punct(ch)
        if tok is None:
            raise self._error([f"'{ch}'"])
        return tok

    def _expect_ident(self, what: str) -> Token:
        tok = self._peek()
        if tok.kind is not TokenKind.IDENT:
            raise self._error([what])
        return self._advance()

    # --- grammar --------------------------------------------------------

    def parse_program(self) -> Program:
        predict: PredictStmt | None = None
        train: TrainStmt | None = None
        validate: ValidateStmt | None = None
        while True:
            while self._match_punct(";"):
                pass
            tok = self._peek()
            if tok.kind is TokenKind.EOF:
                break
            if tok.keyword is Keyword.PREDICT:
                if predict is not None:
                    raise self._dup("PREDICT", tok)
                predict = self._predict_stmt()
            elif tok.keyword is Keyword.TRAIN:
                if train is not None:
                    raise self._dup("TRAIN", tok)
                train = self._train_stmt()
            elif tok.keyword is Keyword.VALIDATE:
                if validate is not None:
                    raise self._dup("VALIDATE", tok)
                validate = self._validate_stmt()
            else:
                raise self._error(["PREDICT", "TRAIN", "VALIDATE"])
        if predict is None:
            raise ParseError(
                tok.pos,
                tok.describe(),
                ["PREDICT statement"],
                message="expected PREDICT statement",
                kind=ParseErrorKind.MISSING_PREDICT,
            )
        return Program(predict, train, validate)

    def _dup(self, name: str, tok: Token) -> ParseError:
        return ParseError(
            tok.pos,
            tok.describe(),
            ["a statement kind not already given"],
            message=f"duplicate {name} statement",
            kind=ParseErrorKind.DUPLICATE_STATEMENT,
            span=len(tok.lexeme),
        )

    def _predict_stmt(self) -> PredictStmt:
        start = self._expect_keyword(Keyword.PREDICT)
        self._expect_keyword(Keyword.VALUE)
        self._expect_punct("(")
        target = self._column_ref()
        self._expect_punct(",")
        tok = self._peek()
        if tok.keyword is Keyword.CLF:
            task = TaskType.CLF
        elif tok.keyword is Keyword.REG:
            task = TaskType.REG
        else:
            raise self._error(["CLF", "REG"])
        self._advance()
        self._expect_punct(")")
        self._expect_keyword(Keyword.FROM)
        table = self._expect_ident("table name")
        where = self._opt_where()
        return PredictStmt(target, task, table.lexeme, where, pos=start.pos)

    def _train_stmt(self) -> TrainStmt:
        start = self._expect_keyword(Keyword.TRAIN)
        self._expect_keyword(Keyword.WITH)
        columns = self._column_ref_list()
        self._expect_keyword(Keyword.FROM)
        tables: list[str] = []
        while True:
            tok = self._expect_ident("table name")
            if tok.lexeme in tables:
                raise ParseError(
                    tok.pos,
                    tok.describe(),
                    ["a table name not already listed"],
                    message=f"duplicate table '{tok.lexeme}' in FROM clause",
                    span=len(tok.lexeme),
                )
            tables.append(tok.lexeme)
            if not self._match_punct(","):
                break
        where = self._opt_where()
        return TrainStmt(tuple(columns), tuple(tables), where, pos=start.pos)

    def _validate_stmt(self) -> ValidateStmt:
        start = self._expect_keyword(Keyword.VALIDATE)
        self._expect_keyword(Keyword.WITH)
        columns = self._column_ref_list()
        self._expect_keyword(Keyword.FROM)
        table = self._expect_ident("table name")
        where = self._opt_where()
        return ValidateStmt(tuple(columns), table.lexeme, where, pos=start.pos)

    def _column_ref_list(self) -> list[ColumnRef]:
        refs = [self._column_ref()]
        while self._match_punct(","):
            refs.append(self._column_ref())
        return refs

    def _column_ref(self) -> ColumnRef:
        first = self._expect_ident("column reference")
        if self._match_punct("."):
            second = self._expect_ident("column name")
            return ColumnRef(first.lexeme, second.lexeme, pos=first.pos)
        return ColumnRef(None, first.lexeme, pos=first.pos)

    def _opt_where(self) -> Condition | None:
        if self._match_keyword(Keyword.WHERE):
            return self._expr()
        return None

    def _expr(self) -> Condition:
        parts = [self._and_expr()]
        while self._match_keyword(Keyword.OR):
            parts.append(self._and_expr())
        return disjoin(parts)

    def _and_expr(self) -> Condition:
        parts = [self._unary()]
        while self._match_keyword(Keyword.AND):
            parts.append(self._unary())
        return conjoin(parts)

    def _unary(self) -> Condition:
        if self._match_keyword(Keyword.NOT):
            return Not(self._unary())
        if self._match_punct("("):
            inner = self._expr()
            self._expect_punct(")")
            return inner
        return self._cmp()

    def _cmp(self) -> Condition:
        left = self._operand()
        tok = self._peek()
        op = _CMP_OPS.get(tok.lexeme) if tok.kind is TokenKind.OP else None
        if op is None:
            raise self._error(["comparison operator"])
        self._advance()
        right = self._operand()
        if isinstance(left, ColumnRef):
            return Cmp(left, op, right)
        if isinstance(right, ColumnRef):
            return Cmp(right, op.flipped(), left)
        raise ParseError(
            left.pos,
            f"number {left.text}" if left.kind is not LiteralKind.STR else "string literal",
            ["column reference"],
            message="comparison must reference at least one column",
            span=len(left.text),
        )

    def _operand(self) -> ColumnRef | Literal:
        tok = self._peek()
        if tok.kind is TokenKind.IDENT:
            return self._column_ref()
        if tok.kind is TokenKind.INT:
            self._advance()
            return Literal(LiteralKind.INT, tok.lexeme, int(tok.lexeme), pos=tok.pos)
        if tok.kind is TokenKind.FLOAT:
            self._advance()
            return Literal(LiteralKind.FLOAT, tok.lexeme, float(tok.lexeme), pos=tok.pos)
        if tok.kind is TokenKind.STRING:
            self._advance()
            return Literal(LiteralKind.STR, tok.lexeme, tok.lexeme, pos=tok.pos)
        if tok.kind is TokenKind.OP and tok.lexeme == "-":
            self._advance()
            num = self._peek()
            if num.kind is TokenKind.INT:
                self._advance()
                return Literal(LiteralKind.INT, "-" + num.lexeme, -int(num.lexeme), pos=tok.pos)
            if num.kind is TokenKind.FLOAT:
                self._advance()
                return Literal(
                    LiteralKind.FLOAT, "-" + num.lexeme, -float(num.lexeme), pos=tok.pos
                )
            raise self._error(["number"])
        raise self._error(["column reference", "literal"])


def parse(source: str) -> Program:
    """Parse TLSQL source text into a Program.

    Raises LexError on malformed tokens and ParseError on grammar,
    duplicate-statement, or missing-PREDICT violations.
    """
    return Parser(tokenize(source)).parse_program()

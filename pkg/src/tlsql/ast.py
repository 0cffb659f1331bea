"""AST for TLSQL programs.

All nodes are immutable. Source positions are carried for diagnostics but
never participate in equality, so two parses of equivalent text compare
equal regardless of layout.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum, unique
from typing import Iterator, Union

from .lexer import SourcePos


@unique
class TaskType(Enum):
    CLF = "CLF"
    REG = "REG"


@unique
class CmpOp(Enum):
    EQ = "="
    NE = "<>"
    LT = "<"
    LE = "<="
    GT = ">"
    GE = ">="

    def flipped(self) -> "CmpOp":
        """The operator with its operands swapped: a < b  <=>  b > a."""
        return _FLIP[self]


_FLIP = {
    CmpOp.EQ: CmpOp.EQ,
    CmpOp.NE: CmpOp.NE,
    CmpOp.LT: CmpOp.GT,
    CmpOp.LE: CmpOp.GE,
    CmpOp.GT: CmpOp.LT,
    CmpOp.GE: CmpOp.LE,
}


@unique
class LiteralKind(Enum):
    STR = "str"
    INT = "int"
    FLOAT = "float"


@dataclass(frozen=True)
class ColumnRef:
    """A `table.column` or bare `column` reference."""

    table: str | None
    column: str
    pos: SourcePos | None = field(compare=False, default=None)

    def __str__(self) -> str:
        return f"{self.table}.{self.column}" if self.table else self.column

    def with_table(self, table: str) -> "ColumnRef":
        return replace(self, table=table)


@dataclass(frozen=True)
class Literal:
    """A string, integer, or float constant.

    `text` is the surface form used when rendering; `value` is the parsed
    Python value. For strings the two coincide (unquoted, unescaped).
    """

    kind: LiteralKind
    text: str
    value: str | int | float
    pos: SourcePos | None = field(compare=False, default=None)

    @staticmethod
    def string(value: str) -> "Literal":
        return Literal(LiteralKind.STR, value, value)

    @staticmethod
    def integer(value: int) -> "Literal":
        return Literal(LiteralKind.INT, str(value), value)

    @staticmethod
    def float_(value: float) -> "Literal":
        return Literal(LiteralKind.FLOAT, repr(value), value)


@dataclass(frozen=True)
class Cmp:
    """A single comparison. The left side is always a column."""

    left: ColumnRef
    op: CmpOp
    right: Union[Literal, ColumnRef]


@dataclass(frozen=True)
class And:
    items: tuple["Condition", ...]

    def __post_init__(self) -> None:
        assert len(self.items) >= 2, "And requires at least two conjuncts"


@dataclass(frozen=True)
class Or:
    items: tuple["Condition", ...]

    def __post_init__(self) -> None:
        assert len(self.items) >= 2, "Or requires at least two disjuncts"


@dataclass(frozen=True)
class Not:
    item: "Condition"


Condition = Union[Cmp, And, Or, Not]


def conjoin(items: list[Condition]) -> Condition:
    """AND together conditions, splicing nested Ands and collapsing singletons."""
    flat: list[Condition] = []
    for item in items:
        if isinstance(item, And):
            flat.extend(item.items)
        else:
            flat.append(item)
    if len(flat) == 1:
        return flat[0]
    return And(tuple(flat))


def disjoin(items: list[Condition]) -> Condition:
    """OR together conditions, splicing nested Ors and collapsing singletons."""
    flat: list[Condition] = []
    for item in items:
        if isinstance(item, Or):
            flat.extend(item.items)
        else:
            flat.append(item)
    if len(flat) == 1:
        return flat[0]
    return Or(tuple(flat))


def column_refs(cond: Condition) -> Iterator[ColumnRef]:
    """All column references in the condition, left to right."""
    if isinstance(cond, Cmp):
        yield cond.left
        if isinstance(cond.right, ColumnRef):
            yield cond.right
    elif isinstance(cond, (And, Or)):
        for item in cond.items:
            yield from column_refs(item)
    else:
        yield from column_refs(cond.item)


def condition_pos(cond: Condition) -> SourcePos | None:
    """Position of the leftmost column reference, if any carries one."""
    for ref in column_refs(cond):
        if ref.pos is not None:
            return ref.pos
    return None


@dataclass(frozen=True)
class PredictStmt:
    target: ColumnRef
    task_type: TaskType
    from_table: str
    where: Condition | None = None
    pos: SourcePos | None = field(compare=False, default=None)


@dataclass(frozen=True)
class TrainStmt:
    columns: tuple[ColumnRef, ...]
    from_tables: tuple[str, ...]
    where: Condition | None = None
    pos: SourcePos | None = field(compare=False, default=None)

    def __post_init__(self) -> None:
        assert self.columns, "TRAIN requires at least one column selector"
        assert self.from_tables, "TRAIN requires at least one table"
        assert len(set(self.from_tables)) == len(self.from_tables), (
            "TRAIN FROM tables must be distinct"
        )


@dataclass(frozen=True)
class ValidateStmt:
    columns: tuple[ColumnRef, ...]
    from_table: str
    where: Condition | None = None
    pos: SourcePos | None = field(compare=False, default=None)

    def __post_init__(self) -> None:
        assert self.columns, "VALIDATE requires at least one column selector"


@dataclass(frozen=True)
class Program:
    """One PREDICT statement plus optional TRAIN and VALIDATE."""

    predict: PredictStmt
    train: TrainStmt | None = None
    validate: ValidateStmt | None = None

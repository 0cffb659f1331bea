"""Canonical pretty-printer for TLSQL programs.

Renders uppercase keywords, single spaces, and minimal parentheses, with
statements in PREDICT/TRAIN/VALIDATE order, one per line. Re-parsing the
output yields the same Program up to source positions.
"""

from __future__ import annotations

from .ast import (
    And,
    CmpOp,
    ColumnRef,
    Cmp,
    Condition,
    Literal,
    LiteralKind,
    Not,
    Or,
    PredictStmt,
    Program,
    TrainStmt,
    ValidateStmt,
)

# Binding strength, loosest first; a node is parenthesized when it appears
# in a context requiring tighter binding than its own.
_PREC_OR = 1
_PREC_AND = 2
_PREC_NOT = 3
_PREC_CMP = 4


def render(program: Program) -> str:
    """Deterministic canonical form of a Program."""
    lines = [_predict(program.predict)]
    if program.train is not None:
        lines.append(_train(program.train))
    if program.validate is not None:
        lines.append(_validate(program.validate))
    return "\n".join(lines)


def render_condition(cond: Condition) -> str:
    """A WHERE expression with minimal parentheses."""
    return _cond(cond, 1)


def _predict(stmt: PredictStmt) -> str:
    text = (
        f"PREDICT VALUE({stmt.target}, {stmt.task_type.value}) FROM {stmt.from_table}"
    )
    return text + _where(stmt.where)


def _train(stmt: TrainStmt) -> str:
    cols = ", ".join(str(c) for c in stmt.columns)
    tables = ", ".join(stmt.from_tables)
    return f"TRAIN WITH {cols} FROM {tables}" + _where(stmt.where)


def _validate(stmt: ValidateStmt) -> str:
    cols = ", ".join(str(c) for c in stmt.columns)
    return f"VALIDATE WITH {cols} FROM {stmt.from_table}" + _where(stmt.where)


def _where(cond: Condition | None) -> str:
    return f" WHERE {render_condition(cond)}" if cond is not None else ""


def _cond(cond: Condition, context: int) -> str:
    if isinstance(cond, Cmp):
        return f"{cond.left} {cond.op.value} {_operand(cond.right)}"
    if isinstance(cond, Not):
        text = "NOT " + _cond(cond.item, _PREC_NOT)
        prec = _PREC_NOT
    elif isinstance(cond, And):
        text = " AND ".join(_cond(item, _PREC_AND + 1) for item in cond.items)
        prec = _PREC_AND
    else:
        text = " OR ".join(_cond(item, _PREC_OR + 1) for item in cond.items)
        prec = _PREC_OR
    return f"({text})" if prec < context else text


def _operand(value: Literal | ColumnRef) -> str:
    if isinstance(value, ColumnRef):
        return str(value)
    if value.kind is LiteralKind.STR:
        return "'" + value.text.replace("'", "''") + "'"
    return value.text

"""Semantic analysis: name resolution, predicate routing, plan resolution.

`qualify` gives every column reference an explicit table. `route_where`
splits a WHERE tree at top-level AND and assigns each single-table conjunct
to its table. `resolve` turns a qualified Program into a complete TaskPlan,
filling in the level defaults: with no TRAIN the training data is the
complement of the test filter on the target table, and with no VALIDATE the
split defaults to 5-fold cross-validation.

Table and column names compare case-sensitively throughout.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum, unique
from typing import Sequence

from .ast import (
    And,
    ColumnRef,
    Cmp,
    Condition,
    Not,
    Or,
    PredictStmt,
    Program,
    TaskType,
    TrainStmt,
    ValidateStmt,
    column_refs,
    condition_pos,
    conjoin,
)
from .lexer import SourcePos

DEFAULT_CV_FOLDS = 5

W_EMPTY_COMPLEMENT = "W001"
W_DUPLICATE_COLUMN = "W002"
W_EXTRA_VALIDATE_COLUMNS = "W003"


@unique
class SemanticCode(Enum):
    UNKNOWN_TABLE_QUALIFIER = "E201"
    AMBIGUOUS_COLUMN = "E202"
    CROSS_TABLE_CONJUNCT = "E203"
    CROSS_TABLE_COMPARISON = "E204"
    VALIDATE_TABLE_MISMATCH = "E205"
    VALIDATE_COLUMN_MISMATCH = "E206"
    TARGET_NOT_IN_FROM = "E207"


class SemanticError(Exception):
    """Name-resolution or consistency error at a source position."""

    def __init__(
        self, code: SemanticCode, pos: SourcePos | None, message: str, span: int = 1
    ):
        where = f"{pos}: " if pos is not None else ""
        super().__init__(f"{where}{message}")
        self.code = code
        self.pos = pos
        self.message = message
        self.span = span


@dataclass(frozen=True)
class PlanWarning:
    """Non-fatal finding surfaced in the manifest and CLI diagnostics."""

    code: str
    message: str
    pos: SourcePos | None = field(compare=False, default=None)


@dataclass(frozen=True)
class TableSpec:
    """One table's contribution to a dataset.

    `columns` of None selects every column (rendered as SELECT *).
    """

    table: str
    columns: tuple[str, ...] | None
    where: Condition | None = None


@dataclass(frozen=True)
class TargetSpec:
    table: str
    column: str
    task_type: TaskType
    test_where: Condition | None = None


@dataclass(frozen=True)
class CrossValidation:
    folds: int = DEFAULT_CV_FOLDS


@dataclass(frozen=True)
class Holdout:
    validate: TableSpec


SplitStrategy = CrossValidation | Holdout


@unique
class Level(Enum):
    I = "I"
    II = "II"
    III = "III"


@dataclass(frozen=True)
class TaskPlan:
    """A fully resolved learning task, ready for SQL generation."""

    target: TargetSpec
    train: tuple[TableSpec, ...]
    split: SplitStrategy
    level: Level
    label_autoincluded: bool
    warnings: tuple[PlanWarning, ...] = ()


# --- name resolution ----------------------------------------------------


def qualify(program: Program) -> Program:
    """Return a Program in which every column reference names its table.

    Bare columns bind to the statement's FROM table when it lists exactly
    one; with several FROM tables an unqualified reference is ambiguous. A
    qualifier must name a table from the statement's own FROM clause.
    """
    predict = _qualify_predict(program.predict)
    train = _qualify_train(program.train) if program.train is not None else None
    validate = (
        _qualify_validate(program.validate) if program.validate is not None else None
    )
    return Program(predict, train, validate)


def _qualify_predict(stmt: PredictStmt) -> PredictStmt:
    tables = (stmt.from_table,)
    return replace(
        stmt,
        target=_bind(stmt.target, tables),
        where=_bind_condition(stmt.where, tables),
    )


def _qualify_train(stmt: TrainStmt) -> TrainStmt:
    return replace(
        stmt,
        columns=tuple(_bind(ref, stmt.from_tables) for ref in stmt.columns),
        where=_bind_condition(stmt.where, stmt.from_tables),
    )


def _qualify_validate(stmt: ValidateStmt) -> ValidateStmt:
    tables = (stmt.from_table,)
    return replace(
        stmt,
        columns=tuple(_bind(ref, tables) for ref in stmt.columns),
        where=_bind_condition(stmt.where, tables),
    )


def _bind(ref: ColumnRef, tables: Sequence[str]) -> ColumnRef:
    if ref.table is None:
        if len(tables) == 1:
            return ref.with_table(tables[0])
        raise SemanticError(
            SemanticCode.AMBIGUOUS_COLUMN,
            ref.pos,
            f"column '{ref.column}' is ambiguous here; qualify it with one of: "
            + ", ".join(tables),
            span=len(ref.column),
        )
    if ref.table not in tables:
        raise SemanticError(
            SemanticCode.UNKNOWN_TABLE_QUALIFIER,
            ref.pos,
            f"table '{ref.table}' is not listed in this statement's FROM clause"
            f" ({', '.join(tables)})",
            span=len(ref.table),
        )
    return ref


def _bind_condition(
    cond: Condition | None, tables: Sequence[str]
) -> Condition | None:
    if cond is None:
        return None
    if isinstance(cond, Cmp):
        right = cond.right
        if isinstance(right, ColumnRef):
            right = _bind(right, tables)
        return Cmp(_bind(cond.left, tables), cond.op, right)
    if isinstance(cond, Not):
        return Not(_bind_condition(cond.item, tables))
    if isinstance(cond, And):
        return And(tuple(_bind_condition(item, tables) for item in cond.items))
    return Or(tuple(_bind_condition(item, tables) for item in cond.items))


# --- predicate routing ----------------------------------------------------


def split_conjuncts(cond: Condition) -> list[Condition]:
    """Top-level AND conjuncts (a non-AND root is a single conjunct)."""
    return list(cond.items) if isinstance(cond, And) else [cond]


def referenced_tables(cond: Condition) -> list[str]:
    """Distinct tables referenced, in first-appearance order."""
    seen: list[str] = []
    for ref in column_refs(cond):
        if ref.table is not None and ref.table not in seen:
            seen.append(ref.table)
    return seen


def route_where(cond: Condition, tables: Sequence[str]) -> dict[str, Condition]:
    """Assign each top-level conjunct to the single table it references.

    The result maps table name to the AND of its conjuncts in source order;
    tables receiving no conjunct are absent. The condition must already be
    fully qualified against `tables`.
    """
    grouped: dict[str, list[Condition]] = {}
    for conjunct in split_conjuncts(cond):
        involved = referenced_tables(conjunct)
        assert involved, "qualified conditions always reference a column"
        if len(involved) > 1:
            if isinstance(conjunct, Cmp):
                right = conjunct.right
                raise SemanticError(
                    SemanticCode.CROSS_TABLE_COMPARISON,
                    right.pos,
                    f"cannot compare columns of different tables "
                    f"('{conjunct.left.table}' and '{right.table}'); "
                    "join predicates are not supported",
                    span=len(right.table),
                )
            raise SemanticError(
                SemanticCode.CROSS_TABLE_CONJUNCT,
                condition_pos(conjunct),
                "condition references several tables ("
                + ", ".join(involved)
                + ") within one conjunct; split it into AND-ed single-table parts",
            )
        table = involved[0]
        assert table in tables, "condition must be qualified against the FROM set"
        grouped.setdefault(table, []).append(conjunct)
    return {table: conjoin(parts) for table, parts in grouped.items()}


# --- plan resolution ------------------------------------------------------


def resolve(program: Program) -> TaskPlan:
    """Resolve a qualified Program into a complete TaskPlan."""
    _require_qualified(program)
    predict = program.predict
    warnings: list[PlanWarning] = []
    target = TargetSpec(
        predict.from_table, predict.target.column, predict.task_type, predict.where
    )

    if program.train is None:
        train_specs, label_auto = _level_one_train(predict, warnings)
        level = Level.I
    else:
        train_specs, label_auto = _grouped_train(program.train, target, warnings)
        level = Level.II

    if program.validate is not None:
        split: SplitStrategy = Holdout(
            _validate_spec(program.validate, target, warnings)
        )
        level = Level.III
    else:
        split = CrossValidation(DEFAULT_CV_FOLDS)

    return TaskPlan(target, train_specs, split, level, label_auto, tuple(warnings))


def _level_one_train(
    predict: PredictStmt, warnings: list[PlanWarning]
) -> tuple[tuple[TableSpec, ...], bool]:
    if predict.where is None:
        warnings.append(
            PlanWarning(
                W_EMPTY_COMPLEMENT,
                "PREDICT has no WHERE filter: the test set covers the whole table "
                "and the default training complement is empty",
                predict.pos,
            )
        )
        complement = None
    else:
        complement = Not(predict.where)
    return (TableSpec(predict.from_table, None, complement),), False


def _grouped_train(
    train: TrainStmt, target: TargetSpec, warnings: list[PlanWarning]
) -> tuple[tuple[TableSpec, ...], bool]:
    if target.table not in train.from_tables:
        raise SemanticError(
            SemanticCode.TARGET_NOT_IN_FROM,
            train.pos,
            f"TRAIN does not list table '{target.table}', which holds the "
            "prediction target",
        )
    by_table: dict[str, list[str]] = {table: [] for table in train.from_tables}
    for ref in train.columns:
        columns = by_table[ref.table]
        if ref.column in columns:
            warnings.append(
                PlanWarning(
                    W_DUPLICATE_COLUMN,
                    f"duplicate column selector '{ref}' ignored",
                    ref.pos,
                )
            )
        else:
            columns.append(ref.column)
    routed = route_where(train.where, train.from_tables) if train.where else {}
    specs: list[TableSpec] = []
    label_auto = False
    for table in train.from_tables:
        columns: tuple[str, ...] | None = tuple(by_table[table]) or None
        if table == target.table and columns is not None and target.column not in columns:
            columns += (target.column,)
            label_auto = True
        specs.append(TableSpec(table, columns, routed.get(table)))
    return tuple(specs), label_auto


def _validate_spec(
    validate: ValidateStmt, target: TargetSpec, warnings: list[PlanWarning]
) -> TableSpec:
    if validate.from_table != target.table:
        raise SemanticError(
            SemanticCode.VALIDATE_TABLE_MISMATCH,
            validate.pos,
            f"VALIDATE reads table '{validate.from_table}' but the prediction "
            f"target lives in '{target.table}'",
        )
    columns: list[str] = []
    for ref in validate.columns:
        if ref.column in columns:
            warnings.append(
                PlanWarning(
                    W_DUPLICATE_COLUMN,
                    f"duplicate column selector '{ref}' ignored",
                    ref.pos,
                )
            )
        else:
            columns.append(ref.column)
    if target.column not in columns:
        raise SemanticError(
            SemanticCode.VALIDATE_COLUMN_MISMATCH,
            validate.pos,
            f"VALIDATE must select the prediction target column '{target.column}'",
        )
    extras = [c for c in columns if c != target.column]
    if extras:
        warnings.append(
            PlanWarning(
                W_EXTRA_VALIDATE_COLUMNS,
                "VALIDATE selects feature columns beyond the target: "
                + ", ".join(extras),
                validate.pos,
            )
        )
    return TableSpec(validate.from_table, tuple(columns), validate.where)


def _require_qualified(program: Program) -> None:
    statements = [program.predict, program.train, program.validate]
    for stmt in statements:
        if stmt is None:
            continue
        refs: list[ColumnRef] = []
        if isinstance(stmt, PredictStmt):
            refs.append(stmt.target)
        else:
            refs.extend(stmt.columns)
        if stmt.where is not None:
            refs.extend(column_refs(stmt.where))
        for ref in refs:
            if ref.table is None:
                raise ValueError(
                    f"resolve() requires a qualified program; '{ref.column}' has "
                    "no table (run qualify() first)"
                )

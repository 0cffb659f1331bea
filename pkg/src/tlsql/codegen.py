"""SQL and manifest generation from a resolved TaskPlan.

Each referenced table yields one standard SELECT statement; the task
manifest is a canonical JSON document (fixed key order, two-space indent,
trailing newline) that downstream frameworks consume. Generation is pure
and deterministic: equal plans produce byte-identical output.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from enum import Enum, unique
from pathlib import Path

from .ast import And, ColumnRef, Cmp, Condition, Literal, LiteralKind, Not, TaskType
from .semantics import CrossValidation, Holdout, PlanWarning, TableSpec, TaskPlan

MANIFEST_VERSION = "1"

_QUOTE_CHAR = {"ansi": '"', "mysql": "`"}
_BARE_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")

_TASK_TYPE_NAMES = {TaskType.CLF: "classification", TaskType.REG: "regression"}


@unique
class Role(Enum):
    TRAIN = "train"
    TEST = "test"
    VALIDATE = "validate"


@dataclass(frozen=True)
class SqlQuery:
    """A single SELECT statement for one table in one dataset role."""

    table: str
    role: Role
    sql: str

    @property
    def filename(self) -> str:
        return f"{self.role.value}_{self.table}.sql"


@dataclass(frozen=True)
class ManifestTable:
    table: str
    role: Role
    columns: tuple[str, ...] | None


@dataclass(frozen=True)
class TaskManifest:
    """Structured description of the learning task, one entry per query."""

    task_type: str
    target_table: str
    target_column: str
    level: str
    split_strategy: str
    split_folds: int | None
    label_autoincluded: bool
    warnings: tuple[PlanWarning, ...]
    tables: tuple[ManifestTable, ...]

    def as_dict(self) -> dict:
        """The manifest in its documented key order."""
        split: dict = {"strategy": self.split_strategy}
        if self.split_folds is not None:
            split["folds"] = self.split_folds
        return {
            "tlsql_manifest_version": MANIFEST_VERSION,
            "task_type": self.task_type,
            "target": {"table": self.target_table, "column": self.target_column},
            "level": self.level,
            "split": split,
            "label_autoincluded": self.label_autoincluded,
            "warnings": [{"code": w.code, "message": w.message} for w in self.warnings],
            "tables": [
                {
                    "table": t.table,
                    "role": t.role.value,
                    "columns": list(t.columns) if t.columns is not None else "*",
                }
                for t in self.tables
            ],
        }


@dataclass(frozen=True)
class ConversionResult:
    """What compilation hands downstream: per-table SQL plus the manifest."""

    queries: tuple[SqlQuery, ...]
    manifest: TaskManifest

    def as_dict(self) -> dict:
        return {
            "queries": [
                {"table": q.table, "role": q.role.value, "sql": q.sql}
                for q in self.queries
            ],
            "manifest": self.manifest.as_dict(),
        }


def generate(plan: TaskPlan, dialect: str = "ansi") -> ConversionResult:
    """Lower a TaskPlan to SQL text per table plus the task manifest.

    `dialect` selects identifier quoting only: double quotes for "ansi",
    backquotes for "mysql". Output is otherwise identical.
    """
    try:
        quote = _QUOTE_CHAR[dialect]
    except KeyError:
        raise ValueError(f"unknown dialect {dialect!r}; expected one of: ansi, mysql")

    queries: list[SqlQuery] = []
    tables: list[ManifestTable] = []

    test_spec = TableSpec(plan.target.table, None, plan.target.test_where)
    _emit(test_spec, Role.TEST, quote, queries, tables)
    for spec in plan.train:
        _emit(spec, Role.TRAIN, quote, queries, tables)
    if isinstance(plan.split, Holdout):
        _emit(plan.split.validate, Role.VALIDATE, quote, queries, tables)

    split = plan.split
    manifest = TaskManifest(
        task_type=_TASK_TYPE_NAMES[plan.target.task_type],
        target_table=plan.target.table,
        target_column=plan.target.column,
        level=plan.level.value,
        split_strategy="cv" if isinstance(split, CrossValidation) else "holdout",
        split_folds=split.folds if isinstance(split, CrossValidation) else None,
        label_autoincluded=plan.label_autoincluded,
        warnings=plan.warnings,
        tables=tuple(tables),
    )
    return ConversionResult(tuple(queries), manifest)


def manifest_to_json(manifest: TaskManifest) -> str:
    """Canonical JSON: fixed key order, two-space indent, trailing newline."""
    return json.dumps(manifest.as_dict(), indent=2, ensure_ascii=False) + "\n"


def write_artifacts(result: ConversionResult, out_dir: str | Path) -> list[Path]:
    """Write one .sql file per query plus task.json; returns written paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    for query in result.queries:
        path = out / query.filename
        path.write_text(query.sql + "\n", encoding="utf-8")
        written.append(path)
    manifest_path = out / "task.json"
    manifest_path.write_text(manifest_to_json(result.manifest), encoding="utf-8")
    written.append(manifest_path)
    return written


# --- SQL rendering --------------------------------------------------------


def _emit(
    spec: TableSpec,
    role: Role,
    quote: str,
    queries: list[SqlQuery],
    tables: list[ManifestTable],
) -> None:
    queries.append(SqlQuery(spec.table, role, _select(spec, quote)))
    tables.append(ManifestTable(spec.table, role, spec.columns))


def _select(spec: TableSpec, quote: str) -> str:
    if spec.columns is None:
        projection = "*"
    else:
        projection = ", ".join(
            f"{_ident(spec.table, quote)}.{_ident(c, quote)}" for c in spec.columns
        )
    sql = f"SELECT {projection} FROM {_ident(spec.table, quote)}"
    if spec.where is not None:
        sql += f" WHERE {render_sql_condition(spec.where, quote)}"
    return sql


def render_sql_condition(cond: Condition, quote: str = '"') -> str:
    """Condition tree as a SQL boolean expression.

    `!=` is normalized to `<>`, NOT operands are always parenthesized, and
    AND/OR get parentheses exactly where precedence requires.
    """
    return _sql_cond(cond, 1, quote)


_PREC_OR = 1
_PREC_AND = 2


def _sql_cond(cond: Condition, context: int, quote: str) -> str:
    if isinstance(cond, Cmp):
        return (
            f"{_ref(cond.left, quote)} {cond.op.value} {_sql_operand(cond.right, quote)}"
        )
    if isinstance(cond, Not):
        return f"NOT ({_sql_cond(cond.item, 1, quote)})"
    if isinstance(cond, And):
        text = " AND ".join(_sql_cond(item, _PREC_AND + 1, quote) for item in cond.items)
        prec = _PREC_AND
    else:
        text = " OR ".join(_sql_cond(item, _PREC_OR + 1, quote) for item in cond.items)
        prec = _PREC_OR
    return f"({text})" if prec < context else text


def _sql_operand(value: Literal | ColumnRef, quote: str) -> str:
    if isinstance(value, ColumnRef):
        return _ref(value, quote)
    if value.kind is LiteralKind.STR:
        return "'" + value.text.replace("'", "''") + "'"
    return value.text


def _ref(ref: ColumnRef, quote: str) -> str:
    column = _ident(ref.column, quote)
    if ref.table is None:
        return column
    return f"{_ident(ref.table, quote)}.{column}"


def _ident(name: str, quote: str) -> str:
    if _BARE_IDENT.fullmatch(name):
        return name
    return quote + name.replace(quote, quote + quote) + quote

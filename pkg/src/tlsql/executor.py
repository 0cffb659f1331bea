"""Optional execution backend: run compiled queries and export datasets.

Executes each generated SELECT against a database and writes one CSV per
query (RFC 4180, header row, LF line endings) next to task.json. SQLite
uses the standard library driver in read-only mode; MySQL needs the
PyMySQL extra. Connection errors never echo credentials.
"""

from __future__ import annotations

import csv
import time
from dataclasses import dataclass
from enum import Enum, unique
from pathlib import Path
from typing import Mapping, Sequence
from urllib.parse import unquote, urlsplit

from .codegen import ConversionResult, Role, manifest_to_json
from .semantics import PlanWarning


@unique
class ExecErrorCode(Enum):
    CONNECTION_FAILED = "E301"
    QUERY_FAILED = "E302"
    IO_FAILED = "E303"


class ExecutionError(Exception):
    def __init__(self, code: ExecErrorCode, message: str):
        super().__init__(message)
        self.code = code
        self.message = message


@dataclass(frozen=True)
class ConnectionTarget:
    """A parsed database URL. `display()` is safe to log."""

    scheme: str
    path: str
    host: str | None = None
    port: int | None = None
    user: str | None = None
    password: str | None = None

    @staticmethod
    def parse(url: str) -> "ConnectionTarget":
        parts = urlsplit(url)
        scheme = parts.scheme.lower()
        if scheme == "sqlite":
            # sqlite:rel.db, sqlite:///abs.db and sqlite:/abs.db all work
            path = parts.path
            if path.startswith("//"):
                path = path[2:]
            if not path:
                raise ExecutionError(
                    ExecErrorCode.CONNECTION_FAILED,
                    "sqlite URL has no database path",
                )
            return ConnectionTarget("sqlite", unquote(path))
        if scheme == "mysql":
            if not parts.hostname:
                raise ExecutionError(
                    ExecErrorCode.CONNECTION_FAILED, "mysql URL has no host"
                )
            database = unquote(parts.path.lstrip("/"))
            if not database:
                raise ExecutionError(
                    ExecErrorCode.CONNECTION_FAILED, "mysql URL has no database name"
                )
            return ConnectionTarget(
                "mysql",
                database,
                host=parts.hostname,
                port=parts.port,
                user=unquote(parts.username) if parts.username else None,
                password=unquote(parts.password) if parts.password else None,
            )
        raise ExecutionError(
            ExecErrorCode.CONNECTION_FAILED,
            f"unsupported database scheme {scheme or url!r}; expected sqlite or mysql",
        )

    def display(self) -> str:
        if self.scheme == "sqlite":
            return f"sqlite:{self.path}"
        auth = f"{self.user}@" if self.user else ""
        port = f":{self.port}" if self.port is not None else ""
        return f"mysql://{auth}{self.host}{port}/{self.path}"


@dataclass(frozen=True)
class QueryStat:
    table: str
    role: Role
    rows: int
    elapsed_ms: float
    path: Path


@unique
class OverlapUnknownReason(Enum):
    """Why the test/validate shared-row count could not be computed."""

    NO_KEY = "no-key"
    KEY_NOT_EXPORTED = "key-not-exported"


@dataclass(frozen=True)
class RunReport:
    stats: tuple[QueryStat, ...]
    # rows shared between the test and validate exports, keyed by the
    # target table's primary key: 0 when there is no validate query, None
    # ("unknown") when one exists but no usable key was configured
    test_validate_shared_rows: int | None
    # set exactly when the count above is None
    shared_rows_unknown: OverlapUnknownReason | None
    warnings: tuple[PlanWarning, ...]
    manifest_path: Path


def run(
    result: ConversionResult,
    url: str | ConnectionTarget,
    out_dir: str | Path,
    primary_keys: Mapping[str, Sequence[str]] | None = None,
) -> RunReport:
    """Execute every query in `result`, exporting CSVs and task.json."""
    target = url if isinstance(url, ConnectionTarget) else ConnectionTarget.parse(url)
    connection = _connect(target)
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ExecutionError(ExecErrorCode.IO_FAILED, f"cannot create {out}: {exc}")

    pk = dict(primary_keys or {})
    target_table = result.manifest.target_table
    key_rows: dict[Role, set[tuple] | None] = {}

    stats: list[QueryStat] = []
    try:
        for query in result.queries:
            _ensure_select(query.sql)
            started = time.perf_counter()
            header, rows = _fetch(connection, target, query.sql)
            elapsed_ms = (time.perf_counter() - started) * 1000.0
            path = out / f"{query.role.value}_{query.table}.csv"
            _write_csv(path, header, rows)
            stats.append(QueryStat(query.table, query.role, len(rows), elapsed_ms, path))
            if query.table == target_table and query.role in (Role.TEST, Role.VALIDATE):
                key_rows[query.role] = _key_tuples(header, rows, pk.get(query.table))
    finally:
        connection.close()

    # an absent validate set trivially shares nothing with the test set
    shared: int | None = 0
    unknown_reason: OverlapUnknownReason | None = None
    if Role.VALIDATE in key_rows:
        test_keys = key_rows.get(Role.TEST)
        validate_keys = key_rows[Role.VALIDATE]
        if test_keys is None or validate_keys is None:
            shared = None
            unknown_reason = (
                OverlapUnknownReason.NO_KEY
                if not pk.get(target_table)
                else OverlapUnknownReason.KEY_NOT_EXPORTED
            )
        else:
            shared = len(test_keys & validate_keys)

    manifest_path = out / "task.json"
    try:
        manifest_path.write_text(manifest_to_json(result.manifest), encoding="utf-8")
    except OSError as exc:
        raise ExecutionError(
            ExecErrorCode.IO_FAILED, f"cannot write {manifest_path}: {exc}"
        )
    return RunReport(
        tuple(stats), shared, unknown_reason, result.manifest.warnings, manifest_path
    )


def _connect(target: ConnectionTarget):
    if target.scheme == "sqlite":
        import sqlite3

        if not Path(target.path).exists():
            raise ExecutionError(
                ExecErrorCode.CONNECTION_FAILED,
                f"database file not found: {target.path}",
            )
        try:
            return sqlite3.connect(f"file:{target.path}?mode=ro", uri=True)
        except sqlite3.Error as exc:
            raise ExecutionError(
                ExecErrorCode.CONNECTION_FAILED,
                f"cannot open {target.display()}: {exc}",
            )
    try:
        import pymysql
    except ImportError:
        raise ExecutionError(
            ExecErrorCode.CONNECTION_FAILED,
            "mysql URLs require the PyMySQL package; install tlsql[mysql]",
        )
    try:
        return pymysql.connect(
            host=target.host,
            port=target.port or 3306,
            user=target.user,
            password=target.password or "",
            database=target.path,
        )
    except Exception as exc:
        raise ExecutionError(
            ExecErrorCode.CONNECTION_FAILED,
            f"cannot connect to {target.display()}: {type(exc).__name__}",
        )


def _ensure_select(sql: str) -> None:
    # the compiler only emits SELECT; refuse anything else defensively
    if not sql.lstrip().upper().startswith("SELECT"):
        raise ExecutionError(
            ExecErrorCode.QUERY_FAILED, "refusing to execute a non-SELECT statement"
        )


def _fetch(connection, target: ConnectionTarget, sql: str):
    cursor = connection.cursor()
    try:
        cursor.execute(sql)
        header = [col[0] for col in cursor.description]
        rows = cursor.fetchall()
    except Exception as exc:
        raise ExecutionError(
            ExecErrorCode.QUERY_FAILED,
            f"query failed on {target.display()}: {exc} (while executing: {sql})",
        )
    finally:
        cursor.close()
    return header, list(rows)


def _write_csv(path: Path, header: list[str], rows: list[Sequence]) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(header)
            writer.writerows(rows)
    except OSError as exc:
        raise ExecutionError(ExecErrorCode.IO_FAILED, f"cannot write {path}: {exc}")


def _key_tuples(
    header: list[str], rows: list[Sequence], key_columns: Sequence[str] | None
) -> set[tuple] | None:
    if not key_columns:
        return None
    try:
        indexes = [header.index(c) for c in key_columns]
    except ValueError:
        return None
    return {tuple(row[i] for i in indexes) for row in rows}

"""tlsqlc: command-line front door for the TLSQL compiler.

Four subcommands: `compile` (artifacts and a summary), `check`
(diagnostics only), `run` (compile, execute, export CSVs), and `repl`
(interactive; programs are submitted with a lone `;;` line, since `;` is
a legal separator inside a program). Diagnostics always go to stderr,
artifacts and summaries to stdout.

Exit codes: 0 success, 1 usage error, 2 lex or parse error, 3 semantic
error, 4 execution error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__
from .codegen import (
    ConversionResult,
    generate,
    manifest_to_json,
    write_artifacts,
)
from .diagnostics import PROGRAM_NAME, format_diagnostic, from_exception, from_warning
from .executor import ExecutionError, OverlapUnknownReason, RunReport
from .executor import run as execute
from .lexer import LexError
from .parser import ParseError, parse
from .semantics import SemanticError, qualify, resolve

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_SYNTAX = 2
EXIT_SEMANTIC = 3
EXIT_EXECUTION = 4


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; 2 is reserved for syntax errors here
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except BrokenPipeError:
        return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog=PROGRAM_NAME, description="TLSQL compiler")
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {__version__}"
    )
    commands = parser.add_subparsers(dest="command", required=True, metavar="command")

    compile_cmd = commands.add_parser(
        "compile", help="compile a program to SQL files and task.json"
    )
    _add_input_arguments(compile_cmd)
    compile_cmd.add_argument(
        "--out", metavar="DIR", help="directory for the generated artifacts"
    )
    _add_dialect_argument(compile_cmd)
    _add_format_argument(compile_cmd)
    compile_cmd.set_defaults(handler=_cmd_compile)

    check_cmd = commands.add_parser(
        "check", help="report diagnostics without generating anything"
    )
    _add_input_arguments(check_cmd)
    check_cmd.set_defaults(handler=_cmd_check)

    run_cmd = commands.add_parser(
        "run", help="compile, execute against a database, export CSV datasets"
    )
    _add_input_arguments(run_cmd)
    run_cmd.add_argument(
        "--db",
        metavar="URL",
        help="database URL (sqlite:... or mysql://...); falls back to $TLSQL_DB_URL",
    )
    run_cmd.add_argument(
        "--out", metavar="DIR", default=".", help="directory for CSVs and task.json"
    )
    run_cmd.add_argument(
        "--pk",
        metavar="TABLE=COL[,COL...]",
        type=_pk_argument,
        action="append",
        help="primary key used to count train/test overlap; may repeat",
    )
    _add_dialect_argument(run_cmd)
    _add_format_argument(run_cmd)
    run_cmd.set_defaults(handler=_cmd_run)

    repl_cmd = commands.add_parser("repl", help="interactive compile loop")
    _add_dialect_argument(repl_cmd)
    repl_cmd.set_defaults(handler=_cmd_repl)
    return parser


def _add_input_arguments(cmd: argparse.ArgumentParser) -> None:
    cmd.add_argument(
        "path", nargs="?", help="program file, or - to read standard input"
    )
    cmd.add_argument(
        "-e", "--program", metavar="TEXT", help="inline program text instead of a file"
    )


def _add_dialect_argument(cmd: argparse.ArgumentParser) -> None:
    cmd.add_argument(
        "--dialect",
        choices=("ansi", "mysql"),
        default="ansi",
        help="identifier quoting style (default: ansi)",
    )


def _add_format_argument(cmd: argparse.ArgumentParser) -> None:
    cmd.add_argument(
        "--format",
        choices=("pretty", "json"),
        default="pretty",
        help="summary style on stdout (default: pretty)",
    )


def _pk_argument(text: str) -> tuple[str, tuple[str, ...]]:
    table, sep, columns_text = text.partition("=")
    columns = tuple(c.strip() for c in columns_text.split(","))
    if not sep or not table.strip() or not all(columns):
        raise argparse.ArgumentTypeError(
            f"expected TABLE=COL[,COL...], got {text!r}"
        )
    return table.strip(), columns


# --- subcommands ----------------------------------------------------------


def _cmd_compile(args) -> int:
    loaded = _read_source(args)
    if loaded is None:
        return EXIT_USAGE
    source, name = loaded
    result = _compile(source, name, args.dialect)
    if isinstance(result, int):
        return result
    if args.out is not None:
        try:
            write_artifacts(result, args.out)
        except OSError as exc:
            print(f"{PROGRAM_NAME}: error[E303]: {exc}", file=sys.stderr)
            return EXIT_EXECUTION
    if args.format == "json":
        print(json.dumps(result.as_dict(), indent=2, ensure_ascii=False))
    else:
        for line in _summary_lines(result, args.out):
            print(line)
    return EXIT_OK


def _cmd_check(args) -> int:
    loaded = _read_source(args)
    if loaded is None:
        return EXIT_USAGE
    source, name = loaded
    result = _compile(source, name, "ansi")
    return result if isinstance(result, int) else EXIT_OK


def _cmd_run(args) -> int:
    loaded = _read_source(args)
    if loaded is None:
        return EXIT_USAGE
    source, name = loaded
    db_url = args.db or os.environ.get("TLSQL_DB_URL")
    if not db_url:
        print(
            f"{PROGRAM_NAME}: error: no database URL; pass --db or set TLSQL_DB_URL",
            file=sys.stderr,
        )
        return EXIT_USAGE
    result = _compile(source, name, args.dialect)
    if isinstance(result, int):
        return result
    try:
        report = execute(result, db_url, args.out, dict(args.pk or []))
    except ExecutionError as exc:
        print(format_diagnostic(from_exception(exc), name), file=sys.stderr)
        return EXIT_EXECUTION
    if args.format == "json":
        print(json.dumps(_report_dict(report), indent=2, ensure_ascii=False))
    else:
        for line in _report_lines(report):
            print(line)
    return EXIT_OK


def _cmd_repl(args) -> int:
    interactive = sys.stdin.isatty()

    buffer: list[str] = []

    def submit() -> None:
        source = "\n".join(buffer)
        buffer.clear()
        if not source.strip():
            return
        result = _compile(source, "<repl>", args.dialect)
        if not isinstance(result, int):
            _echo(result)

    try:
        while True:
            if interactive:
                sys.stdout.write("tlsql> " if not buffer else "  ...> ")
                sys.stdout.flush()
            line = sys.stdin.readline()
            if line == "":
                break
            if line.strip() == ";;":
                submit()
            else:
                buffer.append(line.rstrip("\n"))
    except KeyboardInterrupt:
        if interactive:
            print()
        return EXIT_OK
    submit()
    return EXIT_OK


# --- shared helpers -------------------------------------------------------


def _read_source(args) -> tuple[str, str] | None:
    """The program text and a display name for diagnostics, or None."""
    if args.program is not None:
        if args.path is not None:
            print(
                f"{PROGRAM_NAME}: error: pass a file or --program, not both",
                file=sys.stderr,
            )
            return None
        return args.program, "<e>"
    if args.path is None:
        print(
            f"{PROGRAM_NAME}: error: no input; pass a file, -, or --program",
            file=sys.stderr,
        )
        return None
    if args.path == "-":
        return sys.stdin.read(), "<stdin>"
    try:
        return Path(args.path).read_text(encoding="utf-8"), args.path
    except OSError as exc:
        reason = exc.strerror or str(exc)
        print(
            f"{PROGRAM_NAME}: error: cannot read {args.path}: {reason}",
            file=sys.stderr,
        )
        return None
    except UnicodeDecodeError:
        print(
            f"{PROGRAM_NAME}: error: {args.path} is not valid UTF-8", file=sys.stderr
        )
        return None


def _compile(source: str, name: str, dialect: str) -> ConversionResult | int:
    """Compile source, printing diagnostics; exit code on failure."""
    try:
        plan = resolve(qualify(parse(source)))
    except (LexError, ParseError) as exc:
        print(format_diagnostic(from_exception(exc), name, source), file=sys.stderr)
        return EXIT_SYNTAX
    except SemanticError as exc:
        print(format_diagnostic(from_exception(exc), name, source), file=sys.stderr)
        return EXIT_SEMANTIC
    for warning in plan.warnings:
        print(format_diagnostic(from_warning(warning), name, source), file=sys.stderr)
    return generate(plan, dialect)


def _summary_lines(result: ConversionResult, out_dir: str | None) -> list[str]:
    manifest = result.manifest
    if manifest.split_strategy == "cv":
        split = f"{manifest.split_folds}-fold cv"
    else:
        split = "holdout"
    lines = [
        f"task: {manifest.task_type} of "
        f"{manifest.target_table}.{manifest.target_column} "
        f"(level {manifest.level}, {split})"
    ]
    rows = [(q.role.value, q.table, q.filename) for q in result.queries]
    rows.append(("manifest", "", "task.json"))
    role_width = max(len(role) for role, _, _ in rows)
    table_width = max(len(table) for _, table, _ in rows)
    for role, table, filename in rows:
        lines.append(f"{role:<{role_width}}  {table:<{table_width}}  {filename}")
    if out_dir is not None:
        lines.append(f"written to {out_dir}")
    return lines


def _echo(result: ConversionResult) -> None:
    for query in result.queries:
        print(f"-- {query.filename}")
        print(query.sql)
    print("-- task.json")
    sys.stdout.write(manifest_to_json(result.manifest))
    sys.stdout.flush()


_OVERLAP_UNKNOWN_HINTS = {
    OverlapUnknownReason.NO_KEY: "no --pk for the target table",
    OverlapUnknownReason.KEY_NOT_EXPORTED: (
        "the key column(s) are not in both the test and validate exports"
    ),
}


def _report_lines(report: RunReport) -> list[str]:
    width = max(len(stat.path.name) for stat in report.stats)
    lines = [
        f"{stat.path.name:<{width}}  {stat.rows} rows  {stat.elapsed_ms:.1f} ms"
        for stat in report.stats
    ]
    lines.append(f"{report.manifest_path.name:<{width}}  written")
    shared = report.test_validate_shared_rows
    if shared is None:
        hint = _OVERLAP_UNKNOWN_HINTS[report.shared_rows_unknown]
        lines.append(f"test/validate shared rows: unknown ({hint})")
    else:
        lines.append(f"test/validate shared rows: {shared}")
    return lines


def _report_dict(report: RunReport) -> dict:
    shared = report.test_validate_shared_rows
    return {
        "stats": [
            {
                "table": stat.table,
                "role": stat.role.value,
                "rows": stat.rows,
                "elapsed_ms": round(stat.elapsed_ms, 3),
                "path": str(stat.path),
            }
            for stat in report.stats
        ],
        "overlap": {
            "test_validate_shared_rows": "unknown" if shared is None else shared
        },
        "warnings": [{"code": w.code, "message": w.message} for w in report.warnings],
        "manifest_path": str(report.manifest_path),
    }


if __name__ == "__main__":
    raise SystemExit(main())

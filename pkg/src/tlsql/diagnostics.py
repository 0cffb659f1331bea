"""Uniform rendering of errors and warnings for command-line output.

Source-anchored findings print as

    file:line:col: error[E101]: expected ..., found ...
        ... offending source line ...
        ^^^

so the first line always matches ``^[^:]+:\\d+:\\d+: (error|warning)\\[[A-Z]\\d{3}\\]``.
Findings with no source position (the E3xx execution family) drop the
location prefix and are reported against the program name instead.
"""

from __future__ import annotations

from dataclasses import dataclass

from .executor import ExecutionError
from .lexer import LexError, SourcePos
from .parser import ParseError
from .semantics import PlanWarning, SemanticError

PROGRAM_NAME = "tlsqlc"


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # "error" or "warning"
    code: str
    message: str
    pos: SourcePos | None = None
    span: int = 1


def from_exception(exc: Exception) -> Diagnostic:
    """Map any of the package's error types onto a Diagnostic."""
    if isinstance(exc, LexError):
        return Diagnostic("error", exc.code.value, exc.message, exc.pos)
    if isinstance(exc, ParseError):
        return Diagnostic("error", exc.kind.value, exc.message, exc.pos, exc.span)
    if isinstance(exc, SemanticError):
        return Diagnostic("error", exc.code.value, exc.message, exc.pos, exc.span)
    if isinstance(exc, ExecutionError):
        return Diagnostic("error", exc.code.value, exc.message)
    raise TypeError(f"not a diagnosable error: {type(exc).__name__}")


def from_warning(warning: PlanWarning) -> Diagnostic:
    return Diagnostic("warning", warning.code, warning.message, warning.pos)


def format_diagnostic(
    diag: Diagnostic, filename: str, source: str | None = None
) -> str:
    """Render one diagnostic, with a caret excerpt when source is at hand."""
    if diag.pos is None:
        return f"{PROGRAM_NAME}: {diag.severity}[{diag.code}]: {diag.message}"
    head = (
        f"{filename}:{diag.pos.line}:{diag.pos.column}: "
        f"{diag.severity}[{diag.code}]: {diag.message}"
    )
    if source is None:
        return head
    excerpt = _excerpt(source, diag.pos, diag.span)
    return head if excerpt is None else f"{head}\n{excerpt}"


def _excerpt(source: str, pos: SourcePos, span: int) -> str | None:
    lines = source.split("\n")
    if not 1 <= pos.line <= len(lines):
        return None
    line = lines[pos.line - 1].rstrip("\r")
    # tabs expand to single spaces so the caret column stays aligned
    shown = line.replace("\t", " ")
    col = min(pos.column, len(shown) + 1)
    # clamp the caret run to the line, but always draw at least one caret
    # (an error at end of input points one column past the last character)
    width = min(span, max(1, len(shown) - col + 1))
    return f"  {shown}\n  {' ' * (col - 1)}{'^' * width}"

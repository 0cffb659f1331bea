#!/usr/bin/env python3
"""Regenerate the golden artifacts for the test corpus.

For every tests/corpus/programs/*.tlsql this writes the compiled .sql files
and task.json under tests/corpus/golden/<stem>/. For every
tests/corpus/negative/*.tlsql it records the first diagnostic line in
tests/corpus/golden_diagnostics.txt.

Goldens are frozen by review: regenerate only when an output format change
is intended, then inspect the diff before committing.
"""

from __future__ import annotations

import shutil
import sys
from pathlib import Path

from tlsql import convert
from tlsql.codegen import write_artifacts
from tlsql.diagnostics import format_diagnostic, from_exception
from tlsql.lexer import LexError
from tlsql.parser import ParseError
from tlsql.semantics import SemanticError

CORPUS = Path(__file__).resolve().parent.parent / "tests" / "corpus"


def main() -> int:
    golden_root = CORPUS / "golden"
    if golden_root.exists():
        shutil.rmtree(golden_root)

    count = 0
    for program in sorted((CORPUS / "programs").glob("*.tlsql")):
        result = convert(program.read_text(encoding="utf-8"))
        write_artifacts(result, golden_root / program.stem)
        count += 1
    print(f"wrote goldens for {count} programs")

    lines = []
    for program in sorted((CORPUS / "negative").glob("*.tlsql")):
        try:
            convert(program.read_text(encoding="utf-8"))
        except (LexError, ParseError, SemanticError) as exc:
            diagnostic = format_diagnostic(from_exception(exc), program.name)
            lines.append(diagnostic.splitlines()[0])
        else:
            print(f"error: {program.name} compiled cleanly", file=sys.stderr)
            return 1
    out = CORPUS / "golden_diagnostics.txt"
    out.write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"wrote {out.name} with {len(lines)} entries")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

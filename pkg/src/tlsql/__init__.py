"""TLSQL: a declarative language for table learning over relational data.

A TLSQL program states an ML task with up to three statements: PREDICT
names the target column and task type, TRAIN selects feature columns and
rows across tables, VALIDATE pins a holdout set. `convert` compiles a
program into one standard SQL query per referenced table plus a task
manifest that downstream learning frameworks consume.

>>> result = convert("PREDICT VALUE(users.Age, CLF) FROM users")
>>> result.queries[0].sql
'SELECT * FROM users'
"""

from .ast import Program, TaskType
from .codegen import (
    ConversionResult,
    ManifestTable,
    Role,
    SqlQuery,
    TaskManifest,
    generate,
    manifest_to_json,
    write_artifacts,
)
from .executor import ConnectionTarget, ExecutionError, RunReport
from .lexer import LexError, SourcePos, tokenize
from .parser import ParseError, parse
from .printer import render
from .semantics import (
    Level,
    PlanWarning,
    SemanticError,
    TaskPlan,
    qualify,
    resolve,
)

__version__ = "0.1.0"

__all__ = [
    "ConnectionTarget",
    "ConversionResult",
    "ExecutionError",
    "Level",
    "LexError",
    "ManifestTable",
    "ParseError",
    "PlanWarning",
    "Program",
    "Role",
    "RunReport",
    "SemanticError",
    "SourcePos",
    "SqlQuery",
    "TaskManifest",
    "TaskPlan",
    "TaskType",
    "convert",
    "generate",
    "manifest_to_json",
    "parse",
    "qualify",
    "render",
    "resolve",
    "tokenize",
    "write_artifacts",
    "__version__",
]


def convert(tlsql: str, dialect: str = "ansi") -> ConversionResult:
    """Compile a TLSQL program to per-table SQL plus the task manifest."""
    return generate(resolve(qualify(parse(tlsql))), dialect)

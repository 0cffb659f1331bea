"""Acceptance gates for the compiler, one test per criterion.

Each test below is a release gate: C1 corpus goldens, C2 canonical-example
fidelity, C3 train/test partition, C4 predicate routing against a
brute-force oracle, C5 operator precedence against an independent reference
parser, C6 print/parse round-tripping, C7 diagnostic positions, C8 the
end-to-end `tlsqlc run` flow. Expected values come from hand-derived
tables, reviewed golden files, or oracle implementations that share no
code with the package.
"""

from __future__ import annotations

import csv
import random
import subprocess
import time
from pathlib import Path

from tlsql import convert
from tlsql.codegen import Role, manifest_to_json
from tlsql.diagnostics import format_diagnostic, from_exception
from tlsql.lexer import LexError
from tlsql.parser import ParseError, parse
from tlsql.printer import render
from tlsql.semantics import SemanticError

import fixture_data
from conftest import (
    CORPUS_DIR,
    FIG4_PROGRAM,
    GOLDEN_DIR,
    PROGRAMS_DIR,
    corpus_programs,
    negative_programs,
    run_sql,
)
from oracles import (
    brute_force_route,
    gen_bool_expr,
    gen_routable_where,
    ref_parse,
    truth_table_equal,
    value_pool_from_fixture,
)


def test_C1_corpus_compiles_byte_identical_to_goldens_under_one_second():
    programs = corpus_programs()
    assert len(programs) + len(negative_programs()) >= 30
    started = time.perf_counter()
    for program in programs:
        result = convert(program.read_text(encoding="utf-8"))
        golden = GOLDEN_DIR / program.stem
        produced = {q.filename: q.sql + "\n" for q in result.queries}
        produced["task.json"] = manifest_to_json(result.manifest)
        on_disk = {p.name: p.read_text(encoding="utf-8") for p in golden.iterdir()}
        assert produced == on_disk, f"{program.name} diverged from its golden"
    elapsed = time.perf_counter() - started
    assert elapsed < 1.0, f"corpus sweep took {elapsed:.2f}s"


def test_C2_canonical_example_fidelity():
    result = convert(FIG4_PROGRAM)
    assert [(q.filename, q.sql) for q in result.queries] == [
        ("test_users.sql", "SELECT * FROM users WHERE users.Gender = 'F'"),
        ("train_users.sql", "SELECT * FROM users WHERE NOT (users.Gender = 'F')"),
    ]
    assert result.manifest.as_dict() == {
        "tlsql_manifest_version": "1",
        "task_type": "classification",
        "target": {"table": "users", "column": "Age"},
        "level": "I",
        "split": {"strategy": "cv", "folds": 5},
        "label_autoincluded": False,
        "warnings": [],
        "tables": [
            {"table": "users", "role": "test", "columns": "*"},
            {"table": "users", "role": "train", "columns": "*"},
        ],
    }


def test_C3_level_one_partition_is_exact(fixture_db):
    result = convert(FIG4_PROGRAM)
    sql = {q.role: q.sql for q in result.queries}
    test_ids = {row[0] for row in run_sql(fixture_db, sql[Role.TEST])}
    train_ids = {row[0] for row in run_sql(fixture_db, sql[Role.TRAIN])}
    assert len(test_ids) == 8
    assert len(train_ids) == 12
    assert test_ids & train_ids == set()
    assert test_ids | train_ids == {row[0] for row in fixture_data.USERS}


def test_C4_routing_matches_brute_force_oracle_on_200_programs(fixture_db):
    tables = ["users", "movies", "ratings"]
    fixture = {name: fixture_data.rows(name) for name in tables}
    pool = value_pool_from_fixture(fixture_data.TABLES, fixture_data.COLUMN_TYPES)
    selectors = ", ".join(
        f"{table}.{column}"
        for table in tables
        for column in fixture_data.TABLES[table][0]
    )
    prefix = (
        "PREDICT VALUE(users.Age, CLF) FROM users WHERE users.Gender = 'F' "
        f"TRAIN WITH {selectors} FROM users, movies, ratings WHERE "
    )

    rng = random.Random(4242)
    started = time.perf_counter()
    for iteration in range(200):
        tree, text = gen_routable_where(
            rng, tables, fixture_data.COLUMN_TYPES, pool
        )
        result = convert(prefix + text)
        train_sql = {
            q.table: q.sql for q in result.queries if q.role is Role.TRAIN
        }
        oracle = brute_force_route(tree, fixture)
        for table in tables:
            columns = fixture_data.TABLES[table][0]
            if table in oracle:
                expected = [
                    tuple(row[c] for c in columns) for row in oracle[table]
                ]
            else:
                assert " WHERE " not in train_sql[table], (iteration, table)
                expected = list(fixture_data.TABLES[table][1])
            got = run_sql(fixture_db, train_sql[table])
            assert sorted(got) == sorted(expected), (iteration, table, text)
    elapsed = time.perf_counter() - started
    assert elapsed < 30.0, f"routing sweep took {elapsed:.2f}s"


def test_C5_precedence_matches_reference_parser_on_500_expressions():
    atoms = ["t.a", "t.b", "t.c", "t.d"]
    rng = random.Random(31337)
    started = time.perf_counter()
    for iteration in range(500):
        text = gen_bool_expr(rng, rng.randint(0, 5), atoms)
        reference = ref_parse(text)
        cond = parse(f"PREDICT VALUE(t.y, CLF) FROM t WHERE {text}").predict.where
        assert truth_table_equal(reference, cond, atoms), (iteration, text)
    elapsed = time.perf_counter() - started
    assert elapsed < 10.0, f"precedence sweep took {elapsed:.2f}s"


def test_C6_render_parse_round_trip_on_corpus():
    for program in corpus_programs():
        first = parse(program.read_text(encoding="utf-8"))
        assert parse(render(first)) == first, program.name


# filename -> (code, line, column), derived by reading each program's bytes
_EXPECTED_DIAGNOSTICS = {
    "n01_invalid_char.tlsql": ("E001", 1, 58),
    "n02_unterminated_string.tlsql": ("E002", 1, 63),
    "n03_lone_bang.tlsql": ("E001", 1, 58),
    "n04_missing_task_type.tlsql": ("E101", 1, 24),
    "n05_missing_from.tlsql": ("E101", 1, 31),
    "n06_duplicate_predict.tlsql": ("E102", 2, 1),
    "n07_missing_predict.tlsql": ("E103", 2, 1),
    "n08_empty.tlsql": ("E103", 1, 1),
    "n09_bad_task_type.tlsql": ("E101", 1, 26),
    "n10_unknown_table.tlsql": ("E201", 1, 15),
    "n11_ambiguous_column.tlsql": ("E202", 2, 12),
    "n12_cross_table_conjunct.tlsql": ("E203", 3, 7),
    "n13_cross_table_comparison.tlsql": ("E204", 3, 22),
    "n14_validate_table.tlsql": ("E205", 2, 1),
    "n15_validate_column.tlsql": ("E206", 2, 1),
    "n16_target_not_in_from.tlsql": ("E207", 2, 1),
    "n17_literal_literal.tlsql": ("E101", 1, 48),
    "n18_duplicate_from_table.tlsql": ("E101", 2, 34),
    "n19_duplicate_train.tlsql": ("E102", 3, 1),
    "n20_trailing_garbage.tlsql": ("E101", 1, 42),
}


def test_C7_diagnostic_codes_and_positions():
    programs = negative_programs()
    assert {p.name for p in programs} == set(_EXPECTED_DIAGNOSTICS)
    golden_lines = (
        (CORPUS_DIR / "golden_diagnostics.txt").read_text().splitlines()
    )
    assert len(golden_lines) == len(programs)
    for program, golden in zip(programs, golden_lines):
        code, line, column = _EXPECTED_DIAGNOSTICS[program.name]
        try:
            convert(program.read_text(encoding="utf-8"))
            raise AssertionError(f"{program.name} compiled cleanly")
        except (LexError, ParseError, SemanticError) as exc:
            diag = from_exception(exc)
            assert diag.code == code, program.name
            assert (diag.pos.line, diag.pos.column) == (line, column), program.name
            first = format_diagnostic(diag, program.name).splitlines()[0]
            assert first == golden, program.name
            assert first.startswith(f"{program.name}:{line}:{column}: error[{code}]")


def test_C8_end_to_end_run_exports_all_datasets(fixture_db, tmp_path):
    program = PROGRAMS_DIR / "p02_fig3.tlsql"
    proc = subprocess.run(
        [
            "tlsqlc",
            "run",
            str(program),
            "--db",
            f"sqlite:{fixture_db}",
            "--out",
            str(tmp_path),
        ],
        capture_output=True,
        text=True,
        timeout=120,
    )
    assert proc.returncode == 0, proc.stderr

    def count_rows(name: str) -> int:
        with open(tmp_path / name, newline="", encoding="utf-8") as handle:
            return sum(1 for _ in csv.reader(handle)) - 1  # header

    users = fixture_data.rows("users")
    expected = {
        "test_users.csv": sum(1 for r in users if r["Gender"] == "F"),
        "train_users.csv": sum(
            1 for r in users if r["Gender"] == "M" and r["userID"] < 3000
        ),
        "train_movies.csv": len(fixture_data.MOVIES),
        "train_ratings.csv": len(fixture_data.RATINGS),
        "validate_users.csv": sum(
            1 for r in users if r["Gender"] == "M" and r["userID"] > 3000
        ),
    }
    assert expected["test_users.csv"] == 8
    assert expected["train_users.csv"] == 7
    assert expected["validate_users.csv"] == 5
    for name, rows in expected.items():
        assert count_rows(name) == rows, name
    assert (tmp_path / "task.json").exists()
    assert "task.json" in proc.stdout

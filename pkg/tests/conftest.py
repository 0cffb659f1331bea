"""Shared fixtures: the seeded SQLite database and corpus discovery."""

from __future__ import annotations

import sqlite3
from pathlib import Path

import pytest

import fixture_data

CORPUS_DIR = Path(__file__).parent / "corpus"
PROGRAMS_DIR = CORPUS_DIR / "programs"
NEGATIVE_DIR = CORPUS_DIR / "negative"
GOLDEN_DIR = CORPUS_DIR / "golden"

FIG4_PROGRAM = "PREDICT VALUE(users.Age, CLF) FROM users WHERE users.Gender='F'"

FIG3_PROGRAM = """\
PREDICT VALUE(users.Age, CLF) FROM users WHERE users.Gender = 'F'
TRAIN WITH users.Gender, users.Occupation, movies.Title, movies.Genre, ratings.Rating
FROM users, movies, ratings
WHERE users.Gender = 'M' AND users.userID < 3000
VALIDATE WITH users.Age FROM users WHERE users.Gender = 'M' AND users.userID > 3000
"""


def corpus_programs() -> list[Path]:
    return sorted(PROGRAMS_DIR.glob("*.tlsql"))


def negative_programs() -> list[Path]:
    return sorted(NEGATIVE_DIR.glob("*.tlsql"))


@pytest.fixture(scope="session")
def fixture_db(tmp_path_factory) -> Path:
    """Path to a SQLite file seeded with the users/movies/ratings rows."""
    path = tmp_path_factory.mktemp("fixture") / "tml1m.db"
    fixture_data.create_sqlite(path)
    return path


@pytest.fixture(scope="session")
def fixture_rows() -> dict[str, list[dict]]:
    """The same fixture as dict rows, for brute-force oracles."""
    return {table: fixture_data.rows(table) for table in fixture_data.TABLES}


def run_sql(db_path: Path, sql: str) -> list[tuple]:
    connection = sqlite3.connect(str(db_path))
    try:
        return connection.execute(sql).fetchall()
    finally:
        connection.close()

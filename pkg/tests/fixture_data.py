"""Seed rows for the three-table fixture database used across the suite.

The row literals below are the source of truth: tests derive expected
counts by filtering these tuples directly in Python, never by running the
code under test. users holds 20 rows (12 M / 8 F, userIDs straddling
3000), movies 8 and ratings 15. No column is ever NULL.
"""

from __future__ import annotations

USER_COLUMNS = ("userID", "Gender", "Age", "Occupation")
USERS = [
    (1001, "M", 24, "engineer"),
    (1102, "F", 29, "engineer"),
    (1203, "M", 35, "artist"),
    (1377, "M", 52, "doctor"),
    (1450, "M", 31, "teacher"),
    (1608, "M", 45, "lawyer"),
    (1799, "F", 41, "artist"),
    (2011, "M", 28, "student"),
    (2300, "F", 23, "student"),
    (2544, "M", 19, "student"),
    (2850, "F", 36, "lawyer"),
    (3105, "M", 33, "engineer"),
    (3222, "F", 47, "doctor"),
    (3508, "M", 61, "retired"),
    (3901, "F", 22, "student"),
    (4200, "M", 27, "artist"),
    (4555, "F", 58, "retired"),
    (4733, "M", 38, "doctor"),
    (5010, "F", 30, "teacher"),
    (5120, "M", 55, "teacher"),
]

MOVIE_COLUMNS = ("movieID", "Title", "Genre", "Year")
MOVIES = [
    (1, "Toy Story", "Animation", 1995),
    (2, "Jumanji", "Adventure", 1995),
    (3, "Heat", "Action", 1995),
    (4, "Casino", "Drama", 1996),
    (5, "Sense and Sensibility", "Drama", 1996),
    (6, "GoldenEye", "Action", 1997),
    (7, "Sabrina", "Comedy", 1997),
    (8, "Twelve Monkeys", "Sci-Fi", 1998),
]

RATING_COLUMNS = ("userID", "movieID", "Rating", "Timestamp")
RATINGS = [
    (1001, 1, 5, 978300760),
    (1001, 3, 4, 978302109),
    (1102, 2, 3, 978301968),
    (1203, 5, 4, 978300275),
    (1377, 4, 2, 978824291),
    (1450, 6, 5, 978302268),
    (1608, 8, 3, 978301368),
    (2011, 7, 4, 978302039),
    (2300, 1, 5, 978824268),
    (2544, 2, 2, 978302291),
    (3105, 3, 4, 978301753),
    (3222, 6, 1, 978302188),
    (3901, 4, 3, 978824330),
    (4555, 5, 5, 978301777),
    (5120, 8, 4, 978300719),
]

TABLES: dict[str, tuple[tuple[str, ...], list[tuple]]] = {
    "users": (USER_COLUMNS, USERS),
    "movies": (MOVIE_COLUMNS, MOVIES),
    "ratings": (RATING_COLUMNS, RATINGS),
}

PRIMARY_KEYS = {
    "users": ("userID",),
    "movies": ("movieID",),
    "ratings": ("userID", "movieID"),
}

# column -> "int" | "str", used by the random expression generators to
# keep comparisons type-homogeneous (no cross-type SQL ordering involved)
COLUMN_TYPES: dict[str, dict[str, str]] = {
    "users": {"userID": "int", "Gender": "str", "Age": "int", "Occupation": "str"},
    "movies": {"movieID": "int", "Title": "str", "Genre": "str", "Year": "int"},
    "ratings": {
        "userID": "int",
        "movieID": "int",
        "Rating": "int",
        "Timestamp": "int",
    },
}


def rows(table: str) -> list[dict]:
    """The table's rows as dicts keyed by column name."""
    columns, data = TABLES[table]
    return [dict(zip(columns, values)) for values in data]


def create_sqlite(path) -> None:
    """Materialize the fixture as a SQLite database file."""
    import sqlite3

    ddl = {
        "users": "userID INTEGER, Gender TEXT, Age INTEGER, Occupation TEXT",
        "movies": "movieID INTEGER, Title TEXT, Genre TEXT, Year INTEGER",
        "ratings": "userID INTEGER, movieID INTEGER, Rating INTEGER, Timestamp INTEGER",
    }
    connection = sqlite3.connect(str(path))
    try:
        for table, (columns, data) in TABLES.items():
            connection.execute(f"CREATE TABLE {table} ({ddl[table]})")
            marks = ", ".join("?" for _ in columns)
            connection.executemany(
                f"INSERT INTO {table} VALUES ({marks})", data
            )
        connection.commit()
    finally:
        connection.close()

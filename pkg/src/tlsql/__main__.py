"""Module entry point so `python -m tlsql` behaves like `tlsqlc`."""

from .cli import main

if __name__ == "__main__":
    raise SystemExit(main())

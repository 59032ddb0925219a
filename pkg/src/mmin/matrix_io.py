"""Reading and writing matrices in the plain, csv and json text formats.

plain
    first token ``n``, then ``n*n`` whitespace-separated reals, row-major
csv
    ``n`` lines of ``n`` comma-separated reals
json
    ``{"n": n, "rows": [[...], ...]}``

Writers emit the shortest round-tripping ``repr`` of every float, so
``parse(render(M))`` reproduces ``M`` bit for bit.
"""

from __future__ import annotations

import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .fixtures import FIXTURES, fixture
from .matcore import InputError

__all__ = ["FORMATS", "MatrixDocument", "ParseError", "parse_matrix", "parse_text", "render_matrix", "infer_format"]

FORMATS = ("plain", "csv", "json")


class ParseError(InputError):
    """Malformed matrix text."""


@dataclass(frozen=True)
class MatrixDocument:
    source: str
    format: str
    matrix: np.ndarray


def infer_format(path: str) -> str:
    suffix = Path(path).suffix.lower()
    if suffix == ".csv":
        return "csv"
    if suffix == ".json":
        return "json"
    return "plain"


def _real(token: str, where: str) -> float:
    try:
        x = float(token)
    except ValueError:
        raise ParseError(f"{where}: non-numeric token {token!r}") from None
    if not math.isfinite(x):
        raise ParseError(f"{where}: non-finite value {token!r}")
    return x


def _parse_plain(text: str) -> np.ndarray:
    tokens = text.split()
    if not tokens:
        raise ParseError("empty input: expected the order n")
    try:
        n = int(tokens[0])
    except ValueError:
        raise ParseError(f"order n: expected an integer, got {tokens[0]!r}") from None
    if n < 1:
        raise ParseError(f"order n: must be >= 1, got {n}")
    body = tokens[1:]
    if len(body) != n * n:
        k = len(body)
        raise ParseError(
            f"dimension mismatch: expected {n * n} entries for n={n}, got {k} "
            f"(input ends at row {k // n + 1}, column {k % n + 1})"
        )
    vals = [_real(tok, f"row {k // n + 1}, column {k % n + 1}") for k, tok in enumerate(body)]
    return np.array(vals, dtype=float).reshape(n, n)


def _parse_csv(text: str) -> np.ndarray:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    n = len(lines)
    if n < 1:
        raise ParseError("empty input: no rows")
    rows = []
    for r, line in enumerate(lines, start=1):
        cells = line.split(",")
        if len(cells) != n:
            raise ParseError(f"row {r}: expected {n} values, got {len(cells)}")
        rows.append([_real(cell.strip(), f"row {r}, column {c}") for c, cell in enumerate(cells, start=1)])
    return np.array(rows, dtype=float)


def _parse_json(text: str) -> np.ndarray:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid json at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict) or "n" not in doc or "rows" not in doc:
        raise ParseError('json matrix must be an object with keys "n" and "rows"')
    n = doc["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ParseError(f'"n" must be an integer >= 1, got {n!r}')
    rows = doc["rows"]
    if not isinstance(rows, list) or len(rows) != n:
        got = len(rows) if isinstance(rows, list) else type(rows).__name__
        raise ParseError(f'"rows": expected {n} rows, got {got}')
    out = []
    for r, row in enumerate(rows, start=1):
        if not isinstance(row, list) or len(row) != n:
            got = len(row) if isinstance(row, list) else type(row).__name__
            raise ParseError(f"row {r}: expected {n} values, got {got}")
        vals = []
        for c, x in enumerate(row, start=1):
            if isinstance(x, bool) or not isinstance(x, (int, float)):
                raise ParseError(f"row {r}, column {c}: non-numeric value {x!r}")
            vals.append(_real(repr(x), f"row {r}, column {c}"))
        out.append(vals)
    return np.array(out, dtype=float)


_PARSERS = {"plain": _parse_plain, "csv": _parse_csv, "json": _parse_json}


def parse_text(text: str, fmt: str) -> np.ndarray:
    if fmt not in _PARSERS:
        raise InputError(f"unknown format {fmt!r}; choose from {', '.join(FORMATS)}")
    return _PARSERS[fmt](text)


def parse_matrix(source: str, fmt: str | None = None) -> MatrixDocument:
    """Load a matrix from a fixture name (``ex1``, ``ex2``, ``ex3``), a file path or ``-`` (stdin)."""
    if source in FIXTURES:
        return MatrixDocument(source, fmt or "plain", fixture(source))
    if source == "-":
        text = sys.stdin.read()
        fmt = fmt or "plain"
    else:
        path = Path(source)
        try:
            text = path.read_text()
        except OSError as exc:
            raise InputError(f"cannot read {source}: {exc.strerror}") from None
        fmt = fmt or infer_format(source)
    return MatrixDocument(source, fmt, parse_text(text, fmt))


def render_matrix(M, fmt: str = "plain") -> str:
    M = np.asarray(M, dtype=float)
    n = M.shape[0]
    rows = [[repr(float(x)) for x in row] for row in M]
    if fmt == "plain":
        return f"{n}\n" + "".join(" ".join(r) + "\n" for r in rows)
    if fmt == "csv":
        return "".join(",".join(r) + "\n" for r in rows)
    if fmt == "json":
        return json.dumps({"n": n, "rows": M.tolist()}) + "\n"
    raise InputError(f"unknown format {fmt!r}; choose from {', '.join(FORMATS)}")

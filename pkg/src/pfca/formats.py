"""Context file formats: the plain 0/1 matrix, Burmeister CXT, and one-hot scaling of CSV tables.

Plain format::

    # optional comment lines
    4 5
    10000
    11000
    00101
    11110

Burmeister format: ``B``, a blank line, m, n, a blank line, m object
names, n attribute names, then m rows over ``X`` (1) and ``.`` (0).
Both are written as ASCII with a trailing newline.
"""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .context import FormalContext
from .errors import InvalidParameter, ParseError, ReportIOError

FORMATS = ("plain", "cxt")


def infer_format(path: str | Path) -> str:
    return "cxt" if str(path).lower().endswith(".cxt") else "plain"


def _lines(text: str) -> list[str]:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    return [line.rstrip("\r") for line in lines]


def _parse_count(token: str, what: str, lineno: int) -> int:
    try:
        value = int(token)
    except ValueError:
        raise ParseError(f"{what} must be an integer, got {token!r}", lineno) from None
    if value < 2:
        raise ParseError(f"{what} must be at least 2, got {value}", lineno)
    return value


def _parse_row(line: str, n: int, lineno: int, alphabet: dict[str, int]) -> list[int]:
    if len(line) != n:
        raise ParseError(f"expected {n} cells, found {len(line)}", lineno)
    try:
        return [alphabet[ch] for ch in line]
    except KeyError as exc:
        allowed = "/".join(repr(c) for c in alphabet)
        raise ParseError(f"invalid cell {exc.args[0]!r}; expected {allowed}", lineno) from None


def parse_plain(text: str) -> FormalContext:
    lines = _lines(text)
    pos = 0
    while pos < len(lines) and lines[pos].startswith("#"):
        pos += 1
    if pos >= len(lines):
        raise ParseError("missing 'm n' header", pos + 1)
    header = lines[pos].split()
    if len(header) != 2:
        raise ParseError(f"header must be 'm n', got {lines[pos]!r}", pos + 1)
    m = _parse_count(header[0], "object count", pos + 1)
    n = _parse_count(header[1], "attribute count", pos + 1)
    pos += 1
    rows = []
    bits = {"0": 0, "1": 1}
    while pos < len(lines) and len(rows) < m:
        if not lines[pos].startswith("#"):
            rows.append(_parse_row(lines[pos], n, pos + 1, bits))
        pos += 1
    if len(rows) < m:
        raise ParseError(f"expected {m} rows, found {len(rows)}", pos + 1)
    for extra in range(pos, len(lines)):
        if lines[extra].strip() and not lines[extra].startswith("#"):
            raise ParseError("unexpected content after the last row", extra + 1)
    return FormalContext(rows)


def parse_cxt(text: str) -> FormalContext:
    lines = _lines(text)

    def line(i: int) -> str:
        if i >= len(lines):
            raise ParseError("unexpected end of file", i + 1)
        return lines[i]

    if line(0).strip() != "B":
        raise ParseError("first line must be 'B'", 1)
    if line(1).strip():
        raise ParseError("expected a blank line", 2)
    m = _parse_count(line(2).strip(), "object count", 3)
    n = _parse_count(line(3).strip(), "attribute count", 4)
    if line(4).strip():
        raise ParseError("expected a blank line", 5)
    objects = [line(5 + i) for i in range(m)]
    attributes = [line(5 + m + j) for j in range(n)]
    start = 5 + m + n
    cross = {"X": 1, "x": 1, ".": 0}
    rows = [_parse_row(line(start + i).rstrip(), n, start + i + 1, cross) for i in range(m)]
    for extra in range(start + m, len(lines)):
        if lines[extra].strip():
            raise ParseError("unexpected content after the last row", extra + 1)
    return FormalContext(rows, objects, attributes)


def format_plain(ctx: FormalContext) -> str:
    m, n = ctx.shape
    body = ["".join("1" if v else "0" for v in row) for row in ctx.incidence.tolist()]
    return "\n".join([f"{m} {n}", *body]) + "\n"


def format_cxt(ctx: FormalContext) -> str:
    m, n = ctx.shape
    body = ["".join("X" if v else "." for v in row) for row in ctx.incidence.tolist()]
    return "\n".join(["B", "", str(m), str(n), "", *ctx.object_labels, *ctx.attribute_labels, *body]) + "\n"


def read_context(path: str | Path, fmt: str | None = None) -> FormalContext:
    fmt = fmt or infer_format(path)
    if fmt not in FORMATS:
        raise InvalidParameter(f"unknown context format {fmt!r}")
    data = Path(path).read_bytes()
    try:
        text = data.decode("ascii")
    except UnicodeDecodeError as exc:
        lineno = data[: exc.start].count(b"\n") + 1
        raise ParseError("file is not ASCII", lineno, str(path)) from None
    try:
        return parse_cxt(text) if fmt == "cxt" else parse_plain(text)
    except ParseError as exc:
        raise ParseError(exc.message, exc.line, str(path)) from None


def write_context(ctx: FormalContext, path: str | Path, fmt: str | None = None) -> None:
    fmt = fmt or infer_format(path)
    text = format_cxt(ctx) if fmt == "cxt" else format_plain(ctx)
    try:
        Path(path).write_bytes(text.encode("ascii"))
    except (OSError, UnicodeEncodeError) as exc:
        raise ReportIOError(f"cannot write {path}: {exc}") from exc


def one_hot_scale(csv_path: str | Path) -> FormalContext:
    """Nominal scaling: every distinct non-empty value of every column becomes one attribute.

    The first CSV row is the header. Attributes are named ``column=value``
    and ordered by column, then by value; empty cells are treated as
    missing and set no attribute.
    """
    with open(csv_path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError("CSV file is empty", 1, str(csv_path)) from None
        records = []
        for lineno, rec in enumerate(reader, start=2):
            if not any(cell.strip() for cell in rec):
                continue
            if len(rec) != len(header):
                raise ParseError(f"expected {len(header)} fields, found {len(rec)}", lineno, str(csv_path))
            records.append([cell.strip() for cell in rec])

    attributes: list[tuple[int, str]] = []
    for col in range(len(header)):
        values = sorted({rec[col] for rec in records if rec[col]})
        attributes.extend((col, v) for v in values)
    index = {attr: j for j, attr in enumerate(attributes)}
    matrix = np.zeros((len(records), len(attributes)), dtype=np.uint8)
    for i, rec in enumerate(records):
        for col, value in enumerate(rec):
            if value:
                matrix[i, index[(col, value)]] = 1
    labels = [f"{header[col]}={value}" for col, value in attributes]
    return FormalContext(matrix, [f"o{i + 1}" for i in range(len(records))], labels)

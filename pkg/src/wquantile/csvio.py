"""Minimal CSV reading and locale-free number formatting for the CLI."""
from __future__ import annotations

import csv
import io
import math
import sys
from dataclasses import dataclass
from typing import Iterable, Sequence, TextIO

import numpy as np

__all__ = [
    "CsvParseError",
    "Columns",
    "read_columns",
    "open_input",
    "format_number",
    "write_rows",
    "MISSING_TOKENS",
]

MISSING_TOKENS = frozenset({"", "NA"})


class CsvParseError(Exception):
    """Malformed input; ``line`` is 1-based and counts the header."""

    def __init__(self, message: str, line: int | None = None, source: str = "<input>"):
        self.line = line
        self.source = source
        where = source if line is None else f"{source}:{line}"
        super().__init__(f"{where}: {message}")


@dataclass(frozen=True)
class Columns:
    """Parsed numeric columns; ``values`` uses NaN for missing entries."""

    values: np.ndarray
    extra: np.ndarray | None
    extra_name: str | None
    lines: np.ndarray


def open_input(path: str) -> TextIO:
    if path == "-":
        return io.TextIOWrapper(sys.stdin.buffer, encoding="utf-8-sig", newline="")
    try:
        return open(path, encoding="utf-8-sig", newline="")
    except OSError as exc:
        raise CsvParseError(f"cannot open: {exc.strerror}", source=path) from None


def _number(text: str, line: int, column: str, source: str, allow_missing: bool) -> float:
    text = text.strip()
    if text in MISSING_TOKENS:
        if allow_missing:
            return math.nan
        raise CsvParseError(f"missing {column}", line, source)
    try:
        x = float(text)
    except ValueError:
        raise CsvParseError(f"{column} {text!r} is not a number", line, source) from None
    if math.isnan(x):
        if allow_missing:
            return x
        raise CsvParseError(f"missing {column}", line, source)
    return x


def read_columns(stream: TextIO, extra: Sequence[str] = (), source: str = "<input>") -> Columns:
    """Read a ``value[,<extra>]`` table with a mandatory header.

    ``extra`` lists the accepted names of the optional second column. Empty
    fields and ``NA`` mark a missing value; the second column may not be missing.
    """
    reader = csv.reader(stream)
    try:
        header = next(reader, None)
        if header is None:
            raise CsvParseError("empty input, header row required", 1, source)
        names = [h.strip().lower() for h in header]
        if not names or names[0] != "value":
            raise CsvParseError(f"header must start with 'value', got {header!r}", 1, source)
        if len(names) > 2 or (len(names) == 2 and names[1] not in extra):
            allowed = "value" + "".join(f"[,{e}]" for e in extra)
            raise CsvParseError(f"expected columns {allowed}, got {header!r}", 1, source)
        extra_name = names[1] if len(names) == 2 else None
        values, second, lines = [], [], []
        for row in reader:
            line = reader.line_num
            if not row:
                continue
            if len(row) != len(names):
                raise CsvParseError(f"expected {len(names)} fields, got {len(row)}", line, source)
            values.append(_number(row[0], line, "value", source, allow_missing=True))
            if extra_name is not None:
                second.append(_number(row[1], line, extra_name, source, allow_missing=False))
            lines.append(line)
    except csv.Error as exc:
        raise CsvParseError(str(exc), reader.line_num, source) from None
    except UnicodeDecodeError:
        raise CsvParseError("input is not valid UTF-8", source=source) from None
    return Columns(
        values=np.array(values, dtype=float),
        extra=np.array(second, dtype=float) if extra_name else None,
        extra_name=extra_name,
        lines=np.array(lines, dtype=int),
    )


def format_number(x, digits: int = 15) -> str:
    """Shortest ``%g`` rendering with ``digits`` significant digits; NaN is ``NA``."""
    if isinstance(x, (str, bool)):
        return str(x)
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if math.isnan(x):
        return "NA"
    if x == 0:
        return "0"
    return format(x, f".{digits}g")


def write_rows(out: TextIO, header: Sequence[str], rows: Iterable[Sequence], digits: int = 15) -> None:
    out.write(",".join(header) + "\n")
    for row in rows:
        out.write(",".join(format_number(v, digits) for v in row) + "\n")

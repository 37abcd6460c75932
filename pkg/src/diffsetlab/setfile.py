"""Text interchange format for GridSets.

First non-comment line is ``N d``; every following line is one point as d
space-separated integers.  Lines starting with ``#`` and blank lines are
ignored.
"""
from __future__ import annotations

from pathlib import Path

from .grid import Box, GridSet, make_grid_set


class SetFileError(ValueError):
    pass


def parse_set_text(text: str) -> GridSet:
    header = None
    points = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            fields = [int(tok) for tok in line.split()]
        except ValueError:
            raise SetFileError(f"line {lineno}: expected integers, got {raw!r}") from None
        if header is None:
            if len(fields) != 2:
                raise SetFileError(f"line {lineno}: header must be 'N d'")
            header = fields
            continue
        if len(fields) != header[1]:
            raise SetFileError(f"line {lineno}: expected {header[1]} coordinates, got {len(fields)}")
        points.append(tuple(fields))
    if header is None:
        raise SetFileError("missing 'N d' header")
    return make_grid_set(Box(header[0], header[1]), points)


def read_set_file(path) -> GridSet:
    return parse_set_text(Path(path).read_text())


def format_set(a: GridSet, comment: str | None = None) -> str:
    lines = []
    if comment:
        lines.extend(f"# {c}" for c in comment.splitlines())
    lines.append(f"{a.box.n} {a.box.d}")
    lines.extend(" ".join(str(x) for x in p) for p in a.points())
    return "\n".join(lines) + "\n"


def write_set_file(path, a: GridSet, comment: str | None = None) -> None:
    Path(path).write_text(format_set(a, comment))

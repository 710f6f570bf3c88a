"""JSON reading and writing for algebra tables and derivation spaces.

Rationals always travel as ``"p/q"`` strings.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Union

from .algebra import SYMMETRIES, AlgebraTable
from .linalg import format_rational, to_rational


class FormatError(ValueError):
    """Malformed input document."""


def algebra_to_json(t: AlgebraTable) -> dict:
    rows = []
    for (i, j), coeffs in t.entries().items():
        for k, c in coeffs.items():
            rows.append([i, j, k, format_rational(c)])
    return {"name": t.name, "dim": t.dim, "symmetry": t.symmetry, "basis": list(t.basis), "entries": rows}


def algebra_from_json(doc: dict) -> AlgebraTable:
    if not isinstance(doc, dict):
        raise FormatError("algebra document must be a JSON object")
    try:
        dim = doc["dim"]
        symmetry = doc.get("symmetry", "antisymmetric")
        rows = doc.get("entries", [])
    except KeyError as exc:
        raise FormatError(f"algebra document is missing field {exc}") from None
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 0:
        raise FormatError(f"'dim' must be a non-negative integer, got {dim!r}")
    if symmetry not in SYMMETRIES:
        raise FormatError(f"'symmetry' must be one of {SYMMETRIES}, got {symmetry!r}")
    entries: dict = {}
    for pos, row in enumerate(rows):
        if not (isinstance(row, list) and len(row) == 4):
            raise FormatError(f"entries[{pos}] must be [i, j, k, \"p/q\"]")
        i, j, k, c = row
        if not all(isinstance(x, int) and not isinstance(x, bool) and 1 <= x <= dim for x in (i, j, k)):
            raise FormatError(f"entries[{pos}] indices must be integers in 1..{dim}")
        try:
            value = to_rational(c)
        except (TypeError, ValueError, ZeroDivisionError):
            raise FormatError(f"entries[{pos}] coefficient {c!r} is not a rational") from None
        coeffs = entries.setdefault((i, j), {})
        if k in coeffs:
            raise FormatError(f"entries[{pos}] repeats coefficient ({i}, {j}, {k})")
        coeffs[k] = value
    try:
        return AlgebraTable(dim, entries, symmetry=symmetry, name=str(doc.get("name", "")), basis=doc.get("basis"))
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def loads_algebra(text: str, source: str = "<string>") -> AlgebraTable:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{source}: malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    try:
        return algebra_from_json(doc)
    except FormatError as exc:
        raise FormatError(f"{source}: {exc}") from None


def load_algebra(path: Union[str, Path]) -> AlgebraTable:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise FormatError(f"{path}: cannot read ({exc.strerror})") from None
    return loads_algebra(text, str(path))


def dumps(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"


def write_json(path: Union[str, Path], doc) -> None:
    Path(path).write_text(dumps(doc))

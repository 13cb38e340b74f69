"""Reader for decision-matrix text files.

Grammar (UTF-8, ``.`` decimal point, comma separated)::

    # comment            lines starting with '#' and blank lines are ignored
    [criteria]
    name, direction, weight[, normalization]
    X1, benefit, 0.3, max_ratio
    ...
    [matrix]
    id, X1, X2, ...      header row: criterion names, any order
    A1, 0.00062, 8, ...  one row per alternative

``direction`` is ``benefit`` or ``cost``; ``normalization`` is one of
``max_ratio``, ``min_ratio``, ``inverse_min_ratio``, ``vector`` and defaults
from the direction. The first row of each section is its header and is
required. Both sections are required; their order is free.
"""

from __future__ import annotations

import csv
import math
from pathlib import Path

from .errors import InputError, MatrixFileError
from .madm import CriterionSpec, DecisionMatrix, Direction, Normalization

_CRITERIA_HEADER = ["name", "direction", "weight", "normalization"]


def _rows(text: str):
    """Yield (line number, fields) for every non-blank, non-comment line."""
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = next(csv.reader([line], skipinitialspace=True))
        yield lineno, [f.strip() for f in fields]


def _parse_float(text: str, lineno: int, what: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise MatrixFileError(f"{what}: {text!r} is not a number", lineno) from None
    if not math.isfinite(value):
        raise MatrixFileError(f"{what}: {text!r} is not finite", lineno)
    return value


def parse_matrix_text(text: str) -> tuple[DecisionMatrix, list[CriterionSpec]]:
    sections: dict[str, list[tuple[int, list[str]]]] = {}
    current = None
    for lineno, fields in _rows(text):
        if len(fields) == 1 and fields[0].startswith("[") and fields[0].endswith("]"):
            current = fields[0][1:-1].strip().lower()
            if current not in ("criteria", "matrix"):
                raise MatrixFileError(f"unknown section [{current}]", lineno)
            if current in sections:
                raise MatrixFileError(f"duplicate section [{current}]", lineno)
            sections[current] = []
            continue
        if current is None:
            raise MatrixFileError("data before the first section header", lineno)
        sections[current].append((lineno, fields))

    for name in ("criteria", "matrix"):
        if name not in sections:
            raise MatrixFileError(f"missing [{name}] section")
        if not sections[name]:
            raise MatrixFileError(f"[{name}] section has no header row")

    specs = _parse_criteria(sections["criteria"])
    return _parse_matrix(sections["matrix"], specs), specs


def _parse_criteria(rows) -> list[CriterionSpec]:
    lineno, header = rows[0]
    header = [h.lower() for h in header]
    if header not in (_CRITERIA_HEADER[:3], _CRITERIA_HEADER):
        raise MatrixFileError("criteria header must be: name, direction, weight[, normalization]", lineno)
    specs = []
    for lineno, fields in rows[1:]:
        if len(fields) not in (3, 4):
            raise MatrixFileError(f"expected 3 or 4 fields, got {len(fields)}", lineno)
        name, direction = fields[0], fields[1].lower()
        try:
            direction = Direction(direction)
        except ValueError:
            raise MatrixFileError(f"direction {fields[1]!r} is not 'benefit' or 'cost'", lineno) from None
        weight = _parse_float(fields[2], lineno, f"weight of {name}")
        normalization = None
        if len(fields) == 4 and fields[3]:
            try:
                normalization = Normalization(fields[3].lower())
            except ValueError:
                choices = ", ".join(n.value for n in Normalization)
                raise MatrixFileError(f"normalization {fields[3]!r} not one of {choices}", lineno) from None
        if any(s.name == name for s in specs):
            raise MatrixFileError(f"criterion {name!r} listed twice", lineno)
        specs.append(CriterionSpec(name, direction, weight, normalization))
    if not specs:
        raise MatrixFileError("no criteria defined", rows[0][0])
    return specs


def _parse_matrix(rows, specs: list[CriterionSpec]) -> DecisionMatrix:
    lineno, header = rows[0]
    names = header[1:]
    wanted = [s.name for s in specs]
    if sorted(names) != sorted(wanted):
        raise MatrixFileError(f"matrix header columns {names} do not match criteria {wanted}", lineno)
    order = [names.index(n) for n in wanted]
    ids, values = [], []
    for lineno, fields in rows[1:]:
        if len(fields) != len(header):
            raise MatrixFileError(f"expected {len(header)} fields, got {len(fields)}", lineno)
        if fields[0] in ids:
            raise MatrixFileError(f"alternative {fields[0]!r} listed twice", lineno)
        raw = [_parse_float(f, lineno, f"{fields[0]}/{names[k]}") for k, f in enumerate(fields[1:])]
        if any(v <= 0 for v in raw):
            raise MatrixFileError("matrix values must be > 0", lineno)
        ids.append(fields[0])
        values.append([raw[k] for k in order])
    if not ids:
        raise MatrixFileError("matrix has no alternatives", lineno)
    try:
        return DecisionMatrix(ids, values)
    except InputError as exc:
        raise MatrixFileError(str(exc)) from exc


def load_matrix_file(path: str | Path) -> tuple[DecisionMatrix, list[CriterionSpec]]:
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    try:
        return parse_matrix_text(text)
    except MatrixFileError as exc:
        raise MatrixFileError(exc.message, exc.line, str(path)) from exc

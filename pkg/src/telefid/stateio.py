"""JSON state files.

Two layouts are accepted::

    {"matrix": [[[re, im], [re, im], [re, im], [re, im]], ... 4 rows]}
    {"family": "werner", "params": {"p0": 0.9}}

Family names and parameters are those of :data:`telefid.state.FAMILIES`.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .errors import StateFileError
from .state import FAMILIES, DensityMatrix, from_family


def _parse_entry(entry, i: int, j: int) -> complex:
    where = f"matrix[{i}][{j}] (row {i}, column {j})"
    if isinstance(entry, bool):
        raise StateFileError(f"{where}: expected [re, im], got boolean")
    if isinstance(entry, (int, float)):
        re, im = float(entry), 0.0
    elif isinstance(entry, (list, tuple)) and len(entry) == 2:
        try:
            if any(isinstance(x, bool) for x in entry):
                raise TypeError
            re, im = float(entry[0]), float(entry[1])
        except (TypeError, ValueError):
            raise StateFileError(f"{where}: entries of [re, im] must be numbers, got {entry!r}") from None
    else:
        raise StateFileError(f"{where}: expected [re, im], got {entry!r}")
    if not (math.isfinite(re) and math.isfinite(im)):
        raise StateFileError(f"{where}: non-finite value {entry!r}")
    return complex(re, im)


def parse_matrix(rows) -> np.ndarray:
    if not isinstance(rows, list) or len(rows) != 4:
        raise StateFileError("'matrix' must be a list of 4 rows")
    m = np.empty((4, 4), dtype=complex)
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != 4:
            raise StateFileError(f"matrix row {i} must be a list of 4 entries")
        for j, entry in enumerate(row):
            m[i, j] = _parse_entry(entry, i, j)
    return m


def parse_state_document(doc) -> DensityMatrix:
    """Build a :class:`DensityMatrix` from a decoded state document.

    Structural problems raise :class:`StateFileError`; a well-formed but
    unphysical matrix raises the density-matrix validation error.
    """
    if not isinstance(doc, dict):
        raise StateFileError("state document must be a JSON object")
    if "matrix" in doc and "family" in doc:
        raise StateFileError("give either 'matrix' or 'family', not both")
    if "matrix" in doc:
        return DensityMatrix(parse_matrix(doc["matrix"]))
    if "family" in doc:
        name = doc["family"]
        if name not in FAMILIES:
            raise StateFileError(f"unknown family {name!r}; choose from {sorted(FAMILIES)}")
        params = doc.get("params", {})
        if not isinstance(params, dict):
            raise StateFileError("'params' must be an object")
        for k, v in params.items():
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise StateFileError(f"parameter {k!r} must be a number, got {v!r}")
        return from_family(name, params)
    raise StateFileError("state document needs a 'matrix' or 'family' key")


def loads_state(text: str) -> DensityMatrix:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StateFileError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return parse_state_document(doc)


def load_state(path) -> DensityMatrix:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise StateFileError(f"cannot read {path}: {exc.strerror}") from None
    return loads_state(text)


def matrix_to_json(m, digits: int = 15) -> list:
    """Nested ``[re, im]`` lists, the inverse of :func:`parse_matrix`."""
    m = np.asarray(m, dtype=complex)
    return [[[float(f"{z.real:.{digits}g}"), float(f"{z.imag:.{digits}g}")] for z in row] for row in m]


def state_to_document(rho: DensityMatrix) -> dict:
    return {"matrix": matrix_to_json(rho.m)}

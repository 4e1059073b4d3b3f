"""Deterministic one-parameter sweeps over the state families, written as CSV."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidParameter
from .figures import classify
from .state import bell_diagonal, example1, example2, pure_from_b2, werner

COLUMNS = ("param", "F", "Delta", "useful", "universal", "det_t", "s1", "s2", "s3")


def _bell_remainder(p0: float, weights: dict) -> object:
    # The swept p0 takes its share; p1..p3 split the rest in the given ratios.
    w = np.array([weights.get("p1", 1.0), weights.get("p2", 0.0), weights.get("p3", 0.0)], dtype=float)
    if np.any(w < 0) or w.sum() <= 0:
        raise InvalidParameter("bell_diagonal sweep weights p1, p2, p3 must be >= 0 and not all zero")
    rest = (1 - p0) * w / w.sum()
    return bell_diagonal(p0, *rest)


# family -> (swept parameter name, builder(value, fixed_params))
SWEEP_FAMILIES = {
    "werner": ("p0", lambda v, kw: werner(v)),
    "pure": ("b2", lambda v, kw: pure_from_b2(v)),
    "example1": ("p", lambda v, kw: example1(v)),
    "example2": ("p", lambda v, kw: example2(v)),
    "bell_diagonal": ("p0", _bell_remainder),
}


@dataclass(frozen=True)
class SweepSpec:
    family: str
    start: float
    stop: float
    steps: int
    fixed: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.family not in SWEEP_FAMILIES:
            raise InvalidParameter(
                f"cannot sweep family {self.family!r}; choose from {sorted(SWEEP_FAMILIES)}"
            )
        if self.steps < 2:
            raise InvalidParameter("steps must be >= 2")
        if not self.start < self.stop:
            raise InvalidParameter(f"range start {self.start} must be below stop {self.stop}")

    @property
    def param_name(self) -> str:
        return SWEEP_FAMILIES[self.family][0]

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.steps)


def sweep_rows(spec: SweepSpec) -> list[dict]:
    """One dict per sweep point, full precision.

    Every point is built before any row is produced, so an out-of-domain
    range fails without partial output.
    """
    build = SWEEP_FAMILIES[spec.family][1]
    states = [(float(v), build(float(v), spec.fixed)) for v in spec.values()]
    rows = []
    for v, rho in states:
        rep = classify(rho)
        s1, s2, s3 = rep.singular_values
        rows.append(
            {
                "param": v,
                "F": rep.max_fidelity,
                "Delta": rep.fidelity_deviation,
                "useful": rep.useful,
                "universal": rep.universal,
                "det_t": rep.det_t,
                "s1": s1,
                "s2": s2,
                "s3": s3,
            }
        )
    return rows


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    return f"{float(x):.10g}"


def rows_to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(COLUMNS)
    for row in rows:
        writer.writerow([_fmt(row[c]) for c in COLUMNS])
    return buf.getvalue()

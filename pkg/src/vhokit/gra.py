"""Grey relational analysis for handover target selection.

Ranks candidate access networks against an all-ones reference sequence:
normalize each attribute column into [0, 1] by its preference direction,
convert distances from the reference into grey relational coefficients, and
aggregate them into weighted grades.  Highest grade wins.
"""
from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass, field

import numpy as np


class Direction(enum.Enum):
    HIGHER_BETTER = "max"
    LOWER_BETTER = "min"
    CLOSER_TO_TARGET = "target"


@dataclass(frozen=True)
class AttributeSpec:
    """One performance attribute: preference direction and weight."""

    name: str
    direction: Direction = Direction.HIGHER_BETTER
    target: float | None = None
    weight: float = 1.0

    def __post_init__(self):
        if self.weight < 0:
            raise ValueError(f"attribute {self.name!r}: weight must be >= 0")
        if self.direction is Direction.CLOSER_TO_TARGET and self.target is None:
            raise ValueError(f"attribute {self.name!r}: target direction needs a target value")


@dataclass
class DecisionMatrix:
    """Alternatives x attributes grid of raw (mixed-unit) performance values.

    Attribute weights are normalized to sum to one on construction.
    """

    alternatives: list[str]
    attributes: list[AttributeSpec]
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        m, n = len(self.alternatives), len(self.attributes)
        if m < 2:
            raise ValueError("need at least 2 alternatives")
        if n < 1:
            raise ValueError("need at least 1 attribute")
        if self.values.shape != (m, n):
            raise ValueError(
                f"values shape {self.values.shape} does not match "
                f"{m} alternatives x {n} attributes"
            )
        if not np.isfinite(self.values).all():
            raise ValueError("decision matrix contains missing or non-finite cells")
        total = sum(a.weight for a in self.attributes)
        if total <= 0:
            raise ValueError("attribute weights must not all be zero")
        if abs(total - 1.0) > 1e-12:
            self.attributes = [
                AttributeSpec(a.name, a.direction, a.target, a.weight / total)
                for a in self.attributes
            ]
        self.values.setflags(write=False)

    @property
    def weights(self) -> np.ndarray:
        return np.array([a.weight for a in self.attributes])


@dataclass(frozen=True)
class GraResult:
    normalized: np.ndarray
    coefficients: np.ndarray
    grades: np.ndarray
    ranking: list[str] = field(default_factory=list)


def normalize(matrix: DecisionMatrix) -> np.ndarray:
    """Map every column into [0, 1] with 1 the preferred end.

    Benefit columns use (y - min)/(max - min), cost columns the mirror, and
    target columns 1 - |y - target| / max(max - target, target - min).
    Non-discriminating columns (all values equal, or all equal to the
    target) map to all-ones with a warning.
    """
    m, n = matrix.values.shape
    out = np.empty((m, n))
    for j, attr in enumerate(matrix.attributes):
        col = matrix.values[:, j]
        lo, hi = col.min(), col.max()
        if attr.direction is Direction.CLOSER_TO_TARGET:
            denom = max(hi - attr.target, attr.target - lo)
            if denom <= 0:
                warnings.warn(
                    f"attribute {attr.name!r} matches its target everywhere; "
                    "treated as non-discriminating", stacklevel=2)
                out[:, j] = 1.0
            else:
                out[:, j] = 1.0 - np.abs(col - attr.target) / denom
        elif hi == lo:
            warnings.warn(
                f"attribute {attr.name!r} is constant; treated as non-discriminating",
                stacklevel=2)
            out[:, j] = 1.0
        elif attr.direction is Direction.HIGHER_BETTER:
            out[:, j] = (col - lo) / (hi - lo)
        else:
            out[:, j] = (hi - col) / (hi - lo)
    return out


def grey_relational_coefficients(normalized: np.ndarray, zeta: float = 0.5) -> np.ndarray:
    """Coefficients against the all-ones reference sequence.

    gamma = (d_min + zeta*d_max) / (d + zeta*d_max), where d = |1 - x| and
    d_min/d_max range over the whole grid.
    """
    if not 0 < zeta <= 1:
        raise ValueError("zeta must lie in (0, 1]")
    x = np.asarray(normalized, dtype=float)
    if x.min() < -1e-12 or x.max() > 1 + 1e-12:
        raise ValueError("normalized values must lie in [0, 1]")
    delta = np.abs(1.0 - x)
    d_min, d_max = delta.min(), delta.max()
    if d_max == 0.0:
        return np.ones_like(delta)
    return (d_min + zeta * d_max) / (delta + zeta * d_max)


def grey_relational_grades(coefficients: np.ndarray, weights) -> np.ndarray:
    """Weighted aggregation of coefficients into one grade per alternative."""
    w = np.asarray(weights, dtype=float)
    if abs(w.sum() - 1.0) > 1e-9:
        raise ValueError("weights must sum to 1")
    return np.asarray(coefficients, dtype=float) @ w


def rank(matrix: DecisionMatrix, zeta: float = 0.5, weights=None) -> GraResult:
    """Full pipeline: normalize, coefficients, grades, and the descending
    ranking (ties keep input order)."""
    if weights is None:
        w = matrix.weights
    else:
        w = np.asarray(weights, dtype=float)
        if w.shape != (len(matrix.attributes),):
            raise ValueError("weights length must match the attribute count")
        if w.min() < 0:
            raise ValueError("weights must be >= 0")
        total = w.sum()
        if total <= 0:
            raise ValueError("weights must not all be zero")
        if abs(total - 1.0) > 1e-12:
            warnings.warn("weights do not sum to 1; renormalizing", stacklevel=2)
            w = w / total
    normalized = normalize(matrix)
    coefficients = grey_relational_coefficients(normalized, zeta)
    grades = grey_relational_grades(coefficients, w)
    order = np.argsort(-grades, kind="stable")
    ranking = [matrix.alternatives[i] for i in order]
    return GraResult(normalized, coefficients, grades, ranking)


def load_decision_matrix(path) -> DecisionMatrix:
    """Read a decision matrix from a comma-delimited text file.

    Layout: a header row (label cell + attribute names), a direction row
    (``direction`` + one of ``max`` / ``min`` / ``target:<value>`` per
    attribute), an optional ``weights`` row, then one row per alternative
    (name + values).  Blank lines and ``#`` comment lines are ignored.
    """
    rows = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            rows.append((lineno, [cell.strip() for cell in line.split(",")]))
    if len(rows) < 4:
        raise ValueError(f"{path}: need header, direction row and >= 2 alternatives")

    header = rows[0][1]
    names = header[1:]
    n = len(names)
    if n < 1:
        raise ValueError(f"{path}: header row has no attribute names")

    def check_width(lineno, cells, what):
        if len(cells) != n + 1:
            raise ValueError(
                f"{path}:{lineno}: {what} has {len(cells)} fields, expected {n + 1}")

    dir_lineno, dir_cells = rows[1]
    check_width(dir_lineno, dir_cells, "direction row")
    directions, targets = [], []
    for j, code in enumerate(dir_cells[1:]):
        code = code.lower()
        if code == "max":
            directions.append(Direction.HIGHER_BETTER)
            targets.append(None)
        elif code == "min":
            directions.append(Direction.LOWER_BETTER)
            targets.append(None)
        elif code.startswith("target:"):
            directions.append(Direction.CLOSER_TO_TARGET)
            targets.append(float(code.split(":", 1)[1]))
        else:
            raise ValueError(
                f"{path}:{dir_lineno}: column {j + 2}: unknown direction code {code!r}")

    body = rows[2:]
    weights = [1.0] * n
    if body and body[0][1][0].lower() == "weights":
        w_lineno, w_cells = body[0]
        check_width(w_lineno, w_cells, "weights row")
        try:
            weights = [float(c) for c in w_cells[1:]]
        except ValueError as exc:
            raise ValueError(f"{path}:{w_lineno}: bad weight: {exc}") from None
        body = body[1:]

    alternatives, values = [], []
    for lineno, cells in body:
        check_width(lineno, cells, f"alternative row {cells[0]!r}")
        alternatives.append(cells[0])
        try:
            values.append([float(c) for c in cells[1:]])
        except ValueError as exc:
            raise ValueError(f"{path}:{lineno}: bad value: {exc}") from None

    attributes = [
        AttributeSpec(name, direction, target, weight)
        for name, direction, target, weight in zip(names, directions, targets, weights)
    ]
    return DecisionMatrix(alternatives, attributes, np.array(values))

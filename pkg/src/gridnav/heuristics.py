"""Distance metrics, heuristic weighting, and consistency checking."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .grid import SQRT2, Cell, GridMap


class Metric(Enum):
    """Distance formulas selectable for the heuristic estimate.

    Enum values double as the short tokens used on the CLI and in CSV output.
    """

    MANHATTAN = "m"
    MAX_AXIS = "Mxy"
    DIAGONAL_SHORTCUT = "DS"
    EUCLIDEAN = "E"
    EUCLIDEAN_SQUARED = "SQR"

    @property
    def token(self) -> str:
        return self.value

    @classmethod
    def from_token(cls, token: str) -> "Metric":
        for metric in cls:
            if metric.value == token:
                return metric
        valid = ", ".join(m.value for m in cls)
        raise ValueError(f"unknown metric token {token!r} (expected one of: {valid})")


ALL_METRICS = tuple(Metric)


def metric_distance(metric: Metric, a: Cell, b: Cell) -> float:
    """Distance between two cells under the chosen metric.

    Symmetric in its arguments and zero exactly when ``a == b``. The
    diagonal-shortcut metric uses sqrt(2) for the diagonal unit cost and 1
    for the straight remainder, matching the grid's geometric step costs.
    """
    dx = abs(a.x - b.x)
    dy = abs(a.y - b.y)
    if metric is Metric.MANHATTAN:
        return float(dx + dy)
    if metric is Metric.MAX_AXIS:
        return float(max(dx, dy))
    if metric is Metric.DIAGONAL_SHORTCUT:
        return SQRT2 * min(dx, dy) + abs(dx - dy)
    if metric is Metric.EUCLIDEAN:
        return math.hypot(dx, dy)
    if metric is Metric.EUCLIDEAN_SQUARED:
        return float(dx * dx + dy * dy)
    raise ValueError(f"unhandled metric {metric!r}")


@dataclass(frozen=True)
class HeuristicSpec:
    """Metric choice plus a non-negative integer weight and diagonals flag.

    Weight 0 forces h == 0 everywhere, turning the search into uniform-cost
    search; weights above 1 inflate the estimate, trading optimality for
    speed with cost bounded by weight * optimal (for admissible metrics).
    """

    metric: Metric
    weight: int
    diagonals: bool = False

    def __post_init__(self) -> None:
        if self.weight < 0:
            raise ValueError(f"heuristic weight must be >= 0, got {self.weight}")


def h_value(spec: HeuristicSpec, n: Cell, goal: Cell) -> float:
    """Weighted heuristic estimate from ``n`` to ``goal``."""
    if spec.weight == 0:
        return 0.0
    return spec.weight * metric_distance(spec.metric, n, goal)


def reduced_cost(spec: HeuristicSpec, x: Cell, y: Cell, d: float, goal: Cell) -> float:
    """Edge cost adjusted by the heuristic: d - h(x) + h(y).

    Non-negative for every edge exactly when the heuristic is consistent.
    """
    return d - h_value(spec, x, goal) + h_value(spec, y, goal)


@dataclass(frozen=True)
class ConsistencyReport:
    consistent: bool
    #: A violating (from_cell, to_cell) edge when inconsistent.
    witness: tuple[Cell, Cell] | None = None


def check_consistency(
    spec: HeuristicSpec,
    grid: GridMap,
    goal: Cell,
    eps: float = 1e-9,
) -> ConsistencyReport:
    """Exhaustively test h(x) <= d(x,y) + h(y) over every edge of the map.

    Edges are generated with the spec's own diagonals flag. The tolerance
    ``eps`` absorbs floating-point noise from sqrt(2) arithmetic.
    """
    for y in range(grid.height):
        for x in range(grid.width):
            if not grid.is_passable(x, y):
                continue
            src = Cell(x, y)
            for dst, d in grid.neighbors(src, spec.diagonals):
                if reduced_cost(spec, src, dst, d, goal) < -eps:
                    return ConsistencyReport(False, (src, dst))
    return ConsistencyReport(True, None)

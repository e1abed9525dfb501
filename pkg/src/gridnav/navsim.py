"""Closed-loop navigation of a point robot on a partially known map.

The robot plans on its known map, advances one cell per tick over the true
map (known map plus hidden obstacles), senses true cell passability inside a
disk around itself each tick, and replans when a discovery invalidates the
remaining path. Two preset operating modes differ in sensor range and in
whether motion near known obstacles is slowed by an action limiter.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from typing import TextIO

from .grid import IMPASSABLE, Cell, GridMap
from .heuristics import HeuristicSpec, Metric
from .search import (
    PlanInputError,
    PlannerConfig,
    PlanResult,
    PlanStatus,
    SearchWorkspace,
    Variant,
    plan_fast,
)

log = logging.getLogger(__name__)

#: Planner settings used for every replan unless the caller overrides them:
#: max-axis metric, weight 8, diagonal moves allowed.
DEFAULT_NAV_SPEC = HeuristicSpec(Metric.MAX_AXIS, 8, diagonals=True)


@dataclass(frozen=True)
class NavMode:
    """Operating mode: sensor reach in millimeters plus the action limiter.

    With the limiter on, a move into or out of any cell 8-adjacent to a
    known obstacle consumes 2 ticks instead of 1.
    """

    name: str
    sensor_range_mm: int
    action_limiter: bool

    def __post_init__(self) -> None:
        if self.sensor_range_mm < 0:
            raise ValueError("sensor_range_mm must be >= 0")


M1 = NavMode("M1", 50, False)
M2 = NavMode("M2", 225, True)

_PRESETS = {"M1": M1, "M2": M2}


def preset_mode(name: str) -> NavMode:
    try:
        return _PRESETS[name]
    except KeyError:
        raise ValueError(f"unknown mode {name!r} (expected M1 or M2)") from None


class Outcome(Enum):
    REACHED_GOAL = "ReachedGoal"
    STUCK = "Stuck"


@dataclass(frozen=True)
class TickRecord:
    """One simulator step: the tick counter after the action it describes."""

    tick: int
    pos: Cell
    revealed: tuple[Cell, ...]
    replanned: bool
    limited: bool


@dataclass
class NavRun:
    outcome: Outcome
    ticks: int
    replans: int
    trace: list[TickRecord]
    #: Every planner invocation of the run, the initial plan first.
    plans: list[PlanResult]


def sense(
    true_map: GridMap,
    known_map: GridMap,
    pos: Cell,
    range_mm: int,
) -> tuple[GridMap, list[Cell]]:
    """Copy true passability into the known map inside a sensing disk.

    Every cell whose center lies within ``range_mm`` of the robot's cell
    center is updated. Returns the (possibly unchanged) known map and the
    cells newly discovered to be impassable. The input maps are not mutated.
    """
    if not true_map.is_passable(pos.x, pos.y):
        raise PlanInputError(f"sensor position {pos} is impassable on the true map")
    cell_mm = true_map.cell_size_mm
    radius = range_mm / cell_mm
    radius_sq = radius * radius
    reach = int(radius)
    width = true_map.width
    changed: dict[int, int] = {}
    newly_blocked: list[Cell] = []
    for dy in range(-reach, reach + 1):
        for dx in range(-reach, reach + 1):
            if dx * dx + dy * dy > radius_sq:
                continue
            x, y = pos.x + dx, pos.y + dy
            if not true_map.in_bounds(x, y):
                continue
            true_weight = true_map.cells[y * width + x]
            known_weight = known_map.cells[y * width + x]
            if (true_weight == IMPASSABLE) != (known_weight == IMPASSABLE):
                changed[y * width + x] = true_weight
                if true_weight == IMPASSABLE:
                    newly_blocked.append(Cell(x, y))
    if not changed:
        return known_map, []
    cells = list(known_map.cells)
    for idx, weight in changed.items():
        cells[idx] = weight
    updated = GridMap(known_map.width, known_map.height, cells, known_map.cell_size_mm)
    return updated, newly_blocked


def _reveal_blocked(known_map: GridMap, cell: Cell) -> GridMap:
    """Known map with one cell forced impassable (contact discovery)."""
    cells = list(known_map.cells)
    cells[cell.y * known_map.width + cell.x] = IMPASSABLE
    return GridMap(known_map.width, known_map.height, cells, known_map.cell_size_mm)


def _near_known_obstacle(known_map: GridMap, cell: Cell) -> bool:
    """True when any 8-neighbor of ``cell`` is impassable on the known map."""
    width, cells = known_map.width, known_map.cells
    for dy in (-1, 0, 1):
        for dx in (-1, 0, 1):
            if dx == 0 and dy == 0:
                continue
            x, y = cell.x + dx, cell.y + dy
            if known_map.in_bounds(x, y) and cells[y * width + x] == IMPASSABLE:
                return True
    return False


def navigate(
    true_map: GridMap,
    known_map: GridMap,
    start: Cell,
    goal: Cell,
    mode: NavMode,
    spec: HeuristicSpec = DEFAULT_NAV_SPEC,
) -> NavRun:
    """Run the closed loop until the goal is reached or the robot is stuck.

    Each iteration: sense around the current position; replan on the known
    map when there is no current path or a known obstacle lies on the
    remaining path; then advance one cell along the path. A move attempt
    into a cell that is impassable on the true map does not change position;
    it reveals that cell instead (contact sensing) and costs one tick, which
    is how the short-range mode ever learns about hidden obstacles. The run
    ends Stuck when a replan reports the goal unreachable on the known map
    or when the tick counter exceeds 10 * width * height.
    """
    if true_map.width != known_map.width or true_map.height != known_map.height:
        raise PlanInputError("true and known maps must have identical dimensions")
    if true_map.cell_size_mm != known_map.cell_size_mm:
        raise PlanInputError("true and known maps must have identical cell sizes")
    _require_passable(true_map, "true map", start, goal)
    _require_passable(known_map, "known map", start, goal)

    cfg = PlannerConfig(Variant.FAST, spec)
    ws = SearchWorkspace()
    tick_budget = 10 * true_map.width * true_map.height

    pos = start
    known = known_map
    ticks = 0
    trace: list[TickRecord] = []
    plans: list[PlanResult] = []
    path: list[Cell] | None = None
    path_index = 0

    if pos == goal:
        return NavRun(Outcome.REACHED_GOAL, 0, 0, trace, plans)

    outcome = Outcome.STUCK
    while True:
        known, revealed = sense(true_map, known, pos, mode.sensor_range_mm)
        revealed = list(revealed)

        replanned = False
        if path is None or _path_blocked(known, path, path_index):
            replanned = path is not None  # the initial plan is not a replan
            result = plan_fast(known, pos, goal, cfg, ws)
            plans.append(result)
            if result.status is not PlanStatus.FOUND:
                ticks += 1
                trace.append(TickRecord(ticks, pos, tuple(revealed), replanned, False))
                outcome = Outcome.STUCK
                break
            path = result.path
            path_index = 0

        assert path is not None
        nxt = path[path_index + 1]
        limited = False
        if not true_map.is_passable(nxt.x, nxt.y):
            # Contact with a hidden obstacle: reveal it, stay in place.
            known = _reveal_blocked(known, nxt)
            revealed.append(nxt)
            ticks += 1
        else:
            limited = mode.action_limiter and (
                _near_known_obstacle(known, pos) or _near_known_obstacle(known, nxt)
            )
            ticks += 2 if limited else 1
            pos = nxt
            path_index += 1
        trace.append(TickRecord(ticks, pos, tuple(revealed), replanned, limited))

        if pos == goal:
            outcome = Outcome.REACHED_GOAL
            break
        if ticks > tick_budget:
            outcome = Outcome.STUCK
            break

    replans = max(0, len(plans) - 1)
    return NavRun(outcome, ticks, replans, trace, plans)


def _require_passable(grid: GridMap, label: str, start: Cell, goal: Cell) -> None:
    for name, cell in (("start", start), ("goal", goal)):
        if not grid.in_bounds(cell.x, cell.y):
            raise PlanInputError(f"{name} {cell} is outside the {label}")
        if not grid.is_passable(cell.x, cell.y):
            raise PlanInputError(f"{name} {cell} is impassable on the {label}")


def _path_blocked(known_map: GridMap, path: list[Cell], path_index: int) -> bool:
    """True when any cell still ahead on the path is a known obstacle."""
    for cell in path[path_index + 1 :]:
        if not known_map.is_passable(cell.x, cell.y):
            return True
    return False


def write_trace(run: NavRun, sink: TextIO) -> None:
    """Emit the tick-by-tick trace: one line per step plus a summary footer."""
    for rec in run.trace:
        sink.write(
            f"tick={rec.tick} pos={rec.pos.x},{rec.pos.y} "
            f"revealed={len(rec.revealed)} replan={int(rec.replanned)} "
            f"limited={int(rec.limited)}\n"
        )
    sink.write(
        f"outcome={run.outcome.value} ticks={run.ticks} replans={run.replans}\n"
    )


def replay_check(
    run: NavRun,
    true_map: GridMap,
    known_map: GridMap,
    start: Cell,
    goal: Cell,
    mode: NavMode,
    spec: HeuristicSpec = DEFAULT_NAV_SPEC,
) -> bool:
    """Re-execute ``navigate`` with the given inputs and compare traces.

    Returns True only for a tick-for-tick identical rerun; the first
    divergence is logged at debug level.
    """
    rerun = navigate(true_map, known_map, start, goal, mode, spec)
    if rerun.outcome is not run.outcome or rerun.ticks != run.ticks or rerun.replans != run.replans:
        log.debug(
            "replay summary diverged: %s/%s ticks=%s/%s replans=%s/%s",
            run.outcome, rerun.outcome, run.ticks, rerun.ticks, run.replans, rerun.replans,
        )
        return False
    for step, (a, b) in enumerate(zip(run.trace, rerun.trace)):
        if a != b:
            log.debug("replay diverged at step %d: %s != %s", step, a, b)
            return False
    if len(run.trace) != len(rerun.trace):
        log.debug("replay trace lengths differ: %d != %d", len(run.trace), len(rerun.trace))
        return False
    return True

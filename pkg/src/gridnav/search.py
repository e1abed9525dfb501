"""Grid planners: textbook A*, the fast lazy-deletion variant, and a Dijkstra oracle.

The textbook planner keeps a single entry per cell in its open structure and
eagerly removes or re-inserts entries when a better route appears, re-opening
closed cells. The fast planner never deletes queue entries: superseded ones
are recognized and skipped at pop time, per-cell marker arrays stamped with a
monotonically increasing search ID answer open/closed membership in constant
time, and the reused workspace is never cleared between searches.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from enum import Enum
from time import perf_counter

import numpy as np

from .grid import SQRT2, Cell, GridMap
from .heuristics import HeuristicSpec, Metric

#: Minimum g improvement treated as "strictly better". Sums of sqrt(2) steps
#: taken in different orders can differ by a few ulp for equal-cost routes;
#: without this guard such noise would trigger spurious re-expansions.
G_EPS = 1e-12

_DEADLINE_CHECK_MASK = 1023


class PlanInputError(ValueError):
    """Bad planner input (out-of-bounds or impassable endpoint, bad config).

    Deliberately distinct from an Unreachable result so harnesses can tell
    configuration bugs from genuine blockage.
    """


class SearchTimeout(Exception):
    """Raised when a planner overruns its cooperative deadline."""


class Variant(Enum):
    TEXTBOOK = "textbook"
    FAST = "fast"


class PlanStatus(Enum):
    FOUND = "found"
    UNREACHABLE = "unreachable"


@dataclass(frozen=True)
class PlannerConfig:
    variant: Variant
    spec: HeuristicSpec
    #: Fast variant only: when off, cells are never closed and may be
    #: re-expanded if a strictly better route appears later.
    use_closed_list: bool = True

    def __post_init__(self) -> None:
        if self.variant is Variant.TEXTBOOK and not self.use_closed_list:
            raise ValueError("use_closed_list=False is only valid for the fast variant")


@dataclass
class PlanResult:
    status: PlanStatus
    path: list[Cell]
    cost: float
    expansions: int
    reexpansions: int
    stale_pops: int
    heap_pushes: int
    elapsed: float

    @property
    def found(self) -> bool:
        return self.status is PlanStatus.FOUND


class SearchWorkspace:
    """Reusable per-planner scratch state.

    Holds the priority queue, per-cell g/parent arrays, and open/closed
    marker arrays, all indexed in the padded coordinate space of the map
    being searched. Each search bumps ``current_id`` and stamps the marker
    arrays with it, so stale state from earlier searches is never read and
    nothing is cleared between searches. A workspace is owned by one search
    at a time but may move between threads between searches.
    """

    def __init__(self) -> None:
        self.current_id = 0
        self.g_array: list[float] = []
        self.parent_array: list[int] = []
        self.open_mark: list[int] = []
        self.closed_mark: list[int] = []
        self.open_queue: list[tuple[float, float, int, int]] = []
        self._padded_width = 0
        self._padded_height = 0

    def begin_search(self, grid: GridMap) -> int:
        """Allocate arrays for the map's size if needed and issue a fresh ID."""
        pw, ph = grid.width + 2, grid.height + 2
        if (pw, ph) != (self._padded_width, self._padded_height):
            n = pw * ph
            self.g_array = [0.0] * n
            self.parent_array = [-1] * n
            self.open_mark = [0] * n
            self.closed_mark = [0] * n
            self._padded_width, self._padded_height = pw, ph
        self.current_id += 1
        return self.current_id


def reconstruct_path(ws: SearchWorkspace, goal: Cell) -> list[Cell]:
    """Walk the workspace parent chain from ``goal`` back to the search start.

    Returns the path in start-to-goal order. Raises ValueError if the goal
    was not reached by the workspace's current search.
    """
    pw = ws._padded_width
    if pw == 0:
        raise ValueError("workspace has not run a search")
    idx = (goal.y + 1) * pw + (goal.x + 1)
    if not (0 <= idx < len(ws.open_mark)) or ws.open_mark[idx] != ws.current_id:
        raise ValueError(f"goal {goal} was not reached in the current search")
    parent = ws.parent_array
    path: list[Cell] = []
    limit = len(parent)
    while idx != -1:
        path.append(Cell(idx % pw - 1, idx // pw - 1))
        idx = parent[idx]
        if len(path) > limit:
            raise RuntimeError("parent chain contains a cycle")
    path.reverse()
    return path


def _check_endpoints(grid: GridMap, start: Cell, goal: Cell) -> None:
    for name, cell in (("start", start), ("goal", goal)):
        if not grid.in_bounds(cell.x, cell.y):
            raise PlanInputError(
                f"{name} {cell} is outside the {grid.width}x{grid.height} map"
            )
        if not grid.is_passable(cell.x, cell.y):
            raise PlanInputError(f"{name} {cell} is impassable")


def _heuristic_rows(grid: GridMap, goal: Cell, spec: HeuristicSpec):
    """Lazy per-row heuristic tables for the fast planner.

    Returns ``(rows, build_row)``: ``rows[jy]`` is the padded-x list of
    weighted h values for padded row ``jy``, or None until ``build_row(jy)``
    materializes it. Rows the search never touches are never computed, so
    sharply guided searches pay almost nothing while broad searches get
    vectorized row construction.
    """
    w = grid.width
    ph = grid.height + 2
    if spec.weight == 0:
        zero_row = [0.0] * (w + 2)
        rows: list[list[float] | None] = [zero_row] * ph

        def build_row(jy: int) -> list[float]:
            return zero_row

        return rows, build_row

    dx = np.abs(np.arange(w, dtype=np.float64) - goal.x)
    metric = spec.metric
    weight = spec.weight
    gy = goal.y
    rows = [None] * ph

    def build_row(jy: int) -> list[float]:
        dy = float(abs(jy - 1 - gy))
        if metric is Metric.MANHATTAN:
            body = dx + dy
        elif metric is Metric.MAX_AXIS:
            body = np.maximum(dx, dy)
        elif metric is Metric.DIAGONAL_SHORTCUT:
            mn = np.minimum(dx, dy)
            body = SQRT2 * mn + (np.maximum(dx, dy) - mn)
        elif metric is Metric.EUCLIDEAN:
            body = np.hypot(dx, dy)
        elif metric is Metric.EUCLIDEAN_SQUARED:
            body = dx * dx + dy * dy
        else:
            raise ValueError(f"unhandled metric {metric!r}")
        if weight != 1:
            body = weight * body
        row = [0.0]
        row.extend(body.tolist())
        row.append(0.0)
        rows[jy] = row
        return row

    return rows, build_row


def plan_fast(
    grid: GridMap,
    start: Cell,
    goal: Cell,
    cfg: PlannerConfig,
    ws: SearchWorkspace | None = None,
    *,
    deadline: float | None = None,
    pop_trace: list[tuple[float, float, Cell]] | None = None,
) -> PlanResult:
    """Lazy-deletion A*.

    When a better g is found for an open cell a new queue entry is pushed
    without deleting the old one; at pop time an entry whose recorded g no
    longer matches the cell's best g, or whose cell is already closed, is
    counted in ``stale_pops`` and skipped. Queue order is ascending f, ties
    broken by descending g, remaining ties by insertion order.

    ``pop_trace``, when given, receives one ``(f, g, cell)`` tuple per
    non-stale pop. ``deadline`` is a ``time.perf_counter()`` value past which
    :class:`SearchTimeout` is raised.
    """
    if cfg.variant is not Variant.FAST:
        raise PlanInputError(f"plan_fast requires a fast-variant config, got {cfg.variant}")
    _check_endpoints(grid, start, goal)
    if ws is None:
        ws = SearchWorkspace()
    t_begin = perf_counter()
    sid = ws.begin_search(grid)
    pw = grid.width + 2
    wt = grid.padded_weights()
    # Broad searches (weight 0 or 1) touch most cells of whole rows, so
    # vectorized lazy row tables pay off; sharply weighted searches cut a
    # narrow corridor where per-push scalar evaluation is far cheaper.
    if cfg.spec.weight <= 1:
        hrows, build_row = _heuristic_rows(grid, goal, cfg.spec)
        h_of = None
    else:
        hrows, build_row = None, None
        h_of = _scalar_heuristic(goal, cfg.spec, pw)
    g = ws.g_array
    parent = ws.parent_array
    omark = ws.open_mark
    cmark = ws.closed_mark
    heap = ws.open_queue
    heap.clear()
    use_closed = cfg.use_closed_list
    push = heapq.heappush
    pop = heapq.heappop

    s = (start.y + 1) * pw + (start.x + 1)
    t = (goal.y + 1) * pw + (goal.x + 1)
    g[s] = 0.0
    parent[s] = -1
    omark[s] = sid
    if hrows is not None:
        start_row = hrows[start.y + 1] or build_row(start.y + 1)
        heap.append((start_row[start.x + 1], 0.0, 0, s))
    else:
        heap.append((h_of(s), 0.0, 0, s))
    seq = 1
    pushes = 1
    expansions = 0
    reexpansions = 0
    stale_pops = 0
    pops = 0
    found = False

    # (flat delta, dy of the step), in the same order grid.neighbors uses:
    # E, W, S, N, then SE, NE, SW, NW with their flanking cardinal deltas.
    cardinal = ((1, 0), (-1, 0), (pw, 1), (-pw, -1))
    diagonal: tuple[tuple[int, int, int, int], ...] = ()
    if cfg.spec.diagonals:
        diagonal = (
            (pw + 1, 1, 1, pw),
            (-pw + 1, -1, 1, -pw),
            (pw - 1, 1, -1, pw),
            (-pw - 1, -1, -1, -pw),
        )

    while heap:
        f, neg_g, _, i = pop(heap)
        pops += 1
        if deadline is not None and not (pops & _DEADLINE_CHECK_MASK) and perf_counter() > deadline:
            raise SearchTimeout(f"search exceeded its deadline after {pops} pops")
        if use_closed and cmark[i] == sid:
            stale_pops += 1
            continue
        gi = -neg_g
        if gi != g[i]:
            stale_pops += 1
            continue
        if cmark[i] == sid:
            reexpansions += 1
        else:
            cmark[i] = sid
        expansions += 1
        iy = i // pw
        if pop_trace is not None:
            pop_trace.append((f, gi, Cell(i - iy * pw - 1, iy - 1)))
        if i == t:
            found = True
            break
        for d, dy in cardinal:
            j = i + d
            wj = wt[j]
            if not wj:
                continue
            gj = gi + wj
            if omark[j] == sid and (
                g[j] - gj <= G_EPS or (use_closed and cmark[j] == sid)
            ):
                continue
            g[j] = gj
            parent[j] = i
            omark[j] = sid
            if hrows is not None:
                jy = iy + dy
                row = hrows[jy]
                if row is None:
                    row = build_row(jy)
                hj = row[j - jy * pw]
            else:
                hj = h_of(j)
            push(heap, (gj + hj, -gj, seq, j))
            seq += 1
            pushes += 1
        for d, dy, fa, fb in diagonal:
            j = i + d
            wj = wt[j]
            if not wj or not wt[i + fa] or not wt[i + fb]:
                continue
            gj = gi + wj * SQRT2
            if omark[j] == sid and (
                g[j] - gj <= G_EPS or (use_closed and cmark[j] == sid)
            ):
                continue
            g[j] = gj
            parent[j] = i
            omark[j] = sid
            if hrows is not None:
                jy = iy + dy
                row = hrows[jy]
                if row is None:
                    row = build_row(jy)
                hj = row[j - jy * pw]
            else:
                hj = h_of(j)
            push(heap, (gj + hj, -gj, seq, j))
            seq += 1
            pushes += 1

    # Entries left behind are this search's garbage; dropping them now keeps
    # the next search on this workspace from inheriting the cleanup.
    heap.clear()
    elapsed = perf_counter() - t_begin
    if found:
        return PlanResult(
            PlanStatus.FOUND, reconstruct_path(ws, goal), g[t],
            expansions, reexpansions, stale_pops, pushes, elapsed,
        )
    return PlanResult(
        PlanStatus.UNREACHABLE, [], math.inf,
        expansions, reexpansions, stale_pops, pushes, elapsed,
    )


class _IndexedHeap:
    """Binary min-heap of (f, -g, seq, cell) entries with a cell -> slot map.

    Supports removal of an arbitrary cell's entry, which the textbook
    planner needs for its eager "remove and re-insert" updates. At most one
    entry per cell may be present.
    """

    __slots__ = ("_items", "_pos")

    def __init__(self) -> None:
        self._items: list[tuple[float, float, int, int]] = []
        self._pos: dict[int, int] = {}

    def __len__(self) -> int:
        return len(self._items)

    def __contains__(self, idx: int) -> bool:
        return idx in self._pos

    def g_of(self, idx: int) -> float | None:
        """The g value of the cell's entry, or None when not queued."""
        slot = self._pos.get(idx)
        if slot is None:
            return None
        return -self._items[slot][1]

    def push(self, entry: tuple[float, float, int, int]) -> None:
        items = self._items
        items.append(entry)
        self._sift_up(len(items) - 1, entry)

    def pop(self) -> tuple[float, float, int, int]:
        items = self._items
        top = items[0]
        del self._pos[top[3]]
        last = items.pop()
        if items:
            self._sift_down(0, last)
        return top

    def remove(self, idx: int) -> None:
        slot = self._pos.pop(idx)
        items = self._items
        last = items.pop()
        if slot < len(items):
            parent = (slot - 1) >> 1
            if slot > 0 and last < items[parent]:
                self._sift_up(slot, last)
            else:
                self._sift_down(slot, last)

    def _sift_up(self, slot: int, entry: tuple[float, float, int, int]) -> None:
        items, pos = self._items, self._pos
        while slot > 0:
            parent_slot = (slot - 1) >> 1
            parent = items[parent_slot]
            if not entry < parent:
                break
            items[slot] = parent
            pos[parent[3]] = slot
            slot = parent_slot
        items[slot] = entry
        pos[entry[3]] = slot

    def _sift_down(self, slot: int, entry: tuple[float, float, int, int]) -> None:
        items, pos = self._items, self._pos
        n = len(items)
        child = 2 * slot + 1
        while child < n:
            right = child + 1
            if right < n and items[right] < items[child]:
                child = right
            smallest = items[child]
            if not smallest < entry:
                break
            items[slot] = smallest
            pos[smallest[3]] = slot
            slot = child
            child = 2 * slot + 1
        items[slot] = entry
        pos[entry[3]] = slot


def _scalar_heuristic(goal: Cell, spec: HeuristicSpec, pw: int):
    """Per-cell heuristic evaluator over padded indices.

    The textbook planner evaluates h once per generated successor, the way
    the pseudocode reads; only the fast variant batches the computation.
    """
    gx, gy = goal
    weight = spec.weight
    metric = spec.metric
    if weight == 0:
        return lambda j: 0.0
    if metric is Metric.MANHATTAN:
        def h(j: int) -> float:
            return weight * (abs(j % pw - 1 - gx) + abs(j // pw - 1 - gy))
    elif metric is Metric.MAX_AXIS:
        def h(j: int) -> float:
            dx = abs(j % pw - 1 - gx)
            dy = abs(j // pw - 1 - gy)
            return weight * float(dx if dx > dy else dy)
    elif metric is Metric.DIAGONAL_SHORTCUT:
        def h(j: int) -> float:
            dx = abs(j % pw - 1 - gx)
            dy = abs(j // pw - 1 - gy)
            mn = dx if dx < dy else dy
            return weight * (SQRT2 * mn + ((dx if dx > dy else dy) - mn))
    elif metric is Metric.EUCLIDEAN:
        hypot = math.hypot

        def h(j: int) -> float:
            return weight * hypot(j % pw - 1 - gx, j // pw - 1 - gy)
    elif metric is Metric.EUCLIDEAN_SQUARED:
        def h(j: int) -> float:
            dx = j % pw - 1 - gx
            dy = j // pw - 1 - gy
            return weight * float(dx * dx + dy * dy)
    else:
        raise ValueError(f"unhandled metric {metric!r}")
    return h


def plan_textbook(
    grid: GridMap,
    start: Cell,
    goal: Cell,
    spec: HeuristicSpec,
    ws: SearchWorkspace | None = None,
    *,
    deadline: float | None = None,
    pop_trace: list[tuple[float, float, Cell]] | None = None,
) -> PlanResult:
    """Classic A* with eager open-list maintenance and closed-node re-opening.

    Pops the lowest-f open node, closes it, and tests it against the goal.
    A successor already in the open or closed list with an existing g as
    good or better is discarded; otherwise any existing entry is removed
    from both lists and the successor is (re-)inserted into the open list,
    so closed nodes re-open when a strictly better route to them appears.

    Unlike the fast variant, the open and closed lists are ordinary
    per-search containers allocated on every call, and h is evaluated per
    generated successor. The shared workspace only records parents and
    touch marks so :func:`reconstruct_path` works for either planner.
    """
    _check_endpoints(grid, start, goal)
    if ws is None:
        ws = SearchWorkspace()
    t_begin = perf_counter()
    sid = ws.begin_search(grid)
    pw = grid.width + 2
    wt = grid.padded_weights()
    h_of = _scalar_heuristic(goal, spec, pw)
    parent = ws.parent_array
    omark = ws.open_mark
    open_list = _IndexedHeap()
    open_g = open_list.g_of
    closed: dict[int, float] = {}
    expanded: set[int] = set()

    s = (start.y + 1) * pw + (start.x + 1)
    t = (goal.y + 1) * pw + (goal.x + 1)
    parent[s] = -1
    omark[s] = sid
    open_list.push((h_of(s), 0.0, 0, s))
    seq = 1
    pushes = 1
    expansions = 0
    reexpansions = 0
    pops = 0
    found = False
    goal_g = math.inf

    cardinal = (1, -1, pw, -pw)
    diagonal: tuple[tuple[int, int, int], ...] = ()
    if spec.diagonals:
        diagonal = (
            (pw + 1, 1, pw),
            (-pw + 1, 1, -pw),
            (pw - 1, -1, pw),
            (-pw - 1, -1, -pw),
        )

    while open_list:
        f, neg_g, _, i = open_list.pop()
        pops += 1
        if deadline is not None and not (pops & _DEADLINE_CHECK_MASK) and perf_counter() > deadline:
            raise SearchTimeout(f"search exceeded its deadline after {pops} pops")
        gi = -neg_g
        closed[i] = gi
        if i in expanded:
            reexpansions += 1
        else:
            expanded.add(i)
        expansions += 1
        if pop_trace is not None:
            pop_trace.append((f, gi, Cell(i % pw - 1, i // pw - 1)))
        if i == t:
            found = True
            goal_g = gi
            break
        for d in cardinal:
            j = i + d
            wj = wt[j]
            if not wj:
                continue
            gj = gi + wj
            open_gj = open_g(j)
            if open_gj is not None and open_gj - gj <= G_EPS:
                continue
            closed_gj = closed.get(j)
            if closed_gj is not None and closed_gj - gj <= G_EPS:
                continue
            if open_gj is not None:
                open_list.remove(j)
            if closed_gj is not None:
                del closed[j]
            parent[j] = i
            omark[j] = sid
            open_list.push((gj + h_of(j), -gj, seq, j))
            seq += 1
            pushes += 1
        for d, fa, fb in diagonal:
            j = i + d
            wj = wt[j]
            if not wj or not wt[i + fa] or not wt[i + fb]:
                continue
            gj = gi + wj * SQRT2
            open_gj = open_g(j)
            if open_gj is not None and open_gj - gj <= G_EPS:
                continue
            closed_gj = closed.get(j)
            if closed_gj is not None and closed_gj - gj <= G_EPS:
                continue
            if open_gj is not None:
                open_list.remove(j)
            if closed_gj is not None:
                del closed[j]
            parent[j] = i
            omark[j] = sid
            open_list.push((gj + h_of(j), -gj, seq, j))
            seq += 1
            pushes += 1

    elapsed = perf_counter() - t_begin
    if found:
        return PlanResult(
            PlanStatus.FOUND, reconstruct_path(ws, goal), goal_g,
            expansions, reexpansions, 0, pushes, elapsed,
        )
    return PlanResult(
        PlanStatus.UNREACHABLE, [], math.inf,
        expansions, reexpansions, 0, pushes, elapsed,
    )


def plan_dijkstra(
    grid: GridMap,
    start: Cell,
    goal: Cell,
    diagonals: bool = False,
    *,
    deadline: float | None = None,
) -> PlanResult:
    """Exact shortest-path oracle under the grid's edge-cost model.

    Kept deliberately independent of the A* machinery: dict-based state,
    public neighbor enumeration, no workspace, no heuristic.
    """
    _check_endpoints(grid, start, goal)
    t_begin = perf_counter()
    dist: dict[Cell, float] = {start: 0.0}
    parent: dict[Cell, Cell | None] = {start: None}
    settled: set[Cell] = set()
    heap: list[tuple[float, int, Cell]] = [(0.0, 0, start)]
    seq = 1
    pushes = 1
    expansions = 0
    stale_pops = 0
    pops = 0
    found = False

    while heap:
        d, _, cell = heapq.heappop(heap)
        pops += 1
        if deadline is not None and not (pops & _DEADLINE_CHECK_MASK) and perf_counter() > deadline:
            raise SearchTimeout(f"search exceeded its deadline after {pops} pops")
        if cell in settled or d > dist[cell]:
            stale_pops += 1
            continue
        settled.add(cell)
        expansions += 1
        if cell == goal:
            found = True
            break
        for nxt, step in grid.neighbors(cell, diagonals):
            nd = d + step
            old = dist.get(nxt)
            if old is None or nd < old:
                dist[nxt] = nd
                parent[nxt] = cell
                heapq.heappush(heap, (nd, seq, nxt))
                seq += 1
                pushes += 1

    elapsed = perf_counter() - t_begin
    if not found:
        return PlanResult(
            PlanStatus.UNREACHABLE, [], math.inf, expansions, 0, stale_pops, pushes, elapsed
        )
    path: list[Cell] = []
    node: Cell | None = goal
    while node is not None:
        path.append(node)
        node = parent[node]
    path.reverse()
    return PlanResult(
        PlanStatus.FOUND, path, dist[goal], expansions, 0, stale_pops, pushes, elapsed
    )


def plan(
    grid: GridMap,
    start: Cell,
    goal: Cell,
    cfg: PlannerConfig,
    ws: SearchWorkspace | None = None,
    *,
    deadline: float | None = None,
    pop_trace: list[tuple[float, float, Cell]] | None = None,
) -> PlanResult:
    """Dispatch to the planner selected by ``cfg.variant``."""
    if cfg.variant is Variant.TEXTBOOK:
        return plan_textbook(
            grid, start, goal, cfg.spec, ws, deadline=deadline, pop_trace=pop_trace
        )
    return plan_fast(grid, start, goal, cfg, ws, deadline=deadline, pop_trace=pop_trace)

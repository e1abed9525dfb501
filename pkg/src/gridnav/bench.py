"""Heuristic sweep harness: times planner runs over (variant x metric x weight).

For each variant and metric the weight starts at ``weight_start`` and rises
by one per run until the median run time stops improving: the first run
whose median exceeds the previous weight's median ends that metric's series
(that run is still recorded), as does a timeout. Results land in a CSV with
per-variant total times appended as trailing comment lines.
"""

from __future__ import annotations

import statistics
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, TextIO

from .grid import Cell, GridMap
from .heuristics import ALL_METRICS, HeuristicSpec, Metric
from .search import (
    PlannerConfig,
    PlanResult,
    PlanStatus,
    SearchTimeout,
    SearchWorkspace,
    Variant,
    plan,
)

CSV_HEADER = "run,heuristic,diagonals,formula,time_s,expansions,stale_pops,cost,status"

STATUS_FOUND = "found"
STATUS_UNREACHABLE = "unreachable"
STATUS_TIMEOUT = "timeout"


@dataclass(frozen=True)
class SweepConfig:
    """One sweep: which map, endpoints, variants, metrics, and run policy.

    ``map_path`` accepts a filesystem path or any source token understood by
    :func:`gridnav.maps.resolve_map_source` (``bundled:<name>``,
    ``random:<W>x<H>:<density>``). ``weight_max`` is a livelock guard for
    series whose measured times never strictly increase.
    """

    map_path: str | Path
    start: Cell
    goal: Cell
    variants: tuple[Variant, ...] = (Variant.TEXTBOOK, Variant.FAST)
    metrics: tuple[Metric, ...] = ALL_METRICS
    diagonals: bool = False
    weight_start: int = 0
    timeout_s: float = 30.0
    repetitions: int = 5
    weight_max: int = 99
    seed: int | None = None

    def __post_init__(self) -> None:
        if self.repetitions < 1:
            raise ValueError("repetitions must be >= 1")
        if self.timeout_s <= 0:
            raise ValueError("timeout_s must be > 0")
        if self.weight_start < 0 or self.weight_max < self.weight_start:
            raise ValueError("need 0 <= weight_start <= weight_max")


@dataclass(frozen=True)
class SweepRow:
    run: int
    variant: Variant
    heuristic: int
    diagonals: bool
    formula: str
    #: Median run time in seconds; None means the run timed out.
    time_s: float | None
    expansions: int | None
    stale_pops: int | None
    cost: float | None
    status: str


def run_sweep(
    cfg: SweepConfig,
    *,
    clock: Callable[[], float] = time.perf_counter,
) -> tuple[list[SweepRow], dict[Variant, float]]:
    """Execute the sweep; returns the rows plus per-variant total seconds.

    Rows within the sweep run sequentially to keep the timing honest. The
    injectable ``clock`` only feeds the reported durations; the timeout
    deadline always uses the host monotonic clock. A timed-out run counts
    ``timeout_s`` toward its variant's total, mirroring capped table entries.
    """
    from .maps import resolve_map_source

    grid = resolve_map_source(cfg.map_path, seed=cfg.seed)
    rows: list[SweepRow] = []
    totals: dict[Variant, float] = {}
    run_no = 0
    for variant in cfg.variants:
        totals[variant] = 0.0
        ws = SearchWorkspace()
        for metric in cfg.metrics:
            prev_median: float | None = None
            for weight in range(cfg.weight_start, cfg.weight_max + 1):
                spec = HeuristicSpec(metric, weight, cfg.diagonals)
                planner_cfg = PlannerConfig(variant, spec)
                times: list[float] = []
                result: PlanResult | None = None
                timed_out = False
                for _ in range(cfg.repetitions):
                    deadline = time.perf_counter() + cfg.timeout_s
                    t0 = clock()
                    try:
                        result = plan(grid, cfg.start, cfg.goal, planner_cfg, ws, deadline=deadline)
                    except SearchTimeout:
                        timed_out = True
                        break
                    times.append(clock() - t0)
                run_no += 1
                if timed_out:
                    rows.append(
                        SweepRow(
                            run_no, variant, weight, cfg.diagonals, metric.token,
                            None, None, None, None, STATUS_TIMEOUT,
                        )
                    )
                    totals[variant] += cfg.timeout_s
                    break
                assert result is not None
                median = statistics.median(times)
                found = result.status is PlanStatus.FOUND
                rows.append(
                    SweepRow(
                        run_no, variant, weight, cfg.diagonals, metric.token,
                        median, result.expansions, result.stale_pops,
                        result.cost if found else None,
                        STATUS_FOUND if found else STATUS_UNREACHABLE,
                    )
                )
                totals[variant] += median
                if prev_median is not None and median > prev_median:
                    break
                prev_median = median
    return rows, totals


def emit_csv(
    rows: list[SweepRow],
    totals: dict[Variant, float],
    sink: TextIO,
) -> None:
    """Write sweep rows as CSV; deterministic byte-for-byte for equal inputs.

    Real numbers carry 4 decimal places; timed-out rows show ``TIMEOUT`` in
    the time column and leave expansions/stale_pops/cost empty. Per-variant
    totals follow as ``# total,<variant>,<seconds>`` comment lines, plus a
    fast-to-textbook ratio line when both variants are present.
    """
    sink.write(CSV_HEADER + "\n")
    for row in rows:
        time_field = "TIMEOUT" if row.time_s is None else f"{row.time_s:.4f}"
        expansions = "" if row.expansions is None else str(row.expansions)
        stale = "" if row.stale_pops is None else str(row.stale_pops)
        cost = "" if row.cost is None else f"{row.cost:.4f}"
        sink.write(
            f"{row.run},{row.heuristic},{int(row.diagonals)},{row.formula},"
            f"{time_field},{expansions},{stale},{cost},{row.status}\n"
        )
    for variant, total in totals.items():
        sink.write(f"# total,{variant.value},{total:.4f}\n")
    if Variant.TEXTBOOK in totals and Variant.FAST in totals and totals[Variant.TEXTBOOK] > 0:
        ratio = totals[Variant.FAST] / totals[Variant.TEXTBOOK]
        sink.write(f"# ratio,fast_vs_textbook,{ratio:.4f}\n")

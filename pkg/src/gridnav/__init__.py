"""Grid pathfinding: textbook and fast A*, heuristic sweeps, and closed-loop
navigation on partially known maps."""

from .grid import (
    IMPASSABLE,
    SQRT2,
    Cell,
    GridMap,
    MapFormatError,
    ObstacleOverlay,
    OverlayRect,
    apply_overlay,
    load_map,
    load_overlay,
    parse_map,
    parse_overlay,
    random_map,
    serialize_map,
)
from .heuristics import (
    ALL_METRICS,
    ConsistencyReport,
    HeuristicSpec,
    Metric,
    check_consistency,
    h_value,
    metric_distance,
    reduced_cost,
)
from .search import (
    PlanInputError,
    PlannerConfig,
    PlanResult,
    PlanStatus,
    SearchTimeout,
    SearchWorkspace,
    Variant,
    plan,
    plan_dijkstra,
    plan_fast,
    plan_textbook,
    reconstruct_path,
)
from .navsim import (
    DEFAULT_NAV_SPEC,
    M1,
    M2,
    NavMode,
    NavRun,
    Outcome,
    TickRecord,
    navigate,
    preset_mode,
    replay_check,
    sense,
    write_trace,
)
from .bench import SweepConfig, SweepRow, emit_csv, run_sweep

__version__ = "0.1.0"

__all__ = [
    "ALL_METRICS",
    "Cell",
    "ConsistencyReport",
    "DEFAULT_NAV_SPEC",
    "GridMap",
    "HeuristicSpec",
    "IMPASSABLE",
    "M1",
    "M2",
    "MapFormatError",
    "Metric",
    "NavMode",
    "NavRun",
    "ObstacleOverlay",
    "Outcome",
    "OverlayRect",
    "PlanInputError",
    "PlanResult",
    "PlanStatus",
    "PlannerConfig",
    "SQRT2",
    "SearchTimeout",
    "SearchWorkspace",
    "SweepConfig",
    "SweepRow",
    "TickRecord",
    "Variant",
    "apply_overlay",
    "check_consistency",
    "emit_csv",
    "h_value",
    "load_map",
    "load_overlay",
    "metric_distance",
    "navigate",
    "parse_map",
    "parse_overlay",
    "plan",
    "plan_dijkstra",
    "plan_fast",
    "plan_textbook",
    "preset_mode",
    "random_map",
    "reconstruct_path",
    "reduced_cost",
    "replay_check",
    "run_sweep",
    "sense",
    "serialize_map",
    "write_trace",
]

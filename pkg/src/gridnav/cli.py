"""Command-line entry point: plan, sweep, and navigate workflows."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .bench import SweepConfig, emit_csv, run_sweep
from .grid import Cell, GridMap, MapFormatError, apply_overlay, serialize_map
from .heuristics import ALL_METRICS, HeuristicSpec, Metric
from .maps import resolve_map_source, resolve_overlay_source
from .navsim import NavMode, navigate, preset_mode, write_trace
from .search import (
    PlanInputError,
    PlannerConfig,
    PlanStatus,
    SearchWorkspace,
    Variant,
    plan,
)

_METRIC_TOKENS = ", ".join(m.token for m in ALL_METRICS)


def _cell(text: str) -> Cell:
    try:
        x, y = text.split(",")
        return Cell(int(x), int(y))
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected '<x>,<y>' with integers, got {text!r}"
        ) from None


def _metric(token: str) -> Metric:
    try:
        return Metric.from_token(token)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _metric_list(text: str) -> tuple[Metric, ...]:
    return tuple(_metric(tok) for tok in text.split(","))


def _variant(token: str) -> Variant:
    try:
        return Variant(token)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"unknown variant {token!r} (expected textbook or fast)"
        ) from None


def _variant_list(text: str) -> tuple[Variant, ...]:
    return tuple(_variant(tok) for tok in text.split(","))


def _on_off(text: str) -> bool:
    if text == "on":
        return True
    if text == "off":
        return False
    raise argparse.ArgumentTypeError(f"expected 'on' or 'off', got {text!r}")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gridnav",
        description="Grid pathfinding: single plans, heuristic sweeps, and "
        "closed-loop navigation on partially known maps.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    plan_p = sub.add_parser("plan", help="run one planner invocation and print its result")
    plan_p.add_argument("--map", required=True, help="map file, bundled:<name>, or random:<W>x<H>:<density>")
    plan_p.add_argument("--start", type=_cell, required=True, help="start cell as <x>,<y>")
    plan_p.add_argument("--goal", type=_cell, required=True, help="goal cell as <x>,<y>")
    plan_p.add_argument("--variant", type=_variant, default=Variant.FAST, help="textbook|fast (default fast)")
    plan_p.add_argument("--metric", type=_metric, default=Metric.DIAGONAL_SHORTCUT,
                        help=f"distance formula: {_METRIC_TOKENS} (default DS)")
    plan_p.add_argument("--weight", type=int, default=1, help="heuristic weight, 0 disables the heuristic (default 1)")
    plan_p.add_argument("--diagonals", action=argparse.BooleanOptionalAction, default=False,
                        help="allow diagonal moves (default off)")
    plan_p.add_argument("--no-closed-list", action="store_true",
                        help="fast variant only: never close expanded cells")
    plan_p.add_argument("--seed", type=int, default=None, help="seed for random:* map sources")
    plan_p.add_argument("--out", type=Path, default=None, help="write the path as one x,y per line")
    plan_p.add_argument("--render", type=Path, default=None, help="write the map with the path overlaid as text")
    plan_p.set_defaults(func=_cmd_plan)

    sweep_p = sub.add_parser("sweep", help="run the heuristic sweep and emit CSV")
    sweep_p.add_argument("--map", required=True, help="map file, bundled:<name>, or random:<W>x<H>:<density>")
    sweep_p.add_argument("--start", type=_cell, required=True)
    sweep_p.add_argument("--goal", type=_cell, required=True)
    sweep_p.add_argument("--variants", type=_variant_list, default=(Variant.TEXTBOOK, Variant.FAST),
                         help="comma list of textbook,fast (default both)")
    sweep_p.add_argument("--metrics", type=_metric_list, default=ALL_METRICS,
                         help=f"comma list of {_METRIC_TOKENS} (default all)")
    sweep_p.add_argument("--diagonals", action=argparse.BooleanOptionalAction, default=False)
    sweep_p.add_argument("--weight-start", type=int, default=0)
    sweep_p.add_argument("--timeout-s", type=float, default=30.0)
    sweep_p.add_argument("--reps", type=int, default=5, help="repetitions per run; the median is reported")
    sweep_p.add_argument("--seed", type=int, default=None, help="seed for random:* map sources")
    sweep_p.add_argument("--out", type=Path, default=None, help="CSV output path (default stdout)")
    sweep_p.set_defaults(func=_cmd_sweep)

    nav_p = sub.add_parser("navigate", help="simulate the closed navigation loop")
    nav_p.add_argument("--map", required=True, help="known map: file, bundled:<name>, or random:<W>x<H>:<density>")
    nav_p.add_argument("--overlay", default=None,
                       help="hidden obstacles applied to build the true map: file or bundled:<name>")
    nav_p.add_argument("--start", type=_cell, required=True)
    nav_p.add_argument("--goal", type=_cell, required=True)
    nav_p.add_argument("--mode", default="M2", help="preset mode M1 or M2 (default M2)")
    nav_p.add_argument("--sensor-mm", type=int, default=None, help="override the mode's sensor range")
    nav_p.add_argument("--limiter", type=_on_off, default=None, help="override the mode's action limiter: on|off")
    nav_p.add_argument("--metric", type=_metric, default=Metric.MAX_AXIS,
                       help=f"planner formula: {_METRIC_TOKENS} (default Mxy)")
    nav_p.add_argument("--weight", type=int, default=8, help="planner heuristic weight (default 8)")
    nav_p.add_argument("--diagonals", action=argparse.BooleanOptionalAction, default=True,
                       help="allow diagonal moves (default on)")
    nav_p.add_argument("--seed", type=int, default=None, help="seed for random:* map sources")
    nav_p.add_argument("--trace", type=Path, default=None, help="write the tick-by-tick trace file")
    nav_p.set_defaults(func=_cmd_navigate)

    return parser


def _render_path(grid: GridMap, path: list[Cell]) -> str:
    """Map text with the path drawn as '*' (start 'S', goal 'G')."""
    rows = [list(line) for line in serialize_map(grid).splitlines()[1:]]
    for cell in path:
        rows[cell.y][cell.x] = "*"
    if path:
        rows[path[0].y][path[0].x] = "S"
        rows[path[-1].y][path[-1].x] = "G"
    return "\n".join("".join(row) for row in rows) + "\n"


def _cmd_plan(args: argparse.Namespace) -> int:
    grid = resolve_map_source(args.map, seed=args.seed)
    spec = HeuristicSpec(args.metric, args.weight, args.diagonals)
    cfg = PlannerConfig(args.variant, spec, use_closed_list=not args.no_closed_list)
    result = plan(grid, args.start, args.goal, cfg, SearchWorkspace())
    print(
        f"status={result.status.value} cost={result.cost:.4f} "
        f"expansions={result.expansions} stale_pops={result.stale_pops} "
        f"time_s={result.elapsed:.4f}"
    )
    if args.out is not None:
        args.out.write_text(
            "".join(f"{c.x},{c.y}\n" for c in result.path), encoding="utf-8"
        )
    if args.render is not None:
        args.render.write_text(_render_path(grid, result.path), encoding="utf-8")
    return 0 if result.status is PlanStatus.FOUND else 1


def _cmd_sweep(args: argparse.Namespace) -> int:
    cfg = SweepConfig(
        map_path=args.map,
        start=args.start,
        goal=args.goal,
        variants=args.variants,
        metrics=args.metrics,
        diagonals=args.diagonals,
        weight_start=args.weight_start,
        timeout_s=args.timeout_s,
        repetitions=args.reps,
        seed=args.seed,
    )
    rows, totals = run_sweep(cfg)
    if args.out is None:
        emit_csv(rows, totals, sys.stdout)
    else:
        with open(args.out, "w", encoding="utf-8") as sink:
            emit_csv(rows, totals, sink)
    return 0


def _cmd_navigate(args: argparse.Namespace) -> int:
    known = resolve_map_source(args.map, seed=args.seed)
    if args.overlay is not None:
        true_map = apply_overlay(known, resolve_overlay_source(args.overlay))
    else:
        true_map = known
    mode = preset_mode(args.mode)
    if args.sensor_mm is not None or args.limiter is not None:
        mode = NavMode(
            name=f"{mode.name}*",
            sensor_range_mm=args.sensor_mm if args.sensor_mm is not None else mode.sensor_range_mm,
            action_limiter=args.limiter if args.limiter is not None else mode.action_limiter,
        )
    spec = HeuristicSpec(args.metric, args.weight, args.diagonals)
    run = navigate(true_map, known, args.start, args.goal, mode, spec)
    if args.trace is not None:
        with open(args.trace, "w", encoding="utf-8") as sink:
            write_trace(run, sink)
    print(f"outcome={run.outcome.value} ticks={run.ticks} replans={run.replans}")
    return 0 if run.outcome.value == "ReachedGoal" else 1


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (MapFormatError, PlanInputError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def run() -> None:
    raise SystemExit(main())

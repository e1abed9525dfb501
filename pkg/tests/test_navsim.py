"""Sensing, the closed navigation loop, traces, and replay determinism."""

from __future__ import annotations

import io
import math
import random

import pytest

from gridnav import (
    M1,
    M2,
    Cell,
    HeuristicSpec,
    Metric,
    NavMode,
    ObstacleOverlay,
    Outcome,
    OverlayRect,
    PlanInputError,
    PlanStatus,
    apply_overlay,
    navigate,
    preset_mode,
    random_map,
    replay_check,
    sense,
    write_trace,
)
from gridnav.maps import ROOM_GOAL, ROOM_START, room_map, room_overlay
from conftest import grid_from_rows


def _open_room(width=9, height=9):
    return grid_from_rows(["." * width] * height)


def _disk_offsets(range_mm: float, cell_mm: int) -> set[tuple[int, int]]:
    # Independent enumeration of the sensing disk.
    r = range_mm / cell_mm
    reach = math.ceil(r) + 1
    return {
        (dx, dy)
        for dx in range(-reach, reach + 1)
        for dy in range(-reach, reach + 1)
        if dx * dx + dy * dy <= r * r
    }


class TestPresets:
    def test_mode_constants(self):
        assert M1 == NavMode("M1", 50, False)
        assert M2 == NavMode("M2", 225, True)
        assert preset_mode("M1") is M1
        with pytest.raises(ValueError):
            preset_mode("M3")


class TestSense:
    def test_short_range_sees_only_own_cell(self):
        # 50 mm reach on 100 mm cells: every neighbor center is >= 100 mm away.
        assert _disk_offsets(50, 100) == {(0, 0)}
        known = _open_room()
        true_map = apply_overlay(known, ObstacleOverlay((OverlayRect("O", 4, 5, 4, 5),)))
        updated, newly = sense(true_map, known, Cell(4, 4), 50)
        assert newly == []
        assert updated is known

    def test_medium_range_disk_shape(self):
        # 225 mm on 100 mm cells: radius 2.25 cells, 21 offsets in the disk.
        disk = _disk_offsets(225, 100)
        assert len(disk) == 21
        assert (2, 0) in disk and (-2, 0) in disk
        assert (1, 1) in disk and (2, 1) in disk
        assert (2, 2) not in disk

    def test_medium_range_reveals_disk(self):
        known = _open_room(11, 11)
        rects = tuple(
            OverlayRect(f"R{i}", x, y, x, y)
            for i, (x, y) in enumerate([(5, 3), (7, 4), (8, 5), (4, 6), (3, 3)])
        )
        true_map = apply_overlay(known, ObstacleOverlay(rects))
        updated, newly = sense(true_map, known, Cell(5, 5), 225)
        expected = {
            Cell(5 + dx, 5 + dy)
            for dx, dy in _disk_offsets(225, 100)
            if not true_map.is_passable(5 + dx, 5 + dy)
        }
        assert set(newly) == expected == {Cell(5, 3), Cell(7, 4), Cell(4, 6), Cell(3, 3)}
        for cell in expected:
            assert not updated.is_passable(cell.x, cell.y)
        # (8,5) is at distance 3: still believed passable.
        assert updated.is_passable(8, 5)

    def test_zero_range_reveals_nothing(self):
        known = _open_room()
        true_map = apply_overlay(known, ObstacleOverlay((OverlayRect("O", 4, 5, 4, 5),)))
        updated, newly = sense(true_map, known, Cell(4, 4), 0)
        assert updated is known and newly == []

    def test_reveals_passable_truth_too(self):
        true_map = _open_room(5, 5)
        known = apply_overlay(true_map, ObstacleOverlay((OverlayRect("X", 2, 2, 2, 2),)))
        updated, newly = sense(true_map, known, Cell(2, 1), 150)
        assert newly == []
        assert updated.is_passable(2, 2)

    def test_inputs_not_mutated(self):
        known = _open_room()
        true_map = apply_overlay(known, ObstacleOverlay((OverlayRect("O", 4, 4, 5, 5),)))
        before_known, before_true = known.cells, true_map.cells
        sense(true_map, known, Cell(3, 3), 225)
        assert known.cells == before_known
        assert true_map.cells == before_true

    def test_impassable_position_rejected(self):
        true_map = grid_from_rows(["#."])
        with pytest.raises(PlanInputError):
            sense(true_map, true_map, Cell(0, 0), 100)


class TestNavigate:
    def test_fully_known_world(self):
        room = _open_room(9, 9)
        run = navigate(room, room, Cell(0, 0), Cell(8, 8), M1)
        assert run.outcome is Outcome.REACHED_GOAL
        assert run.replans == 0
        assert len(run.plans) == 1
        # Limiter off: ticks equal the number of single-cell moves.
        assert run.ticks == len(run.plans[0].path) - 1

    def test_start_equals_goal(self):
        room = _open_room(3, 3)
        run = navigate(room, room, Cell(1, 1), Cell(1, 1), M2)
        assert run.outcome is Outcome.REACHED_GOAL
        assert run.ticks == 0 and run.replans == 0 and run.trace == []

    def test_sealed_goal_is_stuck_with_unreachable_plan(self):
        known = _open_room(9, 9)
        seal = ObstacleOverlay((OverlayRect("S", 6, 6, 8, 7), OverlayRect("T", 6, 8, 7, 8)))
        true_map = apply_overlay(known, seal)
        run = navigate(true_map, known, Cell(0, 0), Cell(8, 8), M2)
        assert run.outcome is Outcome.STUCK
        assert run.plans[-1].status is PlanStatus.UNREACHABLE

    def test_safety_and_monotone_knowledge(self):
        rng = random.Random(4)
        for trial in range(10):
            known = _open_room(12, 12)
            rects = []
            for k in range(rng.randrange(1, 4)):
                x, y = rng.randrange(2, 9), rng.randrange(2, 9)
                rects.append(OverlayRect(f"r{k}", x, y, min(11, x + rng.randrange(1, 3)),
                                         min(11, y + rng.randrange(1, 3))))
            true_map = apply_overlay(known, ObstacleOverlay(tuple(rects)))
            if not (true_map.is_passable(0, 0) and true_map.is_passable(11, 11)):
                continue
            mode = M1 if trial % 2 else M2
            run = navigate(true_map, known, Cell(0, 0), Cell(11, 11), mode)
            for rec in run.trace:
                assert true_map.is_passable(rec.pos.x, rec.pos.y)
            revealed: set[Cell] = set()
            for rec in run.trace:
                revealed |= set(rec.revealed)
            if run.outcome is Outcome.REACHED_GOAL:
                assert run.trace[-1].pos == Cell(11, 11)

    def test_bump_reveals_and_holds_position(self):
        # M1 senses nothing at range 50, so the hidden wall is discovered
        # only by the blocked move attempt.
        known = grid_from_rows(["...", "...", "..."])
        true_map = apply_overlay(known, ObstacleOverlay((OverlayRect("O", 1, 0, 1, 2),)))
        run = navigate(true_map, known, Cell(0, 1), Cell(2, 1), M1,
                       HeuristicSpec(Metric.MANHATTAN, 1, diagonals=False))
        assert run.outcome is Outcome.STUCK  # wall fully separates the halves
        bump_steps = [rec for rec in run.trace if rec.revealed and not rec.replanned]
        assert bump_steps, "expected at least one contact discovery"
        first = run.trace[0]
        assert first.pos == Cell(0, 1) and first.revealed == (Cell(1, 1),)

    def test_limiter_doubles_ticks_near_known_obstacles(self):
        known = grid_from_rows([".....", "..#.."])
        slow = NavMode("slow", 0, True)
        run = navigate(known, known, Cell(0, 0), Cell(4, 0), slow,
                       HeuristicSpec(Metric.MANHATTAN, 1, diagonals=False))
        assert run.outcome is Outcome.REACHED_GOAL
        # Moves into/out of cells 8-adjacent to the known block cost 2.
        assert [rec.limited for rec in run.trace] == [True, True, True, True]
        assert run.ticks == 8

    def test_mode_detection_distance_monotone(self):
        room = room_map()
        true_map = apply_overlay(room, room_overlay())

        def first_detection_distance(mode):
            run = navigate(true_map, room, ROOM_START, ROOM_GOAL, mode)
            for rec in run.trace:
                if rec.revealed:
                    return min(
                        math.hypot(rec.pos.x - c.x, rec.pos.y - c.y) for c in rec.revealed
                    )
            return math.inf

        assert first_detection_distance(M2) >= first_detection_distance(M1)


class TestTraceAndReplay:
    def test_trace_format(self):
        known = _open_room(4, 1)
        run = navigate(known, known, Cell(0, 0), Cell(3, 0), M1)
        buf = io.StringIO()
        write_trace(run, buf)
        lines = buf.getvalue().splitlines()
        assert lines[0] == "tick=1 pos=1,0 revealed=0 replan=0 limited=0"
        assert lines[-1] == "outcome=ReachedGoal ticks=3 replans=0"
        assert len(lines) == len(run.trace) + 1

    def test_replay_check_passes(self):
        room = room_map()
        true_map = apply_overlay(room, room_overlay())
        run = navigate(true_map, room, ROOM_START, ROOM_GOAL, M2)
        assert replay_check(run, true_map, room, ROOM_START, ROOM_GOAL, M2)

    def test_replay_check_fails_on_different_sensor_range(self):
        room = room_map()
        true_map = apply_overlay(room, room_overlay())
        run = navigate(true_map, room, ROOM_START, ROOM_GOAL, M2)
        other = NavMode("M2", 150, True)
        assert not replay_check(run, true_map, room, ROOM_START, ROOM_GOAL, other)

    def test_overlay_rect_order_is_irrelevant(self):
        room = room_map()
        overlay = room_overlay()
        reordered = ObstacleOverlay(tuple(reversed(overlay.rects)))
        assert apply_overlay(room, overlay) == apply_overlay(room, reordered)
        run = navigate(apply_overlay(room, overlay), room, ROOM_START, ROOM_GOAL, M2)
        assert replay_check(
            run, apply_overlay(room, reordered), room, ROOM_START, ROOM_GOAL, M2
        )


class TestPreconditions:
    def test_dimension_mismatch(self):
        with pytest.raises(PlanInputError):
            navigate(_open_room(4, 4), _open_room(5, 5), Cell(0, 0), Cell(1, 1), M1)

    def test_endpoints_must_be_passable_on_both_maps(self):
        known = _open_room(4, 4)
        true_map = apply_overlay(known, ObstacleOverlay((OverlayRect("O", 3, 3, 3, 3),)))
        with pytest.raises(PlanInputError):
            navigate(true_map, known, Cell(0, 0), Cell(3, 3), M1)

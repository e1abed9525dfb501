"""Shared test helpers: independent oracles and result validators."""

from __future__ import annotations

import math

import pytest

from gridnav import Cell, GridMap, PlanResult, parse_map


def brute_force_min_cost(grid: GridMap, start: Cell, goal: Cell, diagonals: bool) -> float:
    """Minimum path cost by exhaustive search over simple paths.

    Exponential; only for maps with a couple dozen passable cells. Kept
    independent of the planners: it walks the public neighbor enumeration
    with plain recursion.
    """
    best = math.inf
    on_path: set[Cell] = {start}

    def walk(cell: Cell, cost: float) -> None:
        nonlocal best
        if cost >= best:
            return
        if cell == goal:
            best = cost
            return
        for nxt, step in grid.neighbors(cell, diagonals):
            if nxt in on_path:
                continue
            on_path.add(nxt)
            walk(nxt, cost + step)
            on_path.discard(nxt)

    walk(start, 0.0)
    return best


def assert_valid_found_path(grid: GridMap, result: PlanResult, start: Cell, goal: Cell,
                            diagonals: bool) -> None:
    """Check the structural invariants of a Found result."""
    assert result.found
    path = result.path
    assert path[0] == start
    assert path[-1] == goal
    total = 0.0
    for a, b in zip(path, path[1:]):
        steps = dict(grid.neighbors(a, diagonals))
        assert b in steps, f"{a} -> {b} is not a valid step"
        total += steps[b]
    assert abs(total - result.cost) <= 1e-9
    assert all(grid.is_passable(c.x, c.y) for c in path)
    assert 0 <= result.reexpansions <= result.expansions


def grid_from_rows(rows: list[str], cell_size_mm: int = 100) -> GridMap:
    """Build a map from row strings using the file format's cell characters."""
    width = len(rows[0])
    header = f"w {width} h {len(rows)} cell {cell_size_mm}"
    return parse_map("\n".join([header, *rows]) + "\n")


@pytest.fixture
def corridor_1x3() -> GridMap:
    return grid_from_rows(["..."])

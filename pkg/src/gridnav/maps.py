"""Bundled maps and map-source resolution for the CLI and harnesses.

The weighted arena is a desk-scale benchmark map: obstacle rectangles plus
grey-tone weighted zones that planners should skirt when cheap to do so.
The room is a 6 m x 8 m indoor space at 10 cm cells with a few known
fixtures; its overlay adds the two hidden obstacles used by the navigation
experiment.
"""

from __future__ import annotations

import re
from pathlib import Path

from .grid import (
    IMPASSABLE,
    Cell,
    GridMap,
    ObstacleOverlay,
    OverlayRect,
    load_map,
    random_map,
)

ARENA_START = Cell(2, 2)
ARENA_GOAL = Cell(46, 36)

ROOM_START = Cell(30, 6)
ROOM_GOAL = Cell(30, 74)


def _fill(cells: list[int], width: int, x0: int, y0: int, x1: int, y1: int, value: int) -> None:
    for y in range(y0, y1 + 1):
        row = y * width
        for x in range(x0, x1 + 1):
            cells[row + x] = value


def weighted_arena() -> GridMap:
    """90x70 benchmark arena: start upper-left, goal near the center."""
    width, height = 90, 70
    cells = [1] * (width * height)
    # Outer border.
    _fill(cells, width, 0, 0, width - 1, 0, IMPASSABLE)
    _fill(cells, width, 0, height - 1, width - 1, height - 1, IMPASSABLE)
    _fill(cells, width, 0, 0, 0, height - 1, IMPASSABLE)
    _fill(cells, width, width - 1, 0, width - 1, height - 1, IMPASSABLE)
    # Obstacle blocks.
    _fill(cells, width, 28, 8, 30, 40, IMPASSABLE)
    _fill(cells, width, 12, 48, 44, 50, IMPASSABLE)
    _fill(cells, width, 50, 20, 62, 24, IMPASSABLE)
    _fill(cells, width, 64, 30, 66, 58, IMPASSABLE)
    _fill(cells, width, 14, 14, 20, 18, IMPASSABLE)
    _fill(cells, width, 72, 44, 80, 50, IMPASSABLE)
    _fill(cells, width, 40, 58, 58, 60, IMPASSABLE)
    # Weighted (grey-tone) zones; darker means dearer.
    _fill(cells, width, 32, 26, 46, 30, 3)
    _fill(cells, width, 36, 40, 58, 46, 5)
    _fill(cells, width, 50, 10, 60, 14, 7)
    _fill(cells, width, 22, 54, 26, 62, 9)
    _fill(cells, width, 68, 4, 84, 10, 5)
    _fill(cells, width, 4, 28, 10, 34, 3)
    return GridMap(width, height, cells)


def room_map() -> GridMap:
    """60x80 room at 10 cm cells.

    Two interior walls split the room into three zones; each wall has a
    narrow middle doorway on the direct start-goal line and a wider side
    doorway. Passable cells next to any wall carry weight 3 so planned
    routes keep one cell of clearance from known obstacles when that is
    nearly free, the usual costmap inflation around a robot footprint.
    """
    width, height = 60, 80
    cells = [1] * (width * height)
    _fill(cells, width, 0, 0, width - 1, 0, IMPASSABLE)
    _fill(cells, width, 0, height - 1, width - 1, height - 1, IMPASSABLE)
    _fill(cells, width, 0, 0, 0, height - 1, IMPASSABLE)
    _fill(cells, width, width - 1, 0, width - 1, height - 1, IMPASSABLE)
    # Upper wall: middle doorway x=29..31, wide right doorway x=50..54.
    _fill(cells, width, 1, 40, 28, 40, IMPASSABLE)
    _fill(cells, width, 32, 40, 49, 40, IMPASSABLE)
    _fill(cells, width, 55, 40, 58, 40, IMPASSABLE)
    # Lower wall: middle doorway x=29..31, wide left doorway x=6..10.
    _fill(cells, width, 1, 58, 5, 58, IMPASSABLE)
    _fill(cells, width, 11, 58, 28, 58, IMPASSABLE)
    _fill(cells, width, 32, 58, 58, 58, IMPASSABLE)
    # Furniture away from the direct route.
    _fill(cells, width, 46, 12, 52, 16, IMPASSABLE)
    _fill(cells, width, 8, 20, 12, 24, IMPASSABLE)
    # Clearance collar: weight 3 next to anything solid.
    solid = [i for i, c in enumerate(cells) if c == IMPASSABLE]
    for idx in solid:
        x, y = idx % width, idx // width
        for dy in (-1, 0, 1):
            for dx in (-1, 0, 1):
                nx, ny = x + dx, y + dy
                if 0 <= nx < width and 0 <= ny < height and cells[ny * width + nx] == 1:
                    cells[ny * width + nx] = 3
    return GridMap(width, height, cells)


def room_overlay() -> ObstacleOverlay:
    """The two hidden obstacles: bars sealing both middle doorways from below."""
    return ObstacleOverlay(
        (
            OverlayRect("O1", 27, 41, 33, 43),
            OverlayRect("O2", 27, 59, 33, 61),
        )
    )


BUNDLED_MAPS = {
    "arena": weighted_arena,
    "room": room_map,
}

BUNDLED_OVERLAYS = {
    "room_obstacles": room_overlay,
}


def bundled_map(name: str) -> GridMap:
    try:
        return BUNDLED_MAPS[name]()
    except KeyError:
        valid = ", ".join(sorted(BUNDLED_MAPS))
        raise ValueError(f"unknown bundled map {name!r} (available: {valid})") from None


def bundled_overlay(name: str) -> ObstacleOverlay:
    try:
        return BUNDLED_OVERLAYS[name]()
    except KeyError:
        valid = ", ".join(sorted(BUNDLED_OVERLAYS))
        raise ValueError(f"unknown bundled overlay {name!r} (available: {valid})") from None


_RANDOM_SOURCE = re.compile(r"^random:(\d+)x(\d+):(0?\.\d+|0|1)$")


def resolve_map_source(source: str | Path | GridMap, *, seed: int | None = None) -> GridMap:
    """Turn a map source token into a GridMap.

    Accepts a GridMap (returned as-is), ``bundled:<name>``,
    ``random:<W>x<H>:<density>`` (seed-fixed; corner and center cells are
    kept clear so standard endpoints stay usable), or a filesystem path.
    """
    if isinstance(source, GridMap):
        return source
    text = str(source)
    if text.startswith("bundled:"):
        return bundled_map(text[len("bundled:"):])
    if text.startswith("random:"):
        match = _RANDOM_SOURCE.match(text)
        if not match:
            raise ValueError(
                f"bad random map source {text!r}; expected random:<W>x<H>:<density>"
            )
        width, height = int(match.group(1)), int(match.group(2))
        density = float(match.group(3))
        clear = (
            Cell(1, 1),
            Cell(width // 2, height // 2),
            Cell(width - 2, height - 2),
        )
        return random_map(
            width, height, density=density, seed=seed if seed is not None else 0,
            keep_clear=clear,
        )
    return load_map(text)


def resolve_overlay_source(source: str | Path | ObstacleOverlay) -> ObstacleOverlay:
    if isinstance(source, ObstacleOverlay):
        return source
    text = str(source)
    if text.startswith("bundled:"):
        return bundled_overlay(text[len("bundled:"):])
    from .grid import load_overlay

    return load_overlay(text)

"""2D weighted occupancy grids, the ASCII map file format, and obstacle overlays."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, NamedTuple

SQRT2 = math.sqrt(2.0)

#: Cell weight marking a non-traversable cell.
IMPASSABLE = 0

_CHAR_TO_WEIGHT = {".": 1, "#": IMPASSABLE, **{str(d): d for d in range(1, 10)}}
_WEIGHT_TO_CHAR = {IMPASSABLE: "#", 1: ".", **{d: str(d) for d in range(2, 10)}}

_CARDINAL_STEPS = ((1, 0), (-1, 0), (0, 1), (0, -1))
_DIAGONAL_STEPS = ((1, 1), (1, -1), (-1, 1), (-1, -1))


class Cell(NamedTuple):
    """0-based grid coordinate; origin top-left, x grows right, y grows down."""

    x: int
    y: int


class MapFormatError(ValueError):
    """Malformed map or overlay text; carries the offending 1-based line number."""

    def __init__(self, message: str, line: int | None = None) -> None:
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class GridMap:
    """Immutable grid of traversal weights.

    A cell holds an integer weight in 1..9 (the cost multiplier for stepping
    into it) or ``IMPASSABLE`` (0). Instances never change after construction,
    so one map may be shared by any number of concurrent searches.
    """

    __slots__ = ("width", "height", "cell_size_mm", "cells", "_padded")

    def __init__(
        self,
        width: int,
        height: int,
        cells: Iterable[int],
        cell_size_mm: int = 100,
    ) -> None:
        cells = tuple(cells)
        if width <= 0 or height <= 0:
            raise ValueError(f"map dimensions must be positive, got {width}x{height}")
        if cell_size_mm <= 0:
            raise ValueError(f"cell_size_mm must be positive, got {cell_size_mm}")
        if len(cells) != width * height:
            raise ValueError(
                f"expected {width * height} cells for a {width}x{height} map, got {len(cells)}"
            )
        if not all(isinstance(c, int) and 0 <= c <= 9 for c in cells):
            raise ValueError("cell weights must be integers in 0..9 (0 = impassable)")
        self.width = width
        self.height = height
        self.cell_size_mm = cell_size_mm
        self.cells = cells
        self._padded: list[int] | None = None

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GridMap):
            return NotImplemented
        return (
            self.width == other.width
            and self.height == other.height
            and self.cell_size_mm == other.cell_size_mm
            and self.cells == other.cells
        )

    def __hash__(self) -> int:
        return hash((self.width, self.height, self.cell_size_mm, self.cells))

    def __repr__(self) -> str:
        return f"GridMap({self.width}x{self.height}, cell={self.cell_size_mm}mm)"

    def in_bounds(self, x: int, y: int) -> bool:
        return 0 <= x < self.width and 0 <= y < self.height

    def weight_at(self, x: int, y: int) -> int:
        """Raw cell weight; IMPASSABLE (0) for blocked cells."""
        return self.cells[y * self.width + x]

    def is_passable(self, x: int, y: int) -> bool:
        return self.in_bounds(x, y) and self.cells[y * self.width + x] != IMPASSABLE

    def neighbors(self, cell: Cell, diagonals: bool = False) -> list[tuple[Cell, float]]:
        """Passable successors of ``cell`` with their step costs.

        A cardinal step costs the destination weight; a diagonal step costs
        weight * sqrt(2) and is produced only when both flanking cardinal
        cells are passable (no corner cutting). An out-of-bounds or
        impassable query cell yields an empty list.
        """
        x, y = cell
        if not self.is_passable(x, y):
            return []
        w, cells = self.width, self.cells
        out: list[tuple[Cell, float]] = []
        for dx, dy in _CARDINAL_STEPS:
            nx, ny = x + dx, y + dy
            if self.in_bounds(nx, ny):
                wt = cells[ny * w + nx]
                if wt:
                    out.append((Cell(nx, ny), float(wt)))
        if diagonals:
            for dx, dy in _DIAGONAL_STEPS:
                nx, ny = x + dx, y + dy
                if not self.in_bounds(nx, ny):
                    continue
                wt = cells[ny * w + nx]
                if wt and cells[y * w + nx] and cells[ny * w + x]:
                    out.append((Cell(nx, ny), wt * SQRT2))
        return out

    def padded_weights(self) -> list[int]:
        """Row-major weights with a one-cell impassable border around the map.

        Planners index this with ``(y + 1) * (width + 2) + (x + 1)`` so that
        neighbor offsets never need bounds checks. Built once and cached;
        callers must not mutate the returned list.
        """
        padded = self._padded
        if padded is None:
            w = self.width
            border = [IMPASSABLE] * (w + 2)
            padded = list(border)
            for y in range(self.height):
                padded.append(IMPASSABLE)
                padded.extend(self.cells[y * w : (y + 1) * w])
                padded.append(IMPASSABLE)
            padded.extend(border)
            self._padded = padded
        return padded


@dataclass(frozen=True)
class OverlayRect:
    """Axis-aligned rectangle of cells, inclusive on both corners."""

    ident: str
    x0: int
    y0: int
    x1: int
    y1: int

    def __post_init__(self) -> None:
        if self.x1 < self.x0 or self.y1 < self.y0:
            raise ValueError(
                f"overlay rectangle {self.ident!r} has inverted corners "
                f"({self.x0},{self.y0})..({self.x1},{self.y1})"
            )

    def cells(self) -> Iterator[Cell]:
        for y in range(self.y0, self.y1 + 1):
            for x in range(self.x0, self.x1 + 1):
                yield Cell(x, y)


@dataclass(frozen=True)
class ObstacleOverlay:
    """A set of named rectangles marking cells to blank out as obstacles."""

    rects: tuple[OverlayRect, ...]

    def __post_init__(self) -> None:
        seen = set()
        for rect in self.rects:
            if rect.ident in seen:
                raise ValueError(f"duplicate overlay identifier {rect.ident!r}")
            seen.add(rect.ident)

    def cells(self) -> set[Cell]:
        covered: set[Cell] = set()
        for rect in self.rects:
            covered.update(rect.cells())
        return covered


def parse_map(text: str) -> GridMap:
    """Parse the ASCII map format.

    Line 1 is ``w <int> h <int> cell <int-mm>``; the next ``h`` lines hold
    exactly ``w`` characters each from ``.`` (weight 1), ``1``-``9``
    (weight), or ``#`` (impassable). Raises :class:`MapFormatError` with a
    line number on any defect.
    """
    lines = text.splitlines()
    if not lines or not lines[0].strip():
        raise MapFormatError("missing header", 1)
    fields = lines[0].split()
    if len(fields) != 6 or fields[0] != "w" or fields[2] != "h" or fields[4] != "cell":
        raise MapFormatError("header must be 'w <int> h <int> cell <int-mm>'", 1)
    try:
        width, height, cell_mm = int(fields[1]), int(fields[3]), int(fields[5])
    except ValueError:
        raise MapFormatError("header dimensions must be integers", 1) from None
    if width <= 0 or height <= 0:
        raise MapFormatError(f"map dimensions must be positive, got {width}x{height}", 1)
    if cell_mm <= 0:
        raise MapFormatError(f"cell size must be positive, got {cell_mm}", 1)
    if len(lines) - 1 < height:
        raise MapFormatError(
            f"expected {height} map rows, found {len(lines) - 1}", len(lines) + 1
        )
    if len(lines) - 1 > height:
        raise MapFormatError("unexpected content after last map row", height + 2)
    cells: list[int] = []
    for row_idx in range(height):
        line_no = row_idx + 2
        row = lines[row_idx + 1]
        if len(row) != width:
            raise MapFormatError(
                f"row has {len(row)} characters, expected {width}", line_no
            )
        for ch in row:
            try:
                cells.append(_CHAR_TO_WEIGHT[ch])
            except KeyError:
                raise MapFormatError(f"illegal map character {ch!r}", line_no) from None
    return GridMap(width, height, cells, cell_mm)


def serialize_map(grid: GridMap) -> str:
    """Canonical text form of a map; ``parse_map`` round-trips it exactly.

    Weight-1 cells always serialize as ``.``.
    """
    out = [f"w {grid.width} h {grid.height} cell {grid.cell_size_mm}"]
    w = grid.width
    for y in range(grid.height):
        out.append("".join(_WEIGHT_TO_CHAR[c] for c in grid.cells[y * w : (y + 1) * w]))
    return "\n".join(out) + "\n"


def parse_overlay(text: str) -> ObstacleOverlay:
    """Parse an overlay file: one ``<id> <x0> <y0> <x1> <y1>`` per line.

    Blank lines and ``#``-prefixed comment lines are ignored.
    """
    rects: list[OverlayRect] = []
    for line_no, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        fields = stripped.split()
        if len(fields) != 5:
            raise MapFormatError(
                "overlay line must be '<id> <x0> <y0> <x1> <y1>'", line_no
            )
        try:
            coords = [int(f) for f in fields[1:]]
        except ValueError:
            raise MapFormatError("overlay coordinates must be integers", line_no) from None
        try:
            rects.append(OverlayRect(fields[0], *coords))
        except ValueError as exc:
            raise MapFormatError(str(exc), line_no) from None
    try:
        return ObstacleOverlay(tuple(rects))
    except ValueError as exc:
        raise MapFormatError(str(exc)) from None


def apply_overlay(grid: GridMap, overlay: ObstacleOverlay) -> GridMap:
    """Copy of ``grid`` with every overlay cell set impassable.

    The source map is untouched. Raises ValueError if a rectangle leaves
    the map bounds.
    """
    for rect in overlay.rects:
        if not (grid.in_bounds(rect.x0, rect.y0) and grid.in_bounds(rect.x1, rect.y1)):
            raise ValueError(
                f"overlay rectangle {rect.ident!r} "
                f"({rect.x0},{rect.y0})..({rect.x1},{rect.y1}) is out of bounds "
                f"for a {grid.width}x{grid.height} map"
            )
    cells = list(grid.cells)
    for cell in overlay.cells():
        cells[cell.y * grid.width + cell.x] = IMPASSABLE
    return GridMap(grid.width, grid.height, cells, grid.cell_size_mm)


def load_map(path: str | Path) -> GridMap:
    return parse_map(Path(path).read_text(encoding="utf-8"))


def load_overlay(path: str | Path) -> ObstacleOverlay:
    return parse_overlay(Path(path).read_text(encoding="utf-8"))


def random_map(
    width: int,
    height: int,
    *,
    density: float,
    seed: int,
    cell_size_mm: int = 100,
    keep_clear: Iterable[Cell] = (),
) -> GridMap:
    """Seed-fixed random map: each cell impassable with probability ``density``.

    Cells listed in ``keep_clear`` are forced passable (weight 1) so that
    fixed start/goal positions stay usable.
    """
    if not 0.0 <= density < 1.0:
        raise ValueError(f"density must be in [0, 1), got {density}")
    rng = random.Random(seed)
    cells = [IMPASSABLE if rng.random() < density else 1 for _ in range(width * height)]
    for cell in keep_clear:
        cells[cell.y * width + cell.x] = 1
    return GridMap(width, height, cells, cell_size_mm)

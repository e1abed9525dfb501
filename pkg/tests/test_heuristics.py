"""Metric formulas, weighting, reduced cost, and consistency checking."""

from __future__ import annotations

import math
import random

import pytest

from gridnav import (
    Cell,
    HeuristicSpec,
    Metric,
    check_consistency,
    h_value,
    metric_distance,
    random_map,
    reduced_cost,
)
from conftest import grid_from_rows

SQRT2 = math.sqrt(2.0)


def _reference_distance(metric: Metric, a: Cell, b: Cell) -> float:
    # Independent re-derivation used as the test-side oracle.
    dx, dy = abs(a.x - b.x), abs(a.y - b.y)
    return {
        Metric.MANHATTAN: dx + dy,
        Metric.MAX_AXIS: max(dx, dy),
        Metric.DIAGONAL_SHORTCUT: math.sqrt(2) * min(dx, dy) + abs(dx - dy),
        Metric.EUCLIDEAN: math.sqrt(dx * dx + dy * dy),
        Metric.EUCLIDEAN_SQUARED: dx * dx + dy * dy,
    }[metric]


class TestMetricDistance:
    def test_three_four_five_triangle(self):
        a, b = Cell(0, 0), Cell(3, 4)
        assert metric_distance(Metric.MANHATTAN, a, b) == 7
        assert metric_distance(Metric.MAX_AXIS, a, b) == 4
        assert metric_distance(Metric.EUCLIDEAN, a, b) == 5
        assert metric_distance(Metric.EUCLIDEAN_SQUARED, a, b) == 25
        assert metric_distance(Metric.DIAGONAL_SHORTCUT, a, b) == pytest.approx(
            3 * SQRT2 + 1, abs=1e-12
        )

    def test_identity(self):
        for metric in Metric:
            assert metric_distance(metric, Cell(4, 9), Cell(4, 9)) == 0.0

    def test_symmetry_nonnegativity_and_zero_iff_equal(self):
        rng = random.Random(42)
        for _ in range(300):
            a = Cell(rng.randrange(-20, 20), rng.randrange(-20, 20))
            b = Cell(rng.randrange(-20, 20), rng.randrange(-20, 20))
            for metric in Metric:
                d_ab = metric_distance(metric, a, b)
                assert d_ab == metric_distance(metric, b, a)
                assert d_ab >= 0
                assert (d_ab == 0) == (a == b)
                assert d_ab == pytest.approx(_reference_distance(metric, a, b), abs=1e-12)

    def test_pointwise_ordering_over_random_pairs(self):
        rng = random.Random(1)
        for _ in range(1000):
            a = Cell(rng.randrange(0, 60), rng.randrange(0, 60))
            b = Cell(rng.randrange(0, 60), rng.randrange(0, 60))
            mx = metric_distance(Metric.MAX_AXIS, a, b)
            eu = metric_distance(Metric.EUCLIDEAN, a, b)
            ds = metric_distance(Metric.DIAGONAL_SHORTCUT, a, b)
            mh = metric_distance(Metric.MANHATTAN, a, b)
            assert mx <= eu + 1e-12
            assert eu <= ds + 1e-12
            assert ds <= mh + 1e-12

    def test_triangle_inequality_except_squared(self):
        rng = random.Random(9)
        triples = [
            tuple(Cell(rng.randrange(0, 30), rng.randrange(0, 30)) for _ in range(3))
            for _ in range(500)
        ]
        for metric in (Metric.MANHATTAN, Metric.MAX_AXIS, Metric.DIAGONAL_SHORTCUT,
                       Metric.EUCLIDEAN):
            for a, b, c in triples:
                assert metric_distance(metric, a, c) <= (
                    metric_distance(metric, a, b) + metric_distance(metric, b, c) + 1e-9
                )
        # Squared Euclidean breaks it: 0->2 on a line costs 4, via midpoint 2.
        a, b, c = Cell(0, 0), Cell(1, 0), Cell(2, 0)
        assert metric_distance(Metric.EUCLIDEAN_SQUARED, a, c) > (
            metric_distance(Metric.EUCLIDEAN_SQUARED, a, b)
            + metric_distance(Metric.EUCLIDEAN_SQUARED, b, c)
        )

    def test_token_mapping(self):
        assert [m.token for m in Metric] == ["m", "Mxy", "DS", "E", "SQR"]
        assert Metric.from_token("DS") is Metric.DIAGONAL_SHORTCUT
        with pytest.raises(ValueError):
            Metric.from_token("euclid")


class TestHValue:
    def test_weight_zero_forces_zero(self):
        spec = HeuristicSpec(Metric.MANHATTAN, 0)
        assert h_value(spec, Cell(0, 0), Cell(30, 40)) == 0.0

    def test_weight_eight_max_axis(self):
        spec = HeuristicSpec(Metric.MAX_AXIS, 8, diagonals=True)
        assert h_value(spec, Cell(0, 0), Cell(3, 4)) == 32.0

    def test_weight_two_manhattan(self):
        spec = HeuristicSpec(Metric.MANHATTAN, 2)
        assert h_value(spec, Cell(1, 1), Cell(2, 3)) == 6.0

    def test_linear_in_weight(self):
        rng = random.Random(3)
        for metric in Metric:
            for _ in range(50):
                n = Cell(rng.randrange(0, 40), rng.randrange(0, 40))
                goal = Cell(rng.randrange(0, 40), rng.randrange(0, 40))
                base = h_value(HeuristicSpec(metric, 1), n, goal)
                for k in (0, 2, 5, 8):
                    assert h_value(HeuristicSpec(metric, k), n, goal) == pytest.approx(
                        k * base, rel=1e-12
                    )

    def test_negative_weight_rejected(self):
        with pytest.raises(ValueError):
            HeuristicSpec(Metric.MANHATTAN, -1)


class TestReducedCost:
    def test_weight_zero_equals_edge_cost(self):
        spec = HeuristicSpec(Metric.EUCLIDEAN, 0)
        assert reduced_cost(spec, Cell(0, 0), Cell(1, 0), 2.5, Cell(9, 9)) == 2.5

    def test_tight_straight_line_case(self):
        spec = HeuristicSpec(Metric.MANHATTAN, 1)
        assert reduced_cost(spec, Cell(0, 0), Cell(1, 0), 1.0, Cell(3, 0)) == 0.0

    def test_nonnegative_for_consistent_heuristic_over_random_edges(self):
        spec = HeuristicSpec(Metric.MANHATTAN, 1, diagonals=False)
        rng = random.Random(11)
        checked = 0
        grid = random_map(25, 25, density=0.2, seed=2)
        goal = Cell(24, 24)
        while checked < 500:
            x, y = rng.randrange(25), rng.randrange(25)
            for dst, d in grid.neighbors(Cell(x, y), diagonals=False):
                assert reduced_cost(spec, Cell(x, y), dst, d, goal) >= -1e-12
                checked += 1


class TestCheckConsistency:
    def test_manhattan_cardinal_consistent(self):
        grid = grid_from_rows(["....", "....", "...."])
        spec = HeuristicSpec(Metric.MANHATTAN, 1, diagonals=False)
        assert check_consistency(spec, grid, Cell(3, 2)).consistent

    def test_diagonal_shortcut_consistent_with_diagonals(self):
        grid = grid_from_rows(["....", "....", "...."])
        spec = HeuristicSpec(Metric.DIAGONAL_SHORTCUT, 1, diagonals=True)
        assert check_consistency(spec, grid, Cell(3, 2)).consistent

    def test_manhattan_with_diagonals_inconsistent(self):
        grid = grid_from_rows(["....", "....", "...."])
        spec = HeuristicSpec(Metric.MANHATTAN, 1, diagonals=True)
        report = check_consistency(spec, grid, Cell(3, 2))
        assert not report.consistent
        assert report.witness is not None

    def test_squared_euclidean_corridor_witness(self):
        grid = grid_from_rows(["." * 12])
        goal = Cell(11, 0)
        spec = HeuristicSpec(Metric.EUCLIDEAN_SQUARED, 1, diagonals=False)
        assert h_value(spec, Cell(0, 0), goal) == 121.0  # true distance is 11
        report = check_consistency(spec, grid, goal)
        assert not report.consistent
        src, dst = report.witness
        d = dict(grid.neighbors(src, False))[dst]
        assert reduced_cost(spec, src, dst, d, goal) < -1e-9

    def test_agrees_with_min_reduced_cost_sign(self):
        # The checker's verdict must match an independent exhaustive scan.
        for seed in range(8):
            grid = random_map(9, 7, density=0.25, seed=seed)
            goal = Cell(8, 6)
            for metric in Metric:
                for diagonals in (False, True):
                    spec = HeuristicSpec(metric, 1, diagonals)
                    worst = min(
                        (
                            reduced_cost(spec, Cell(x, y), dst, d, goal)
                            for y in range(7)
                            for x in range(9)
                            for dst, d in grid.neighbors(Cell(x, y), diagonals)
                        ),
                        default=0.0,
                    )
                    assert check_consistency(spec, grid, goal).consistent == (
                        worst >= -1e-9
                    )

    def test_weight_zero_always_consistent(self):
        grid = grid_from_rows(["9.#", "..."])
        for metric in Metric:
            spec = HeuristicSpec(metric, 0, diagonals=True)
            assert check_consistency(spec, grid, Cell(0, 0)).consistent

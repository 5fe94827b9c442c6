import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pfrsim.geometry import (
    AreaPartition,
    Point2D,
    area_index,
    build_layout,
    move_toward_bs,
    sample_points_in_cell,
    serving_cell,
    serving_cells,
)

SQRT3 = math.sqrt(3.0)


class TestBuildLayout:
    def test_37_cells_at_three_rings(self, layout37):
        assert len(layout37) == 37

    @pytest.mark.parametrize("rings", [0, 1, 2, 3, 4, 5])
    def test_ring_count_formula(self, rings):
        layout = build_layout(rings, 1000.0)
        assert len(layout) == 1 + sum(6 * r for r in range(1, rings + 1))

    def test_single_cell_at_origin(self):
        layout = build_layout(0, 1000.0)
        assert len(layout) == 1
        assert layout.cells[0].id == 1
        assert layout.cells[0].center == Point2D(0.0, 0.0)

    def test_ring1_centers_at_isd(self, layout37):
        # first ring sits at sqrt(3)*R; first ring-1 cell on the +x axis
        for cell in layout37.cells[1:7]:
            d = math.hypot(cell.center.x, cell.center.y)
            assert d == pytest.approx(SQRT3 * 1000.0, abs=1e-9)
        assert abs(layout37.cells[1].center.x - 1732.0508) < 1e-3
        assert abs(layout37.cells[1].center.y) < 1e-9

    def test_ids_are_unique_and_ordered(self, layout37):
        assert [c.id for c in layout37.cells] == list(range(1, 38))

    @pytest.mark.parametrize("rings,radius", [(-1, 1000.0), (3, 0.0), (3, -5.0)])
    def test_invalid_parameters(self, rings, radius):
        with pytest.raises(ValueError):
            build_layout(rings, radius)


class TestServingCell:
    def test_origin_maps_to_cell_1(self, layout37):
        assert serving_cell(Point2D(0.0, 0.0), layout37) == 1

    def test_point_at_ring1_center(self, layout37):
        # (1732.05, 0) is (to within a millimeter) the center of a ring-1 cell
        sid = serving_cell(Point2D(1732.05, 0.0), layout37)
        c = layout37.cell(sid)
        assert math.hypot(c.center.x - 1732.05, c.center.y) < 0.01

    def test_midpoint_tie_breaks_to_lower_id(self, layout37):
        neighbor = layout37.cells[1]
        mid = Point2D(neighbor.center.x / 2.0, neighbor.center.y / 2.0)
        assert serving_cell(mid, layout37) == 1

    @given(x=st.floats(-4000, 4000), y=st.floats(-4000, 4000))
    @settings(max_examples=200, deadline=None)
    def test_every_point_maps_to_exactly_one_cell(self, x, y):
        layout = build_layout(2, 1000.0)
        sid = serving_cell(Point2D(x, y), layout)
        assert 1 <= sid <= len(layout)
        d = np.linalg.norm(layout.centers - np.array([x, y]), axis=1)
        assert d[sid - 1] == pytest.approx(d.min())


class TestSampling:
    def test_samples_stay_in_their_cell(self, layout37, rng):
        pts = sample_points_in_cell(layout37.cell(1), layout37, 2000, rng)
        assert (serving_cells(pts, layout37) == 1).all()

    def test_mean_near_center(self, layout37, rng):
        pts = sample_points_in_cell(layout37.cell(1), layout37, 100_000, rng)
        assert np.linalg.norm(pts.mean(axis=0)) < 20.0

    def test_disc_fraction_matches_area_ratio(self, layout37, rng):
        # fraction inside radius 467 = pi*0.467^2 / (3*sqrt(3)/2), hexagon R=1
        pts = sample_points_in_cell(layout37.cell(1), layout37, 100_000, rng)
        frac = float(np.mean(np.linalg.norm(pts, axis=1) < 467.0))
        expected = math.pi * 0.467**2 / (3 * SQRT3 / 2)
        assert frac == pytest.approx(expected, abs=0.01)

    def test_deterministic_for_seed(self, layout37):
        a = sample_points_in_cell(layout37.cell(1), layout37, 100, np.random.default_rng(7))
        b = sample_points_in_cell(layout37.cell(1), layout37, 100, np.random.default_rng(7))
        assert (a == b).all()

    def test_offcenter_cell(self, layout37, rng):
        cell = layout37.cell(10)
        pts = sample_points_in_cell(cell, layout37, 500, rng)
        assert (serving_cells(pts, layout37) == 10).all()


class TestAreaIndex:
    PART = AreaPartition((250.0, 500.0, 750.0, 1000.0))

    def test_center_is_area_1(self):
        assert area_index(0.0, self.PART) == 1

    def test_interval_lookup(self):
        assert area_index(900.0, self.PART) == 4

    def test_boundary_belongs_to_upper_area(self):
        # half-open [lo, hi): a boundary starts its own annulus
        assert area_index(250.0, self.PART) == 2

    def test_beyond_last_boundary_raises(self):
        with pytest.raises(ValueError):
            area_index(1000.0, self.PART)

    def test_negative_distance_raises(self):
        with pytest.raises(ValueError):
            area_index(-1.0, self.PART)

    def test_partition_validation(self):
        with pytest.raises(ValueError):
            AreaPartition((500.0, 250.0))
        with pytest.raises(ValueError):
            AreaPartition(())


class TestMoveTowardBs:
    def test_zero_move_is_identity(self, layout37):
        p = Point2D(800.0, 0.0)
        moved, clamped = move_toward_bs(p, layout37.cell(1), 0.0)
        assert moved == p and not clamped

    def test_collinear_move(self, layout37):
        p = Point2D(640.0, 480.0)  # 800 m from origin
        moved, clamped = move_toward_bs(p, layout37.cell(1), 400.0)
        assert not clamped
        assert math.hypot(moved.x, moved.y) == pytest.approx(400.0, abs=1e-9)
        # still on the same ray: cross product vanishes
        assert moved.x * p.y - moved.y * p.x == pytest.approx(0.0, abs=1e-6)

    def test_overshoot_clamps_to_center(self, layout37):
        moved, clamped = move_toward_bs(Point2D(300.0, 0.0), layout37.cell(1), 400.0)
        assert clamped
        assert moved == layout37.cell(1).center

    def test_negative_distance_raises(self, layout37):
        with pytest.raises(ValueError):
            move_toward_bs(Point2D(10.0, 0.0), layout37.cell(1), -1.0)

    @given(
        px=st.floats(-900, 900),
        py=st.floats(-900, 900),
        x1=st.floats(0, 1000),
        x2=st.floats(0, 1000),
    )
    @settings(max_examples=200, deadline=None)
    def test_longer_moves_end_closer(self, layout37, px, py, x1, x2):
        p = Point2D(px, py)
        cell = layout37.cell(1)
        lo, hi = sorted((x1, x2))
        d_lo = math.hypot(*move_toward_bs(p, cell, lo)[0].as_array())
        d_hi = math.hypot(*move_toward_bs(p, cell, hi)[0].as_array())
        assert d_hi <= d_lo + 1e-9


class TestOuterColors:
    def test_coloring_is_proper(self, layout37):
        isd = SQRT3 * 1000.0
        for a in layout37.cells:
            for b in layout37.cells:
                if a.id >= b.id:
                    continue
                d = math.hypot(a.center.x - b.center.x, a.center.y - b.center.y)
                if d < 1.01 * isd:  # adjacent
                    assert a.outer_color != b.outer_color

    def test_cell1_shares_color_with_12_cells(self, layout37):
        c1 = layout37.cells[0].outer_color
        assert sum(1 for c in layout37.cells if c.outer_color == c1) == 13

    def test_color_class_sizes(self, layout37):
        sizes = sorted(np.bincount(layout37.colors).tolist())
        assert sizes == [12, 12, 13]

    def test_point2d_rejects_non_finite(self):
        with pytest.raises(ValueError):
            Point2D(math.nan, 0.0)
        with pytest.raises(ValueError):
            Point2D(0.0, math.inf)

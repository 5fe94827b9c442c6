"""Hexagonal multi-cell layout: construction, membership, areas and radial moves.

Cells are regular hexagons of circumradius ``cell_radius`` laid out on a
hexagonal lattice with inter-site distance sqrt(3)*cell_radius.  Cell 1 sits
at the origin; further cells are numbered ring by ring, counterclockwise from
the positive x axis, so the first ring-1 cell is centered at
(sqrt(3)*R, 0).  Cell membership is nearest-center (the Voronoi region of an
interior site is exactly its hexagon).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

SQRT3 = math.sqrt(3.0)


@dataclass(frozen=True)
class Point2D:
    """Planar position in meters (x east, y north)."""

    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"non-finite coordinates ({self.x}, {self.y})")

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y])


@dataclass(frozen=True)
class Cell:
    """One cell site: 1-based id, center position and outer-band color in {0,1,2}."""

    id: int
    center: Point2D
    outer_color: int
    axial_q: int = 0
    axial_r: int = 0


@dataclass
class CellLayout:
    """Ordered collection of cells plus cached center/color arrays.

    Treated as immutable after construction; safe for concurrent reads.
    """

    cells: tuple[Cell, ...]
    cell_radius: float
    rings: int
    centers: np.ndarray = field(init=False, repr=False)
    colors: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        self.centers = np.array([[c.center.x, c.center.y] for c in self.cells])
        self.colors = np.array([c.outer_color for c in self.cells])
        self.centers.flags.writeable = False
        self.colors.flags.writeable = False

    def __len__(self) -> int:
        return len(self.cells)

    def cell(self, cell_id: int) -> Cell:
        c = self.cells[cell_id - 1]
        if c.id != cell_id:
            raise KeyError(f"no cell with id {cell_id}")
        return c


@dataclass(frozen=True)
class AreaPartition:
    """Concentric annuli within a cell, defined by strictly increasing radii.

    The i-th area (1-based) is the half-open annulus [boundaries[i-1],
    boundaries[i]); the first starts at 0.
    """

    boundaries: tuple[float, ...]

    def __post_init__(self):
        bs = self.boundaries
        if len(bs) == 0:
            raise ValueError("partition needs at least one boundary")
        if any(b2 <= b1 for b1, b2 in zip(bs, bs[1:])) or bs[0] <= 0:
            raise ValueError(f"boundaries must be strictly increasing and positive: {bs}")

    @property
    def num_areas(self) -> int:
        return len(self.boundaries)


def _hex_distance(q: int, r: int) -> int:
    return (abs(q) + abs(r) + abs(q + r)) // 2


def _axial_to_xy(q: int, r: int, cell_radius: float) -> tuple[float, float]:
    return SQRT3 * cell_radius * (q + r / 2.0), 1.5 * cell_radius * r


def assign_outer_colors(layout: CellLayout) -> CellLayout:
    """Return a copy of the layout with outer colors set from the lattice 3-coloring.

    color = (q - r) mod 3 on axial coordinates, which is proper on the cell
    adjacency graph; in the 37-cell layout cell 1's color class holds 12
    other cells.
    """
    recolored = tuple(
        Cell(c.id, c.center, (c.axial_q - c.axial_r) % 3, c.axial_q, c.axial_r)
        for c in layout.cells
    )
    return CellLayout(recolored, layout.cell_radius, layout.rings)


def build_layout(rings: int, cell_radius: float) -> CellLayout:
    """Build the hexagonal layout of 1 + sum(6r) cells around the origin.

    Args:
        rings: number of full rings around the center cell (3 gives 37 cells).
        cell_radius: hexagon circumradius R in meters.
    """
    if rings < 0:
        raise ValueError(f"rings must be >= 0, got {rings}")
    if cell_radius <= 0:
        raise ValueError(f"cell_radius must be > 0, got {cell_radius}")

    coords = []
    for q in range(-rings, rings + 1):
        for r in range(-rings, rings + 1):
            d = _hex_distance(q, r)
            if d <= rings:
                x, y = _axial_to_xy(q, r, cell_radius)
                ang = math.atan2(y, x) % (2 * math.pi) if d > 0 else 0.0
                coords.append((d, ang, q, r, x, y))
    coords.sort(key=lambda c: (c[0], c[1]))

    cells = tuple(
        Cell(i + 1, Point2D(x, y), 0, q, r)
        for i, (_, _, q, r, x, y) in enumerate(coords)
    )
    return assign_outer_colors(CellLayout(cells, cell_radius, rings))


def serving_cells(points: np.ndarray, layout: CellLayout) -> np.ndarray:
    """Vectorized nearest-center lookup: (n, 2) points -> (n,) 1-based cell ids.

    Exact ties resolve to the lowest id (np.argmin keeps the first minimum
    and cells are stored in id order).
    """
    d2 = ((points[:, None, :] - layout.centers[None, :, :]) ** 2).sum(axis=2)
    return np.argmin(d2, axis=1) + 1


def serving_cell(p: Point2D, layout: CellLayout) -> int:
    """Id of the cell whose center is nearest to p; ties go to the lowest id."""
    if len(layout) == 0:
        raise ValueError("empty layout")
    return int(serving_cells(p.as_array()[None, :], layout)[0])


def sample_points_in_cell(
    cell: Cell, layout: CellLayout, n: int, rng: np.random.Generator
) -> np.ndarray:
    """n points uniform over the cell's Voronoi region, as an (n, 2) array.

    Rejection sampling from the hexagon bounding box; a candidate is accepted
    iff its nearest center is this cell.  Acceptance order is draw order, so
    the result is deterministic for a given rng state.
    """
    R = layout.cell_radius
    cx, cy = cell.center.x, cell.center.y
    lo = np.array([cx - SQRT3 / 2 * R, cy - R])
    hi = np.array([cx + SQRT3 / 2 * R, cy + R])
    out = np.empty((0, 2))
    while out.shape[0] < n:
        batch = max(2 * (n - out.shape[0]), 64)
        cand = rng.uniform(lo, hi, size=(batch, 2))
        accepted = cand[serving_cells(cand, layout) == cell.id]
        out = np.vstack([out, accepted])
    return out[:n]


def sample_uniform_in_cell(cell: Cell, layout: CellLayout, rng: np.random.Generator) -> Point2D:
    """One point uniform over the cell's hexagonal Voronoi region."""
    p = sample_points_in_cell(cell, layout, 1, rng)[0]
    return Point2D(float(p[0]), float(p[1]))


def area_index(distance: float, partition: AreaPartition) -> int:
    """1-based index of the annulus containing ``distance``.

    Annuli are half-open [lo, hi), so a boundary value belongs to the
    ring that starts there.  Beyond the last boundary is out of the cell.
    """
    if distance < 0:
        raise ValueError(f"distance must be >= 0, got {distance}")
    bs = partition.boundaries
    idx = int(np.searchsorted(np.asarray(bs), distance, side="right")) + 1
    if idx > len(bs):
        raise ValueError(f"distance {distance} m is beyond the last boundary {bs[-1]} m")
    return idx


def move_toward_bs(p: Point2D, cell: Cell, x: float) -> tuple[Point2D, bool]:
    """Move a point x meters along the straight segment toward the cell center.

    Returns (new point, clamped).  Moves past the center clamp onto it and
    set the flag.
    """
    if x < 0:
        raise ValueError(f"move distance must be >= 0, got {x}")
    dx, dy = cell.center.x - p.x, cell.center.y - p.y
    dist = math.hypot(dx, dy)
    if x >= dist:
        return cell.center, x > dist
    t = x / dist
    return Point2D(p.x + t * dx, p.y + t * dy), False

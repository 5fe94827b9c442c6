"""Subcarrier partitioning and allocation under full or partial frequency reuse.

Under full reuse every cell transmits the whole band.  Under partial reuse the
band splits into one inner part, reused everywhere, and three orthogonal outer
parts assigned by cell color, so outer-region nodes see co-channel
interference from one third of the other cells only.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

from .geometry import Cell, CellLayout

INNER = "inner"
OUTER_BANDS = ("outer0", "outer1", "outer2")


@dataclass(frozen=True)
class FullReuse:
    """Every cell uses all subcarriers (reuse factor 1 everywhere)."""


@dataclass(frozen=True)
class PartialReuse:
    """Inner disc of radius ratio*R reuses a common band; outer ring uses 1 of 3."""

    inner_radius_ratio: float

    def __post_init__(self):
        if not 0.0 < self.inner_radius_ratio < 1.0:
            raise ValueError(
                f"inner_radius_ratio must be in (0, 1), got {self.inner_radius_ratio}"
            )


ReuseScheme = Union[FullReuse, PartialReuse]


def outer_band_id(color: int) -> str:
    return OUTER_BANDS[color]


def band_color(band_id: str) -> int | None:
    """Color index of an outer band id, None for the inner band."""
    if band_id == INNER:
        return None
    return OUTER_BANDS.index(band_id)


@dataclass(frozen=True)
class SpectrumPlan:
    """Partition of subcarriers {0..M-1} into the inner band and three outer bands."""

    total_subcarriers: int
    inner_band: frozenset[int]
    outer_bands: tuple[frozenset[int], frozenset[int], frozenset[int]]

    def band(self, band_id: str) -> frozenset[int]:
        if band_id == INNER:
            return self.inner_band
        return self.outer_bands[OUTER_BANDS.index(band_id)]

    def band_size(self, band_id: str) -> int:
        return len(self.band(band_id))


def build_plan(m: int, scheme: ReuseScheme) -> SpectrumPlan:
    """Split M subcarriers per the reuse scheme.

    Partial reuse sizes the inner band as round(ratio^2 * M), matching the
    inner/outer area proportion, and splits the remainder into three outer
    bands as evenly as possible (any remainder goes to the lower colors).
    Band index ranges are contiguous: inner first, then outer 0, 1, 2.
    """
    if m < 1:
        raise ValueError(f"need at least 1 subcarrier, got {m}")
    if isinstance(scheme, FullReuse):
        empty = frozenset()
        return SpectrumPlan(m, frozenset(range(m)), (empty, empty, empty))
    if m < 4:
        raise ValueError(f"partial reuse needs at least 4 subcarriers, got {m}")
    ratio = scheme.inner_radius_ratio
    n_inner = int(math.floor(ratio * ratio * m + 0.5))  # round half up
    n_inner = min(max(n_inner, 1), m - 3)  # keep all four bands non-empty
    rest = m - n_inner
    base, extra = divmod(rest, 3)
    sizes = [base + (1 if c < extra else 0) for c in range(3)]
    start = n_inner
    outers = []
    for s in sizes:
        outers.append(frozenset(range(start, start + s)))
        start += s
    return SpectrumPlan(m, frozenset(range(n_inner)), tuple(outers))


def band_of_node(
    distance_m: float, cell_radius: float, scheme: ReuseScheme, cell: Cell
) -> str:
    """Band a node at the given center distance uses in its cell.

    Under partial reuse the boundary distance ratio*R itself maps to the
    inner band.
    """
    if isinstance(scheme, FullReuse):
        return INNER
    if distance_m <= scheme.inner_radius_ratio * cell_radius:
        return INNER
    return outer_band_id(cell.outer_color)


def interference_set(cell_id: int, band_id: str, layout: CellLayout) -> frozenset[int]:
    """Cells transmitting co-channel with ``cell_id`` on the given band.

    Inner band: every other cell.  Outer band of color c: every other cell
    colored c.
    """
    me = layout.cell(cell_id)
    if band_id == INNER:
        return frozenset(c.id for c in layout.cells if c.id != cell_id)
    color = band_color(band_id)
    if color is None:  # unreachable, keeps type checkers honest
        raise ValueError(band_id)
    if me.outer_color != color and band_id == outer_band_id(me.outer_color):
        raise ValueError(f"cell {cell_id} does not own band {band_id}")
    return frozenset(c.id for c in layout.cells if c.id != cell_id and c.outer_color == color)


# node id -> the subcarrier indices that node holds within its band
Allocation = dict[int, frozenset[int]]


def allocate(node_ids, band: frozenset[int]) -> Allocation:
    """Fair split of a band among nodes: sizes differ by at most one.

    Lower node ids receive the larger (ceil) shares; subcarriers are handed
    out in ascending index order, so the result is deterministic.
    """
    nodes = sorted(node_ids)
    if not nodes:
        return {}
    if not band:
        raise ValueError("cannot allocate an empty band to nodes")
    indices = sorted(band)
    base, extra = divmod(len(indices), len(nodes))
    out: dict[int, frozenset[int]] = {}
    pos = 0
    for i, nid in enumerate(nodes):
        size = base + (1 if i < extra else 0)
        out[nid] = frozenset(indices[pos:pos + size])
        pos += size
    return out

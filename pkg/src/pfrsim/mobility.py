"""Utility-driven mobility control: each node picks its radial move toward the BS.

A node's utility for moving x meters is the product of three factors: the
SINR it would receive at the moved position (with its band re-derived from
the new distance), a lifetime factor in [0, 1] that decays with x and depends
on the node's starting area, and the number of subcarriers it would hold
there.  Region populations are frozen at the drop's initial positions, so
every node's optimization is independent of the others' moves and the joint
outcome does not depend on evaluation order.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import ChannelParams, ShadowingField
from .geometry import AreaPartition, CellLayout, area_index
from .link import NodeState, sinr_linear_at
from .spectrum import INNER, PartialReuse, ReuseScheme, SpectrumPlan, outer_band_id

DEFAULT_X_MAX_M = 400.0
# Area 1 (center) loses perceived lifetime fastest, the cell edge slowest.
# Chosen so the per-area mean move ratios rise monotonically from the center
# area toward the edge area under full reuse.
DEFAULT_FRF1_EXPONENTS = (1.0, 1.0, 8.0, 24.0)


@dataclass(frozen=True)
class LifetimeProfile:
    """Per-area lifetime decay shapes: L(x) = 1 - (x / x_max)^p."""

    x_max_m: float = DEFAULT_X_MAX_M
    exponents: tuple[float, ...] = DEFAULT_FRF1_EXPONENTS

    def __post_init__(self):
        if self.x_max_m <= 0:
            raise ValueError(f"x_max must be > 0, got {self.x_max_m}")
        if not self.exponents or any(p <= 0 for p in self.exponents):
            raise ValueError(f"exponents must all be > 0, got {self.exponents}")

    @classmethod
    def for_partial_reuse(cls, base: "LifetimeProfile") -> "LifetimeProfile":
        """Two-area profile (inner/outer) using the shapes of areas 2 and 4."""
        if len(base.exponents) < 4:
            raise ValueError("need a 4-area profile to derive the partial-reuse one")
        return cls(base.x_max_m, (base.exponents[1], base.exponents[3]))


@dataclass(frozen=True)
class MoveContext:
    """Everything a node's move optimization reads; immutable during a drop.

    band_populations holds the drop's initial node count per band id and is
    deliberately not updated as candidate moves are evaluated.
    """

    layout: CellLayout
    scheme: ReuseScheme
    plan: SpectrumPlan
    params: ChannelParams
    shadowing: ShadowingField
    band_populations: dict[str, int]
    report_partition: AreaPartition


@dataclass
class UtilityCurve:
    """Sampled utility along the feasible move grid of one node."""

    node_id: int
    x_grid_m: np.ndarray
    utilities: np.ndarray
    x_opt_m: float
    clamped: bool  # feasible range capped by the BS distance instead of x_max


@dataclass(frozen=True)
class MoveRecord:
    node_id: int
    area: int  # reporting area (initial distance, report partition)
    initial_distance_m: float
    x_opt_m: float
    final_distance_m: float
    normalized_move: float
    band_before: str
    band_after: str


def lifetime_factor(area: int, x: float, profile: LifetimeProfile) -> float:
    """L(x) = 1 - (x/x_max)^p for the node's starting area; 1 at rest, 0 at x_max."""
    if not 1 <= area <= len(profile.exponents):
        raise ValueError(f"area {area} outside profile with {len(profile.exponents)} areas")
    if x < 0 or x > profile.x_max_m:
        raise ValueError(f"move distance {x} outside [0, {profile.x_max_m}]")
    return 1.0 - (x / profile.x_max_m) ** profile.exponents[area - 1]


def _lifetime_factors(area: int, xs: np.ndarray, profile: LifetimeProfile) -> np.ndarray:
    return 1.0 - (xs / profile.x_max_m) ** profile.exponents[area - 1]


def band_share(plan: SpectrumPlan, band_id: str, populations: dict[str, int]) -> int:
    """Subcarriers one node gets in a band under the frozen population counts.

    Floor division with a minimum of one whenever the band is non-empty; a
    node entering a region that was initially unpopulated takes the band
    alone.
    """
    size = plan.band_size(band_id)
    if size == 0:
        raise ValueError(f"band {band_id} is empty but a node would use it")
    return max(size // max(populations.get(band_id, 0), 1), 1)


def _ray_positions(node: NodeState, xs: np.ndarray, layout: CellLayout) -> tuple[np.ndarray, np.ndarray]:
    """Positions along the segment to the serving BS for each move distance."""
    center = layout.cell(node.serving_cell).center.as_array()
    offset = node.position.as_array() - center
    d0 = float(np.hypot(*offset))
    if d0 == 0.0:
        return np.tile(center, (len(xs), 1)), np.zeros_like(xs)
    frac = (d0 - xs) / d0
    return center[None, :] + offset[None, :] * frac[:, None], d0 - xs


def _evaluate_grid(
    node: NodeState, xs: np.ndarray, context: MoveContext
) -> tuple[np.ndarray, np.ndarray, list[str]]:
    """(sinr, subcarrier count, band id) at every grid move distance."""
    points, dists = _ray_positions(node, xs, context.layout)
    cell = context.layout.cell(node.serving_cell)
    # Same boundary convention as band_of_node: the inner radius itself is inner.
    if isinstance(context.scheme, PartialReuse):
        inner_mask = dists <= context.scheme.inner_radius_ratio * context.layout.cell_radius
    else:
        inner_mask = np.ones(len(xs), dtype=bool)
    outer_id = outer_band_id(cell.outer_color)
    bands = [INNER if m else outer_id for m in inner_mask]
    shadow_row = context.shadowing.row(node.node_id)
    sinr = np.empty(len(xs))
    counts = np.empty(len(xs))
    for band_id, mask in ((INNER, inner_mask), (outer_id, ~inner_mask)):
        if mask.any():
            sinr[mask] = sinr_linear_at(
                points[mask], node.serving_cell, band_id, context.layout,
                context.plan, shadow_row, context.params,
            )
            counts[mask] = band_share(context.plan, band_id, context.band_populations)
    return sinr, counts, bands


def sinr_gain(node: NodeState, x: float, context: MoveContext) -> float:
    """SINR at the position reached by moving x toward the BS.

    The band is re-derived from the new distance (a node crossing the inner
    radius switches band and interference set); shadowing stays frozen.
    """
    sinr, _, _ = _evaluate_grid(node, np.array([float(x)]), context)
    return float(sinr[0])


def subcarrier_count(node: NodeState, x: float, context: MoveContext) -> int:
    """Subcarriers held at the moved position under frozen region populations."""
    _, counts, _ = _evaluate_grid(node, np.array([float(x)]), context)
    return int(counts[0])


def utility(node: NodeState, x: float, context: MoveContext, profile: LifetimeProfile) -> float:
    """U(x) = sinr_gain * lifetime_factor * subcarrier_count."""
    sinr, counts, _ = _evaluate_grid(node, np.array([float(x)]), context)
    return float(sinr[0] * lifetime_factor(node.area, x, profile) * counts[0])


def move_grid(
    d0: float, x_max_m: float, step_m: float, breakpoints: tuple[float, ...] = ()
) -> np.ndarray:
    """{0, step, 2*step, ...} capped at min(x_max, d0), final point included.

    Extra breakpoints inside the range are merged in: the utility is only
    piecewise smooth, and a uniform grid can miss its kinks by up to one step.
    """
    if step_m <= 0:
        raise ValueError(f"grid step must be > 0, got {step_m}")
    cap = min(x_max_m, d0)
    xs = np.arange(0.0, cap, step_m)
    if len(xs) == 0 or xs[-1] != cap:
        xs = np.append(xs, cap)
    extras = [b for b in breakpoints if 0.0 < b < cap]
    if extras:
        xs = np.unique(np.concatenate([xs, np.asarray(extras)]))
    return xs


def _utility_breakpoints(d0: float, context: MoveContext) -> tuple[float, ...]:
    """Move distances where the utility is not smooth.

    The path-loss clamp puts a kink at the distance that reaches the minimum
    coupling distance; the band boundary of partial reuse adds a step, whose
    left limit is represented by a point just outside the inner radius.
    """
    points = [d0 - context.params.min_distance_m]
    if isinstance(context.scheme, PartialReuse):
        crossing = d0 - context.scheme.inner_radius_ratio * context.layout.cell_radius
        points += [crossing, crossing - 1e-6]
    return tuple(points)


def optimize_move(
    node: NodeState,
    context: MoveContext,
    profile: LifetimeProfile,
    grid_step_m: float = 1.0,
) -> tuple[UtilityCurve, MoveRecord]:
    """Grid-search the optimal move; ties resolve to the smallest distance."""
    center = context.layout.cell(node.serving_cell).center
    d0 = math.hypot(node.position.x - center.x, node.position.y - center.y)
    xs = move_grid(d0, profile.x_max_m, grid_step_m, _utility_breakpoints(d0, context))
    sinr, counts, bands = _evaluate_grid(node, xs, context)
    u = sinr * _lifetime_factors(node.area, xs, profile) * counts
    i_opt = int(np.argmax(u))
    x_opt = float(xs[i_opt])
    curve = UtilityCurve(node.node_id, xs, u, x_opt, clamped=d0 < profile.x_max_m)
    record = MoveRecord(
        node_id=node.node_id,
        area=area_index(d0, context.report_partition),
        initial_distance_m=d0,
        x_opt_m=x_opt,
        final_distance_m=d0 - x_opt,
        normalized_move=x_opt / profile.x_max_m,
        band_before=bands[0],
        band_after=bands[i_opt],
    )
    return curve, record

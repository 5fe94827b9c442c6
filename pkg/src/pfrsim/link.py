"""Per-subcarrier SINR and node capacity under a layout, spectrum plan and drop.

The channel is flat across subcarriers (the path loss model carries no
frequency dependence), so all subcarriers of a band share one SINR value and
a node's capacity is its subcarrier count times the per-subcarrier capacity.
Interference accumulates in the linear domain; dB only at reporting.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import ChannelParams, ShadowingField, path_loss_db, channel_gain_linear
from .geometry import CellLayout, Point2D
from .spectrum import SpectrumPlan, interference_set


@dataclass(frozen=True)
class NodeState:
    """Snapshot of one mobile node inside its serving cell."""

    node_id: int
    position: Point2D
    serving_cell: int
    area: int
    band: str
    moved_m: float = 0.0


@dataclass(frozen=True)
class LinkBudget:
    """Fixed per-subcarrier transmit power and noise power, both in Watts."""

    per_subcarrier_power_w: float
    noise_power_w: float

    def __post_init__(self):
        if self.per_subcarrier_power_w <= 0 or self.noise_power_w <= 0:
            raise ValueError("powers must be strictly positive")

    @classmethod
    def from_params(cls, params: ChannelParams, total_subcarriers: int) -> "LinkBudget":
        return cls(
            per_subcarrier_power(params.bs_power_dbm, total_subcarriers),
            noise_power(params.noise_density_dbm_hz, params.subcarrier_spacing_hz),
        )


@dataclass(frozen=True)
class SinrSample:
    node_id: int
    distance_m: float
    band: str
    sinr_linear: float
    sinr_db: float


@dataclass(frozen=True)
class CapacityRecord:
    node_id: int
    subcarrier_count: int
    capacity_bps: float


def per_subcarrier_power(bs_power_dbm: float, m: int) -> float:
    """Total BS power split evenly over all M subcarriers, in Watts."""
    if m < 1:
        raise ValueError(f"need at least 1 subcarrier, got {m}")
    return 10.0 ** ((bs_power_dbm - 30.0) / 10.0) / m


def noise_power(noise_density_dbm_hz: float, f_s: float) -> float:
    """AWGN power over one subcarrier of spacing f_s, in Watts."""
    if f_s <= 0:
        raise ValueError(f"subcarrier spacing must be > 0, got {f_s}")
    return 10.0 ** ((noise_density_dbm_hz - 30.0) / 10.0) * f_s


def interferer_indices(cell_id: int, band_id: str, layout: CellLayout) -> np.ndarray:
    """0-based layout indices of the interference set, for array slicing."""
    return np.array(sorted(i - 1 for i in interference_set(cell_id, band_id, layout)), dtype=int)


def sinr_linear_at(
    points: np.ndarray,
    serving_cell: int,
    band_id: str,
    layout: CellLayout,
    plan: SpectrumPlan,
    shadow_row: np.ndarray,
    params: ChannelParams,
) -> np.ndarray:
    """Vectorized SINR for one node's link evaluated at (k, 2) candidate points.

    shadow_row holds the node's frozen per-cell shadowing in layout cell
    order.  The serving cell and band are fixed; callers that re-derive the
    band per point should evaluate each band and select.
    """
    budget = LinkBudget.from_params(params, plan.total_subcarriers)
    d = np.linalg.norm(points[:, None, :] - layout.centers[None, :, :], axis=2)
    gains = channel_gain_linear(path_loss_db(d, shadow_row[None, :], params))
    rx = gains * budget.per_subcarrier_power_w
    signal = rx[:, serving_cell - 1]
    idx = interferer_indices(serving_cell, band_id, layout)
    interference = rx[:, idx].sum(axis=1) if idx.size else np.zeros(len(points))
    return signal / (budget.noise_power_w + interference)


def sinr(
    node: NodeState,
    position: Point2D,
    band_id: str,
    layout: CellLayout,
    plan: SpectrumPlan,
    shadowing: ShadowingField,
    params: ChannelParams,
) -> SinrSample:
    """SINR sample for one node at one position on one band."""
    row = shadowing.row(node.node_id)
    if len(row) != len(layout):
        raise ValueError(
            f"shadowing field covers {len(row)} cells but layout has {len(layout)}"
        )
    value = float(
        sinr_linear_at(
            position.as_array()[None, :], node.serving_cell, band_id, layout, plan, row, params
        )[0]
    )
    center = layout.cell(node.serving_cell).center
    distance = math.hypot(position.x - center.x, position.y - center.y)
    return SinrSample(node.node_id, distance, band_id, value, 10.0 * math.log10(value))


def snr_gap_beta(ber: float) -> float:
    """SNR gap factor mapping Shannon capacity to a BER-constrained rate."""
    return -1.5 / math.log(5.0 * ber)


def capacity_per_subcarrier(sinr_linear: float, params: ChannelParams) -> float:
    """Rate of one subcarrier in bit/s: f_s * log2(1 + beta * SINR)."""
    if sinr_linear < 0:
        raise ValueError(f"sinr must be >= 0, got {sinr_linear}")
    beta = snr_gap_beta(params.ber)
    return params.subcarrier_spacing_hz * math.log2(1.0 + beta * sinr_linear)


def node_capacity(
    node: NodeState,
    allocation: dict[int, frozenset[int]],
    sinr_sample: SinrSample,
    params: ChannelParams,
) -> CapacityRecord:
    """Total rate of a node: subcarrier count times the flat per-subcarrier rate."""
    if node.node_id not in allocation:
        raise KeyError(f"node {node.node_id} missing from allocation")
    n = len(allocation[node.node_id])
    return CapacityRecord(
        node.node_id, n, n * capacity_per_subcarrier(sinr_sample.sinr_linear, params)
    )

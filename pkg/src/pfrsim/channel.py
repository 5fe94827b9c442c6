"""Distance-dependent path loss with lognormal shadowing, and linear channel gain.

Path loss follows the macro-cell form  PL(d) = intercept + 10*exponent*log10(d_km)
+ shadowing, with the gain implemented as attenuation 10^(-PL/10) so that
gain * transmit power is received power.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class ChannelParams:
    """Link-budget constants.

    ``pathloss_exponent`` is the propagation decay factor (distinct from the
    inner-radius ratio used by the reuse scheme, which shares the same Greek
    letter in common usage).  Distances below ``min_distance_m`` are clamped
    before evaluating the path loss, which is invalid at 0 m.
    """

    intercept_db: float = 128.1
    pathloss_exponent: float = 3.76
    shadowing_sigma_db: float = 8.0
    noise_density_dbm_hz: float = -174.0
    bs_power_dbm: float = 43.0
    subcarrier_spacing_hz: float = 15000.0
    ber: float = 1e-6
    min_distance_m: float = 35.0

    def __post_init__(self):
        if self.pathloss_exponent <= 0:
            raise ValueError(f"pathloss_exponent must be > 0, got {self.pathloss_exponent}")
        if self.shadowing_sigma_db < 0:
            raise ValueError(f"shadowing sigma must be >= 0, got {self.shadowing_sigma_db}")
        if self.subcarrier_spacing_hz <= 0:
            raise ValueError(f"subcarrier spacing must be > 0, got {self.subcarrier_spacing_hz}")
        if not 0 < self.ber < 0.2:
            raise ValueError(f"ber must be in (0, 0.2), got {self.ber}")
        if self.min_distance_m <= 0:
            raise ValueError(f"min_distance_m must be > 0, got {self.min_distance_m}")


@dataclass
class ShadowingField:
    """Per-link shadowing values in dB, frozen for the duration of one drop.

    One i.i.d. Normal(0, sigma^2) value per (node, cell) link, stored as an
    array of shape (num_nodes, num_cells) aligned to ``node_ids`` /
    ``cell_ids``.  Values are not redrawn while candidate moves are evaluated.
    """

    node_ids: tuple[int, ...]
    cell_ids: tuple[int, ...]
    values: np.ndarray
    _node_index: dict[int, int] = field(init=False, repr=False)

    def __post_init__(self):
        if self.values.shape != (len(self.node_ids), len(self.cell_ids)):
            raise ValueError("shadowing array shape does not match id lists")
        self.values.flags.writeable = False
        self._node_index = {nid: i for i, nid in enumerate(self.node_ids)}

    def row(self, node_id: int) -> np.ndarray:
        """All cell links of one node, ordered like ``cell_ids``."""
        try:
            return self.values[self._node_index[node_id]]
        except KeyError:
            raise KeyError(f"no shadowing entry for node {node_id}") from None

    def get(self, node_id: int, cell_id: int) -> float:
        return float(self.row(node_id)[self.cell_ids.index(cell_id)])


def clamp_distance(distance_m, params: ChannelParams):
    """Apply the minimum-coupling-distance clamp; returns (distance, clamped flag)."""
    clamped = np.asarray(distance_m) < params.min_distance_m
    return np.maximum(distance_m, params.min_distance_m), clamped


def path_loss_db(distance_m, shadow_db, params: ChannelParams):
    """PL = intercept + 10*exponent*log10(d/1000) + shadow, distance in meters.

    Accepts scalars or arrays.  Distances under params.min_distance_m are
    clamped to it (the model diverges at 0 m).
    """
    d, _ = clamp_distance(distance_m, params)
    return params.intercept_db + 10.0 * params.pathloss_exponent * np.log10(d / 1000.0) + shadow_db


def channel_gain_linear(pl_db):
    """Linear attenuation 10^(-PL/10); strictly positive, decreasing in PL."""
    return 10.0 ** (-np.asarray(pl_db, dtype=float) / 10.0)


def draw_shadowing(
    node_ids, cell_ids, sigma_db: float, rng: np.random.Generator
) -> ShadowingField:
    """Draw one Normal(0, sigma^2) dB value per node-cell link."""
    if sigma_db < 0:
        raise ValueError(f"sigma must be >= 0, got {sigma_db}")
    node_ids = tuple(node_ids)
    cell_ids = tuple(cell_ids)
    values = rng.normal(0.0, sigma_db, size=(len(node_ids), len(cell_ids)))
    return ShadowingField(node_ids, cell_ids, values)

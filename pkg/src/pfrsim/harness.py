"""Drop generation, trial execution and aggregation for the experiment families.

One drop samples node positions uniformly in the center cell, draws frozen
per-link shadowing, classifies bands and areas, and evaluates the baseline
SINR and capacity.  Mobility-control schemes additionally optimize every
node's move and re-evaluate SINR and capacity at the final positions while
keeping the initial region populations frozen.

Trials are independent: each gets its own seed derived from the master seed
and the trial index, so results do not depend on execution order and can be
computed in parallel.  Edge membership is always judged on the shadowing-free
full-reuse SINR at the initial position, so capacity comparisons across
schemes look at the same node population.
"""
from __future__ import annotations

import hashlib
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, fields

import numpy as np

from .channel import ChannelParams, draw_shadowing
from .geometry import (
    AreaPartition,
    CellLayout,
    Point2D,
    area_index,
    build_layout,
    move_toward_bs,
    sample_points_in_cell,
)
from .link import (
    CapacityRecord,
    NodeState,
    SinrSample,
    capacity_per_subcarrier,
    node_capacity,
    sinr,
    sinr_linear_at,
)
from .mobility import (
    LifetimeProfile,
    MoveContext,
    MoveRecord,
    band_share,
    optimize_move,
)
from .spectrum import (
    FullReuse,
    INNER,
    PartialReuse,
    ReuseScheme,
    SpectrumPlan,
    allocate,
    band_of_node,
    build_plan,
)

SCHEMES = ("frf1", "pfr", "mc-frf1", "mc-pfr")
MC_SCHEMES = ("mc-frf1", "mc-pfr")


@dataclass(frozen=True)
class SimConfig:
    """Complete experiment configuration; defaults follow the standard setup."""

    cell_radius_m: float = 1000.0
    rings: int = 3
    intercept_db: float = 128.1
    pathloss_exponent: float = 3.76
    shadowing_sigma_db: float = 8.0
    noise_density_dbm_hz: float = -174.0
    bs_power_dbm: float = 43.0
    subcarriers: int = 300
    spacing_hz: float = 15000.0
    ber: float = 1e-6
    min_distance_m: float = 35.0
    scheme: str = "frf1"
    pfr_alpha: float = 0.467
    num_nodes: int = 30
    trials: int = 1
    seed: int = 1
    x_max_m: float = 400.0
    move_grid_step_m: float = 1.0
    lifetime_exponents: tuple[float, ...] = (1.0, 1.0, 8.0, 24.0)
    area_boundaries_m: tuple[float, ...] | None = None
    edge_threshold_db: float = 0.0
    alpha_samples: int = 10_000
    alpha_grid_step: float = 0.001

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown scheme {self.scheme!r}, expected one of {SCHEMES}")
        for name in ("num_nodes", "trials", "subcarriers", "alpha_samples"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1, got {getattr(self, name)}")
        if not 0.0 < self.pfr_alpha < 1.0:
            raise ValueError(f"pfr_alpha must be in (0, 1), got {self.pfr_alpha}")
        if self.rings < 0:
            raise ValueError(f"rings must be >= 0, got {self.rings}")

    def channel_params(self) -> ChannelParams:
        return ChannelParams(
            intercept_db=self.intercept_db,
            pathloss_exponent=self.pathloss_exponent,
            shadowing_sigma_db=self.shadowing_sigma_db,
            noise_density_dbm_hz=self.noise_density_dbm_hz,
            bs_power_dbm=self.bs_power_dbm,
            subcarrier_spacing_hz=self.spacing_hz,
            ber=self.ber,
            min_distance_m=self.min_distance_m,
        )

    def reuse_scheme(self) -> ReuseScheme:
        if self.scheme in ("frf1", "mc-frf1"):
            return FullReuse()
        return PartialReuse(self.pfr_alpha)

    def uses_mobility(self) -> bool:
        return self.scheme in MC_SCHEMES

    def report_partition(self) -> AreaPartition:
        """Four concentric reporting areas: the inner region and the outer ring halved.

        Aligning the second boundary with the inner radius keeps per-area
        statistics comparable between the reuse schemes (every area lies
        entirely on one side of the band boundary).
        """
        if self.area_boundaries_m is not None:
            return AreaPartition(tuple(self.area_boundaries_m))
        ar = self.pfr_alpha * self.cell_radius_m
        return AreaPartition((ar / 2, ar, (ar + self.cell_radius_m) / 2, self.cell_radius_m))

    def lifetime_partition(self) -> AreaPartition:
        """Areas that select the lifetime decay shape (scheme dependent)."""
        if self.scheme == "mc-pfr":
            return AreaPartition((self.pfr_alpha * self.cell_radius_m, self.cell_radius_m))
        return self.report_partition()

    def lifetime_profile(self) -> LifetimeProfile:
        base = LifetimeProfile(self.x_max_m, tuple(self.lifetime_exponents))
        if self.scheme == "mc-pfr":
            return LifetimeProfile.for_partial_reuse(base)
        return base

    def config_hash(self) -> str:
        text = "\n".join(f"{f.name}={getattr(self, f.name)!r}" for f in fields(self))
        return hashlib.sha256(text.encode()).hexdigest()[:12]


@dataclass
class TrialResult:
    """Per-node records of one drop; for MC schemes the samples are post-move."""

    trial_index: int
    sinr_samples: list[SinrSample]
    capacity_records: list[CapacityRecord]
    move_records: list[MoveRecord] | None
    edge_ids: frozenset[int]


@dataclass
class MetricsReport:
    """Aggregated experiment output plus the retained per-trial records."""

    scheme: str
    num_nodes: int
    trials: int
    seed: int
    config_hash: str
    trial_results: list[TrialResult] = field(default_factory=list)
    mean_edge_capacity_bps: float = 0.0
    mean_move_per_area: dict[int, float] = field(default_factory=dict)

    def edge_capacity_per_trial(self) -> list[tuple[int, float]]:
        """Per-trial mean capacity over edge nodes; 0.0 when a trial has none."""
        out = []
        for tr in self.trial_results:
            vals = [c.capacity_bps for c in tr.capacity_records if c.node_id in tr.edge_ids]
            out.append((tr.trial_index, float(np.mean(vals)) if vals else 0.0))
        return out


def derive_trial_seed(master_seed: int, trial_index: int) -> np.random.SeedSequence:
    """Documented per-trial seed scheme: SeedSequence over (master, index)."""
    return np.random.SeedSequence((master_seed, trial_index))


def max_workers() -> int:
    """Worker cap: SIM_THREADS environment variable, else machine capacity."""
    env = os.environ.get("SIM_THREADS", "").strip()
    if env:
        try:
            value = int(env)
        except ValueError:
            raise ValueError(f"SIM_THREADS must be an integer, got {env!r}") from None
        if value < 1:
            raise ValueError(f"SIM_THREADS must be >= 1, got {value}")
        return value
    return os.cpu_count() or 1


def baseline_frf1_sinr_db(
    positions: np.ndarray, layout: CellLayout, params: ChannelParams, subcarriers: int
) -> np.ndarray:
    """Shadowing-free full-reuse SINR at given positions (the edge criterion)."""
    plan = build_plan(subcarriers, FullReuse())
    zero_shadow = np.zeros(len(layout))
    values = sinr_linear_at(positions, 1, INNER, layout, plan, zero_shadow, params)
    return 10.0 * np.log10(values)


def classify_edge(sinr_db_by_node: dict[int, float], threshold_db: float) -> frozenset[int]:
    """Node ids whose baseline SINR falls below the threshold."""
    return frozenset(nid for nid, v in sinr_db_by_node.items() if v < threshold_db)


def _band_populations(bands: list[str], plan: SpectrumPlan) -> dict[str, int]:
    pops: dict[str, int] = {}
    for b in bands:
        pops[b] = pops.get(b, 0) + 1
    return pops


def _area_of(distance: float, partition: AreaPartition) -> int:
    # Sampled nodes sit inside the cell; a vertex lands exactly on the last
    # boundary, which the half-open convention would call out of cell.
    return area_index(min(distance, partition.boundaries[-1] * (1 - 1e-12)), partition)


def run_drop(config: SimConfig, trial_index: int, layout: CellLayout | None = None) -> TrialResult:
    """Execute one random drop of the configured scheme."""
    if layout is None:
        layout = build_layout(config.rings, config.cell_radius_m)
    params = config.channel_params()
    scheme = config.reuse_scheme()
    plan = build_plan(config.subcarriers, scheme)
    cell1 = layout.cell(1)
    rng = np.random.default_rng(derive_trial_seed(config.seed, trial_index))

    positions = sample_points_in_cell(cell1, layout, config.num_nodes, rng)
    node_ids = list(range(config.num_nodes))
    shadowing = draw_shadowing(
        node_ids, [c.id for c in layout.cells], config.shadowing_sigma_db, rng
    )

    distances = np.linalg.norm(positions - layout.centers[0][None, :], axis=1)
    bands = [
        band_of_node(d, config.cell_radius_m, scheme, cell1) for d in distances
    ]
    life_part = config.lifetime_partition()
    nodes = [
        NodeState(
            node_id=nid,
            position=Point2D(float(positions[i][0]), float(positions[i][1])),
            serving_cell=1,
            area=_area_of(float(distances[i]), life_part),
            band=bands[i],
        )
        for i, nid in enumerate(node_ids)
    ]

    base_db = baseline_frf1_sinr_db(positions, layout, params, config.subcarriers)
    edge_ids = classify_edge(dict(zip(node_ids, base_db)), config.edge_threshold_db)

    if not config.uses_mobility():
        samples = [
            sinr(n, n.position, n.band, layout, plan, shadowing, params) for n in nodes
        ]
        allocations: dict[int, frozenset[int]] = {}
        for band_id in set(bands):
            members = [n.node_id for n in nodes if n.band == band_id]
            allocations.update(allocate(members, plan.band(band_id)))
        caps = [node_capacity(n, allocations, s, params) for n, s in zip(nodes, samples)]
        return TrialResult(trial_index, samples, caps, None, edge_ids)

    populations = _band_populations(bands, plan)
    context = MoveContext(
        layout=layout,
        scheme=scheme,
        plan=plan,
        params=params,
        shadowing=shadowing,
        band_populations=populations,
        report_partition=config.report_partition(),
    )
    profile = config.lifetime_profile()
    samples = []
    caps = []
    moves = []
    for n in nodes:
        _, record = optimize_move(n, context, profile, config.move_grid_step_m)
        moves.append(record)
        final_pos, _ = move_toward_bs(n.position, cell1, record.x_opt_m)
        sample = sinr(n, final_pos, record.band_after, layout, plan, shadowing, params)
        samples.append(sample)
        nk = band_share(plan, record.band_after, populations)
        caps.append(
            CapacityRecord(
                n.node_id, nk, nk * capacity_per_subcarrier(sample.sinr_linear, params)
            )
        )
    return TrialResult(trial_index, samples, caps, moves, edge_ids)


def run_experiment(config: SimConfig) -> MetricsReport:
    """Run all configured trials and aggregate the scheme's metrics.

    Trials execute on a worker pool but are reduced in trial order, so the
    report is identical under any parallelism level.
    """
    layout = build_layout(config.rings, config.cell_radius_m)
    results: dict[int, TrialResult] = {}
    indices = list(range(config.trials))
    workers = min(max_workers(), config.trials)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            for res in pool.map(lambda t: run_drop(config, t, layout), indices):
                results[res.trial_index] = res
    else:
        for t in indices:
            results[t] = run_drop(config, t, layout)

    report = MetricsReport(
        scheme=config.scheme,
        num_nodes=config.num_nodes,
        trials=config.trials,
        seed=config.seed,
        config_hash=config.config_hash(),
        trial_results=[results[t] for t in indices],
    )
    per_trial = report.edge_capacity_per_trial()
    report.mean_edge_capacity_bps = float(np.mean([v for _, v in per_trial]))
    if config.uses_mobility():
        sums: dict[int, list[float]] = {}
        for tr in report.trial_results:
            for mv in tr.move_records or []:
                sums.setdefault(mv.area, []).append(mv.normalized_move)
        report.mean_move_per_area = {
            area: float(np.mean(vals)) for area, vals in sorted(sums.items())
        }
    return report

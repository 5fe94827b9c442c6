"""pfrsim: deterministic 37-cell OFDMA downlink simulator.

Partial frequency reuse, per-node utility-driven mobility control, and the
Monte Carlo experiment harness behind the SINR, capacity and energy-usage
studies.
"""

from .channel import ChannelParams, ShadowingField, channel_gain_linear, draw_shadowing, path_loss_db
from .geometry import (
    AreaPartition,
    Cell,
    CellLayout,
    Point2D,
    area_index,
    build_layout,
    move_toward_bs,
    sample_uniform_in_cell,
    serving_cell,
)
from .harness import MetricsReport, SimConfig, TrialResult, run_drop, run_experiment
from .link import CapacityRecord, LinkBudget, NodeState, SinrSample, capacity_per_subcarrier, node_capacity, sinr
from .mobility import LifetimeProfile, MoveContext, MoveRecord, UtilityCurve, lifetime_factor, optimize_move, utility
from .pfr_opt import AlphaObjectivePoint, alpha_objective, optimize_alpha, sweep_alpha
from .spectrum import (
    Allocation,
    FullReuse,
    PartialReuse,
    ReuseScheme,
    SpectrumPlan,
    allocate,
    band_of_node,
    build_plan,
    interference_set,
)

__version__ = "0.1.0"

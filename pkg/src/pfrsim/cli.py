"""Command line front end: config parsing, experiment dispatch, CSV emission.

Subcommands
    optimize-alpha   sweep the inner-radius ratio and report the argmax
    sinr-map         per-node SINR versus distance for one scheme
    edge-capacity    mean cell-edge capacity over a node-count sweep
    mobility-stats   per-node move records for a mobility-control scheme

Configuration is a flat key=value UTF-8 file; command line flags override it.
Unknown keys are rejected; missing keys fall back to the built-in defaults
and each fallback is logged.  All CSV output uses fixed formatting and fixed
row order, so identical config and seed reproduce byte-identical files.
"""
from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace
from pathlib import Path

from . import harness, pfr_opt
from .geometry import build_layout
from .harness import MetricsReport, SimConfig, run_experiment

log = logging.getLogger("pfrsim")

DEFAULT_NODE_COUNTS = tuple(range(5, 55, 5))

# config-file key -> (SimConfig field, parser)
CONFIG_KEYS = {
    "cell.radius_m": ("cell_radius_m", float),
    "layout.rings": ("rings", int),
    "channel.pathloss_exponent": ("pathloss_exponent", float),
    "channel.intercept_db": ("intercept_db", float),
    "channel.shadowing_sigma_db": ("shadowing_sigma_db", float),
    "spectrum.subcarriers": ("subcarriers", int),
    "spectrum.spacing_hz": ("spacing_hz", float),
    "power.bs_dbm": ("bs_power_dbm", float),
    "noise.density_dbm_hz": ("noise_density_dbm_hz", float),
    "mobility.x_max_m": ("x_max_m", float),
    "mobility.grid_step_m": ("move_grid_step_m", float),
    "lifetime.exponents": ("lifetime_exponents", lambda s: tuple(float(v) for v in s.split(","))),
    "pfr.alpha": ("pfr_alpha", float),
    "link.ber": ("ber", float),
    "sim.seed": ("seed", int),
    "sim.trials": ("trials", int),
    "sim.nodes": ("num_nodes", int),
    "edge.threshold_db": ("edge_threshold_db", float),
}


class ConfigError(ValueError):
    """Invalid configuration key or value; maps to exit status 2."""


def parse_config_file(path: str | Path) -> dict[str, object]:
    """Read a flat key=value file into SimConfig field overrides."""
    overrides: dict[str, object] = {}
    seen = set()
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        if key not in CONFIG_KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        field_name, parse = CONFIG_KEYS[key]
        try:
            overrides[field_name] = parse(value.strip())
        except ValueError as exc:
            raise ConfigError(f"{path}:{lineno}: bad value for {key!r}: {exc}") from None
        seen.add(key)
    for key, (field_name, _) in sorted(CONFIG_KEYS.items()):
        if key not in seen:
            default = getattr(SimConfig(), field_name)
            log.info("config: %s not set, using default %r", key, default)
    return overrides


def build_config(args: argparse.Namespace) -> SimConfig:
    overrides: dict[str, object] = {}
    if args.config:
        overrides.update(parse_config_file(args.config))
    for flag, field_name in (
        ("seed", "seed"),
        ("scheme", "scheme"),
        ("nodes", "num_nodes"),
        ("trials", "trials"),
    ):
        value = getattr(args, flag, None)
        if value is not None:
            overrides[field_name] = value
    try:
        return SimConfig(**overrides)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def fmt(value, precision: str) -> str:
    """Fixed numeric formatting: 6 significant digits unless full precision."""
    if isinstance(value, (int,)) and not isinstance(value, bool):
        return str(value)
    if precision == "full":
        return repr(float(value))
    return f"{float(value):.6g}"


def write_csv(path: Path, header: list[str], rows: list[tuple], precision: str) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(fmt(v, precision) if not isinstance(v, str) else v for v in row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _global_node_id(trial_index: int, num_nodes: int, node_id: int) -> int:
    # Node ids repeat across trials; make them unique in pooled CSVs.
    return trial_index * num_nodes + node_id


def emit_sinr_map(report: MetricsReport, out: Path, precision: str) -> Path:
    rows = []
    for tr in report.trial_results:
        for s in tr.sinr_samples:
            rows.append(
                (
                    report.scheme,
                    _global_node_id(tr.trial_index, report.num_nodes, s.node_id),
                    s.distance_m,
                    s.sinr_db,
                )
            )
    rows.sort(key=lambda r: (r[0], r[1]))
    path = out / "sinr_map.csv"
    write_csv(path, ["scheme", "node_id", "distance_m", "sinr_db"], rows, precision)
    return path


def emit_edge_capacity(
    reports: list[MetricsReport], out: Path, precision: str
) -> Path:
    rows = []
    for rep in reports:
        for trial, value in rep.edge_capacity_per_trial():
            rows.append((rep.scheme, rep.num_nodes, trial, value))
    rows.sort(key=lambda r: (r[0], r[1], r[2]))
    path = out / "edge_capacity.csv"
    write_csv(
        path, ["scheme", "num_nodes", "trial", "avg_edge_capacity_bps"], rows, precision
    )
    return path


def emit_mobility(report: MetricsReport, out: Path, precision: str) -> Path:
    rows = []
    for tr in report.trial_results:
        for mv in tr.move_records or []:
            rows.append(
                (
                    report.scheme,
                    mv.area,
                    _global_node_id(tr.trial_index, report.num_nodes, mv.node_id),
                    mv.initial_distance_m,
                    mv.x_opt_m,
                    mv.final_distance_m,
                    mv.normalized_move,
                )
            )
    rows.sort(key=lambda r: (r[0], r[1], r[2]))
    path = out / "mobility.csv"
    write_csv(
        path,
        [
            "scheme",
            "area",
            "node_id",
            "initial_distance_m",
            "x_opt_m",
            "final_distance_m",
            "normalized_move",
        ],
        rows,
        precision,
    )
    return path


def emit_alpha_sweep(points, out: Path, precision: str) -> Path:
    rows = [(p.alpha, p.mean_sinr, p.var_sinr, p.objective) for p in points]
    rows.sort(key=lambda r: r[0])
    path = out / "alpha_sweep.csv"
    write_csv(path, ["alpha", "mean_sinr", "var_sinr", "objective"], rows, precision)
    return path


def cmd_optimize_alpha(args: argparse.Namespace) -> int:
    config = build_config(args)
    layout = build_layout(config.rings, config.cell_radius_m)
    step = args.alpha_step if args.alpha_step is not None else config.alpha_grid_step
    samples = args.samples if args.samples is not None else config.alpha_samples
    points = pfr_opt.sweep_alpha(
        step, samples, layout, config.channel_params(), config.seed,
        total_subcarriers=config.subcarriers,
    )
    best = max(points, key=lambda p: (p.objective, -p.alpha))
    out = _ensure_out(args.out)
    path = emit_alpha_sweep(points, out, args.precision)
    print(
        f"alpha_opt={fmt(best.alpha, args.precision)} "
        f"objective={fmt(best.objective, args.precision)} wrote {path}"
    )
    return 0


def cmd_sinr_map(args: argparse.Namespace) -> int:
    config = build_config(args)
    report = run_experiment(config)
    out = _ensure_out(args.out)
    path = emit_sinr_map(report, out, args.precision)
    n_rows = sum(len(tr.sinr_samples) for tr in report.trial_results)
    print(f"scheme={config.scheme} nodes={n_rows} config={report.config_hash} wrote {path}")
    return 0


def cmd_edge_capacity(args: argparse.Namespace) -> int:
    config = build_config(args)
    counts = args.node_counts or DEFAULT_NODE_COUNTS
    reports = [run_experiment(replace(config, num_nodes=n)) for n in counts]
    out = _ensure_out(args.out)
    path = emit_edge_capacity(reports, out, args.precision)
    summary = " ".join(
        f"{rep.num_nodes}:{fmt(rep.mean_edge_capacity_bps, args.precision)}"
        for rep in reports
    )
    print(f"scheme={config.scheme} mean_edge_capacity_bps {summary} wrote {path}")
    return 0


def cmd_mobility_stats(args: argparse.Namespace) -> int:
    config = build_config(args)
    if not config.uses_mobility():
        raise ConfigError(
            f"mobility-stats needs a mobility scheme (mc-frf1 or mc-pfr), got {config.scheme!r}"
        )
    report = run_experiment(config)
    out = _ensure_out(args.out)
    path = emit_mobility(report, out, args.precision)
    summary = " ".join(
        f"area{a}:{fmt(v, args.precision)}" for a, v in sorted(report.mean_move_per_area.items())
    )
    print(f"scheme={config.scheme} mean_normalized_move {summary} wrote {path}")
    return 0


def _ensure_out(out: str) -> Path:
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="flat key=value config file")
    parser.add_argument("--seed", type=int, help="master random seed")
    parser.add_argument("--out", default=".", help="output directory for CSV files")
    parser.add_argument(
        "--precision",
        choices=("sig6", "full"),
        default="sig6",
        help="CSV number formatting (default: 6 significant digits)",
    )


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pfrsim",
        description="37-cell OFDMA downlink simulator with partial reuse and mobility control",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("optimize-alpha", help="sweep the inner-radius ratio")
    _add_common(p)
    p.add_argument("--samples", type=int, help="Monte Carlo samples per alpha")
    p.add_argument("--alpha-step", type=float, help="alpha grid step")
    p.set_defaults(func=cmd_optimize_alpha)

    p = sub.add_parser("sinr-map", help="per-node SINR versus distance")
    _add_common(p)
    p.add_argument("--scheme", choices=harness.SCHEMES)
    p.add_argument("--nodes", type=int, help="nodes dropped in the center cell")
    p.add_argument("--trials", type=int, help="independent drops")
    p.set_defaults(func=cmd_sinr_map)

    p = sub.add_parser("edge-capacity", help="edge capacity over a node-count sweep")
    _add_common(p)
    p.add_argument("--scheme", choices=harness.SCHEMES)
    p.add_argument("--trials", type=int, help="independent drops per node count")
    p.add_argument(
        "--node-counts",
        type=lambda s: tuple(int(v) for v in s.split(",")),
        help="comma list of node counts (default 5,10,...,50)",
    )
    p.set_defaults(func=cmd_edge_capacity)

    p = sub.add_parser("mobility-stats", help="per-node move records (MC schemes)")
    _add_common(p)
    p.add_argument("--scheme", choices=harness.MC_SCHEMES)
    p.add_argument("--nodes", type=int, help="nodes dropped in the center cell")
    p.add_argument("--trials", type=int, help="independent drops")
    p.set_defaults(func=cmd_mobility_stats)

    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(name)s: %(message)s")
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

"""Render the four standard simulator figures from pfrsim CSV outputs.

Usage: render_figures <csv-dir> <out-dir>

Consumes the CSV schemas the simulator CLI emits (sinr_map.csv,
edge_capacity.csv, mobility.csv) and writes one PNG per figure kind:

    node_positions.png          initial vs final node distance (mobility.csv)
    sinr_vs_distance.png        SINR scatter, one series per scheme (sinr_map.csv)
    edge_capacity_vs_nodes.png  mean edge capacity per node count (edge_capacity.csv)
    move_ratio_per_area.png     grouped bars of mean move ratio (mobility.csv)

Inputs are read-only.  A CSV with a header but no rows renders empty axes and
only warns; a missing column is an error that names the column.
"""
from __future__ import annotations

import csv
import sys
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

DPI = 150

KINDS = (
    "node-positions",
    "sinr-vs-distance",
    "edge-capacity-vs-nodes",
    "move-ratio-per-area",
)

REQUIRED_COLUMNS = {
    "node-positions": ("scheme", "node_id", "initial_distance_m", "final_distance_m"),
    "sinr-vs-distance": ("scheme", "node_id", "distance_m", "sinr_db"),
    "edge-capacity-vs-nodes": ("scheme", "num_nodes", "trial", "avg_edge_capacity_bps"),
    "move-ratio-per-area": ("scheme", "area", "node_id", "normalized_move"),
}

SOURCE_CSV = {
    "node-positions": "mobility.csv",
    "sinr-vs-distance": "sinr_map.csv",
    "edge-capacity-vs-nodes": "edge_capacity.csv",
    "move-ratio-per-area": "mobility.csv",
}

OUTPUT_NAME = {
    "node-positions": "node_positions.png",
    "sinr-vs-distance": "sinr_vs_distance.png",
    "edge-capacity-vs-nodes": "edge_capacity_vs_nodes.png",
    "move-ratio-per-area": "move_ratio_per_area.png",
}


class SchemaError(ValueError):
    """Input CSV does not carry the columns the figure needs."""


@dataclass(frozen=True)
class FigureSpec:
    kind: str
    input_csv: Path
    output_image: Path

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown figure kind {self.kind!r}, expected one of {KINDS}")


def read_rows(path: Path, required: tuple[str, ...]) -> list[dict[str, str]]:
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        for column in required:
            if column not in header:
                raise SchemaError(f"{path}: missing column {column!r}")
        return list(reader)


def _schemes_in(rows: list[dict[str, str]]) -> list[str]:
    return sorted({r["scheme"] for r in rows})


def build_node_positions(rows, ax) -> None:
    for scheme in _schemes_in(rows):
        pts = [
            (float(r["initial_distance_m"]), float(r["final_distance_m"]))
            for r in rows
            if r["scheme"] == scheme
        ]
        ax.scatter([p[0] for p in pts], [p[1] for p in pts], s=12, label=scheme)
    lim = ax.get_xlim()[1] if rows else 1000.0
    ax.plot([0, lim], [0, lim], ls=":", c="gray", lw=1, label="no move")
    ax.set_xlabel("initial distance to BS (m)")
    ax.set_ylabel("final distance to BS (m)")
    ax.set_title("Node distances before and after mobility control")
    ax.legend()


def build_sinr_vs_distance(rows, ax) -> None:
    for scheme in _schemes_in(rows):
        pts = sorted(
            (float(r["distance_m"]), float(r["sinr_db"]))
            for r in rows
            if r["scheme"] == scheme
        )
        ax.scatter([p[0] for p in pts], [p[1] for p in pts], s=8, alpha=0.6, label=scheme)
    ax.axhline(0.0, ls=":", c="gray", lw=1)
    ax.set_xlabel("distance to serving BS (m)")
    ax.set_ylabel("received SINR (dB)")
    ax.set_title("Received SINR versus distance")
    if rows:
        ax.legend()


def build_edge_capacity(rows, ax) -> None:
    for scheme in _schemes_in(rows):
        by_n: dict[int, list[float]] = {}
        for r in rows:
            if r["scheme"] == scheme:
                by_n.setdefault(int(r["num_nodes"]), []).append(
                    float(r["avg_edge_capacity_bps"])
                )
        counts = sorted(by_n)
        means = [sum(by_n[n]) / len(by_n[n]) / 1000.0 for n in counts]
        ax.plot(counts, means, marker="o", label=scheme)
    ax.set_xlabel("nodes in the cell")
    ax.set_ylabel("mean edge capacity (kbit/s)")
    ax.set_title("Average capacity in the cell-edge region")
    if rows:
        ax.legend()


def build_move_ratio(rows, ax) -> None:
    schemes = _schemes_in(rows)
    areas = sorted({int(r["area"]) for r in rows})
    width = 0.8 / max(len(schemes), 1)
    for i, scheme in enumerate(schemes):
        means = []
        for area in areas:
            vals = [
                float(r["normalized_move"])
                for r in rows
                if r["scheme"] == scheme and int(r["area"]) == area
            ]
            means.append(sum(vals) / len(vals) if vals else 0.0)
        offsets = [a + (i - (len(schemes) - 1) / 2) * width for a in areas]
        ax.bar(offsets, means, width=width, label=scheme)
    ax.set_xticks(areas)
    ax.set_xlabel("area")
    ax.set_ylabel("mean moved distance / x_max")
    ax.set_title("Move ratio per area")
    ax.set_ylim(0.0, 1.0)
    if rows:
        ax.legend()


BUILDERS = {
    "node-positions": build_node_positions,
    "sinr-vs-distance": build_sinr_vs_distance,
    "edge-capacity-vs-nodes": build_edge_capacity,
    "move-ratio-per-area": build_move_ratio,
}


def build_figure(spec: FigureSpec):
    """Build the matplotlib figure for a spec; exposed for tests."""
    rows = read_rows(spec.input_csv, REQUIRED_COLUMNS[spec.kind])
    fig, ax = plt.subplots(figsize=(6.4, 4.4))
    BUILDERS[spec.kind](rows, ax)
    return fig, len(rows)


def render(spec: FigureSpec) -> Path:
    """Render one figure to its output image; returns the written path."""
    fig, n_rows = build_figure(spec)
    try:
        spec.output_image.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(spec.output_image, dpi=DPI)
    finally:
        plt.close(fig)
    if n_rows == 0:
        print(f"warning: {spec.input_csv} has no data rows; wrote empty axes", file=sys.stderr)
    return spec.output_image


def default_specs(csv_dir: Path, out_dir: Path) -> list[FigureSpec]:
    return [
        FigureSpec(kind, csv_dir / SOURCE_CSV[kind], out_dir / OUTPUT_NAME[kind])
        for kind in KINDS
    ]


def main(argv: list[str] | None = None) -> int:
    args = sys.argv[1:] if argv is None else list(argv)
    if len(args) != 2:
        print("usage: render_figures <csv-dir> <out-dir>", file=sys.stderr)
        return 2
    csv_dir, out_dir = Path(args[0]), Path(args[1])
    specs = default_specs(csv_dir, out_dir)
    missing = [s.input_csv for s in specs if not s.input_csv.exists()]
    if missing:
        for path in sorted(set(missing)):
            print(f"error: missing input {path}", file=sys.stderr)
        return 1
    try:
        for spec in specs:
            path = render(spec)
            print(f"wrote {path}")
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())

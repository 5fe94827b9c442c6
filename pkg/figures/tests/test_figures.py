import csv
import hashlib
import subprocess
import sys
from pathlib import Path

import pytest

from render_figures import FigureSpec, SchemaError, build_figure, main, render


def run_sim(args, cwd):
    proc = subprocess.run(
        [sys.executable, "-m", "pfrsim.cli", *args],
        cwd=cwd, capture_output=True, text=True,
    )
    assert proc.returncode == 0, proc.stderr
    return proc


def merge_csvs(parts: list[Path], target: Path) -> None:
    """Concatenate single-scheme CSVs into one multi-scheme file."""
    header = None
    rows = []
    for part in parts:
        lines = part.read_text().splitlines()
        if header is None:
            header = lines[0]
        assert lines[0] == header
        rows.extend(lines[1:])
    target.write_text("\n".join([header, *rows]) + "\n")


@pytest.fixture(scope="module")
def csv_dir(tmp_path_factory):
    """CSVs from real simulator runs: the acceptance-style inputs."""
    root = tmp_path_factory.mktemp("csvs")
    parts = []
    for scheme in ("frf1", "pfr", "mc-pfr"):
        out = root / f"sinr-{scheme}"
        run_sim(
            ["sinr-map", "--scheme", scheme, "--nodes", "40", "--seed", "1",
             "--out", str(out)], root,
        )
        parts.append(out / "sinr_map.csv")
    merge_csvs(parts, root / "sinr_map.csv")

    cap_parts = []
    for scheme in ("frf1", "mc-frf1"):
        out = root / f"cap-{scheme}"
        run_sim(
            ["edge-capacity", "--scheme", scheme, "--trials", "2",
             "--node-counts", "10,30", "--seed", "2", "--out", str(out)], root,
        )
        cap_parts.append(out / "edge_capacity.csv")
    merge_csvs(cap_parts, root / "edge_capacity.csv")

    mob_parts = []
    for scheme in ("mc-frf1", "mc-pfr"):
        out = root / f"mob-{scheme}"
        run_sim(
            ["mobility-stats", "--scheme", scheme, "--nodes", "25", "--trials", "2",
             "--seed", "3", "--out", str(out)], root,
        )
        mob_parts.append(out / "mobility.csv")
    merge_csvs(mob_parts, root / "mobility.csv")
    return root


def test_a11_figure_pipeline(csv_dir, tmp_path, capsys):
    # the four images render without error from real CLI outputs
    rc = main([str(csv_dir), str(tmp_path / "figs")])
    assert rc == 0
    images = sorted(p.name for p in (tmp_path / "figs").glob("*.png"))
    assert images == [
        "edge_capacity_vs_nodes.png",
        "move_ratio_per_area.png",
        "node_positions.png",
        "sinr_vs_distance.png",
    ]
    for name in images:
        assert (tmp_path / "figs" / name).stat().st_size > 1000
    print("A11 PASS: four figures rendered from simulator CSVs")


def test_sinr_figure_has_one_series_per_scheme(csv_dir):
    spec = FigureSpec("sinr-vs-distance", csv_dir / "sinr_map.csv", csv_dir / "x.png")
    fig, n_rows = build_figure(spec)
    try:
        legend = fig.axes[0].get_legend()
        labels = [t.get_text() for t in legend.get_texts()]
        assert labels == ["frf1", "mc-pfr", "pfr"]
        assert n_rows == 120
    finally:
        import matplotlib.pyplot as plt

        plt.close(fig)


def test_move_ratio_has_grouped_bars(csv_dir):
    spec = FigureSpec("move-ratio-per-area", csv_dir / "mobility.csv", csv_dir / "x.png")
    fig, _ = build_figure(spec)
    try:
        ax = fig.axes[0]
        # 4 areas x 2 schemes
        assert len(ax.patches) == 8
    finally:
        import matplotlib.pyplot as plt

        plt.close(fig)


def test_inputs_are_read_only(csv_dir, tmp_path):
    digests = {
        p.name: hashlib.sha256(p.read_bytes()).hexdigest()
        for p in csv_dir.glob("*.csv")
    }
    assert main([str(csv_dir), str(tmp_path / "figs2")]) == 0
    for p in csv_dir.glob("*.csv"):
        assert hashlib.sha256(p.read_bytes()).hexdigest() == digests[p.name]


def test_missing_column_names_it(tmp_path, capsys):
    bad = tmp_path / "sinr_map.csv"
    bad.write_text("scheme,node_id,distance_m\nfrf1,0,100\n")
    (tmp_path / "edge_capacity.csv").write_text(
        "scheme,num_nodes,trial,avg_edge_capacity_bps\n"
    )
    (tmp_path / "mobility.csv").write_text(
        "scheme,area,node_id,initial_distance_m,x_opt_m,final_distance_m,normalized_move\n"
    )
    rc = main([str(tmp_path), str(tmp_path / "figs")])
    assert rc == 1
    assert "sinr_db" in capsys.readouterr().err

    with pytest.raises(SchemaError, match="sinr_db"):
        render(FigureSpec("sinr-vs-distance", bad, tmp_path / "x.png"))


def test_header_only_csv_warns_but_succeeds(tmp_path, capsys):
    empty = tmp_path / "sinr_map.csv"
    empty.write_text("scheme,node_id,distance_m,sinr_db\n")
    out = tmp_path / "empty.png"
    path = render(FigureSpec("sinr-vs-distance", empty, out))
    assert path.exists()
    assert "no data rows" in capsys.readouterr().err


def test_missing_input_file_fails_by_name(tmp_path, capsys):
    rc = main([str(tmp_path / "nowhere"), str(tmp_path / "figs")])
    assert rc == 1
    assert "sinr_map.csv" in capsys.readouterr().err


def test_usage_error(capsys):
    assert main(["just-one-arg"]) == 2
    assert "usage" in capsys.readouterr().err


def test_unknown_kind_rejected(tmp_path):
    with pytest.raises(ValueError):
        FigureSpec("pie-chart", tmp_path / "a.csv", tmp_path / "b.png")

import csv
import subprocess
import sys
import time
from pathlib import Path

import pytest

PLOTS = Path(__file__).resolve().parents[1]
FIXTURES = PLOTS / "fixtures"
sys.path.insert(0, str(PLOTS))

import plotlib  # noqa: E402

KINDS = {
    "ler": "ler.csv",
    "footprint": "footprint.csv",
    "volume-bars": "volumes.csv",
}


@pytest.mark.parametrize("kind,fixture", sorted(KINDS.items()))
@pytest.mark.parametrize("ext", ["png", "svg"])
def test_render_all_kinds_headless(tmp_path, kind, fixture, ext):
    start = time.perf_counter()
    out = tmp_path / f"fig.{ext}"
    meta = plotlib.render(str(FIXTURES / fixture), kind, str(out))
    assert out.exists() and out.stat().st_size > 0
    assert meta
    assert time.perf_counter() - start < 10.0


def test_ler_figure_contains_threshold_point(tmp_path):
    meta = plotlib.render(str(FIXTURES / "ler.csv"), "ler", str(tmp_path / "ler.png"))
    points = meta["threshold_points"]
    assert points, "no plain-form fit in the fixture"
    # the marked point is (1/b, A) for each plain fit in the CSV
    with open(FIXTURES / "ler.csv") as fh:
        rows = [r for r in csv.DictReader(fh) if r["form"] == "plain"]
    for family in {r["family"] for r in rows}:
        a = float(next(r["A"] for r in rows if r["family"] == family))
        b = float(next(r["b"] for r in rows if r["family"] == family))
        x, y = points[family]
        assert x == pytest.approx(1.0 / b)
        assert y == pytest.approx(a)


def test_volume_bars_annotate_footprint_gap(tmp_path):
    meta = plotlib.render(
        str(FIXTURES / "volumes.csv"), "volume-bars", str(tmp_path / "v.png")
    )
    # the adder gap is read from the CSV columns, not recomputed
    with open(FIXTURES / "volumes.csv") as fh:
        rows = [r for r in csv.DictReader(fh) if r["estimator"] == "adder" and r["size"] == "8"]
    foots = sorted(float(r["footprint_qubits"]) for r in rows)
    assert meta["footprint_gaps"]["adder-8"] == pytest.approx(foots[1] / foots[0])


def test_empty_csv_errors_without_writing(tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text("estimator,size,platform,footprint_qubits,runtime_s,clifford_volume,t_count\n")
    out = tmp_path / "fig.png"
    with pytest.raises(plotlib.SchemaError):
        plotlib.render(str(empty), "volume-bars", str(out))
    assert not out.exists()


def test_schema_mismatch_errors(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("a,b\n1,2\n")
    with pytest.raises(plotlib.SchemaError):
        plotlib.render(str(bad), "ler", str(tmp_path / "fig.png"))


def test_cli_wrapper(tmp_path):
    out = tmp_path / "fig.svg"
    proc = subprocess.run(
        [sys.executable, str(PLOTS / "render.py"), "--kind", "footprint",
         "--in", str(FIXTURES / "footprint.csv"), "--out", str(out)],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert out.exists()
    bad = subprocess.run(
        [sys.executable, str(PLOTS / "render.py"), "--kind", "ler",
         "--in", str(FIXTURES / "footprint.csv"), "--out", str(tmp_path / "x.png")],
        capture_output=True, text=True,
    )
    assert bad.returncode == 1

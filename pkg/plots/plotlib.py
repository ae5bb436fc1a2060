"""Figure builders over the estimator CSV schemas.

Pure functions of the CSV text: no physics is recomputed here and no
constants are embedded; fit parameters, ratios, and costs all come from
the file. Each builder returns (figure, meta) where meta carries the
numbers a test can check without rendering.
"""

from __future__ import annotations

import csv
import io
from collections import defaultdict

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

LER_HEADER = ["family", "form", "A", "b", "c", "d", "p", "p_L"]
FOOTPRINT_HEADER = ["family", "target_pl", "p", "d", "n", "m", "k", "footprint_ratio"]
VOLUME_HEADER = ["estimator", "size", "platform", "footprint_qubits", "runtime_s", "clifford_volume", "t_count"]


class SchemaError(ValueError):
    """CSV header does not match the expected estimator schema."""


def _read_rows(csv_text: str, header: list[str]) -> list[dict]:
    reader = csv.DictReader(io.StringIO(csv_text))
    if reader.fieldnames != header:
        raise SchemaError(f"expected columns {header}, got {reader.fieldnames}")
    rows = list(reader)
    if not rows:
        raise SchemaError("no data rows")
    return rows


def build_ler_figure(csv_text: str):
    rows = _read_rows(csv_text, LER_HEADER)
    fig, ax = plt.subplots(figsize=(6, 4.5))
    meta = {"threshold_points": {}}
    series = defaultdict(list)
    for r in rows:
        series[(r["family"], int(r["d"]))].append((float(r["p"]), float(r["p_L"])))
    for (family, d), pts in sorted(series.items()):
        pts.sort()
        label = family if d == 0 else f"{family} d={d}"
        ax.loglog([p for p, _ in pts], [v for _, v in pts], label=label, lw=1.2)
    # mark the threshold crossing (1/b, A) of each plain-form family
    plain = {r["family"]: (float(r["A"]), float(r["b"])) for r in rows if r["form"] == "plain"}
    for family, (amp, b) in sorted(plain.items()):
        point = (1.0 / b, amp)
        meta["threshold_points"][family] = point
        ax.plot(*point, marker="*", ms=12, ls="none", label=f"{family} threshold")
    ax.set_xlabel("physical error rate p")
    ax.set_ylabel("logical error rate")
    ax.legend(fontsize=7)
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    return fig, meta


def build_footprint_figure(csv_text: str):
    rows = _read_rows(csv_text, FOOTPRINT_HEADER)
    fig, ax = plt.subplots(figsize=(6, 4.5))
    series = defaultdict(list)
    for r in rows:
        series[r["family"]].append((float(r["target_pl"]), float(r["footprint_ratio"])))
    meta = {"families": sorted(series)}
    for family, pts in sorted(series.items()):
        pts.sort(reverse=True)
        ax.semilogx([t for t, _ in pts], [f for _, f in pts], marker="o", label=family)
    ax.invert_xaxis()
    ax.set_xlabel("target logical error rate")
    ax.set_ylabel("footprint per logical qubit, (n+m)/k")
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    return fig, meta


def build_volume_bars_figure(csv_text: str):
    rows = _read_rows(csv_text, VOLUME_HEADER)
    fig, ax = plt.subplots(figsize=(7, 4.5))
    groups = sorted({(r["estimator"], int(r["size"])) for r in rows})
    platforms = sorted({r["platform"] for r in rows})
    width = 0.8 / len(platforms)
    lookup = {(r["estimator"], int(r["size"]), r["platform"]): r for r in rows}
    meta = {"groups": groups, "footprint_gaps": {}}
    for pi, platform in enumerate(platforms):
        xs, ys = [], []
        for gi, (est, size) in enumerate(groups):
            row = lookup.get((est, size, platform))
            if row is None:
                continue
            xs.append(gi + pi * width)
            ys.append(float(row["clifford_volume"]))
        ax.bar(xs, ys, width=width, label=platform)
    for gi, (est, size) in enumerate(groups):
        pair = [lookup.get((est, size, p)) for p in platforms]
        if all(pair) and len(pair) == 2:
            foots = sorted(float(r["footprint_qubits"]) for r in pair)
            if foots[0] > 0:
                gap = foots[1] / foots[0]
                meta["footprint_gaps"][f"{est}-{size}"] = gap
                if est == "adder":
                    ax.annotate(
                        f"{gap:.2f}x footprint",
                        (gi + 0.4, max(float(r["clifford_volume"]) for r in pair)),
                        fontsize=6, ha="center",
                    )
    ax.set_yscale("log")
    ax.set_xticks([g + 0.4 - width / 2 for g in range(len(groups))])
    ax.set_xticklabels([f"{e}\n{s}" for e, s in groups], fontsize=7)
    ax.set_ylabel("Clifford volume (qubit seconds)")
    ax.legend()
    fig.tight_layout()
    return fig, meta


BUILDERS = {
    "ler": build_ler_figure,
    "footprint": build_footprint_figure,
    "volume-bars": build_volume_bars_figure,
}


def render(csv_in: str, kind: str, out: str) -> dict:
    """Render `kind` from the CSV at csv_in into the image at `out`.

    Returns the figure meta. Nothing is written when the CSV is empty or
    malformed. The image format follows the output extension (png/svg).
    """
    if kind not in BUILDERS:
        raise SchemaError(f"unknown kind {kind!r}; choose from {sorted(BUILDERS)}")
    with open(csv_in) as fh:
        text = fh.read()
    fig, meta = BUILDERS[kind](text)
    try:
        fig.savefig(out)
    finally:
        plt.close(fig)
    return meta

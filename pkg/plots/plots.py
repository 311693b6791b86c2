#!/usr/bin/env python3
"""Render edgepart benchmark CSVs as figures.

Two figure families: performance plots (per-algorithm sorted quality-ratio
curves, 0 = best algorithm on that instance, 1 = failed) and scaling plots
(running time vs PE count, log-log, one line per instance). No statistics
are computed here beyond sorting; the CSVs carry the numbers.

Usage:
    python plots.py --kind performance --in ratios.csv --out perf.png
    python plots.py --kind scaling --in scale.csv --out scaling.png
"""

from __future__ import annotations

import argparse
import csv
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

FIGSIZE = (6.4, 4.2)
DPI = 110


def read_csv(path) -> list[dict]:
    with open(path, newline="") as f:
        rows = list(csv.DictReader(f))
    if not rows:
        raise ValueError(f"no data rows in {path}")
    return rows


def _require(rows: list[dict], columns: tuple[str, ...], path) -> None:
    missing = [c for c in columns if c not in rows[0]]
    if missing:
        raise ValueError(f"{path} is missing columns: {', '.join(missing)}")


def performance_series(rows: list[dict]) -> dict[str, list[float]]:
    """Ratios per algorithm, sorted ascending (the plotted curves)."""
    series: dict[str, list[float]] = {}
    for row in rows:
        series.setdefault(row["algorithm"], []).append(float(row["ratio"]))
    return {alg: sorted(vals) for alg, vals in sorted(series.items())}


def render_performance_plot(in_csv, out_path, title: str | None = None,
                            labels: dict[str, str] | None = None) -> None:
    rows = read_csv(in_csv)
    _require(rows, ("algorithm", "ratio"), in_csv)
    series = performance_series(rows)
    fig, ax = plt.subplots(figsize=FIGSIZE)
    for alg, vals in series.items():
        label = (labels or {}).get(alg, alg)
        ax.plot(range(1, len(vals) + 1), vals, marker="o", markersize=3.5,
                linewidth=1.3, label=label)
    ax.set_xlabel("instances (sorted per algorithm)")
    ax.set_ylabel("1 - best / algorithm")
    ax.set_ylim(-0.02, 1.02)
    ax.grid(True, alpha=0.3)
    ax.legend(loc="upper left", fontsize=8)
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(out_path, dpi=DPI)
    plt.close(fig)


def scaling_series(rows: list[dict], time_column: str
                   ) -> dict[str, list[tuple[int, float]]]:
    series: dict[str, list[tuple[int, float]]] = {}
    for row in rows:
        if not row.get(time_column):
            continue  # error rows carry no timings
        series.setdefault(row["instance"], []).append(
            (int(row["pes"]), float(row[time_column])))
    return {inst: sorted(pts) for inst, pts in sorted(series.items())}


def render_scaling_plot(in_csv, out_path, title: str | None = None,
                        time_column: str = "total_ms") -> None:
    rows = read_csv(in_csv)
    _require(rows, ("instance", "pes", time_column), in_csv)
    series = scaling_series(rows, time_column)
    if not any(series.values()):
        raise ValueError(f"no usable timing rows in {in_csv}")
    fig, ax = plt.subplots(figsize=FIGSIZE)
    ticks = sorted({p for pts in series.values() for p, _ in pts})
    for inst, pts in series.items():
        if not pts:
            continue
        ax.plot([p for p, _ in pts], [t for _, t in pts], marker="o",
                markersize=3.5, linewidth=1.3, label=inst)
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xticks(ticks)
    ax.get_xaxis().set_major_formatter(matplotlib.ticker.ScalarFormatter())
    ax.set_xlabel("PEs")
    ax.set_ylabel(time_column.replace("_", " "))
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(loc="best", fontsize=8)
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(out_path, dpi=DPI)
    plt.close(fig)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        description="Render edgepart benchmark CSVs as figures.")
    parser.add_argument("--kind", required=True,
                        choices=("performance", "scaling"))
    parser.add_argument("--in", dest="in_csv", required=True)
    parser.add_argument("--out", required=True)
    parser.add_argument("--title")
    parser.add_argument("--time-column", default="total_ms",
                        help="scaling plots: which timing column to draw")
    args = parser.parse_args(argv)
    try:
        if args.kind == "performance":
            render_performance_plot(args.in_csv, args.out, title=args.title)
        else:
            render_scaling_plot(args.in_csv, args.out, title=args.title,
                                time_column=args.time_column)
    except (OSError, ValueError, KeyError) as exc:
        print(f"plots: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

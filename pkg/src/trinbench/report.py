"""Batch report generation: renders the main assessment views to PNG
figures and writes the underlying series as CSV next to them.

Used by the ``report`` CLI subcommand; figures are deliberately plain
matplotlib so they stay readable in papers and terminals alike.
"""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .curves import (
    BinSpec,
    bandwidth_series,
    perf_conf_histogram,
    reliability_curve,
    rejection_curve,
    roc_curve,
    pr_curve,
    threshold_grid,
)
from .dataset import Dataset
from .errors import EngineError
from .metrics import auc, binary_metric, brier, confusion
from .trinary import CATEGORIES, OperatingPoint, trinary_summary

CATEGORY_COLORS = {
    "TP": "#2a7fbf",
    "TN": "#7fb2d9",
    "FP": "#d9730d",
    "FN": "#a63603",
    "Rejected": "#9a9a9a",
}


def _write_csv(path: Path, header: list[str], rows) -> None:
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def _save(fig, path: Path) -> None:
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def write_report(
    dataset: Dataset,
    out_dir: str | Path,
    *,
    classifiers: list[str] | None = None,
    operating_point: OperatingPoint = OperatingPoint(0.5, 0.5),
    bins: int = 10,
    grid_resolution: int = 20,
    arc_metric: str = "accuracy",
    arc_threshold: float = 0.5,
    bandwidths: tuple[float, ...] = (0.05, 0.1, 0.2),
) -> list[Path]:
    """Render the standard assessment report; returns the written paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    names = classifiers or [c.name for c in dataset.classifiers]
    clfs = [dataset.classifier(n) for n in names]
    written: list[Path] = []

    # summary metrics table
    rows = []
    for clf in clfs:
        c = confusion(dataset, clf, operating_point)
        row = [clf.name]
        for m in ("accuracy", "precision", "recall", "f1", "mcc"):
            mv = binary_metric(c, m)
            row.append(f"{mv.value:.6f}" if mv.defined else "")
        try:
            row.append(f"{auc(dataset, clf):.6f}")
        except EngineError:
            row.append("")
        try:
            row.append(f"{brier(dataset, clf):.6f}")
        except EngineError:
            row.append("")
        rows.append(row)
    path = out / "metrics.csv"
    _write_csv(
        path,
        ["classifier", "accuracy", "precision", "recall", "f1", "mcc", "auc", "brier"],
        rows,
    )
    written.append(path)

    # ROC / PR
    for kind, fn in (("roc", roc_curve), ("pr", pr_curve)):
        fig, ax = plt.subplots(figsize=(5, 4))
        rows = []
        for clf in clfs:
            try:
                series = fn(dataset, clf)
            except EngineError:
                continue
            xs = [p.x for p in series.points]
            ys = [p.y for p in series.points]
            ax.plot(xs, ys, label=clf.name, lw=1.5)
            rows += [
                [clf.name, p.x, p.y, "" if p.param is None else p.param, int(p.undefined)]
                for p in series.points
            ]
        if kind == "roc":
            ax.plot([0, 1], [0, 1], ls="--", c="gray", lw=0.8)
            ax.set_xlabel("false positive rate")
            ax.set_ylabel("true positive rate")
        else:
            ax.set_xlabel("recall")
            ax.set_ylabel("precision")
        ax.legend(fontsize=8)
        fig_path = out / f"{kind}.png"
        _save(fig, fig_path)
        csv_path = out / f"{kind}.csv"
        _write_csv(csv_path, ["classifier", "x", "y", "threshold", "undefined"], rows)
        written += [fig_path, csv_path]

    # reliability
    fig, ax = plt.subplots(figsize=(5, 4))
    rows = []
    for clf in clfs:
        bins_out = reliability_curve(dataset, clf, BinSpec(bins))
        pts = [(b.mean_score, b.value) for b in bins_out if not b.undefined]
        if pts:
            ax.plot(*zip(*pts), marker="o", ms=3, lw=1.2, label=clf.name)
        rows += [
            [clf.name, b.bin, b.lo, b.hi, b.mean_score, b.value, b.count, int(b.undefined)]
            for b in bins_out
        ]
    ax.plot([0, 1], [0, 1], ls="--", c="gray", lw=0.8)
    ax.set_xlabel("mean score")
    ax.set_ylabel("fraction positive")
    ax.legend(fontsize=8)
    fig_path = out / "reliability.png"
    _save(fig, fig_path)
    csv_path = out / "reliability.csv"
    _write_csv(
        csv_path,
        ["classifier", "bin", "lo", "hi", "mean_score", "value", "count", "undefined"],
        rows,
    )
    written += [fig_path, csv_path]

    # accuracy-rejection curve
    fig, ax = plt.subplots(figsize=(5, 4))
    rows = []
    for clf in clfs:
        series = rejection_curve(dataset, clf, arc_threshold, arc_metric)
        pts = [(p.x, p.y) for p in series.points if not p.undefined]
        if pts:
            ax.plot(*zip(*pts), lw=1.5, label=clf.name)
        rows += [[clf.name, p.x, p.y, p.param, int(p.undefined)] for p in series.points]
    ax.set_xlabel("rejection rate")
    ax.set_ylabel(arc_metric)
    ax.legend(fontsize=8)
    fig_path = out / "arc.png"
    _save(fig, fig_path)
    csv_path = out / "arc.csv"
    _write_csv(csv_path, ["classifier", "rejection_rate", arc_metric, "bandwidth", "undefined"], rows)
    written += [fig_path, csv_path]

    # bandwidth assessment (per classifier)
    for clf in clfs:
        assess = bandwidth_series(dataset, clf, list(bandwidths), arc_metric, 50)
        fig, ax = plt.subplots(figsize=(6, 4))
        ts = assess.thresholds
        ax.plot(ts, assess.center, lw=1.5, c="black", label=f"{arc_metric} (no rejection)")
        for band in assess.bands:
            ax.fill_between(
                ts, band.lower, band.upper, alpha=0.18, label=f"b = {band.bandwidth:g}"
            )
        ax.set_xlabel("decision threshold")
        ax.set_ylabel(arc_metric)
        ax.legend(fontsize=8)
        fig_path = out / f"bandwidth_{clf.name}.png"
        _save(fig, fig_path)
        rows = []
        for k, t in enumerate(ts):
            for band in assess.bands:
                rows.append(
                    [clf.name, t, band.bandwidth, assess.center[k], band.upper[k], band.lower[k]]
                )
        csv_path = out / f"bandwidth_{clf.name}.csv"
        _write_csv(csv_path, ["classifier", "threshold", "bandwidth", "center", "upper", "lower"], rows)
        written += [fig_path, csv_path]

    # dual-threshold heatmap (per classifier)
    for clf in clfs:
        cells = threshold_grid(dataset, clf, arc_metric, grid_resolution)
        fig, ax = plt.subplots(figsize=(5.5, 4.5))
        xs = [c.lower for c in cells]
        ys = [c.upper for c in cells]
        vals = [c.value for c in cells]
        sizes = [6 + 90 * c.coverage for c in cells]
        sc = ax.scatter(
            xs, ys, c=vals, s=sizes, cmap="viridis",
            vmin=min(vals, default=0), vmax=max(vals, default=1),
        )
        fig.colorbar(sc, ax=ax, label=arc_metric)
        ax.set_xlabel("lower threshold")
        ax.set_ylabel("upper threshold")
        fig_path = out / f"heatmap_{clf.name}.png"
        _save(fig, fig_path)
        csv_path = out / f"heatmap_{clf.name}.csv"
        _write_csv(
            csv_path,
            ["classifier", "lower", "upper", "value", "coverage", "undefined"],
            [[clf.name, c.lower, c.upper, c.value, c.coverage, int(c.undefined)] for c in cells],
        )
        written += [fig_path, csv_path]

    # performance-confidence histogram (per classifier)
    for clf in clfs:
        hist = perf_conf_histogram(dataset, clf, operating_point, BinSpec(bins))
        fig, ax = plt.subplots(figsize=(6, 4))
        bottoms = np.zeros(len(hist))
        centers = [(b.lo + b.hi) / 2 for b in hist]
        width = (hist[0].hi - hist[0].lo) * 0.9 if hist else 0.09
        for cat in CATEGORIES:
            counts = np.array([b.counts[cat] for b in hist], dtype=float)
            ax.bar(
                centers, counts, width=width, bottom=bottoms,
                color=CATEGORY_COLORS[cat], label=cat,
            )
            bottoms += counts
        ax.set_xlabel("score")
        ax.set_ylabel("items")
        ax.legend(fontsize=8)
        fig_path = out / f"perf_conf_{clf.name}.png"
        _save(fig, fig_path)
        csv_path = out / f"perf_conf_{clf.name}.csv"
        _write_csv(
            csv_path,
            ["classifier", "bin", "lo", "hi"] + list(CATEGORIES),
            [
                [clf.name, b.bin, b.lo, b.hi] + [b.counts[c] for c in CATEGORIES]
                for b in hist
            ],
        )
        written += [fig_path, csv_path]

    # trinary summary across classifiers
    fig, ax = plt.subplots(figsize=(1.2 + 0.9 * len(clfs), 4))
    rows = []
    for k, clf in enumerate(clfs):
        counts = trinary_summary(dataset, clf, operating_point)
        bottom = 0.0
        for cat, value in (
            ("TP", counts.tp), ("TN", counts.tn), ("Rejected", counts.rejected),
            ("FP", counts.fp), ("FN", counts.fn),
        ):
            ax.bar(k, value, bottom=bottom, color=CATEGORY_COLORS[cat], width=0.6)
            bottom += value
        rows.append(
            [clf.name, counts.tp, counts.fp, counts.tn, counts.fn, counts.rejected]
        )
    ax.set_xticks(range(len(clfs)), [c.name for c in clfs], rotation=30, ha="right")
    ax.set_ylabel("items")
    fig_path = out / "trinary.png"
    _save(fig, fig_path)
    csv_path = out / "trinary.csv"
    _write_csv(csv_path, ["classifier", "tp", "fp", "tn", "fn", "rejected"], rows)
    written += [fig_path, csv_path]

    return written

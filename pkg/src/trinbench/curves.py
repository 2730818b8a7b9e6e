"""Curve and grid artifacts: ROC, precision/recall, reliability,
performance-confidence histogram, rejection curve, bandwidth assessment,
dual-threshold heatmap, scatter density, and feature histograms.

All sweeps are exact counting over score order; undefined values carry an
explicit flag instead of being dropped so clients can render gaps honestly.
Score bins are equal width over [0, 1]: bin k is [k/count, (k+1)/count),
with the last bin closed at 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dataset import ClassifierResult, Dataset
from .errors import InvalidArgumentError, UndefinedCurveError
from .metrics import BINARY_METRICS, metric_from_counts
from .selections import Predicate, score_bin_predicate
from .trinary import CATEGORIES, OperatingPoint, outcome_codes


@dataclass(frozen=True)
class BinSpec:
    """Equal-width binning of the score domain [0, 1]."""

    count: int = 10

    def __post_init__(self):
        if self.count < 1:
            raise InvalidArgumentError("bin count must be >= 1")

    @property
    def edges(self) -> np.ndarray:
        # arange/count keeps each edge the correctly rounded double of k/count
        return np.arange(self.count + 1) / self.count

    def indices(self, values: np.ndarray) -> np.ndarray:
        idx = np.searchsorted(self.edges, values, side="right") - 1
        return np.clip(idx, 0, self.count - 1)


@dataclass(frozen=True)
class CurvePoint:
    x: float
    y: float
    param: float | None = None
    undefined: bool = False

    def to_wire(self) -> dict:
        return {"x": self.x, "y": self.y, "param": self.param, "undefined": self.undefined}


@dataclass
class CurveSeries:
    label: str
    points: list[CurvePoint]
    kind: str = ""

    def to_wire(self) -> dict:
        return {
            "label": self.label,
            "kind": self.kind,
            "points": [p.to_wire() for p in self.points],
        }


@dataclass(frozen=True)
class HeatmapCell:
    lower: float
    upper: float
    value: float
    coverage: float
    undefined: bool = False

    def to_wire(self) -> dict:
        return {
            "lower": self.lower,
            "upper": self.upper,
            "value": self.value,
            "coverage": self.coverage,
            "undefined": self.undefined,
        }


# -- shared counting helpers --------------------------------------------------


def _scoped_scores(dataset: Dataset, classifier, scope):
    clf = dataset.classifier(classifier) if isinstance(classifier, str) else classifier
    mask = dataset.scope_mask(scope)
    return clf, dataset.score_array(clf)[mask], dataset.labels_positive[mask], mask


def _below_counts(thresholds: np.ndarray, pos_sorted: np.ndarray, neg_sorted: np.ndarray):
    """(#pos, #neg) strictly below each threshold (score < t)."""
    pos_below = np.searchsorted(pos_sorted, thresholds, side="left")
    neg_below = np.searchsorted(neg_sorted, thresholds, side="left")
    return pos_below.astype(np.int64), neg_below.astype(np.int64)


def _band_confusion(lowers, uppers, pos_sorted, neg_sorted):
    """Vectorized confusion counts for bands: positive at s >= U, negative
    at s < L, rejected between."""
    n_pos, n_neg = pos_sorted.size, neg_sorted.size
    fn, tn = _below_counts(np.asarray(lowers, dtype=np.float64), pos_sorted, neg_sorted)
    pos_below_u, neg_below_u = _below_counts(
        np.asarray(uppers, dtype=np.float64), pos_sorted, neg_sorted
    )
    tp = n_pos - pos_below_u
    fp = n_neg - neg_below_u
    rej_pos = n_pos - tp - fn
    rej_neg = n_neg - fp - tn
    return tp, fp, tn, fn, rej_pos, rej_neg


# -- trade-off curves ---------------------------------------------------------


def roc_curve(dataset: Dataset, classifier, scope=None) -> CurveSeries:
    """ROC points (FPR, TPR) at every distinct score threshold (rule
    s >= threshold -> positive), plus the (0, 0) endpoint."""
    clf, scores, positive, _ = _scoped_scores(dataset, classifier, scope)
    n_pos = int(positive.sum())
    n_neg = int(positive.size) - n_pos
    if n_pos == 0 or n_neg == 0:
        raise UndefinedCurveError("ROC curve needs at least one item of each class")
    pos_sorted = np.sort(scores[positive])
    neg_sorted = np.sort(scores[~positive])
    thresholds = np.unique(scores)[::-1]  # descending -> FPR nondecreasing
    pos_below, neg_below = _below_counts(thresholds, pos_sorted, neg_sorted)
    tpr = (n_pos - pos_below) / n_pos
    fpr = (n_neg - neg_below) / n_neg
    points = [CurvePoint(0.0, 0.0, None)]
    points += [
        CurvePoint(float(x), float(y), float(t))
        for x, y, t in zip(fpr, tpr, thresholds)
    ]
    return CurveSeries(label=clf.name, points=points, kind="roc")


def pr_curve(dataset: Dataset, classifier, scope=None) -> CurveSeries:
    """Precision/recall points at every distinct score threshold.

    The zero-predicted-positives endpoint has undefined precision and is
    rendered with the nearest defined value.
    """
    clf, scores, positive, _ = _scoped_scores(dataset, classifier, scope)
    n_pos = int(positive.sum())
    n_neg = int(positive.size) - n_pos
    if n_pos == 0 or n_neg == 0:
        raise UndefinedCurveError("PR curve needs at least one item of each class")
    pos_sorted = np.sort(scores[positive])
    neg_sorted = np.sort(scores[~positive])
    thresholds = np.unique(scores)[::-1]
    pos_below, neg_below = _below_counts(thresholds, pos_sorted, neg_sorted)
    tp = n_pos - pos_below
    predicted = tp + (n_neg - neg_below)
    recall = tp / n_pos
    precision = np.divide(
        tp, predicted, out=np.zeros(tp.shape, dtype=np.float64), where=predicted > 0
    )
    first_defined = float(precision[0]) if thresholds.size else 1.0
    points = [CurvePoint(0.0, first_defined, None, undefined=True)]
    points += [
        CurvePoint(float(r), float(p), float(t), undefined=bool(pred == 0))
        for r, p, t, pred in zip(recall, precision, thresholds, predicted)
    ]
    return CurveSeries(label=clf.name, points=points, kind="pr")


def rejection_curve(
    dataset: Dataset,
    classifier,
    threshold: float,
    metric: str = "accuracy",
    scope=None,
    steps: int = 101,
) -> CurveSeries:
    """Metric on accepted items versus rejection rate, for symmetric bands
    of growing bandwidth around a fixed decision threshold.

    Bandwidth sweeps ``steps`` values from 0 to max(t, 1-t); duplicate
    rejection rates keep the largest-bandwidth point.
    """
    if not (0.0 <= threshold <= 1.0):
        raise InvalidArgumentError("decision threshold must lie in [0, 1]")
    if metric not in BINARY_METRICS:
        raise InvalidArgumentError(f"unknown metric {metric!r}", code="UNKNOWN_METRIC")
    if steps < 1:
        raise InvalidArgumentError("steps must be >= 1")
    clf, scores, positive, _ = _scoped_scores(dataset, classifier, scope)
    pos_sorted = np.sort(scores[positive])
    neg_sorted = np.sort(scores[~positive])
    total = scores.size
    bandwidths = np.linspace(0.0, max(threshold, 1.0 - threshold), steps)
    lowers = np.clip(threshold - bandwidths, 0.0, 1.0)
    uppers = np.clip(threshold + bandwidths, 0.0, 1.0)
    tp, fp, tn, fn, rej_pos, rej_neg = _band_confusion(
        lowers, uppers, pos_sorted, neg_sorted
    )
    values, defined = metric_from_counts(metric, tp, fp, tn, fn)
    by_x: dict[float, CurvePoint] = {}
    for k, b in enumerate(bandwidths):
        if total:
            x = float((rej_pos[k] + rej_neg[k]) / total)
            pt = CurvePoint(x, float(values[k]), float(b), undefined=not bool(defined[k]))
        else:
            pt = CurvePoint(0.0, 0.0, float(b), undefined=True)
        by_x[pt.x] = pt  # larger b seen later wins
    points = [by_x[x] for x in sorted(by_x)]
    return CurveSeries(label=clf.name, points=points, kind="arc")


@dataclass
class BandwidthBand:
    bandwidth: float
    upper: list[float]
    lower: list[float]
    upper_defined: list[bool]
    lower_defined: list[bool]

    def to_wire(self) -> dict:
        return {
            "bandwidth": self.bandwidth,
            "upper": [
                {"value": v, "undefined": not d}
                for v, d in zip(self.upper, self.upper_defined)
            ],
            "lower": [
                {"value": v, "undefined": not d}
                for v, d in zip(self.lower, self.lower_defined)
            ],
        }


@dataclass
class BandwidthAssessment:
    label: str
    thresholds: list[float]
    center: list[float]
    center_defined: list[bool]
    bands: list[BandwidthBand] = field(default_factory=list)

    def to_wire(self) -> dict:
        return {
            "label": self.label,
            "thresholds": self.thresholds,
            "center": [
                {"value": v, "undefined": not d}
                for v, d in zip(self.center, self.center_defined)
            ],
            "bands": [b.to_wire() for b in self.bands],
        }


def bandwidth_series(
    dataset: Dataset,
    classifier,
    bandwidths,
    metric: str = "accuracy",
    resolution: int = 100,
    scope=None,
) -> BandwidthAssessment:
    """Per-threshold metric with optimistic/pessimistic marks per bandwidth.

    For threshold t and bandwidth b the band is (t-b, t+b) clamped to [0, 1];
    the upper mark counts rejected items as correct, the lower mark counts
    them as incorrect, and the center is the bare-threshold metric (b = 0).
    For metrics other than accuracy the marks reassign each rejected item to
    its correct (upper) or incorrect (lower) confusion cell, which reduces to
    the accuracy policies when the metric is accuracy.
    """
    if metric not in BINARY_METRICS:
        raise InvalidArgumentError(f"unknown metric {metric!r}", code="UNKNOWN_METRIC")
    if resolution < 1:
        raise InvalidArgumentError("resolution must be >= 1")
    bandwidths = [float(b) for b in bandwidths]
    if any(b < 0 for b in bandwidths):
        raise InvalidArgumentError("bandwidths must be >= 0")
    clf, scores, positive, _ = _scoped_scores(dataset, classifier, scope)
    pos_sorted = np.sort(scores[positive])
    neg_sorted = np.sort(scores[~positive])
    thresholds = np.arange(resolution + 1) / resolution

    tp, fp, tn, fn, _, _ = _band_confusion(thresholds, thresholds, pos_sorted, neg_sorted)
    center, center_ok = metric_from_counts(metric, tp, fp, tn, fn)
    out = BandwidthAssessment(
        label=clf.name,
        thresholds=[float(t) for t in thresholds],
        center=[float(v) for v in center],
        center_defined=[bool(d) for d in center_ok],
    )
    for b in bandwidths:
        lowers = np.clip(thresholds - b, 0.0, 1.0)
        uppers = np.clip(thresholds + b, 0.0, 1.0)
        tp, fp, tn, fn, rej_pos, rej_neg = _band_confusion(
            lowers, uppers, pos_sorted, neg_sorted
        )
        hi, hi_ok = metric_from_counts(metric, tp + rej_pos, fp, tn + rej_neg, fn)
        lo, lo_ok = metric_from_counts(metric, tp, fp + rej_neg, tn, fn + rej_pos)
        out.bands.append(
            BandwidthBand(
                bandwidth=b,
                upper=[float(v) for v in hi],
                lower=[float(v) for v in lo],
                upper_defined=[bool(d) for d in hi_ok],
                lower_defined=[bool(d) for d in lo_ok],
            )
        )
    return out


def threshold_grid(
    dataset: Dataset,
    classifier,
    metric: str = "accuracy",
    resolution: int = 20,
    scope=None,
) -> list[HeatmapCell]:
    """Metric and coverage for every lower <= upper pair on a
    (resolution+1)^2 threshold lattice."""
    if metric not in BINARY_METRICS:
        raise InvalidArgumentError(f"unknown metric {metric!r}", code="UNKNOWN_METRIC")
    if resolution < 1:
        raise InvalidArgumentError("resolution must be >= 1")
    clf, scores, positive, _ = _scoped_scores(dataset, classifier, scope)
    pos_sorted = np.sort(scores[positive])
    neg_sorted = np.sort(scores[~positive])
    total = scores.size
    lattice = np.arange(resolution + 1) / resolution
    pos_below, neg_below = _below_counts(lattice, pos_sorted, neg_sorted)

    li, ui = np.triu_indices(resolution + 1)  # all pairs with lower <= upper
    tn = neg_below[li]
    fn = pos_below[li]
    tp = pos_sorted.size - pos_below[ui]
    fp = neg_sorted.size - neg_below[ui]
    values, defined = metric_from_counts(metric, tp, fp, tn, fn)
    accepted = tp + fp + tn + fn
    coverage = accepted / total if total else np.zeros(accepted.shape)
    return [
        HeatmapCell(
            lower=float(lattice[li[k]]),
            upper=float(lattice[ui[k]]),
            value=float(values[k]),
            coverage=float(coverage[k]),
            undefined=not bool(defined[k]),
        )
        for k in range(li.size)
    ]


# -- score-binned views -------------------------------------------------------


@dataclass
class ReliabilityBin:
    bin: int
    lo: float
    hi: float
    mean_score: float
    value: float
    count: int
    undefined: bool

    def to_wire(self) -> dict:
        return {
            "x": self.mean_score,
            "y": self.value,
            "param": float(self.bin),
            "undefined": self.undefined,
            "lo": self.lo,
            "hi": self.hi,
            "count": self.count,
        }


def reliability_curve(
    dataset: Dataset,
    classifier,
    bins: BinSpec = BinSpec(),
    mode: str = "fraction-positive",
    scope=None,
    op: OperatingPoint | None = None,
) -> list[ReliabilityBin]:
    """Per-score-bin calibration values.

    fraction-positive -- share of bin members with the positive label (the
    standard calibration curve; the identity line means calibrated).
    percent-correct   -- share of the bin's accepted items predicted
    correctly at ``op`` (rejected items leave both numerator and denominator).
    """
    if mode not in ("fraction-positive", "percent-correct"):
        raise InvalidArgumentError(f"unknown reliability mode {mode!r}")
    if mode == "percent-correct" and op is None:
        raise InvalidArgumentError("percent-correct mode needs an operating point")
    clf, scores, positive, _ = _scoped_scores(dataset, classifier, scope)
    idx = bins.indices(scores)
    count = np.bincount(idx, minlength=bins.count)
    score_sum = np.bincount(idx, weights=scores, minlength=bins.count)
    if mode == "fraction-positive":
        num = np.bincount(idx[positive], minlength=bins.count)
        den = count
    else:
        codes = outcome_codes(scores, positive, op)
        correct = (codes == CATEGORIES.index("TP")) | (codes == CATEGORIES.index("TN"))
        accepted = codes != CATEGORIES.index("Rejected")
        num = np.bincount(idx[correct], minlength=bins.count)
        den = np.bincount(idx[accepted], minlength=bins.count)
    edges = bins.edges
    out = []
    for k in range(bins.count):
        defined = den[k] > 0
        out.append(
            ReliabilityBin(
                bin=k,
                lo=float(edges[k]),
                hi=float(edges[k + 1]),
                mean_score=float(score_sum[k] / count[k]) if count[k] else float(
                    (edges[k] + edges[k + 1]) / 2
                ),
                value=float(num[k] / den[k]) if defined else 0.0,
                count=int(count[k]),
                undefined=not bool(defined),
            )
        )
    return out


@dataclass
class PerfConfBin:
    bin: int
    lo: float
    hi: float
    counts: dict[str, int]
    predicate_bin: Predicate

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def to_wire(self) -> dict:
        return {
            "bin": self.bin,
            "lo": self.lo,
            "hi": self.hi,
            "counts": self.counts,
            "total": self.total,
        }


def perf_conf_histogram(
    dataset: Dataset,
    classifier,
    op: OperatingPoint,
    bins: BinSpec = BinSpec(),
    scope=None,
) -> list[PerfConfBin]:
    """Stacked per-score-bin outcome counts; every (bin, category) segment
    is addressable as a score-range + outcome predicate pair."""
    clf, scores, positive, _ = _scoped_scores(dataset, classifier, scope)
    idx = bins.indices(scores)
    codes = outcome_codes(scores, positive, op)
    flat = np.bincount(idx * 5 + codes, minlength=bins.count * 5).reshape(bins.count, 5)
    edges = bins.edges
    return [
        PerfConfBin(
            bin=k,
            lo=float(edges[k]),
            hi=float(edges[k + 1]),
            counts={cat: int(flat[k, c]) for c, cat in enumerate(CATEGORIES)},
            predicate_bin=score_bin_predicate(clf.name, k, bins.count),
        )
        for k in range(bins.count)
    ]


# -- feature / scatter views --------------------------------------------------


@dataclass
class FeatureBar:
    index: int
    label: str
    count: int
    predicate: Predicate
    lo: float | None = None
    hi: float | None = None

    def to_wire(self) -> dict:
        body = {
            "index": self.index,
            "label": self.label,
            "count": self.count,
            "predicate": self.predicate.to_wire(),
        }
        if self.lo is not None:
            body["lo"] = self.lo
            body["hi"] = self.hi
        return body


def feature_histogram(
    dataset: Dataset,
    feature: str,
    bins: int = 10,
    scope=None,
) -> list[FeatureBar]:
    """Histogram over a feature: equal-width bins over the full dataset's
    observed range for numeric features, one bar per category otherwise.
    Counts are restricted to the scope (bars stay stable across selections);
    absent values are excluded."""
    kind, col = dataset.feature_column(feature)
    mask = dataset.scope_mask(scope)
    if kind == "categorical":
        categories = sorted({str(v) for v in col if v is not None})
        counts = {c: 0 for c in categories}
        for v, m in zip(col, mask):
            if m and v is not None:
                counts[str(v)] += 1
        return [
            FeatureBar(
                index=k,
                label=c,
                count=counts[c],
                predicate=Predicate("feature-equals", feature=feature, value=c),
            )
            for k, c in enumerate(categories)
        ]
    if bins < 1:
        raise InvalidArgumentError("bin count must be >= 1")
    present_all = np.isfinite(col)
    if not present_all.any():
        return []
    mn, mx = float(col[present_all].min()), float(col[present_all].max())
    values = col[mask & present_all]
    if mn == mx:
        idx = np.zeros(values.size, dtype=np.int64)
        edges = np.array([mn] * (bins + 1))
    else:
        edges = mn + (mx - mn) * (np.arange(bins + 1) / bins)
        idx = np.clip(np.searchsorted(edges, values, side="right") - 1, 0, bins - 1)
    counts = np.bincount(idx, minlength=bins)
    return [
        FeatureBar(
            index=k,
            label=f"[{edges[k]:g}, {edges[k + 1]:g}{']' if k == bins - 1 else ')'}",
            count=int(counts[k]),
            predicate=Predicate(
                "feature-range", feature=feature, lo=float(edges[k]), hi=float(edges[k + 1])
            ),
            lo=float(edges[k]),
            hi=float(edges[k + 1]),
        )
        for k in range(bins)
    ]


@dataclass
class ScatterGrid:
    x_var: str
    y_var: str
    x_edges: list[float]
    y_edges: list[float]
    counts: list[list[int]]  # counts[ix][iy]
    total: int
    points: dict[str, list[dict]] = field(default_factory=dict)

    def to_wire(self) -> dict:
        return {
            "x_var": self.x_var,
            "y_var": self.y_var,
            "x_edges": self.x_edges,
            "y_edges": self.y_edges,
            "counts": self.counts,
            "total": self.total,
            "points": self.points,
        }


def _variable_values(dataset: Dataset, classifiers, var: str) -> np.ndarray:
    """Resolve "score:<classifier>" or "feature:<name>" to numeric values."""
    if var.startswith("score:"):
        name = var[len("score:"):]
        clf = (classifiers or {}).get(name)
        if clf is None:
            clf = dataset.classifier(name)
        return dataset.score_array(clf)
    if var.startswith("feature:"):
        name = var[len("feature:"):]
        kind, col = dataset.feature_column(name)
        if kind != "numeric":
            raise InvalidArgumentError(
                f"feature {name!r} is not numeric", code="NON_NUMERIC_FEATURE"
            )
        return col
    raise InvalidArgumentError(
        f'variable {var!r} must be "score:<classifier>" or "feature:<name>"'
    )


def scatter_bins(
    dataset: Dataset,
    x_var: str,
    y_var: str,
    resolution: tuple[int, int] = (20, 20),
    scope=None,
    overlays=None,
    classifiers=None,
) -> ScatterGrid:
    """Binned density over two numeric variables, with exact coordinates
    for overlay selections (slot A/B) so small sets stay visible."""
    nx, ny = resolution
    if nx < 1 or ny < 1:
        raise InvalidArgumentError("scatter resolution must be >= 1 on both axes")
    xs = _variable_values(dataset, classifiers, x_var)
    ys = _variable_values(dataset, classifiers, y_var)
    mask = dataset.scope_mask(scope)
    valid = mask & np.isfinite(xs) & np.isfinite(ys)

    def axis_edges(values, n):
        if values.size == 0:
            return np.arange(n + 1, dtype=np.float64)
        mn, mx = float(values.min()), float(values.max())
        if mn == mx:
            return np.array([mn] * (n + 1))
        return mn + (mx - mn) * (np.arange(n + 1) / n)

    def axis_index(values, edges, n):
        if edges[0] == edges[-1]:
            return np.zeros(values.size, dtype=np.int64)
        return np.clip(np.searchsorted(edges, values, side="right") - 1, 0, n - 1)

    x_edges = axis_edges(xs[valid], nx)
    y_edges = axis_edges(ys[valid], ny)
    counts = np.zeros((nx, ny), dtype=np.int64)
    if valid.any():
        ix = axis_index(xs[valid], x_edges, nx)
        iy = axis_index(ys[valid], y_edges, ny)
        np.add.at(counts, (ix, iy), 1)

    points: dict[str, list[dict]] = {}
    for slot, sel_mask in (overlays or {}).items():
        rows = np.flatnonzero(sel_mask & valid)
        points[slot] = [
            {"id": dataset.ids[int(r)], "x": float(xs[r]), "y": float(ys[r])}
            for r in rows
        ]
    return ScatterGrid(
        x_var=x_var,
        y_var=y_var,
        x_edges=[float(e) for e in x_edges],
        y_edges=[float(e) for e in y_edges],
        counts=counts.tolist(),
        total=int(valid.sum()),
        points=points,
    )

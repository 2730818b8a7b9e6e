"""Performance metrics over outcome tallies and scores.

Binary metrics (accuracy, precision, recall, F1, MCC) are computed from
weighted confusion tallies of the accepted items; rejected items enter only
through the explicit rejected-item policies of ``binary_metric``. A metric
whose denominator vanishes yields value 0 with ``defined=False`` rather than
an exception, so threshold sweeps stay total.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import ClassifierResult, Dataset
from .errors import (
    InvalidArgumentError,
    UndefinedMetricError,
    UnsupportedPolicyError,
)
from .trinary import OperatingPoint, outcome_codes

BINARY_METRICS = ("accuracy", "precision", "recall", "f1", "mcc")
ALL_METRICS = BINARY_METRICS + ("auc", "brier")
POLICIES = ("exclude", "as-correct", "as-incorrect")


@dataclass
class WeightedConfusion:
    """Weight-sums of the four accepted categories plus the rejected mass."""

    tp: float = 0.0
    fp: float = 0.0
    tn: float = 0.0
    fn: float = 0.0
    rejected: float = 0.0

    def to_wire(self) -> dict:
        return {
            "tp": self.tp,
            "fp": self.fp,
            "tn": self.tn,
            "fn": self.fn,
            "rejected": self.rejected,
        }


@dataclass(frozen=True)
class MetricValue:
    """A metric result with its definedness flag (0 when undefined)."""

    value: float
    defined: bool = True

    def __float__(self) -> float:
        return self.value

    def to_wire(self) -> dict:
        return {"value": self.value, "defined": self.defined}


def confusion(
    dataset: Dataset,
    classifier: ClassifierResult | str,
    op: OperatingPoint,
    scope=None,
    weights=None,
) -> WeightedConfusion:
    """Per-category weight sums at an operating point over a scope."""
    clf = dataset.classifier(classifier) if isinstance(classifier, str) else classifier
    mask = dataset.scope_mask(scope)
    codes = outcome_codes(
        dataset.score_array(clf)[mask], dataset.labels_positive[mask], op
    )
    sums = np.bincount(codes, weights=dataset.weight_array(weights)[mask], minlength=5)
    return WeightedConfusion(
        tp=float(sums[0]), fp=float(sums[1]), tn=float(sums[2]),
        fn=float(sums[3]), rejected=float(sums[4]),
    )


def metric_from_counts(metric: str, tp, fp, tn, fn):
    """Vectorized metric over confusion counts (rejected mass excluded).

    Accepts scalars or same-shape arrays; returns ``(values, defined)``.
    Undefined entries (zero denominator) carry value 0.
    """
    tp = np.asarray(tp, dtype=np.float64)
    fp = np.asarray(fp, dtype=np.float64)
    tn = np.asarray(tn, dtype=np.float64)
    fn = np.asarray(fn, dtype=np.float64)
    with np.errstate(divide="ignore", invalid="ignore"):
        if metric == "accuracy":
            den = tp + tn + fp + fn
            value, defined = _safe_div(tp + tn, den)
        elif metric == "precision":
            value, defined = _safe_div(tp, tp + fp)
        elif metric == "recall":
            value, defined = _safe_div(tp, tp + fn)
        elif metric == "f1":
            p, p_ok = _safe_div(tp, tp + fp)
            r, r_ok = _safe_div(tp, tp + fn)
            value, sum_ok = _safe_div(2.0 * p * r, p + r)
            defined = p_ok & r_ok & sum_ok
            value = np.where(defined, value, 0.0)
        elif metric == "mcc":
            den = np.sqrt((tp + fp) * (tp + fn) * (tn + fp) * (tn + fn))
            value, defined = _safe_div(tp * tn - fp * fn, den)
        else:
            raise InvalidArgumentError(
                f"unknown metric {metric!r}", code="UNKNOWN_METRIC"
            )
    return value, defined


def _safe_div(num, den):
    den = np.asarray(den, dtype=np.float64)
    defined = den != 0.0
    value = np.divide(num, den, out=np.zeros_like(den), where=defined)
    return value, defined


def binary_metric(
    c: "WeightedConfusion", metric: str, policy: str = "exclude"
) -> MetricValue:
    """Evaluate a binary metric on a confusion tally under a rejected policy.

    exclude      -- formulas over accepted tallies only.
    as-correct   -- rejected counted correct (accuracy only).
    as-incorrect -- rejected counted incorrect (accuracy only).
    """
    if metric not in BINARY_METRICS:
        raise InvalidArgumentError(f"unknown metric {metric!r}", code="UNKNOWN_METRIC")
    if policy not in POLICIES:
        raise InvalidArgumentError(f"unknown policy {policy!r}", code="UNKNOWN_POLICY")
    if policy != "exclude":
        if metric != "accuracy":
            raise UnsupportedPolicyError(
                f"policy {policy!r} is only defined for accuracy"
            )
        den = c.tp + c.tn + c.fp + c.fn + c.rejected
        num = c.tp + c.tn + (c.rejected if policy == "as-correct" else 0.0)
        if den == 0.0:
            return MetricValue(0.0, defined=False)
        return MetricValue(num / den, defined=True)
    value, defined = metric_from_counts(metric, c.tp, c.fp, c.tn, c.fn)
    return MetricValue(float(value), defined=bool(defined))


def auc(dataset: Dataset, classifier: ClassifierResult | str, scope=None) -> float:
    """Area under the ROC curve, ties counted half.

    Equals the probability that a random positive outscores a random
    negative plus half the tie probability; computed by exact integer pair
    counting over distinct score values.
    """
    clf = dataset.classifier(classifier) if isinstance(classifier, str) else classifier
    mask = dataset.scope_mask(scope)
    scores = dataset.score_array(clf)[mask]
    positive = dataset.labels_positive[mask]
    n_pos = int(positive.sum())
    n_neg = int(positive.size - n_pos)
    if n_pos == 0 or n_neg == 0:
        raise UndefinedMetricError("AUC needs at least one item of each class")
    uniq, inverse = np.unique(scores, return_inverse=True)
    pos_per = np.bincount(inverse[positive], minlength=uniq.size).astype(np.int64)
    neg_per = np.bincount(inverse[~positive], minlength=uniq.size).astype(np.int64)
    neg_below = np.concatenate(([0], np.cumsum(neg_per)[:-1]))
    wins = int((pos_per * neg_below).sum())
    ties = int((pos_per * neg_per).sum())
    return (wins + 0.5 * ties) / (n_pos * n_neg)


def brier(
    dataset: Dataset,
    classifier: ClassifierResult | str,
    scope=None,
    weights=None,
) -> float:
    """Weighted mean squared error between scores and 0/1 labels."""
    clf = dataset.classifier(classifier) if isinstance(classifier, str) else classifier
    mask = dataset.scope_mask(scope)
    scores = dataset.score_array(clf)[mask]
    y = dataset.labels_positive[mask].astype(np.float64)
    w = dataset.weight_array(weights)[mask]
    total = float(w.sum())
    if scores.size == 0 or total == 0.0:
        raise UndefinedMetricError("Brier score needs a non-empty weighted scope")
    return float((w * (scores - y) ** 2).sum() / total)


def combine_weights(dataset: Dataset, weighted_selections) -> np.ndarray:
    """Multiplicative combination of selection weights.

    Each item's weight is the product of the weights of every selection
    containing it; items in no selection keep weight 1. ``weighted_selections``
    is an iterable of (members, weight) where members is a mask or id set.
    """
    out = np.ones(dataset.size, dtype=np.float64)
    for members, weight in weighted_selections:
        w = float(weight)
        if w <= 0.0:
            raise InvalidArgumentError("selection weights must be positive")
        out[dataset.scope_mask(members)] *= w
    return out

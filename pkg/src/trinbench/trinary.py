"""Dual-threshold (trinary) classification: operating points, outcome
categories, summaries, and classifiers frozen at a fixed operating point.

Decision rule: predict positive iff score >= upper; predict negative iff
score < lower; reject iff lower <= score < upper. With lower == upper the
rejection band is empty and the rule reduces to the usual ``score >= t``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Collection

import numpy as np

from .dataset import KIND_DERIVED, ClassifierResult, Dataset
from .errors import ConflictError, InvalidArgumentError

CATEGORIES = ("TP", "FP", "TN", "FN", "Rejected")
_CAT_INDEX = {c: k for k, c in enumerate(CATEGORIES)}


@dataclass(frozen=True)
class OperatingPoint:
    """Pair of score thresholds (lower, upper) with 0 <= lower <= upper <= 1."""

    lower: float
    upper: float

    def __post_init__(self):
        if not (0.0 <= self.lower <= self.upper <= 1.0):
            raise InvalidArgumentError(
                f"operating point must satisfy 0 <= lower <= upper <= 1, "
                f"got ({self.lower}, {self.upper})",
                code="INVALID_OPERATING_POINT",
            )

    @property
    def center(self) -> float:
        return (self.lower + self.upper) / 2.0

    @property
    def bandwidth(self) -> float:
        return (self.upper - self.lower) / 2.0

    @classmethod
    def from_center(cls, center: float, bandwidth: float) -> "OperatingPoint":
        """Symmetric band around a decision threshold, clamped to [0, 1]."""
        return cls(max(0.0, center - bandwidth), min(1.0, center + bandwidth))

    def to_wire(self) -> dict:
        return {"lower": self.lower, "upper": self.upper}


@dataclass
class TrinaryCounts:
    """Weighted tallies of the five outcome categories."""

    tp: float = 0.0
    fp: float = 0.0
    tn: float = 0.0
    fn: float = 0.0
    rejected: float = 0.0

    @property
    def total(self) -> float:
        return self.tp + self.fp + self.tn + self.fn + self.rejected

    @property
    def accepted(self) -> float:
        return self.tp + self.fp + self.tn + self.fn

    def to_wire(self) -> dict:
        return {
            "tp": self.tp,
            "fp": self.fp,
            "tn": self.tn,
            "fn": self.fn,
            "rejected": self.rejected,
            "total": self.total,
        }


def classify(score: float, positive_label: bool, op: OperatingPoint) -> str:
    """Outcome category for one (score, label) pair at an operating point."""
    if not (0.0 <= score <= 1.0):
        raise InvalidArgumentError(f"score {score} outside [0, 1]")
    if score >= op.upper:
        return "TP" if positive_label else "FP"
    if score < op.lower:
        return "FN" if positive_label else "TN"
    return "Rejected"


def outcome_codes(
    scores: np.ndarray, positive: np.ndarray, op: OperatingPoint
) -> np.ndarray:
    """Vectorized outcome categories as indexes into CATEGORIES."""
    pred_pos = scores >= op.upper
    pred_neg = scores < op.lower
    codes = np.full(scores.shape, _CAT_INDEX["Rejected"], dtype=np.int8)
    codes[pred_pos & positive] = _CAT_INDEX["TP"]
    codes[pred_pos & ~positive] = _CAT_INDEX["FP"]
    codes[pred_neg & ~positive] = _CAT_INDEX["TN"]
    codes[pred_neg & positive] = _CAT_INDEX["FN"]
    return codes


def trinary_summary(
    dataset: Dataset,
    classifier: ClassifierResult | str,
    op: OperatingPoint,
    scope=None,
    weights=None,
) -> TrinaryCounts:
    """Weight-summed outcome tallies over a scope (unit weights by default)."""
    clf = dataset.classifier(classifier) if isinstance(classifier, str) else classifier
    mask = dataset.scope_mask(scope)
    scores = dataset.score_array(clf)[mask]
    positive = dataset.labels_positive[mask]
    w = dataset.weight_array(weights)[mask]
    codes = outcome_codes(scores, positive, op)
    sums = np.bincount(codes, weights=w, minlength=5)
    return TrinaryCounts(
        tp=float(sums[0]),
        fp=float(sums[1]),
        tn=float(sums[2]),
        fn=float(sums[3]),
        rejected=float(sums[4]),
    )


def derive_classifier(
    base: ClassifierResult,
    op: OperatingPoint,
    name: str,
    existing_names: Collection[str],
) -> ClassifierResult:
    """Freeze a classifier at an operating point under a new name.

    The derived classifier shares the base's scores; its operating point is
    immutable, so later threshold changes to the base do not affect it.
    """
    if name in existing_names:
        raise ConflictError(f"classifier name {name!r} already in use", code="DUPLICATE_NAME")
    return ClassifierResult(
        name=name,
        scores=base.scores,
        kind=KIND_DERIVED,
        frozen_point=op,
        base=base.base or base.name,
    )

"""Reproducible partitions (random or stratified) and bootstrap variants.

Bootstrap results are integer multiplicity vectors rather than materialized
duplicate datasets: the multiplicities plug into the weighting machinery so
ids stay stable and selections remain meaningful across variants. Every
result records its seed, and exports embed the realized ids/multiplicities
so sessions replay exactly on any platform.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dataset import ClassifierResult, Dataset
from .errors import InvalidArgumentError, NotFoundError
from .metrics import BINARY_METRICS, binary_metric, confusion, metric_from_counts
from .trinary import OperatingPoint


@dataclass(frozen=True)
class SampleSpec:
    """What to sample: a partition (fraction p, optional stratification) or
    a size-N bootstrap. ``stratify_by`` is None, "class", or "feature:<name>"."""

    kind: str  # "partition" | "bootstrap"
    seed: int
    p: float | None = None
    stratify_by: str | None = None

    def to_wire(self) -> dict:
        body: dict = {"kind": self.kind, "seed": self.seed}
        if self.kind == "partition":
            body["p"] = self.p
            body["stratify_by"] = self.stratify_by
        return body


@dataclass
class SampleResult:
    kind: str
    seed: int
    a: tuple[str, ...] | None = None
    b: tuple[str, ...] | None = None
    multiplicity: dict[str, int] | None = None

    def to_wire(self) -> dict:
        body: dict = {"kind": self.kind, "seed": self.seed}
        if self.kind == "partition":
            body["a"] = list(self.a or ())
            body["b"] = list(self.b or ())
        else:
            # zero-multiplicity ids are omitted; the sum over values is N
            body["multiplicity"] = dict(self.multiplicity or {})
        return body


def partition(
    dataset: Dataset, p: float, stratify_by: str | None, seed: int
) -> SampleResult:
    """Split the instance set into disjoint parts A and B with |A| = round(p*N).

    Unstratified: uniform draw without replacement. Stratified: each stratum
    contributes floor(p * n_s), and the remaining slots go to the strata with
    the largest fractional remainders (ties broken by stratum name order).
    """
    if not (0.0 < p < 1.0):
        raise InvalidArgumentError("partition fraction must lie in (0, 1)")
    n = dataset.size
    if p * n < 1.0:
        raise InvalidArgumentError(
            f"p*N = {p * n:.3g} < 1 leaves partition A empty", code="EMPTY_PARTITION"
        )
    size_a = math.floor(p * n + 0.5)
    rng = np.random.default_rng(seed)
    if stratify_by is None:
        a_rows = rng.permutation(n)[:size_a]
    else:
        strata = _strata(dataset, stratify_by)
        takes: dict[str, int] = {}
        remainders: list[tuple[float, str]] = []
        for name, rows in strata.items():
            share = p * len(rows)
            takes[name] = math.floor(share)
            remainders.append((share - math.floor(share), name))
        slots = size_a - sum(takes.values())
        # largest remainder first; ties by stratum name order
        remainders.sort(key=lambda t: (-t[0], t[1]))
        for _, name in remainders[:slots]:
            takes[name] += 1
        a_parts = []
        for name in sorted(strata):
            rows = strata[name]
            take = min(takes[name], len(rows))
            if take:
                a_parts.append(rng.choice(rows, size=take, replace=False))
        a_rows = np.concatenate(a_parts) if a_parts else np.array([], dtype=np.int64)
    a_mask = np.zeros(n, dtype=bool)
    a_mask[a_rows.astype(np.int64)] = True
    return SampleResult(
        kind="partition",
        seed=seed,
        a=dataset.ids_for(a_mask),
        b=dataset.ids_for(~a_mask),
    )


def _strata(dataset: Dataset, stratify_by: str) -> dict[str, np.ndarray]:
    """Row indexes per stratum; absent feature values go to the "" stratum."""
    if stratify_by == "class":
        keys = [inst.label for inst in dataset.instances]
    elif stratify_by.startswith("feature:"):
        name = stratify_by[len("feature:"):]
        _, col = dataset.feature_column(name)
        keys = ["" if v is None or (isinstance(v, float) and math.isnan(v)) else str(v)
                for v in col.tolist()]
    else:
        raise InvalidArgumentError(
            f'stratify_by must be "class" or "feature:<name>", got {stratify_by!r}'
        )
    strata: dict[str, list[int]] = {}
    for row, key in enumerate(keys):
        strata.setdefault(key, []).append(row)
    return {k: np.array(v, dtype=np.int64) for k, v in strata.items()}


def bootstrap(dataset: Dataset, seed: int) -> SampleResult:
    """N uniform draws with replacement, returned as an id -> count map
    (zero counts omitted); the counts sum to N and act as integer weights."""
    n = dataset.size
    if n < 1:
        raise InvalidArgumentError("bootstrap needs at least one instance")
    rng = np.random.default_rng(seed)
    counts = np.bincount(rng.integers(0, n, size=n), minlength=n)
    multiplicity = {
        dataset.ids[k]: int(counts[k]) for k in np.flatnonzero(counts)
    }
    return SampleResult(kind="bootstrap", seed=seed, multiplicity=multiplicity)


def multiplicity_weights(dataset: Dataset, result: SampleResult) -> np.ndarray:
    """Bootstrap multiplicities as a dense weight vector (zeros included)."""
    if result.kind != "bootstrap" or result.multiplicity is None:
        raise InvalidArgumentError("not a bootstrap result")
    w = np.zeros(dataset.size, dtype=np.float64)
    for i, c in result.multiplicity.items():
        try:
            w[dataset.id_index[i]] = float(c)
        except KeyError:
            raise NotFoundError(f"unknown instance id {i!r}", code="UNKNOWN_ID") from None
    return w


@dataclass
class SweepResult:
    analysis: str
    seeds: list[int]
    values: list[float]
    defined: list[bool]

    @property
    def summary(self) -> dict:
        vals = [v for v, d in zip(self.values, self.defined) if d]
        if not vals:
            return {"min": None, "max": None, "mean": None}
        return {
            "min": min(vals),
            "max": max(vals),
            "mean": sum(vals) / len(vals),
        }

    def to_wire(self) -> dict:
        return {
            "analysis": self.analysis,
            "seeds": self.seeds,
            "values": [
                {"seed": s, "value": v, "defined": d}
                for s, v, d in zip(self.seeds, self.values, self.defined)
            ],
            "summary": self.summary,
        }


def best_mcc_threshold(
    dataset: Dataset, classifier: ClassifierResult | str, weights=None, scope=None
) -> float:
    """Decision threshold (over distinct score values) maximizing weighted
    MCC under the rule s >= t -> positive; ties take the lowest threshold."""
    clf = dataset.classifier(classifier) if isinstance(classifier, str) else classifier
    mask = dataset.scope_mask(scope)
    scores = dataset.score_array(clf)[mask]
    positive = dataset.labels_positive[mask]
    w = dataset.weight_array(weights)[mask]
    order = np.argsort(scores, kind="stable")
    s_sorted = scores[order]
    w_sorted = w[order]
    wp_sorted = np.where(positive[order], w_sorted, 0.0)
    wn_sorted = w_sorted - wp_sorted
    thresholds, starts = np.unique(s_sorted, return_index=True)
    # weight mass strictly below each distinct threshold
    cum_p = np.concatenate(([0.0], np.cumsum(wp_sorted)))[starts]
    cum_n = np.concatenate(([0.0], np.cumsum(wn_sorted)))[starts]
    total_p = float(wp_sorted.sum())
    total_n = float(wn_sorted.sum())
    tp = total_p - cum_p
    fp = total_n - cum_n
    fn = cum_p
    tn = cum_n
    values, defined = metric_from_counts("mcc", tp, fp, tn, fn)
    values = np.where(defined, values, -np.inf)
    if not defined.any():
        return float(thresholds[0])
    return float(thresholds[int(np.argmax(values))])


def replicate_sweep(
    dataset: Dataset,
    classifier: ClassifierResult | str,
    seeds,
    analysis: str,
    *,
    metric: str | None = None,
    op: OperatingPoint | None = None,
    scope=None,
) -> SweepResult:
    """Run an analysis over bootstrap variants, one per seed, in seed order.

    analysis "metric-at-op" evaluates a binary metric at a fixed operating
    point; "best-mcc-threshold" reports each variant's MCC-optimal threshold.
    """
    seeds = [int(s) for s in seeds]
    if not seeds:
        raise InvalidArgumentError("at least one seed is required")
    clf = dataset.classifier(classifier) if isinstance(classifier, str) else classifier
    values: list[float] = []
    defined: list[bool] = []
    for seed in seeds:
        w = multiplicity_weights(dataset, bootstrap(dataset, seed))
        if analysis == "metric-at-op":
            if metric not in BINARY_METRICS or op is None:
                raise InvalidArgumentError(
                    'analysis "metric-at-op" needs a binary metric and an operating point'
                )
            mv = binary_metric(confusion(dataset, clf, op, scope=scope, weights=w), metric)
            values.append(mv.value)
            defined.append(mv.defined)
        elif analysis == "best-mcc-threshold":
            values.append(best_mcc_threshold(dataset, clf, weights=w, scope=scope))
            defined.append(True)
        else:
            raise InvalidArgumentError(f"unknown analysis {analysis!r}")
    return SweepResult(analysis=analysis, seeds=seeds, values=values, defined=defined)

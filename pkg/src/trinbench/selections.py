"""Named selections of instances: predicates, set-algebra expression trees,
overlap counting, and focus-item stepping.

Expressions are stored as provenance and re-evaluated whenever operating
points change, so selections defined through outcomes stay live. Evaluation
produces boolean membership masks over the dataset's sorted-id order.

Wire form (field names are fixed):
    {"op": "union"|"intersection"|"difference"|"complement", "args": [...]}
    {"pred": {"kind": "outcome", "classifier": "LR", "category": "FP"}}
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .dataset import ClassifierResult, Dataset
from .errors import EmptyScopeError, InvalidArgumentError, ReferenceError_
from .trinary import CATEGORIES, OperatingPoint, outcome_codes

PREDICATE_KINDS = (
    "score-range", "outcome", "class", "feature-range", "feature-equals", "id-list",
)
SET_OPS = ("union", "intersection", "difference", "complement")
SLOTS = ("A", "B")


@dataclass(frozen=True)
class EvalContext:
    """Everything predicate evaluation needs besides the dataset."""

    dataset: Dataset
    classifiers: Mapping[str, ClassifierResult]
    operating_points: Mapping[str, OperatingPoint]


@dataclass(frozen=True)
class Predicate:
    kind: str
    classifier: str | None = None
    category: str | None = None
    label: str | None = None
    feature: str | None = None
    lo: float | None = None
    hi: float | None = None
    value: float | str | None = None
    bin: int | None = None
    ids: tuple[str, ...] | None = None

    def to_wire(self) -> dict:
        body: dict = {"kind": self.kind}
        for name in ("classifier", "category", "label", "feature", "lo", "hi", "value", "bin"):
            v = getattr(self, name)
            if v is not None:
                body[name] = v
        if self.ids is not None:
            body["ids"] = list(self.ids)
        return body


class SelectionExpr:
    """Base expression node."""

    def evaluate(self, ctx: EvalContext) -> np.ndarray:
        raise NotImplementedError

    def to_wire(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class PredicateLeaf(SelectionExpr):
    predicate: Predicate

    def evaluate(self, ctx: EvalContext) -> np.ndarray:
        return evaluate_predicate(self.predicate, ctx)

    def to_wire(self) -> dict:
        return {"pred": self.predicate.to_wire()}


@dataclass(frozen=True)
class SetOp(SelectionExpr):
    op: str
    args: tuple[SelectionExpr, ...]

    def evaluate(self, ctx: EvalContext) -> np.ndarray:
        masks = [a.evaluate(ctx) for a in self.args]
        if self.op == "union":
            out = masks[0].copy()
            for m in masks[1:]:
                out |= m
            return out
        if self.op == "intersection":
            out = masks[0].copy()
            for m in masks[1:]:
                out &= m
            return out
        if self.op == "difference":
            return masks[0] & ~masks[1]
        return ~masks[0]  # complement, relative to the full instance set

    def to_wire(self) -> dict:
        return {"op": self.op, "args": [a.to_wire() for a in self.args]}


@dataclass
class Selection:
    """A named member set with provenance expression, weight, and slot."""

    id: str
    name: str
    expr: SelectionExpr
    weight: float = 1.0
    slot: str | None = None  # None, "A", or "B"
    # cache: (state_version, mask)
    _cache: tuple[int, np.ndarray] | None = field(default=None, repr=False)

    def resolve(self, ctx: EvalContext, state_version: int) -> np.ndarray:
        if self._cache is None or self._cache[0] != state_version:
            self._cache = (state_version, self.expr.evaluate(ctx))
        return self._cache[1]


# -- wire parsing -------------------------------------------------------------


def parse_expr(node) -> SelectionExpr:
    """Parse the JSON wire form into an expression tree (structure only;
    references are checked at evaluation time)."""
    if not isinstance(node, Mapping):
        raise InvalidArgumentError("expression node must be an object", code="INVALID_EXPR")
    if "pred" in node:
        return PredicateLeaf(parse_predicate(node["pred"]))
    op = node.get("op")
    if op not in SET_OPS:
        raise InvalidArgumentError(f"unknown set op {op!r}", code="INVALID_EXPR")
    args = node.get("args")
    if not isinstance(args, Sequence) or isinstance(args, (str, bytes)):
        raise InvalidArgumentError('"args" must be a list', code="INVALID_EXPR")
    parsed = tuple(parse_expr(a) for a in args)
    if op == "complement" and len(parsed) != 1:
        raise InvalidArgumentError("complement takes exactly 1 argument", code="INVALID_EXPR")
    if op == "difference" and len(parsed) != 2:
        raise InvalidArgumentError("difference takes exactly 2 arguments", code="INVALID_EXPR")
    if op in ("union", "intersection") and len(parsed) < 1:
        raise InvalidArgumentError(f"{op} takes at least 1 argument", code="INVALID_EXPR")
    return SetOp(op, parsed)


def parse_predicate(raw) -> Predicate:
    if not isinstance(raw, Mapping):
        raise InvalidArgumentError("predicate must be an object", code="INVALID_EXPR")
    kind = raw.get("kind")
    if kind not in PREDICATE_KINDS:
        raise InvalidArgumentError(f"unknown predicate kind {kind!r}", code="INVALID_EXPR")

    def need(name, types):
        v = raw.get(name)
        if not isinstance(v, types) or isinstance(v, bool):
            raise InvalidArgumentError(
                f"predicate {kind!r} needs field {name!r}", code="INVALID_EXPR"
            )
        return v

    if kind == "score-range":
        lo = float(need("lo", (int, float)))
        hi = float(need("hi", (int, float)))
        if lo > hi:
            raise InvalidArgumentError("score-range needs lo <= hi", code="INVALID_EXPR")
        b = raw.get("bin")
        return Predicate(
            kind, classifier=need("classifier", str), lo=lo, hi=hi,
            bin=int(b) if b is not None else None,
        )
    if kind == "outcome":
        category = need("category", str)
        if category not in CATEGORIES:
            raise InvalidArgumentError(
                f"unknown outcome category {category!r}", code="INVALID_EXPR"
            )
        return Predicate(kind, classifier=need("classifier", str), category=category)
    if kind == "class":
        return Predicate(kind, label=need("label", str))
    if kind == "feature-range":
        lo = float(need("lo", (int, float)))
        hi = float(need("hi", (int, float)))
        if lo > hi:
            raise InvalidArgumentError("feature-range needs lo <= hi", code="INVALID_EXPR")
        return Predicate(kind, feature=need("feature", str), lo=lo, hi=hi)
    if kind == "feature-equals":
        v = raw.get("value")
        if isinstance(v, bool) or not isinstance(v, (int, float, str)):
            raise InvalidArgumentError(
                'feature-equals needs a number or string "value"', code="INVALID_EXPR"
            )
        return Predicate(kind, feature=need("feature", str), value=v)
    # id-list
    ids = raw.get("ids")
    if not isinstance(ids, Sequence) or isinstance(ids, (str, bytes)):
        raise InvalidArgumentError('id-list needs an "ids" list', code="INVALID_EXPR")
    return Predicate(kind, ids=tuple(str(i) for i in ids))


# -- evaluation ---------------------------------------------------------------


def evaluate_predicate(pred: Predicate, ctx: EvalContext) -> np.ndarray:
    ds = ctx.dataset
    if pred.kind in ("score-range", "outcome"):
        clf = ctx.classifiers.get(pred.classifier or "")
        if clf is None:
            raise ReferenceError_(
                f"unknown classifier {pred.classifier!r}", code="UNKNOWN_CLASSIFIER"
            )
        scores = ds.score_array(clf)
        if pred.kind == "score-range":
            # half-open [lo, hi); the top of the score domain closes the bin
            upper = scores <= pred.hi if pred.hi >= 1.0 else scores < pred.hi
            return (scores >= pred.lo) & upper
        op = ctx.operating_points.get(clf.name)
        if op is None:
            raise ReferenceError_(
                f"no operating point for {clf.name!r}", code="UNKNOWN_CLASSIFIER"
            )
        codes = outcome_codes(scores, ds.labels_positive, op)
        return codes == CATEGORIES.index(pred.category)
    if pred.kind == "class":
        if pred.label not in ds.classes:
            raise ReferenceError_(f"unknown class {pred.label!r}", code="UNKNOWN_CLASS")
        positive = pred.label == ds.positive_class
        return ds.labels_positive if positive else ~ds.labels_positive
    if pred.kind == "feature-range":
        kind, col = ds.feature_column(pred.feature or "")
        if kind != "numeric":
            raise InvalidArgumentError(
                f"feature {pred.feature!r} is not numeric", code="NON_NUMERIC_FEATURE"
            )
        # closed interval; NaN (absent) never matches
        return (col >= pred.lo) & (col <= pred.hi)
    if pred.kind == "feature-equals":
        kind, col = ds.feature_column(pred.feature or "")
        if kind == "numeric":
            if isinstance(pred.value, str):
                return np.zeros(ds.size, dtype=bool)
            return col == float(pred.value)
        return np.array([v == pred.value for v in col], dtype=bool)
    # id-list
    return ds.mask_for(pred.ids or ())


def evaluate(expr: SelectionExpr, ctx: EvalContext) -> np.ndarray:
    """Evaluate an expression tree to a membership mask."""
    return expr.evaluate(ctx)


def overlap(selection_mask: np.ndarray, grouping: Sequence[np.ndarray]) -> list[tuple[int, int]]:
    """Per-group (members-in-selection, group-total) counts."""
    return [
        (int((selection_mask & g).sum()), int(g.sum()))
        for g in grouping
    ]


def step_focus(
    scope_ids: Sequence[str],
    current: str | None,
    mode: str,
    *,
    seed: int | None = None,
    call_index: int = 0,
) -> str:
    """Pick the next focus item from a scope.

    next/prev walk the scope in sorted-id order and wrap; random draws are
    reproducible for a given (seed, scope, call_index).
    """
    ordered = sorted(scope_ids)
    if not ordered:
        raise EmptyScopeError("cannot step focus in an empty scope")
    if mode == "random":
        rng = random.Random(seed)
        pick = 0
        for _ in range(call_index + 1):
            pick = rng.randrange(len(ordered))
        return ordered[pick]
    if mode not in ("next", "prev"):
        raise InvalidArgumentError(f"unknown focus step mode {mode!r}")
    if current is None or current not in ordered:
        return ordered[0] if mode == "next" else ordered[-1]
    k = ordered.index(current)
    step = 1 if mode == "next" else -1
    return ordered[(k + step) % len(ordered)]


def score_bin_predicate(
    classifier: str, bin_index: int, bin_count: int
) -> Predicate:
    """Score-range predicate addressing one score bin (partition-safe)."""
    edges = np.arange(bin_count + 1) / bin_count
    return Predicate(
        "score-range",
        classifier=classifier,
        lo=float(edges[bin_index]),
        hi=float(edges[bin_index + 1]),
        bin=bin_index,
    )

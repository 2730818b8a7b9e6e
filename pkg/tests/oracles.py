"""Independent brute-force oracles for the test suite.

These re-derive every contract from first principles (loops over items,
literal formulas, pair counting, frozenset algebra) so they share no code
with the package.
"""

from __future__ import annotations

import math


def oracle_classify(score: float, positive: bool, lower: float, upper: float) -> str:
    """Literal trinary rule: positive at s >= U, negative at s < L."""
    if score >= upper:
        return "TP" if positive else "FP"
    if score < lower:
        return "FN" if positive else "TN"
    return "Rejected"


def oracle_confusion(items, lower: float, upper: float, weights=None):
    """items: list of (score, positive). Returns dict of weighted tallies."""
    tallies = {"TP": 0.0, "FP": 0.0, "TN": 0.0, "FN": 0.0, "Rejected": 0.0}
    for k, (score, positive) in enumerate(items):
        w = 1.0 if weights is None else weights[k]
        tallies[oracle_classify(score, positive, lower, upper)] += w
    return tallies


def oracle_metric(metric: str, tp: float, fp: float, tn: float, fn: float):
    """Literal formula evaluation; returns (value, defined)."""
    if metric == "accuracy":
        den = tp + tn + fp + fn
        return ((tp + tn) / den, True) if den else (0.0, False)
    if metric == "precision":
        den = tp + fp
        return (tp / den, True) if den else (0.0, False)
    if metric == "recall":
        den = tp + fn
        return (tp / den, True) if den else (0.0, False)
    if metric == "f1":
        p, p_ok = oracle_metric("precision", tp, fp, tn, fn)
        r, r_ok = oracle_metric("recall", tp, fp, tn, fn)
        if not (p_ok and r_ok) or (p + r) == 0:
            return 0.0, False
        return 2 * p * r / (p + r), True
    if metric == "mcc":
        den = math.sqrt((tp + fp) * (tp + fn) * (tn + fp) * (tn + fn))
        if den == 0:
            return 0.0, False
        return (tp * tn - fp * fn) / den, True
    raise ValueError(metric)


def oracle_accuracy_policy(tallies: dict, policy: str):
    """Rejected-item policies for accuracy; returns (value, defined)."""
    correct = tallies["TP"] + tallies["TN"]
    accepted = correct + tallies["FP"] + tallies["FN"]
    rejected = tallies["Rejected"]
    if policy == "exclude":
        return (correct / accepted, True) if accepted else (0.0, False)
    den = accepted + rejected
    if den == 0:
        return 0.0, False
    num = correct + (rejected if policy == "as-correct" else 0.0)
    return num / den, True


def oracle_auc(pos_scores, neg_scores) -> float:
    """Pair counting: wins + half ties over all (pos, neg) pairs."""
    wins = 0
    ties = 0
    for p in pos_scores:
        for n in neg_scores:
            if p > n:
                wins += 1
            elif p == n:
                ties += 1
    return (wins + 0.5 * ties) / (len(pos_scores) * len(neg_scores))


def oracle_brier(pairs, weights=None) -> float:
    """pairs: list of (score, positive)."""
    num = 0.0
    den = 0.0
    for k, (score, positive) in enumerate(pairs):
        w = 1.0 if weights is None else weights[k]
        num += w * (score - (1.0 if positive else 0.0)) ** 2
        den += w
    return num / den


def oracle_eval_expr(node: dict, universe: frozenset, leaf_sets: dict) -> frozenset:
    """Frozenset recursion over the wire expression form. Predicate leaves
    must be id-list predicates or pre-resolved via ``leaf_sets`` keyed by
    the leaf's identity string."""
    if "pred" in node:
        pred = node["pred"]
        if pred["kind"] == "id-list":
            return frozenset(pred["ids"]) & universe
        return frozenset(leaf_sets[repr(sorted(pred.items()))])
    args = [oracle_eval_expr(a, universe, leaf_sets) for a in node["args"]]
    op = node["op"]
    if op == "union":
        out = frozenset()
        for a in args:
            out |= a
        return out
    if op == "intersection":
        out = args[0]
        for a in args[1:]:
            out &= a
        return out
    if op == "difference":
        return args[0] - args[1]
    return universe - args[0]

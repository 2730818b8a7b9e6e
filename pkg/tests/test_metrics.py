import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from trinbench import (
    OperatingPoint,
    WeightedConfusion,
    auc,
    binary_metric,
    brier,
    combine_weights,
    confusion,
)
from trinbench.errors import UndefinedMetricError, UnsupportedPolicyError
from trinbench.metrics import BINARY_METRICS

from conftest import make_dataset, random_dataset
from oracles import (
    oracle_accuracy_policy,
    oracle_auc,
    oracle_brier,
    oracle_confusion,
    oracle_metric,
)

confusions = st.builds(
    WeightedConfusion,
    tp=st.integers(0, 20).map(float),
    fp=st.integers(0, 20).map(float),
    tn=st.integers(0, 20).map(float),
    fn=st.integers(0, 20).map(float),
    rejected=st.integers(0, 20).map(float),
)


class TestConfusion:
    def test_four_items(self, four_items):
        c = confusion(four_items, "LR", OperatingPoint(0.5, 0.5))
        assert (c.tp, c.fp, c.tn, c.fn, c.rejected) == (1, 1, 1, 1, 0)

    def test_weight_linearity(self, four_items):
        base = confusion(four_items, "LR", OperatingPoint(0.5, 0.5))
        bumped = confusion(
            four_items, "LR", OperatingPoint(0.5, 0.5), weights={"a": 3.0}
        )
        assert bumped.tp == base.tp + 2.0
        assert bumped.fp == base.fp

    def test_empty_scope(self, four_items):
        c = confusion(four_items, "LR", OperatingPoint(0.5, 0.5), scope=[])
        assert (c.tp, c.fp, c.tn, c.fn, c.rejected) == (0, 0, 0, 0, 0)


class TestBinaryMetric:
    def test_mcc_frozen_value(self):
        # (3,1,4,2): MCC = 10 / sqrt(600)
        c = WeightedConfusion(tp=3, fp=1, tn=4, fn=2)
        assert binary_metric(c, "mcc").value == pytest.approx(
            10 / math.sqrt(600), abs=1e-15
        )

    def test_perfect_confusion(self):
        c = WeightedConfusion(tp=5, fp=0, tn=5, fn=0)
        for metric in BINARY_METRICS:
            mv = binary_metric(c, metric)
            assert mv.defined and mv.value == 1.0

    def test_rejected_policies_on_accuracy(self):
        c = WeightedConfusion(tp=2, fp=0, tn=2, fn=0, rejected=4)
        assert binary_metric(c, "accuracy", "exclude").value == 1.0
        assert binary_metric(c, "accuracy", "as-correct").value == 1.0
        assert binary_metric(c, "accuracy", "as-incorrect").value == 0.5

    def test_policy_only_for_accuracy(self):
        c = WeightedConfusion(tp=1, fp=1, tn=1, fn=1, rejected=1)
        with pytest.raises(UnsupportedPolicyError):
            binary_metric(c, "f1", "as-correct")

    def test_zero_denominator_flags(self):
        empty = WeightedConfusion()
        for metric in BINARY_METRICS:
            mv = binary_metric(empty, metric)
            assert mv.value == 0.0 and not mv.defined

    @given(confusions)
    def test_matches_formula_oracle(self, c):
        for metric in BINARY_METRICS:
            mv = binary_metric(c, metric)
            expected, defined = oracle_metric(metric, c.tp, c.fp, c.tn, c.fn)
            assert mv.defined == defined
            assert abs(mv.value - expected) <= 1e-12

    @given(confusions)
    def test_bounds(self, c):
        for metric in ("accuracy", "precision", "recall", "f1"):
            mv = binary_metric(c, metric)
            if mv.defined:
                assert 0.0 <= mv.value <= 1.0
        mcc = binary_metric(c, "mcc")
        if mcc.defined:
            assert -1.0 <= mcc.value <= 1.0 + 1e-12

    @given(confusions)
    def test_policy_ordering(self, c):
        values = {
            p: binary_metric(c, "accuracy", p)
            for p in ("as-incorrect", "exclude", "as-correct")
        }
        if all(mv.defined for mv in values.values()):
            assert (
                values["as-incorrect"].value
                <= values["exclude"].value + 1e-12
            )
            assert values["exclude"].value <= values["as-correct"].value + 1e-12

    @given(confusions, st.integers(1, 1000))
    @settings(max_examples=60)
    def test_weight_scaling_invariance(self, c, k):
        scaled = WeightedConfusion(
            tp=c.tp * k, fp=c.fp * k, tn=c.tn * k, fn=c.fn * k, rejected=c.rejected * k
        )
        for metric in BINARY_METRICS:
            a = binary_metric(c, metric)
            b = binary_metric(scaled, metric)
            assert a.defined == b.defined
            assert abs(a.value - b.value) <= 1e-12


class TestAuc:
    def test_spec_value(self):
        ds = make_dataset(
            {"m": {"p1": 0.35, "p2": 0.8, "n1": 0.1, "n2": 0.4}},
            {"p1": "pos", "p2": "pos", "n1": "neg", "n2": "neg"},
        )
        assert auc(ds, "m") == 0.75

    def test_perfect_separation(self):
        ds = make_dataset(
            {"m": {"a": 0.9, "b": 0.8, "c": 0.2, "d": 0.1}},
            {"a": "pos", "b": "pos", "c": "neg", "d": "neg"},
        )
        assert auc(ds, "m") == 1.0

    def test_all_ties(self):
        ds = make_dataset(
            {"m": {"a": 0.5, "b": 0.5, "c": 0.5}},
            {"a": "pos", "b": "neg", "c": "neg"},
        )
        assert auc(ds, "m") == 0.5

    def test_single_class_undefined(self):
        ds = make_dataset(
            {"m": {"a": 0.5, "b": 0.7}}, {"a": "pos", "b": "pos"}
        )
        with pytest.raises(UndefinedMetricError):
            auc(ds, "m")

    def test_matches_pair_counting_exactly(self):
        rng = random.Random(77)
        checked = 0
        for _ in range(400):
            ds = random_dataset(rng)
            scores = ds.score_array("clf")
            pos = scores[ds.labels_positive]
            neg = scores[~ds.labels_positive]
            if pos.size == 0 or neg.size == 0:
                continue
            checked += 1
            assert auc(ds, "clf") == oracle_auc(pos.tolist(), neg.tolist())
        assert checked > 200


class TestBrier:
    def test_perfect_scores(self):
        ds = make_dataset(
            {"m": {"a": 1.0, "b": 0.0}}, {"a": "pos", "b": "neg"}
        )
        assert brier(ds, "m") == 0.0

    def test_all_half(self):
        ds = make_dataset(
            {"m": {"a": 0.5, "b": 0.5}}, {"a": "pos", "b": "neg"}
        )
        assert brier(ds, "m") == 0.25

    def test_frozen_value(self):
        ds = make_dataset(
            {"m": {"a": 0.9, "b": 0.2}}, {"a": "pos", "b": "pos"}
        )
        assert brier(ds, "m") == pytest.approx(0.325, abs=1e-15)

    def test_empty_scope_undefined(self, four_items):
        with pytest.raises(UndefinedMetricError):
            brier(four_items, "LR", scope=[])

    def test_weighted_matches_oracle(self):
        rng = random.Random(3)
        for _ in range(100):
            ds = random_dataset(rng)
            weights = {i: float(rng.randint(1, 4)) for i in ds.ids}
            got = brier(ds, "clf", weights=weights)
            pairs = [
                (ds.classifier("clf").scores[i], bool(p))
                for i, p in zip(ds.ids, ds.labels_positive)
            ]
            expected = oracle_brier(pairs, [weights[i] for i in ds.ids])
            assert got == pytest.approx(expected, abs=1e-12)


class TestCombineWeights:
    def test_defaults_to_unit(self, four_items):
        w = combine_weights(four_items, [])
        assert np.array_equal(w, np.ones(4))

    def test_product_rule(self, four_items):
        w = combine_weights(
            four_items, [(["a", "b"], 2.0), (["a"], 3.0)]
        )
        by_id = dict(zip(four_items.ids, w))
        assert by_id == {"a": 6.0, "b": 2.0, "c": 1.0, "d": 1.0}

    def test_weighted_accuracy_for_class_balance(self):
        # 1 positive, 3 negatives, all-negative predictor; weighting the
        # positive class by 2 gives accuracy 3 / (3 + 2) = 0.6
        ds = make_dataset(
            {"m": {"a": 0.0, "b": 0.0, "c": 0.0, "d": 0.0}},
            {"a": "pos", "b": "neg", "c": "neg", "d": "neg"},
        )
        weights = combine_weights(ds, [(["a"], 2.0)])
        c = confusion(ds, "m", OperatingPoint(0.5, 0.5), weights=weights)
        assert binary_metric(c, "accuracy").value == pytest.approx(0.6)

    def test_rejects_nonpositive_weight(self, four_items):
        with pytest.raises(Exception):
            combine_weights(four_items, [(["a"], 0.0)])


class TestOracleEquivalence:
    def test_recount_and_formula_randomized(self):
        rng = random.Random(123)
        for _ in range(200):
            ds = random_dataset(rng)
            lower = rng.randint(0, 10) / 10
            upper = lower + (1 - lower) * rng.randint(0, 10) / 10
            op = OperatingPoint(lower, upper)
            c = confusion(ds, "clf", op)
            items = [
                (ds.classifier("clf").scores[i], bool(p))
                for i, p in zip(ds.ids, ds.labels_positive)
            ]
            tallies = oracle_confusion(items, lower, upper)
            for metric in BINARY_METRICS:
                got = binary_metric(c, metric)
                want, want_def = oracle_metric(
                    metric, tallies["TP"], tallies["FP"], tallies["TN"], tallies["FN"]
                )
                assert got.defined == want_def
                assert abs(got.value - want) <= 1e-12

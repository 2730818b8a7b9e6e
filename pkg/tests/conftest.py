import random

import pytest

from trinbench import load_dataset


def make_payload(scores, labels, classes=("neg", "pos"), features=None):
    """Build an ingest payload.

    scores: {classifier: {id: score}}; labels: {id: "pos"|"neg"} (or the
    class names given); features: {id: {name: value}}.
    """
    ids = sorted(labels)
    return {
        "classes": list(classes),
        "instances": [
            {"id": i, "label": labels[i], "features": (features or {}).get(i, {})}
            for i in ids
        ],
        "classifiers": [
            {"name": name, "scores": {i: s[i] for i in ids}} for name, s in scores.items()
        ],
    }


def make_dataset(scores, labels, classes=("neg", "pos"), features=None):
    dataset, report = load_dataset(make_payload(scores, labels, classes, features))
    assert report.ok, report.to_wire()
    return dataset


def random_payload(rng: random.Random, max_items=12, classifier="clf", quantized=None):
    """Random small dataset; quantized scores (default: coin flip) produce ties."""
    n = rng.randint(2, max_items)
    if quantized is None:
        quantized = rng.random() < 0.5
    labels = {}
    scores = {}
    for k in range(n):
        iid = f"i{k:03d}"
        labels[iid] = "pos" if rng.random() < 0.5 else "neg"
        scores[iid] = rng.randint(0, 8) / 8 if quantized else rng.random()
    return make_payload({classifier: scores}, labels)


def random_dataset(rng: random.Random, max_items=12, classifier="clf", quantized=None):
    dataset, report = load_dataset(random_payload(rng, max_items, classifier, quantized))
    assert report.ok
    return dataset


@pytest.fixture
def four_items():
    """The running example: scores .9/.8/.3/.1 with labels pos/neg/neg/pos."""
    return make_dataset(
        {"LR": {"a": 0.9, "b": 0.8, "c": 0.3, "d": 0.1}},
        {"a": "pos", "b": "neg", "c": "neg", "d": "pos"},
    )

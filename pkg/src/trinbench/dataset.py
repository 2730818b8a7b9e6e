"""Dataset model: test instances, ground-truth labels, features, and
per-classifier scores, plus ingestion (JSON / CSV) and instance access.

A loaded dataset is immutable. Scores are required to lie in [0, 1] after
ingestion; out-of-range scores are rejected unless per-classifier min-max
normalization is requested.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Iterable, Mapping

import numpy as np

from .errors import InvalidArgumentError, NotFoundError, ParseError

if TYPE_CHECKING:
    from .trinary import OperatingPoint

KIND_LOADED = "loaded"
KIND_DERIVED = "derived"


@dataclass(frozen=True)
class Instance:
    """One test item: unique id, binary label, optional feature values."""

    id: str
    label: str
    features: Mapping[str, float | str] = field(default_factory=dict)


@dataclass
class ClassifierResult:
    """Scores of one classifier over the whole dataset.

    ``kind`` is "loaded" for ingested classifiers and "derived" for
    classifiers frozen at a fixed operating point; derived classifiers
    share the base's scores.
    """

    name: str
    scores: Mapping[str, float]
    kind: str = KIND_LOADED
    frozen_point: "OperatingPoint | None" = None
    base: str | None = None
    # raw (min, max) before normalization, when normalization was applied
    norm_bounds: tuple[float, float] | None = None


@dataclass
class ReportEntry:
    code: str
    message: str
    offending_id: str | None = None

    def to_wire(self) -> dict:
        body = {"code": self.code, "message": self.message}
        if self.offending_id is not None:
            body["offending_id"] = self.offending_id
        return body


@dataclass
class ValidationReport:
    """Outcome of ingestion: the dataset is accepted iff ``errors`` is empty."""

    errors: list[ReportEntry] = field(default_factory=list)
    warnings: list[ReportEntry] = field(default_factory=list)
    counts: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.errors

    def error(self, code: str, message: str, offending_id: str | None = None):
        self.errors.append(ReportEntry(code, message, offending_id))

    def warn(self, code: str, message: str, offending_id: str | None = None):
        self.warnings.append(ReportEntry(code, message, offending_id))

    def to_wire(self) -> dict:
        return {
            "errors": [e.to_wire() for e in self.errors],
            "warnings": [w.to_wire() for w in self.warnings],
            "counts": self.counts,
        }


class Dataset:
    """Immutable container for instances, labels, features, and scores.

    Instances are kept in sorted-id order; numpy views aligned to that
    order back all aggregate computations.
    """

    def __init__(
        self,
        classes: tuple[str, str],
        instances: list[Instance],
        classifiers: list[ClassifierResult],
        provenance: str = "memory",
    ):
        self.classes = (classes[0], classes[1])  # (negative, positive)
        self.instances = sorted(instances, key=lambda i: i.id)
        self.classifiers = list(classifiers)
        self.provenance = provenance

        self.ids: tuple[str, ...] = tuple(i.id for i in self.instances)
        self.id_index: dict[str, int] = {v: k for k, v in enumerate(self.ids)}
        self.labels_positive = np.array(
            [i.label == self.classes[1] for i in self.instances], dtype=bool
        )
        self._score_arrays: dict[str, np.ndarray] = {}
        self._feature_columns: dict[str, tuple[str, np.ndarray]] = {}

    # -- basic accessors -------------------------------------------------

    @property
    def size(self) -> int:
        return len(self.instances)

    @property
    def negative_class(self) -> str:
        return self.classes[0]

    @property
    def positive_class(self) -> str:
        return self.classes[1]

    def classifier(self, name: str) -> ClassifierResult:
        for c in self.classifiers:
            if c.name == name:
                return c
        raise NotFoundError(f"unknown classifier {name!r}", code="UNKNOWN_CLASSIFIER")

    def has_instance(self, instance_id: str) -> bool:
        return instance_id in self.id_index

    def instance(self, instance_id: str) -> Instance:
        try:
            return self.instances[self.id_index[instance_id]]
        except KeyError:
            raise NotFoundError(
                f"unknown instance id {instance_id!r}", code="UNKNOWN_ID"
            ) from None

    @property
    def feature_names(self) -> tuple[str, ...]:
        seen: dict[str, None] = {}
        for inst in self.instances:
            for name in inst.features:
                seen.setdefault(name, None)
        return tuple(sorted(seen))

    # -- aligned numpy views ----------------------------------------------

    def score_array(self, classifier: ClassifierResult | str) -> np.ndarray:
        """Scores aligned to sorted-id order as float64 (cached)."""
        clf = self.classifier(classifier) if isinstance(classifier, str) else classifier
        key = clf.base if clf.kind == KIND_DERIVED and clf.base else clf.name
        if key not in self._score_arrays:
            scores = clf.scores
            self._score_arrays[key] = np.array(
                [scores[i] for i in self.ids], dtype=np.float64
            )
        return self._score_arrays[key]

    def feature_column(self, name: str) -> tuple[str, np.ndarray]:
        """Return (kind, values) for a feature, aligned to sorted-id order.

        kind is "numeric" (float array, NaN for absent) when every present
        value is a number, otherwise "categorical" (object array, None for
        absent).
        """
        if name in self._feature_columns:
            return self._feature_columns[name]
        raw = [inst.features.get(name) for inst in self.instances]
        present = [v for v in raw if v is not None]
        if not present:
            raise NotFoundError(f"unknown feature {name!r}", code="UNKNOWN_FEATURE")
        if all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in present):
            col = np.array(
                [float(v) if v is not None else math.nan for v in raw], dtype=np.float64
            )
            kind = "numeric"
        else:
            col = np.array([None if v is None else v for v in raw], dtype=object)
            kind = "categorical"
        self._feature_columns[name] = (kind, col)
        return kind, col

    def mask_for(self, ids: Iterable[str]) -> np.ndarray:
        """Boolean membership mask over sorted-id order."""
        mask = np.zeros(self.size, dtype=bool)
        index = self.id_index
        for i in ids:
            try:
                mask[index[i]] = True
            except KeyError:
                raise NotFoundError(
                    f"unknown instance id {i!r}", code="UNKNOWN_ID"
                ) from None
        return mask

    def scope_mask(self, scope) -> np.ndarray:
        """Normalize a scope (None, mask, or id collection) to a mask."""
        if scope is None:
            return np.ones(self.size, dtype=bool)
        if isinstance(scope, np.ndarray):
            if scope.dtype != bool or scope.shape != (self.size,):
                raise InvalidArgumentError("scope mask has wrong shape or dtype")
            return scope
        return self.mask_for(scope)

    def weight_array(self, weights) -> np.ndarray:
        """Normalize weights (None, aligned array, or id->weight map) to float64."""
        if weights is None:
            return np.ones(self.size, dtype=np.float64)
        if isinstance(weights, np.ndarray):
            if weights.shape != (self.size,):
                raise InvalidArgumentError("weight array has wrong shape")
            return weights.astype(np.float64, copy=False)
        out = np.ones(self.size, dtype=np.float64)
        for i, w in weights.items():
            try:
                out[self.id_index[i]] = float(w)
            except KeyError:
                raise NotFoundError(
                    f"unknown instance id {i!r} in weights", code="UNKNOWN_ID"
                ) from None
        return out

    def ids_for(self, mask: np.ndarray) -> tuple[str, ...]:
        return tuple(self.ids[int(k)] for k in np.flatnonzero(mask))

    # -- serialization ----------------------------------------------------

    def to_ingest_json(self) -> dict:
        """Serialize to the ingest schema.

        Emits the stored (possibly normalized) scores, so a reload
        round-trips to an identical dataset without re-normalizing.
        Derived classifiers are session state and never appear here.
        """
        return {
            "classes": list(self.classes),
            "instances": [
                {"id": i.id, "label": i.label, "features": dict(i.features)}
                for i in self.instances
            ],
            "classifiers": [
                {"name": c.name, "scores": {i: float(c.scores[i]) for i in self.ids}}
                for c in self.classifiers
                if c.kind == KIND_LOADED
            ],
        }


# -- ingestion --------------------------------------------------------------


def load_dataset(
    source, *, normalize: bool = False, provenance: str | None = None
) -> tuple[Dataset | None, ValidationReport]:
    """Load a dataset from an ingest payload.

    ``source`` may be an already-parsed JSON mapping, or text/bytes holding
    either JSON or CSV (sniffed on the first non-blank character). Returns
    ``(dataset, report)``; the dataset is None when validation failed.

    Raises ParseError when the payload cannot be parsed at all.
    """
    if isinstance(source, Mapping):
        return _from_json_payload(dict(source), normalize, provenance or "json")
    if isinstance(source, bytes):
        source = source.decode("utf-8")
    if not isinstance(source, str):
        raise ParseError(f"unsupported payload type {type(source).__name__}")
    stripped = source.lstrip()
    if stripped.startswith("{"):
        try:
            payload = json.loads(source)
        except json.JSONDecodeError as exc:
            raise ParseError(
                f"malformed JSON: {exc.msg}",
                detail={"line": exc.lineno, "column": exc.colno},
            ) from None
        if not isinstance(payload, Mapping):
            raise ParseError("JSON payload must be an object")
        return _from_json_payload(dict(payload), normalize, provenance or "json")
    return _from_csv_text(source, normalize, provenance or "csv")


def _from_json_payload(payload: dict, normalize: bool, provenance: str):
    report = ValidationReport()

    classes = payload.get("classes")
    if (
        not isinstance(classes, (list, tuple))
        or len(classes) != 2
        or not all(isinstance(c, str) for c in classes)
        or classes[0] == classes[1]
    ):
        raise ParseError('"classes" must be two distinct class names [negative, positive]')
    raw_instances = payload.get("instances")
    raw_classifiers = payload.get("classifiers")
    if not isinstance(raw_instances, list):
        raise ParseError('"instances" must be a list')
    if not isinstance(raw_classifiers, list):
        raise ParseError('"classifiers" must be a list')

    instances: list[Instance] = []
    for pos, item in enumerate(raw_instances):
        if not isinstance(item, Mapping) or "id" not in item or "label" not in item:
            raise ParseError(f'instance #{pos} must be an object with "id" and "label"')
        iid, label = item["id"], item["label"]
        if not isinstance(iid, str) or not isinstance(label, str):
            raise ParseError(f'instance #{pos}: "id" and "label" must be strings')
        features = {}
        for fname, fval in (item.get("features") or {}).items():
            if fval is None:
                continue  # explicit null means absent
            if isinstance(fval, bool) or not isinstance(fval, (int, float, str)):
                report.error(
                    "BAD_FEATURE_VALUE",
                    f"feature {fname!r} of {iid!r} must be a number or string",
                    iid,
                )
                continue
            features[fname] = float(fval) if isinstance(fval, (int, float)) else fval
        instances.append(Instance(id=iid, label=label, features=features))

    score_maps: list[tuple[str, dict]] = []
    seen_names: set[str] = set()
    for pos, item in enumerate(raw_classifiers):
        if not isinstance(item, Mapping) or "name" not in item or "scores" not in item:
            raise ParseError(f'classifier #{pos} must be an object with "name" and "scores"')
        name, scores = item["name"], item["scores"]
        if not isinstance(name, str) or not isinstance(scores, Mapping):
            raise ParseError(f'classifier #{pos}: bad "name" or "scores"')
        if name in seen_names:
            report.error("DUPLICATE_CLASSIFIER", f"classifier {name!r} appears twice")
            continue
        seen_names.add(name)
        clean: dict[str, float] = {}
        for iid, s in scores.items():
            if isinstance(s, bool) or not isinstance(s, (int, float)) or not math.isfinite(s):
                report.error(
                    "BAD_SCORE", f"classifier {name!r}: score for {iid!r} is not a finite number", iid
                )
                continue
            clean[iid] = float(s)
        score_maps.append((name, clean))

    return _assemble(
        (classes[0], classes[1]), instances, score_maps, normalize, provenance, report
    )


def _from_csv_text(text: str, normalize: bool, provenance: str):
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise ParseError("empty CSV payload") from None
    header = [h.strip() for h in header]
    if "id" not in header or "label" not in header:
        raise ParseError('CSV header must contain "id" and "label" columns')
    if len(set(header)) != len(header):
        raise ParseError("CSV header has duplicate columns")

    id_col = header.index("id")
    label_col = header.index("label")
    score_cols = [(k, h[len("score:"):]) for k, h in enumerate(header) if h.startswith("score:")]
    feature_cols = [
        (k, h) for k, h in enumerate(header)
        if k not in (id_col, label_col) and not h.startswith("score:")
    ]
    if not score_cols:
        raise ParseError('CSV header must contain at least one "score:<classifier>" column')

    report = ValidationReport()
    instances: list[Instance] = []
    score_maps: dict[str, dict[str, float]] = {name: {} for _, name in score_cols}
    for lineno, row in enumerate(reader, start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != len(header):
            raise ParseError(
                f"CSV line {lineno}: expected {len(header)} fields, got {len(row)}",
                detail={"line": lineno},
            )
        iid = row[id_col].strip()
        label = row[label_col].strip()
        features: dict[str, float | str] = {}
        for k, fname in feature_cols:
            cell = row[k].strip()
            if cell == "":
                continue  # absent
            try:
                features[fname] = float(cell)
            except ValueError:
                features[fname] = cell
        for k, cname in score_cols:
            cell = row[k].strip()
            if cell == "":
                continue  # missing score; reported during assembly
            try:
                score_maps[cname][iid] = float(cell)
            except ValueError:
                raise ParseError(
                    f"CSV line {lineno}: score {cell!r} is not a number",
                    detail={"line": lineno, "field": f"score:{cname}"},
                ) from None
        instances.append(Instance(id=iid, label=label, features=features))

    return _assemble(
        None, instances, [(n, score_maps[n]) for _, n in score_cols],
        normalize, provenance, report,
    )


def _assemble(
    classes: tuple[str, str] | None,
    instances: list[Instance],
    score_maps: list[tuple[str, dict[str, float]]],
    normalize: bool,
    provenance: str,
    report: ValidationReport,
):
    # CSV carries no class declaration: classes are the sorted observed labels,
    # positive = second.
    if classes is None:
        observed = sorted({i.label for i in instances})
        if len(observed) > 2:
            report.error("NON_BINARY_LABEL", f"more than two labels present: {observed}")
            classes = (observed[0], observed[1])
        elif len(observed) == 2:
            classes = (observed[0], observed[1])
        elif len(observed) == 1:
            classes = (observed[0] + "__other", observed[0])
        else:
            classes = ("negative", "positive")

    seen: set[str] = set()
    for inst in instances:
        if inst.id in seen:
            report.error("DUPLICATE_ID", f"instance id {inst.id!r} appears twice", inst.id)
        seen.add(inst.id)
        if inst.label not in classes:
            report.error(
                "NON_BINARY_LABEL",
                f"label {inst.label!r} of {inst.id!r} is not one of {list(classes)}",
                inst.id,
            )
    if len(instances) < 2:
        report.error("TOO_FEW_INSTANCES", "a dataset needs at least 2 instances")
    if not score_maps:
        report.error("NO_CLASSIFIERS", "a dataset needs at least 1 classifier")

    ids = {i.id for i in instances}
    classifiers: list[ClassifierResult] = []
    normalized_any = False
    for name, scores in score_maps:
        for iid in sorted(ids - scores.keys()):
            report.error("MISSING_SCORE", f"classifier {name!r} has no score for {iid!r}", iid)
        for iid in sorted(scores.keys() - ids):
            report.error(
                "UNKNOWN_SCORE_ID", f"classifier {name!r} scores unknown id {iid!r}", iid
            )
        norm_bounds = None
        if scores and ids <= scores.keys():
            values = [scores[i] for i in ids]
            lo, hi = min(values), max(values)
            if lo < 0.0 or hi > 1.0:
                if not normalize:
                    report.error(
                        "SCORE_OUT_OF_RANGE",
                        f"classifier {name!r} has scores outside [0, 1] "
                        f"(min {lo}, max {hi}); pass normalize to rescale",
                    )
                elif hi == lo:
                    # constant out-of-range scores: map to 0.5 so downstream
                    # binning stays total-preserving
                    scores = {i: 0.5 for i in scores}
                    norm_bounds = (lo, hi)
                    normalized_any = True
                    report.warn(
                        "CONSTANT_SCORES",
                        f"classifier {name!r} has constant scores; normalized to 0.5",
                    )
                else:
                    scores = {i: (s - lo) / (hi - lo) for i, s in scores.items()}
                    norm_bounds = (lo, hi)
                    normalized_any = True
                    report.warn(
                        "SCORES_NORMALIZED",
                        f"classifier {name!r} min-max normalized from [{lo}, {hi}] to [0, 1]",
                    )
        classifiers.append(
            ClassifierResult(name=name, scores=scores, norm_bounds=norm_bounds)
        )

    per_class = {c: sum(1 for i in instances if i.label == c) for c in classes}
    if instances and min(per_class.values()) == 0:
        report.warn(
            "SINGLE_CLASS",
            "only one class present; ranking metrics will be undefined",
        )
    report.counts = {
        "instances": len(instances),
        "classifiers": len(score_maps),
        "per_class": per_class,
        "scores_normalized": normalized_any,
    }

    if not report.ok:
        return None, report
    return Dataset(classes, instances, classifiers, provenance=provenance), report


# -- instance access ---------------------------------------------------------


def list_instances(
    dataset: Dataset,
    operating_points: Mapping[str, "OperatingPoint"],
    classifiers: list[ClassifierResult] | None = None,
    *,
    members=None,
    offset: int = 0,
    limit: int = 50,
) -> list[dict]:
    """Tabular rows (id, label, features, per-classifier score and outcome).

    Rows come back in sorted-id order; ``members`` restricts to a selection.
    """
    from .trinary import classify

    if offset < 0 or limit < 1:
        raise InvalidArgumentError("offset must be >= 0 and limit >= 1")
    clfs = dataset.classifiers if classifiers is None else classifiers
    mask = dataset.scope_mask(members)
    rows = []
    for k in np.flatnonzero(mask)[offset : offset + limit]:
        inst = dataset.instances[int(k)]
        positive = bool(dataset.labels_positive[int(k)])
        per_clf = {}
        for clf in clfs:
            op = operating_points[clf.name]
            score = clf.scores[inst.id]
            per_clf[clf.name] = {
                "score": score,
                "outcome": classify(score, positive, op),
            }
        rows.append(
            {
                "id": inst.id,
                "label": inst.label,
                "features": dict(inst.features),
                "classifiers": per_clf,
            }
        )
    return rows


def get_instance(
    dataset: Dataset,
    instance_id: str,
    operating_points: Mapping[str, "OperatingPoint"],
    classifiers: list[ClassifierResult] | None = None,
) -> dict:
    """Detail payload for one instance: label, features, every score and
    the outcome at each classifier's current operating point."""
    rows = list_instances(
        dataset,
        operating_points,
        classifiers,
        members=[instance_id],
        offset=0,
        limit=1,
    )
    return rows[0]

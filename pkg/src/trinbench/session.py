"""Session state: one loaded dataset plus the mutable registries built on
top of it (selections, operating points with versions, derived classifiers,
samples, focus item) and exact export/import.

Mutations are serialized by a per-session lock; reads are safe to run
concurrently between writes because the dataset itself is immutable.
"""

from __future__ import annotations

import threading
import uuid
from typing import Mapping

import numpy as np

from .dataset import (
    KIND_DERIVED,
    ClassifierResult,
    Dataset,
    ValidationReport,
    load_dataset,
)
from .errors import (
    ConflictError,
    DatasetRejected,
    InvalidArgumentError,
    NotFoundError,
)
from .metrics import binary_metric, brier, combine_weights, confusion
from .metrics import auc as auc_metric
from .sampling import SampleResult, SampleSpec, bootstrap, partition
from .selections import (
    SLOTS,
    EvalContext,
    Predicate,
    PredicateLeaf,
    Selection,
    SelectionExpr,
    parse_expr,
    step_focus,
)
from .trinary import OperatingPoint, derive_classifier

DEFAULT_OPERATING_POINT = OperatingPoint(0.5, 0.5)

EXPORT_FORMAT = "trinbench-session"
EXPORT_VERSION = 1


class Session:
    def __init__(self, dataset: Dataset, report: ValidationReport, session_id: str | None = None):
        self.id = session_id or uuid.uuid4().hex[:12]
        self.dataset = dataset
        self.report = report
        self.lock = threading.RLock()
        self.classifiers: dict[str, ClassifierResult] = {
            c.name: c for c in dataset.classifiers
        }
        self.operating_points: dict[str, OperatingPoint] = {
            c.name: DEFAULT_OPERATING_POINT for c in dataset.classifiers
        }
        self.versions: dict[str, int] = {c.name: 0 for c in dataset.classifiers}
        self.state_version = 0
        self.selections: dict[str, Selection] = {}
        self.samples: dict[str, tuple[SampleSpec, SampleResult]] = {}
        self.focus: str | None = None
        self.focus_random_calls = 0
        self._sel_counter = 0
        self._sample_counter = 0

    # -- construction -----------------------------------------------------

    @classmethod
    def from_payload(cls, payload, *, normalize: bool = False) -> "Session":
        dataset, report = load_dataset(payload, normalize=normalize)
        if dataset is None:
            raise DatasetRejected("dataset failed validation", report=report)
        return cls(dataset, report)

    # -- lookups ----------------------------------------------------------

    def classifier(self, name: str) -> ClassifierResult:
        try:
            return self.classifiers[name]
        except KeyError:
            raise NotFoundError(
                f"unknown classifier {name!r}", code="UNKNOWN_CLASSIFIER"
            ) from None

    def operating_point(self, name: str) -> OperatingPoint:
        self.classifier(name)
        return self.operating_points[name]

    def selection(self, sel_id: str) -> Selection:
        try:
            return self.selections[sel_id]
        except KeyError:
            raise NotFoundError(
                f"unknown selection {sel_id!r}", code="UNKNOWN_SELECTION"
            ) from None

    def eval_ctx(self) -> EvalContext:
        return EvalContext(
            dataset=self.dataset,
            classifiers=self.classifiers,
            operating_points=self.operating_points,
        )

    def selection_mask(self, sel_id: str) -> np.ndarray:
        return self.selection(sel_id).resolve(self.eval_ctx(), self.state_version)

    def scope_mask(self, selection_id: str | None) -> np.ndarray | None:
        """Scope for computations: None (all) or a selection's member mask."""
        if selection_id is None:
            return None
        return self.selection_mask(selection_id)

    def slot_selection(self, slot: str) -> Selection | None:
        for sel in self.selections.values():
            if sel.slot == slot:
                return sel
        return None

    def slot_masks(self) -> dict[str, np.ndarray]:
        out = {}
        for slot in SLOTS:
            sel = self.slot_selection(slot)
            if sel is not None:
                out[slot] = sel.resolve(self.eval_ctx(), self.state_version)
        return out

    def session_weights(self) -> np.ndarray:
        """Combined weight vector from every weighted selection (product)."""
        weighted = [
            (sel.resolve(self.eval_ctx(), self.state_version), sel.weight)
            for sel in self.selections.values()
            if sel.weight != 1.0
        ]
        return combine_weights(self.dataset, weighted)

    # -- mutations ----------------------------------------------------------

    def set_operating_point(self, name: str, lower: float, upper: float) -> int:
        with self.lock:
            clf = self.classifier(name)
            if clf.kind == KIND_DERIVED:
                raise ConflictError(
                    f"classifier {name!r} is derived; its operating point is frozen",
                    code="FROZEN_OPERATING_POINT",
                )
            self.operating_points[name] = OperatingPoint(lower, upper)
            self.versions[name] += 1
            self.state_version += 1
            return self.versions[name]

    def derive(self, base_name: str, lower: float, upper: float, name: str) -> ClassifierResult:
        with self.lock:
            base = self.classifier(base_name)
            op = OperatingPoint(lower, upper)
            derived = derive_classifier(base, op, name, self.classifiers.keys())
            self.classifiers[name] = derived
            self.operating_points[name] = op
            self.versions[name] = 0
            self.state_version += 1
            return derived

    def add_selection(
        self,
        expr,
        name: str | None = None,
        weight: float = 1.0,
        slot: str | None = None,
        sel_id: str | None = None,
    ) -> Selection:
        if weight <= 0:
            raise InvalidArgumentError("selection weight must be positive")
        if slot is not None and slot not in SLOTS:
            raise InvalidArgumentError(f"slot must be one of {SLOTS} or null")
        tree = expr if isinstance(expr, SelectionExpr) else parse_expr(expr)
        with self.lock:
            self._sel_counter += 1
            sel = Selection(
                id=sel_id or f"sel-{self._sel_counter}",
                name=name or sel_id or f"sel-{self._sel_counter}",
                expr=tree,
                weight=float(weight),
                slot=slot,
            )
            # materialize now so reference errors surface at creation time
            sel.resolve(self.eval_ctx(), self.state_version)
            if slot is not None:
                previous = self.slot_selection(slot)
                if previous is not None:
                    previous.slot = None
            self.selections[sel.id] = sel
            return sel

    def add_sample(self, spec: SampleSpec) -> tuple[str, SampleResult, list[str]]:
        with self.lock:
            if spec.kind == "partition":
                if spec.p is None:
                    raise InvalidArgumentError("partition sample needs a fraction p")
                result = partition(self.dataset, spec.p, spec.stratify_by, spec.seed)
            elif spec.kind == "bootstrap":
                result = bootstrap(self.dataset, spec.seed)
            else:
                raise InvalidArgumentError(f"unknown sample kind {spec.kind!r}")
            self._sample_counter += 1
            sample_id = f"sample-{self._sample_counter}"
            self.samples[sample_id] = (spec, result)
            registered: list[str] = []
            if result.kind == "partition":
                for part_name, ids in (("A", result.a), ("B", result.b)):
                    sel = self.add_selection(
                        PredicateLeaf(Predicate("id-list", ids=tuple(ids or ()))),
                        name=f"{sample_id}-{part_name}",
                    )
                    registered.append(sel.id)
            return sample_id, result, registered

    def sample(self, sample_id: str) -> tuple[SampleSpec, SampleResult]:
        try:
            return self.samples[sample_id]
        except KeyError:
            raise NotFoundError(
                f"unknown sample {sample_id!r}", code="UNKNOWN_SAMPLE"
            ) from None

    def set_focus(self, instance_id: str | None) -> None:
        with self.lock:
            if instance_id is not None:
                self.dataset.instance(instance_id)  # 404 when unknown
            self.focus = instance_id

    def step_focus(self, mode: str, scope: str = "all", seed: int | None = None) -> str:
        """Move the focus item within "all", slot "A", or slot "B"."""
        with self.lock:
            if scope == "all":
                scope_ids = self.dataset.ids
            elif scope in SLOTS:
                sel = self.slot_selection(scope)
                if sel is None:
                    raise NotFoundError(
                        f"no selection occupies slot {scope}", code="UNKNOWN_SELECTION"
                    )
                mask = sel.resolve(self.eval_ctx(), self.state_version)
                scope_ids = self.dataset.ids_for(mask)
            else:
                raise InvalidArgumentError('focus scope must be "all", "A", or "B"')
            if mode == "random":
                picked = step_focus(
                    scope_ids, self.focus, mode,
                    seed=seed, call_index=self.focus_random_calls,
                )
                self.focus_random_calls += 1
            else:
                picked = step_focus(scope_ids, self.focus, mode)
            self.focus = picked
            return picked

    # -- summaries ----------------------------------------------------------

    def classifier_summary(self) -> list[dict]:
        """Per-classifier metrics table at the current operating points,
        under the session's combined selection weights (AUC unweighted)."""
        weights = self.session_weights()
        rows = []
        for name, clf in self.classifiers.items():
            op = self.operating_points[name]
            c = confusion(self.dataset, clf, op, weights=weights)
            metrics = {}
            for m in ("accuracy", "precision", "recall", "f1", "mcc"):
                metrics[m] = binary_metric(c, m).to_wire()
            try:
                metrics["auc"] = {"value": auc_metric(self.dataset, clf), "defined": True}
            except InvalidArgumentError:
                metrics["auc"] = {"value": 0.0, "defined": False}
            try:
                metrics["brier"] = {
                    "value": brier(self.dataset, clf, weights=weights),
                    "defined": True,
                }
            except InvalidArgumentError:
                metrics["brier"] = {"value": 0.0, "defined": False}
            rows.append(
                {
                    "name": name,
                    "kind": clf.kind,
                    "base": clf.base if clf.kind == KIND_DERIVED else None,
                    "operating_point": op.to_wire(),
                    "version": self.versions[name],
                    "confusion": c.to_wire(),
                    "metrics": metrics,
                }
            )
        return rows

    # -- export / import ------------------------------------------------------

    def export_doc(self) -> dict:
        """Full session document for exact replay: the dataset, every derived
        classifier, operating points with versions, selections with their
        expressions, and samples with realized ids/multiplicities."""
        derived = [
            {
                "name": c.name,
                "base": c.base,
                "lower": c.frozen_point.lower if c.frozen_point else 0.5,
                "upper": c.frozen_point.upper if c.frozen_point else 0.5,
            }
            for c in self.classifiers.values()
            if c.kind == KIND_DERIVED
        ]
        return {
            "format": EXPORT_FORMAT,
            "version": EXPORT_VERSION,
            "dataset": self.dataset.to_ingest_json(),
            "operating_points": [
                {
                    "classifier": name,
                    "lower": self.operating_points[name].lower,
                    "upper": self.operating_points[name].upper,
                    "version": self.versions[name],
                }
                for name, c in self.classifiers.items()
                if c.kind != KIND_DERIVED
            ],
            "derived": derived,
            "selections": [
                {
                    "id": sel.id,
                    "name": sel.name,
                    "weight": sel.weight,
                    "slot": sel.slot,
                    "expr": sel.expr.to_wire(),
                }
                for sel in self.selections.values()
            ],
            "samples": [
                {"id": sid, "spec": spec.to_wire(), "result": result.to_wire()}
                for sid, (spec, result) in self.samples.items()
            ],
            "focus": self.focus,
            "focus_random_calls": self.focus_random_calls,
            "counters": {
                "selection": self._sel_counter,
                "sample": self._sample_counter,
            },
        }

    @classmethod
    def from_export(cls, doc: Mapping) -> "Session":
        if doc.get("format") != EXPORT_FORMAT:
            raise InvalidArgumentError("not a session export document")
        if not isinstance(doc.get("dataset"), Mapping):
            raise InvalidArgumentError("export document is missing its dataset")
        session = cls.from_payload(doc["dataset"])
        for d in doc.get("derived", ()):
            session.derive(d["base"], d["lower"], d["upper"], d["name"])
        for entry in doc.get("operating_points", ()):
            name = entry["classifier"]
            session.classifier(name)
            session.operating_points[name] = OperatingPoint(entry["lower"], entry["upper"])
            session.versions[name] = int(entry.get("version", 0))
        session.state_version += 1
        for s in doc.get("selections", ()):
            session.add_selection(
                s["expr"],
                name=s.get("name"),
                weight=s.get("weight", 1.0),
                slot=s.get("slot"),
                sel_id=s["id"],
            )
        for s in doc.get("samples", ()):
            spec = SampleSpec(
                kind=s["spec"]["kind"],
                seed=s["spec"]["seed"],
                p=s["spec"].get("p"),
                stratify_by=s["spec"].get("stratify_by"),
            )
            raw = s["result"]
            result = SampleResult(
                kind=raw["kind"],
                seed=raw["seed"],
                a=tuple(raw.get("a", ())) if raw["kind"] == "partition" else None,
                b=tuple(raw.get("b", ())) if raw["kind"] == "partition" else None,
                multiplicity=(
                    {k: int(v) for k, v in raw["multiplicity"].items()}
                    if raw["kind"] == "bootstrap"
                    else None
                ),
            )
            session.samples[s["id"]] = (spec, result)
        counters = doc.get("counters", {})
        session._sel_counter = max(
            session._sel_counter, int(counters.get("selection", 0))
        )
        session._sample_counter = int(counters.get("sample", 0))
        session.focus = doc.get("focus")
        session.focus_random_calls = int(doc.get("focus_random_calls", 0))
        return session


class SessionStore:
    """In-memory session registry; distinct sessions are fully independent."""

    def __init__(self):
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()

    def add(self, session: Session) -> Session:
        with self._lock:
            self._sessions[session.id] = session
        return session

    def get(self, session_id: str) -> Session:
        try:
            return self._sessions[session_id]
        except KeyError:
            raise NotFoundError(
                f"unknown session {session_id!r}", code="UNKNOWN_SESSION"
            ) from None

    def remove(self, session_id: str) -> None:
        with self._lock:
            if self._sessions.pop(session_id, None) is None:
                raise NotFoundError(
                    f"unknown session {session_id!r}", code="UNKNOWN_SESSION"
                )

    def ids(self) -> list[str]:
        return list(self._sessions)

"""HTTP/JSON service exposing sessions, selections, operating points,
metrics, curves, and samples.

All computation happens server side; clients receive render-ready series.
Error bodies are always ``{"code", "message", "detail?"}``. Large curve
responses are emitted as plain JSON without model re-encoding to keep the
interactive latency budget.
"""

from __future__ import annotations

import json
from typing import Optional

import numpy as np
from fastapi import FastAPI, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, Response
from pydantic import BaseModel

from . import curves as curves_mod
from .curves import BinSpec
from .dataset import get_instance, list_instances
from .errors import EngineError, InvalidArgumentError, ParseError
from .metrics import ALL_METRICS
from .sampling import SampleSpec
from .selections import evaluate_predicate
from .session import EXPORT_FORMAT, Session, SessionStore
from .trinary import CATEGORIES, outcome_codes, trinary_summary

CURVE_KINDS = (
    "roc", "pr", "reliability", "perf-conf", "arc", "bandwidth",
    "heatmap", "scatter", "feature-histogram", "trinary-summary",
)


class OperatingPointBody(BaseModel):
    lower: float
    upper: float
    classifier: Optional[str] = None


class DerivedBody(BaseModel):
    base: str
    name: str
    lower: float
    upper: float


class SelectionBody(BaseModel):
    expr: dict
    name: Optional[str] = None
    weight: float = 1.0
    slot: Optional[str] = None


class SampleBody(BaseModel):
    kind: str
    seed: int
    p: Optional[float] = None
    stratify_by: Optional[str] = None


class FocusBody(BaseModel):
    id: Optional[str] = None


class FocusStepBody(BaseModel):
    mode: str
    scope: str = "all"
    seed: Optional[int] = None


def respond(body, status: int = 200) -> JSONResponse:
    return JSONResponse(content=body, status_code=status)


def create_app(store: SessionStore | None = None, cors_origin: str | None = None) -> FastAPI:
    app = FastAPI(title="trinbench", docs_url=None, redoc_url=None)
    app.state.store = store or SessionStore()

    if cors_origin:
        from fastapi.middleware.cors import CORSMiddleware

        app.add_middleware(
            CORSMiddleware,
            allow_origins=[cors_origin],
            allow_methods=["*"],
            allow_headers=["*"],
        )

    @app.exception_handler(EngineError)
    async def engine_error_handler(_request, exc: EngineError):
        return JSONResponse(status_code=exc.http_status, content=exc.to_wire())

    @app.exception_handler(RequestValidationError)
    async def validation_error_handler(_request, exc: RequestValidationError):
        return JSONResponse(
            status_code=422,
            content={
                "code": "INVALID_REQUEST",
                "message": "request body or parameters failed validation",
                "detail": json.loads(json.dumps(exc.errors(), default=str)),
            },
        )

    def sessions() -> SessionStore:
        return app.state.store

    # -- sessions -----------------------------------------------------------

    @app.post("/sessions", status_code=201)
    async def create_session(request: Request, normalize: bool = False):
        content_type = request.headers.get("content-type", "")
        if content_type.startswith("text/csv"):
            payload = (await request.body()).decode("utf-8")
        else:
            try:
                payload = await request.json()
            except json.JSONDecodeError as exc:
                raise ParseError(f"malformed JSON: {exc.msg}") from None
        if isinstance(payload, dict) and payload.get("format") == EXPORT_FORMAT:
            session = Session.from_export(payload)
        else:
            session = Session.from_payload(payload, normalize=normalize)
        sessions().add(session)
        return respond(
            {"session": session.id, "report": session.report.to_wire()}, status=201
        )

    @app.get("/sessions")
    def list_sessions():
        return respond({"sessions": sessions().ids()})

    @app.get("/sessions/{sid}")
    def session_info(sid: str):
        s = sessions().get(sid)
        return respond(
            {
                "session": s.id,
                "classes": list(s.dataset.classes),
                "counts": s.report.counts,
                "features": list(s.dataset.feature_names),
                "focus": s.focus,
                "report": s.report.to_wire(),
            }
        )

    @app.delete("/sessions/{sid}", status_code=204)
    def delete_session(sid: str):
        sessions().remove(sid)
        return Response(status_code=204)

    # -- classifiers and operating points ------------------------------------

    @app.get("/sessions/{sid}/classifiers")
    def classifiers(sid: str):
        return respond({"classifiers": sessions().get(sid).classifier_summary()})

    @app.put("/sessions/{sid}/operating-points/{classifier}")
    def put_operating_point(sid: str, classifier: str, body: OperatingPointBody):
        if body.classifier is not None and body.classifier != classifier:
            raise InvalidArgumentError(
                "classifier in body does not match the path", code="CLASSIFIER_MISMATCH"
            )
        s = sessions().get(sid)
        version = s.set_operating_point(classifier, body.lower, body.upper)
        return respond(
            {
                "classifier": classifier,
                "lower": s.operating_points[classifier].lower,
                "upper": s.operating_points[classifier].upper,
                "version": version,
            }
        )

    @app.post("/sessions/{sid}/classifiers/derived", status_code=201)
    def post_derived(sid: str, body: DerivedBody):
        s = sessions().get(sid)
        derived = s.derive(body.base, body.lower, body.upper, body.name)
        return respond(
            {
                "name": derived.name,
                "kind": derived.kind,
                "base": derived.base,
                "operating_point": s.operating_points[derived.name].to_wire(),
            },
            status=201,
        )

    # -- selections -----------------------------------------------------------

    def selection_wire(s: Session, sel) -> dict:
        mask = sel.resolve(s.eval_ctx(), s.state_version)
        return {
            "id": sel.id,
            "name": sel.name,
            "weight": sel.weight,
            "slot": sel.slot,
            "size": int(mask.sum()),
            "expr": sel.expr.to_wire(),
        }

    @app.post("/sessions/{sid}/selections", status_code=201)
    def post_selection(sid: str, body: SelectionBody):
        s = sessions().get(sid)
        sel = s.add_selection(body.expr, name=body.name, weight=body.weight, slot=body.slot)
        return respond(selection_wire(s, sel), status=201)

    @app.get("/sessions/{sid}/selections")
    def get_selections(sid: str):
        s = sessions().get(sid)
        return respond({"selections": [selection_wire(s, sel) for sel in s.selections.values()]})

    @app.get("/sessions/{sid}/selections/{sel_id}/members")
    def get_members(sid: str, sel_id: str):
        s = sessions().get(sid)
        mask = s.selection_mask(sel_id)
        return respond({"members": list(s.dataset.ids_for(mask))})

    # -- instances --------------------------------------------------------------

    @app.get("/sessions/{sid}/instances")
    def get_instances(
        sid: str,
        offset: int = 0,
        limit: int = 50,
        selection: Optional[str] = None,
    ):
        s = sessions().get(sid)
        scope = s.scope_mask(selection)
        rows = list_instances(
            s.dataset,
            s.operating_points,
            list(s.classifiers.values()),
            members=scope,
            offset=offset,
            limit=limit,
        )
        total = int(scope.sum()) if scope is not None else s.dataset.size
        return respond({"rows": rows, "total": total, "offset": offset})

    @app.get("/sessions/{sid}/instances/{instance_id}")
    def get_one_instance(sid: str, instance_id: str):
        s = sessions().get(sid)
        return respond(
            get_instance(
                s.dataset, instance_id, s.operating_points, list(s.classifiers.values())
            )
        )

    # -- samples ---------------------------------------------------------------

    @app.post("/sessions/{sid}/samples", status_code=201)
    def post_sample(sid: str, body: SampleBody):
        s = sessions().get(sid)
        spec = SampleSpec(
            kind=body.kind, seed=body.seed, p=body.p, stratify_by=body.stratify_by
        )
        sample_id, result, registered = s.add_sample(spec)
        return respond(
            {"id": sample_id, "result": result.to_wire(), "selections": registered},
            status=201,
        )

    @app.get("/sessions/{sid}/samples")
    def get_samples(sid: str):
        s = sessions().get(sid)
        return respond(
            {
                "samples": [
                    {"id": sample_id, "spec": spec.to_wire(), "result": result.to_wire()}
                    for sample_id, (spec, result) in s.samples.items()
                ]
            }
        )

    # -- focus -------------------------------------------------------------------

    def focus_payload(s: Session) -> dict:
        detail = None
        if s.focus is not None:
            detail = get_instance(
                s.dataset, s.focus, s.operating_points, list(s.classifiers.values())
            )
        return {"focus": s.focus, "detail": detail}

    @app.put("/sessions/{sid}/focus")
    def put_focus(sid: str, body: FocusBody):
        s = sessions().get(sid)
        s.set_focus(body.id)
        return respond(focus_payload(s))

    @app.post("/sessions/{sid}/focus/step")
    def post_focus_step(sid: str, body: FocusStepBody):
        s = sessions().get(sid)
        s.step_focus(body.mode, scope=body.scope, seed=body.seed)
        return respond(focus_payload(s))

    # -- export ---------------------------------------------------------------

    @app.get("/sessions/{sid}/export")
    def export_session(sid: str):
        return respond(sessions().get(sid).export_doc())

    # -- curves ---------------------------------------------------------------

    @app.get("/sessions/{sid}/curves/{kind}")
    def get_curve(
        sid: str,
        kind: str,
        classifier: Optional[list[str]] = Query(default=None),
        selection: Optional[list[str]] = Query(default=None),
        metric: str = "accuracy",
        bins: int = 10,
        resolution: int = 20,
        threshold: float = 0.5,
        steps: int = 101,
        bandwidths: str = "0.05,0.1,0.2",
        mode: str = "fraction-positive",
        feature: Optional[str] = None,
        x: Optional[str] = None,
        y: Optional[str] = None,
    ):
        if kind not in CURVE_KINDS:
            raise InvalidArgumentError(
                f"unknown curve kind {kind!r}; one of {CURVE_KINDS}", code="UNKNOWN_CURVE"
            )
        if metric not in ALL_METRICS:
            raise InvalidArgumentError(f"unknown metric {metric!r}", code="UNKNOWN_METRIC")
        s = sessions().get(sid)
        # comparison kinds draw one series per classifier x selection;
        # single-scope kinds (histograms, grids) take at most one selection
        if selection:
            scopes = [
                (s.selection(sel_id).name, s.selection_mask(sel_id))
                for sel_id in selection
            ]
        else:
            scopes = [(None, None)]
        if len(scopes) > 1 and kind not in ("roc", "pr", "arc", "reliability", "bandwidth"):
            raise InvalidArgumentError(f"curve kind {kind!r} takes at most one selection")
        scope = scopes[0][1]
        names = classifier or list(s.classifiers)
        clfs = [s.classifier(n) for n in names]
        ds = s.dataset

        def scoped_label(clf_name: str, scope_name: str | None) -> str:
            return clf_name if scope_name is None else f"{clf_name} | {scope_name}"

        if kind in ("roc", "pr", "arc"):
            out = []
            for c in clfs:
                for scope_name, mask in scopes:
                    if kind == "roc":
                        series = curves_mod.roc_curve(ds, c, mask)
                    elif kind == "pr":
                        series = curves_mod.pr_curve(ds, c, mask)
                    else:
                        series = curves_mod.rejection_curve(
                            ds, c, threshold, metric, mask, steps
                        )
                    series.label = scoped_label(c.name, scope_name)
                    out.append(series.to_wire())
            return respond({"series": out})
        if kind == "reliability":
            spec = BinSpec(bins)
            out = []
            for c in clfs:
                for scope_name, mask in scopes:
                    rows = curves_mod.reliability_curve(
                        ds, c, spec, mode, mask, op=s.operating_points[c.name]
                    )
                    out.append(
                        {
                            "label": scoped_label(c.name, scope_name),
                            "bins": [r.to_wire() for r in rows],
                        }
                    )
            return respond({"series": out})
        if kind == "perf-conf":
            spec = BinSpec(bins)
            slot_masks = s.slot_masks()
            out = []
            for c in clfs:
                op = s.operating_points[c.name]
                rows = curves_mod.perf_conf_histogram(ds, c, op, spec, scope)
                entry = {
                    "label": c.name,
                    "bins": [r.to_wire() for r in rows],
                    "overlaps": _perf_conf_overlaps(s, c, spec, scope, slot_masks),
                }
                out.append(entry)
            return respond({"series": out})
        if kind == "bandwidth":
            try:
                bw = [float(b) for b in bandwidths.split(",") if b.strip() != ""]
            except ValueError:
                raise InvalidArgumentError(
                    "bandwidths must be a comma-separated list of numbers"
                ) from None
            out = []
            for c in clfs:
                for scope_name, mask in scopes:
                    assess = curves_mod.bandwidth_series(
                        ds, c, bw, metric, resolution, mask
                    )
                    assess.label = scoped_label(c.name, scope_name)
                    out.append(assess.to_wire())
            return respond({"series": out})
        if kind == "heatmap":
            if len(clfs) != 1:
                raise InvalidArgumentError("heatmap needs exactly one classifier")
            cells = curves_mod.threshold_grid(ds, clfs[0], metric, resolution, scope)
            return respond(
                {
                    "label": clfs[0].name,
                    "resolution": resolution,
                    "cells": [c.to_wire() for c in cells],
                }
            )
        if kind == "scatter":
            if not x or not y:
                raise InvalidArgumentError('scatter needs "x" and "y" variables')
            grid = curves_mod.scatter_bins(
                ds, x, y, (resolution, resolution), scope,
                overlays=s.slot_masks(), classifiers=s.classifiers,
            )
            return respond(grid.to_wire())
        if kind == "feature-histogram":
            if not feature:
                raise InvalidArgumentError('feature-histogram needs a "feature"')
            bars = curves_mod.feature_histogram(ds, feature, bins, scope)
            slot_masks = s.slot_masks()
            overlaps: dict[str, list[int]] = {}
            if slot_masks:
                ctx = s.eval_ctx()
                bar_masks = [evaluate_predicate(b.predicate, ctx) for b in bars]
                if scope is not None:
                    bar_masks = [m & scope for m in bar_masks]
                for slot, mask in slot_masks.items():
                    overlaps[slot] = [int((mask & m).sum()) for m in bar_masks]
            return respond(
                {
                    "feature": feature,
                    "bars": [b.to_wire() for b in bars],
                    "overlaps": overlaps,
                }
            )
        # trinary-summary
        slot_masks = s.slot_masks()
        weights = s.session_weights()
        out = []
        for c in clfs:
            op = s.operating_points[c.name]
            counts = trinary_summary(ds, c, op, scope, weights=weights)
            overlaps = _trinary_overlaps(s, c, scope, slot_masks)
            out.append(
                {
                    "label": c.name,
                    "operating_point": op.to_wire(),
                    "counts": counts.to_wire(),
                    "overlaps": overlaps,
                }
            )
        return respond({"series": out})

    def _perf_conf_overlaps(s: Session, clf, spec: BinSpec, scope, slot_masks):
        """Per (bin, category) overlap counts for the slot selections."""
        if not slot_masks:
            return {}
        ds = s.dataset
        scores = ds.score_array(clf)
        codes = outcome_codes(scores, ds.labels_positive, s.operating_points[clf.name])
        idx = spec.indices(scores)
        key = idx * 5 + codes
        base = np.ones(ds.size, dtype=bool) if scope is None else scope
        out = {}
        for slot, mask in slot_masks.items():
            flat = np.bincount(key[mask & base], minlength=spec.count * 5)
            out[slot] = flat.reshape(spec.count, 5).tolist()
        return out

    def _trinary_overlaps(s: Session, clf, scope, slot_masks):
        if not slot_masks:
            return {}
        ds = s.dataset
        codes = outcome_codes(
            ds.score_array(clf), ds.labels_positive, s.operating_points[clf.name]
        )
        base = np.ones(ds.size, dtype=bool) if scope is None else scope
        out = {}
        for slot, mask in slot_masks.items():
            counts = np.bincount(codes[mask & base], minlength=5)
            out[slot] = {cat: int(counts[k]) for k, cat in enumerate(CATEGORIES)}
        return out

    return app

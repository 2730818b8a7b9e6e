import json

import pytest
from fastapi.testclient import TestClient

from trinbench.service import create_app

from conftest import make_payload


@pytest.fixture
def client():
    return TestClient(create_app())


FOUR = make_payload(
    {"LR": {"a": 0.9, "b": 0.8, "c": 0.3, "d": 0.1}},
    {"a": "pos", "b": "neg", "c": "neg", "d": "pos"},
)


def new_session(client, payload=None, **params):
    response = client.post("/sessions", json=payload or FOUR, params=params)
    assert response.status_code == 201, response.text
    return response.json()["session"]


class TestSessions:
    def test_create_returns_report(self, client):
        response = client.post("/sessions", json=FOUR)
        assert response.status_code == 201
        body = response.json()
        assert body["report"]["errors"] == []
        assert body["report"]["counts"]["instances"] == 4

    def test_invalid_dataset_422_with_report(self, client):
        bad = json.loads(json.dumps(FOUR))
        del bad["classifiers"][0]["scores"]["a"]
        response = client.post("/sessions", json=bad)
        assert response.status_code == 422
        body = response.json()
        assert body["code"] == "INVALID_DATASET"
        assert any(e["code"] == "MISSING_SCORE" for e in body["detail"]["errors"])

    def test_csv_ingest(self, client):
        csv_text = "id,label,score:m\nx,pos,0.8\ny,neg,0.1\n"
        response = client.post(
            "/sessions", content=csv_text, headers={"content-type": "text/csv"}
        )
        assert response.status_code == 201

    def test_unknown_session_404(self, client):
        response = client.get("/sessions/nope/classifiers")
        assert response.status_code == 404
        assert response.json()["code"] == "UNKNOWN_SESSION"

    def test_delete(self, client):
        sid = new_session(client)
        assert client.delete(f"/sessions/{sid}").status_code == 204
        assert client.get(f"/sessions/{sid}").status_code == 404


class TestClassifiers:
    def test_summary_table(self, client):
        sid = new_session(client)
        body = client.get(f"/sessions/{sid}/classifiers").json()
        (row,) = body["classifiers"]
        assert row["name"] == "LR"
        assert row["operating_point"] == {"lower": 0.5, "upper": 0.5}
        assert row["metrics"]["accuracy"]["value"] == 0.5
        # pos scores {0.9, 0.1} vs neg {0.8, 0.3}: 2 of 4 pairs ordered
        assert row["metrics"]["auc"]["value"] == 0.5
        assert row["metrics"]["mcc"]["value"] == 0.0

    def test_put_operating_point_bumps_version(self, client):
        sid = new_session(client)
        response = client.put(
            f"/sessions/{sid}/operating-points/LR", json={"lower": 0.2, "upper": 0.85}
        )
        assert response.status_code == 200
        assert response.json()["version"] == 1
        # read-after-write: summary reflects the new point
        body = client.get(f"/sessions/{sid}/curves/trinary-summary").json()
        counts = body["series"][0]["counts"]
        assert counts["rejected"] == 2.0
        assert counts["tp"] == 1.0

    def test_put_invalid_point_422(self, client):
        sid = new_session(client)
        response = client.put(
            f"/sessions/{sid}/operating-points/LR", json={"lower": 0.9, "upper": 0.2}
        )
        assert response.status_code == 422

    def test_derive_and_freeze(self, client):
        sid = new_session(client)
        response = client.post(
            f"/sessions/{sid}/classifiers/derived",
            json={"base": "LR", "name": "LR@band", "lower": 0.4, "upper": 0.6},
        )
        assert response.status_code == 201
        # frozen: PUT on the derived classifier conflicts
        response = client.put(
            f"/sessions/{sid}/operating-points/LR@band", json={"lower": 0.1, "upper": 0.9}
        )
        assert response.status_code == 409
        assert response.json()["code"] == "FROZEN_OPERATING_POINT"
        # moving the base must not change the derived outcomes
        before = client.get(
            f"/sessions/{sid}/curves/trinary-summary", params={"classifier": "LR@band"}
        ).json()
        client.put(f"/sessions/{sid}/operating-points/LR", json={"lower": 0.0, "upper": 1.0})
        after = client.get(
            f"/sessions/{sid}/curves/trinary-summary", params={"classifier": "LR@band"}
        ).json()
        assert before == after

    def test_derive_duplicate_409(self, client):
        sid = new_session(client)
        body = {"base": "LR", "name": "LR2", "lower": 0.5, "upper": 0.5}
        assert client.post(f"/sessions/{sid}/classifiers/derived", json=body).status_code == 201
        response = client.post(f"/sessions/{sid}/classifiers/derived", json=body)
        assert response.status_code == 409
        assert response.json()["code"] == "DUPLICATE_NAME"


class TestSelections:
    def test_create_and_members(self, client):
        sid = new_session(client)
        response = client.post(
            f"/sessions/{sid}/selections",
            json={
                "name": "errors",
                "expr": {
                    "op": "union",
                    "args": [
                        {"pred": {"kind": "outcome", "classifier": "LR", "category": "FP"}},
                        {"pred": {"kind": "outcome", "classifier": "LR", "category": "FN"}},
                    ],
                },
                "slot": "A",
            },
        )
        assert response.status_code == 201
        body = response.json()
        assert body["size"] == 2
        members = client.get(
            f"/sessions/{sid}/selections/{body['id']}/members"
        ).json()["members"]
        assert members == ["b", "d"]

    def test_selection_tracks_operating_point(self, client):
        sid = new_session(client)
        sel = client.post(
            f"/sessions/{sid}/selections",
            json={"expr": {"pred": {"kind": "outcome", "classifier": "LR", "category": "Rejected"}}},
        ).json()
        assert sel["size"] == 0
        client.put(f"/sessions/{sid}/operating-points/LR", json={"lower": 0.2, "upper": 0.85})
        members = client.get(
            f"/sessions/{sid}/selections/{sel['id']}/members"
        ).json()["members"]
        assert members == ["b", "c"]

    def test_unknown_classifier_422(self, client):
        sid = new_session(client)
        response = client.post(
            f"/sessions/{sid}/selections",
            json={"expr": {"pred": {"kind": "outcome", "classifier": "XX", "category": "FP"}}},
        )
        assert response.status_code == 422
        assert response.json()["code"] == "UNKNOWN_CLASSIFIER"

    def test_slot_displacement(self, client):
        sid = new_session(client)
        first = client.post(
            f"/sessions/{sid}/selections",
            json={"expr": {"pred": {"kind": "id-list", "ids": ["a"]}}, "slot": "A"},
        ).json()
        client.post(
            f"/sessions/{sid}/selections",
            json={"expr": {"pred": {"kind": "id-list", "ids": ["b"]}}, "slot": "A"},
        )
        listing = client.get(f"/sessions/{sid}/selections").json()["selections"]
        slots = {s["id"]: s["slot"] for s in listing}
        assert slots[first["id"]] is None
        assert sum(1 for s in listing if s["slot"] == "A") == 1

    def test_unknown_selection_404(self, client):
        sid = new_session(client)
        assert client.get(f"/sessions/{sid}/selections/zz/members").status_code == 404


class TestInstances:
    def test_list_and_detail(self, client):
        sid = new_session(client)
        body = client.get(f"/sessions/{sid}/instances", params={"limit": 2}).json()
        assert [r["id"] for r in body["rows"]] == ["a", "b"]
        assert body["total"] == 4
        detail = client.get(f"/sessions/{sid}/instances/a").json()
        assert detail["classifiers"]["LR"]["outcome"] == "TP"

    def test_filtered_by_selection(self, client):
        sid = new_session(client)
        sel = client.post(
            f"/sessions/{sid}/selections",
            json={"expr": {"pred": {"kind": "id-list", "ids": ["b", "d"]}}},
        ).json()
        body = client.get(
            f"/sessions/{sid}/instances", params={"selection": sel["id"]}
        ).json()
        assert [r["id"] for r in body["rows"]] == ["b", "d"]

    def test_unknown_instance_404(self, client):
        sid = new_session(client)
        assert client.get(f"/sessions/{sid}/instances/zz").status_code == 404


class TestCurveEndpoints:
    def test_roc_shape(self, client):
        sid = new_session(client)
        body = client.get(f"/sessions/{sid}/curves/roc").json()
        series = body["series"][0]
        assert series["label"] == "LR"
        assert series["points"][0] == {"x": 0.0, "y": 0.0, "param": None, "undefined": False}
        assert series["points"][-1]["x"] == 1.0

    def test_arc_mcc_at_zero_rejection(self, client):
        # x = 0 point carries the MCC of confusion (1,1,1,1) = 0
        sid = new_session(client)
        body = client.get(
            f"/sessions/{sid}/curves/arc",
            params={"metric": "mcc", "threshold": 0.5},
        ).json()
        points = body["series"][0]["points"]
        assert points[0]["x"] == 0.0
        assert points[0]["y"] == 0.0
        assert points[0]["undefined"] is False

    def test_reliability_and_perf_conf(self, client):
        sid = new_session(client)
        rel = client.get(f"/sessions/{sid}/curves/reliability", params={"bins": 10}).json()
        assert len(rel["series"][0]["bins"]) == 10
        pc = client.get(f"/sessions/{sid}/curves/perf-conf", params={"bins": 10}).json()
        bins = pc["series"][0]["bins"]
        assert bins[9]["counts"]["TP"] == 1
        assert bins[8]["counts"]["FP"] == 1

    def test_heatmap_cells(self, client):
        sid = new_session(client)
        body = client.get(
            f"/sessions/{sid}/curves/heatmap",
            params={"classifier": "LR", "resolution": 4},
        ).json()
        assert len(body["cells"]) == 5 * 6 // 2
        cell = body["cells"][0]
        assert set(cell) == {"lower", "upper", "value", "coverage", "undefined"}

    def test_bandwidth(self, client):
        sid = new_session(client)
        body = client.get(
            f"/sessions/{sid}/curves/bandwidth",
            params={"bandwidths": "0,0.35", "resolution": 10},
        ).json()
        series = body["series"][0]
        k = series["thresholds"].index(0.5)
        assert series["bands"][1]["upper"][k]["value"] == pytest.approx(0.75)
        assert series["bands"][1]["lower"][k]["value"] == pytest.approx(0.25)

    def test_scatter_and_histogram(self, client):
        payload = make_payload(
            {"m": {"a": 0.2, "b": 0.9}},
            {"a": "neg", "b": "pos"},
            features={"a": {"age": 30.0, "sex": "M"}, "b": {"age": 60.0, "sex": "F"}},
        )
        sid = new_session(client, payload)
        scatter = client.get(
            f"/sessions/{sid}/curves/scatter",
            params={"x": "score:m", "y": "feature:age", "resolution": 2},
        ).json()
        assert scatter["total"] == 2
        hist = client.get(
            f"/sessions/{sid}/curves/feature-histogram", params={"feature": "sex"}
        ).json()
        assert [(b["label"], b["count"]) for b in hist["bars"]] == [("F", 1), ("M", 1)]

    def test_trinary_summary_with_overlaps(self, client):
        sid = new_session(client)
        client.post(
            f"/sessions/{sid}/selections",
            json={"expr": {"pred": {"kind": "class", "label": "pos"}}, "slot": "A"},
        )
        body = client.get(f"/sessions/{sid}/curves/trinary-summary").json()
        entry = body["series"][0]
        assert entry["counts"]["total"] == 4.0
        assert entry["overlaps"]["A"]["TP"] == 1
        assert entry["overlaps"]["A"]["FN"] == 1

    def test_multi_selection_comparison_series(self, client):
        sid = new_session(client)
        pos = client.post(
            f"/sessions/{sid}/selections",
            json={"name": "positives", "expr": {"pred": {"kind": "class", "label": "pos"}}},
        ).json()
        subset = client.post(
            f"/sessions/{sid}/selections",
            json={"name": "pair", "expr": {"pred": {"kind": "id-list", "ids": ["a", "c"]}}},
        ).json()
        body = client.get(
            f"/sessions/{sid}/curves/arc",
            params=[("selection", subset["id"]), ("selection", pos["id"]), ("metric", "accuracy")],
        ).json()
        assert [s["label"] for s in body["series"]] == ["LR | pair", "LR | positives"]
        # scoped to {a, c}: at b=0 the threshold 0.5 yields TP(a) + TN(c)
        first = body["series"][0]["points"][0]
        assert first["x"] == 0.0 and first["y"] == 1.0

    def test_single_scope_kind_rejects_multiple_selections(self, client):
        sid = new_session(client)
        s1 = client.post(
            f"/sessions/{sid}/selections",
            json={"expr": {"pred": {"kind": "id-list", "ids": ["a"]}}},
        ).json()
        s2 = client.post(
            f"/sessions/{sid}/selections",
            json={"expr": {"pred": {"kind": "id-list", "ids": ["b"]}}},
        ).json()
        response = client.get(
            f"/sessions/{sid}/curves/perf-conf",
            params=[("selection", s1["id"]), ("selection", s2["id"])],
        )
        assert response.status_code == 422

    def test_unknown_kind_422(self, client):
        sid = new_session(client)
        assert client.get(f"/sessions/{sid}/curves/nope").status_code == 422

    def test_single_class_roc_422(self, client):
        payload = make_payload({"m": {"a": 0.2, "b": 0.9}}, {"a": "pos", "b": "pos"})
        sid = new_session(client, payload)
        response = client.get(f"/sessions/{sid}/curves/roc")
        assert response.status_code == 422
        assert response.json()["code"] == "UNDEFINED_CURVE"


class TestSamples:
    def test_partition_registers_selections(self, client):
        sid = new_session(client)
        response = client.post(
            f"/sessions/{sid}/samples", json={"kind": "partition", "p": 0.5, "seed": 7}
        )
        assert response.status_code == 201
        body = response.json()
        assert len(body["result"]["a"]) == 2
        assert len(body["selections"]) == 2
        members = client.get(
            f"/sessions/{sid}/selections/{body['selections'][0]}/members"
        ).json()["members"]
        assert members == sorted(body["result"]["a"])

    def test_bootstrap_wire_form(self, client):
        sid = new_session(client)
        body = client.post(
            f"/sessions/{sid}/samples", json={"kind": "bootstrap", "seed": 3}
        ).json()
        assert body["result"]["kind"] == "bootstrap"
        assert sum(body["result"]["multiplicity"].values()) == 4


class TestFocus:
    def test_put_and_step(self, client):
        sid = new_session(client)
        body = client.put(f"/sessions/{sid}/focus", json={"id": "a"}).json()
        assert body["focus"] == "a"
        assert body["detail"]["classifiers"]["LR"]["outcome"] == "TP"
        stepped = client.post(
            f"/sessions/{sid}/focus/step", json={"mode": "next", "scope": "all"}
        ).json()
        assert stepped["focus"] == "b"

    def test_step_in_slot_scope(self, client):
        sid = new_session(client)
        client.post(
            f"/sessions/{sid}/selections",
            json={"expr": {"pred": {"kind": "id-list", "ids": ["b", "d"]}}, "slot": "B"},
        )
        stepped = client.post(
            f"/sessions/{sid}/focus/step", json={"mode": "next", "scope": "B"}
        ).json()
        assert stepped["focus"] == "b"

    def test_random_step_deterministic(self, client):
        sid1 = new_session(client)
        sid2 = new_session(client)
        seq1 = [
            client.post(
                f"/sessions/{sid1}/focus/step",
                json={"mode": "random", "scope": "all", "seed": 7},
            ).json()["focus"]
            for _ in range(4)
        ]
        seq2 = [
            client.post(
                f"/sessions/{sid2}/focus/step",
                json={"mode": "random", "scope": "all", "seed": 7},
            ).json()["focus"]
            for _ in range(4)
        ]
        assert seq1 == seq2

    def test_unknown_focus_404(self, client):
        sid = new_session(client)
        assert client.put(f"/sessions/{sid}/focus", json={"id": "zz"}).status_code == 404


class TestExportReplay:
    def test_export_import_preserves_everything(self, client):
        sid = new_session(client)
        client.put(f"/sessions/{sid}/operating-points/LR", json={"lower": 0.2, "upper": 0.85})
        client.post(
            f"/sessions/{sid}/classifiers/derived",
            json={"base": "LR", "name": "LR@.5", "lower": 0.5, "upper": 0.5},
        )
        client.post(
            f"/sessions/{sid}/selections",
            json={
                "name": "rejected",
                "expr": {"pred": {"kind": "outcome", "classifier": "LR", "category": "Rejected"}},
                "slot": "A",
                "weight": 2.0,
            },
        )
        client.post(f"/sessions/{sid}/samples", json={"kind": "partition", "p": 0.5, "seed": 1})
        client.post(f"/sessions/{sid}/samples", json={"kind": "bootstrap", "seed": 2})
        client.put(f"/sessions/{sid}/focus", json={"id": "c"})

        doc = client.get(f"/sessions/{sid}/export").json()
        response = client.post("/sessions", json=doc)
        assert response.status_code == 201
        sid2 = response.json()["session"]

        for path in (
            "classifiers",
            "selections",
            "samples",
            "curves/roc",
            "curves/arc?metric=mcc",
            "curves/heatmap?classifier=LR&resolution=5",
            "curves/trinary-summary",
        ):
            a = client.get(f"/sessions/{sid}/{path}")
            b = client.get(f"/sessions/{sid2}/{path}")
            assert a.content == b.content, path

    def test_import_bad_format_422(self, client):
        response = client.post("/sessions", json={"format": "trinbench-session"})
        assert response.status_code == 422


class TestErrorBodies:
    def test_error_shape(self, client):
        response = client.get("/sessions/none/classifiers")
        body = response.json()
        assert set(body) <= {"code", "message", "detail"}
        assert {"code", "message"} <= set(body)

    def test_request_validation_shape(self, client):
        sid = new_session(client)
        response = client.put(f"/sessions/{sid}/operating-points/LR", json={"lower": "x"})
        assert response.status_code == 422
        assert response.json()["code"] == "INVALID_REQUEST"

"""Regenerate src/__fixtures__/session.json from the real engine.

The UI tests replay these exact HTTP bodies through a fetch stub, so the
member sets and counts the views assert against are engine truth, not
hand-written numbers.

Run from frontend/:  python3 scripts/gen_fixtures.py
"""

import json
from pathlib import Path

from fastapi.testclient import TestClient

from trinbench.service import create_app


def build_payload():
    instances = []
    scores = {}
    for k in range(40):
        iid = f"r{k:02d}"
        score = round(0.0125 + k * 0.025, 4)
        if k == 29:
            score = 0.73  # the focus-marker item
        positive = score > 0.5
        if k % 7 == 0:
            positive = not positive  # sprinkle errors into known bins
        scores[iid] = score
        instances.append(
            {
                "id": iid,
                "label": "pos" if positive else "neg",
                "features": {"age": 20.0 + k, "group": "g" + str(k % 3)},
            }
        )
    return {
        "classes": ["neg", "pos"],
        "instances": instances,
        "classifiers": [{"name": "LR", "scores": scores}],
    }


def snapshot(client, sid, path):
    response = client.get(f"/sessions/{sid}/{path}")
    assert response.status_code == 200, (path, response.text)
    return response.json()


def state_snapshot(client, sid):
    return {
        "classifiers": snapshot(client, sid, "classifiers"),
        "selections": snapshot(client, sid, "selections"),
        "trinary": snapshot(client, sid, "curves/trinary-summary"),
        "perfConf": snapshot(client, sid, "curves/perf-conf?bins=10"),
        "reliability": snapshot(client, sid, "curves/reliability?bins=10"),
        "roc": snapshot(client, sid, "curves/roc"),
        "pr": snapshot(client, sid, "curves/pr"),
        "arc": snapshot(client, sid, "curves/arc?metric=accuracy&threshold=0.5&steps=41"),
        "bandwidth": snapshot(client, sid, "curves/bandwidth?bandwidths=0.05,0.1&resolution=20"),
        "heatmap": snapshot(client, sid, "curves/heatmap?classifier=LR&resolution=10"),
        "scatter": snapshot(client, sid, "curves/scatter?x=score:LR&y=feature:age&resolution=10"),
        "featureHistogram": snapshot(client, sid, "curves/feature-histogram?feature=group"),
        "instances": snapshot(client, sid, "instances?limit=10"),
        "sessionInfo": snapshot(client, sid, ""),
    }


def main():
    client = TestClient(create_app())
    payload = build_payload()
    sid = client.post("/sessions", json=payload).json()["session"]

    default_state = state_snapshot(client, sid)

    # the segment-click contract: bin 8, category FP at the default point
    bin8 = default_state["perfConf"]["series"][0]["bins"][8]
    expr = {
        "op": "intersection",
        "args": [
            {
                "pred": {
                    "kind": "score-range",
                    "classifier": "LR",
                    "lo": bin8["lo"],
                    "hi": bin8["hi"],
                    "bin": 8,
                }
            },
            {"pred": {"kind": "outcome", "classifier": "LR", "category": "FP"}},
        ],
    }
    created = client.post(
        f"/sessions/{sid}/selections", json={"expr": expr, "slot": "A", "name": "click"}
    ).json()
    members = client.get(f"/sessions/{sid}/selections/{created['id']}/members").json()
    segment_click = {
        "bin": 8,
        "category": "FP",
        "expr": expr,
        "selection": created,
        "members": members["members"],
        "expected_count": bin8["counts"]["FP"],
    }
    state_with_selection = state_snapshot(client, sid)

    # focus payload for the marker test (score 0.73 -> bin 7)
    focus_detail = client.put(f"/sessions/{sid}/focus", json={"id": "r29"}).json()

    # state after dragging the upper threshold to 0.8
    put = client.put(
        f"/sessions/{sid}/operating-points/LR", json={"lower": 0.5, "upper": 0.8}
    ).json()
    after = state_snapshot(client, sid)

    out = {
        "dataset": payload,
        "states": {
            "default": default_state,
            "withSelection": state_with_selection,
            "afterDrag": after,
        },
        "putResponse": put,
        "segmentClick": segment_click,
        "focus": {"payload": focus_detail, "score": 0.73, "perfConfBin": 7},
    }
    target = Path(__file__).resolve().parent.parent / "src" / "__fixtures__" / "session.json"
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(json.dumps(out, indent=1))
    print(f"wrote {target}")


if __name__ == "__main__":
    main()

"""Record real service responses into frontend/tests/fixtures/.

The UI tests replay these instead of re-deriving any numbers, which is how
the no-client-arithmetic rule stays checkable: every figure the renderer
emits must appear verbatim (before display rounding) in a recorded payload.

Run from the repository root:

    python3 frontend/scripts/record_fixtures.py
"""

import json
import sys
from pathlib import Path

from fastapi.testclient import TestClient

from ahpkit.service import create_app

FIXTURE_DIR = Path(__file__).resolve().parent.parent / "tests" / "fixtures"

GOAL_JUDGMENTS = [
    [0, 1, 9],
    [0, 2, 5],
    [0, 3, 9],
    [1, 2, "1/4"],
    [1, 3, 3],
    [2, 3, 5],
]

CONTRADICTION = [[0, 1, 9], [1, 2, 9], [0, 2, "1/9"]]


def dump(name: str, payload) -> None:
    path = FIXTURE_DIR / name
    path.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
    print(f"wrote {path.relative_to(Path.cwd())}")


def main(tmp_dir: Path) -> None:
    FIXTURE_DIR.mkdir(parents=True, exist_ok=True)
    client = TestClient(create_app(tmp_dir))

    dump("health.json", client.get("/api/health").json())

    # fully loaded worked example: envelope, result, whatif
    created = client.post("/api/sessions", json={"from_template": "paper-api"})
    assert created.status_code == 201, created.text
    envelope = created.json()
    sid = envelope["id"]
    dump("session-create.json", envelope)

    result = client.get(f"/api/sessions/{sid}/result")
    assert result.status_code == 200, result.text
    dump("result-api.json", result.json())

    whatif = client.post(
        f"/api/sessions/{sid}/whatif",
        json={"overrides": {"E": {"technical-specification": 10}}},
    )
    assert whatif.status_code == 200, whatif.text
    dump("whatif-flip.json", whatif.json())

    # re-submitting the published top-level judgments: same numbers back
    judged = client.put(
        f"/api/sessions/{sid}/judgments/goal",
        json={"revision": envelope["revision"], "judgments": GOAL_JUDGMENTS},
    )
    assert judged.status_code == 200, judged.text
    dump("judgments-goal.json", judged.json())

    ratings = client.put(
        f"/api/sessions/{sid}/ratings",
        json={
            "revision": judged.json()["revision"],
            "sheets": {"A": dict(envelope["model"]["sheets"]["A"])},
        },
    )
    assert ratings.status_code == 200, ratings.text
    dump("ratings-put.json", ratings.json())

    stale = client.put(
        f"/api/sessions/{sid}/judgments/goal",
        json={"revision": 1, "judgments": GOAL_JUDGMENTS},
    )
    assert stale.status_code == 409, stale.text
    dump("conflict-409.json", stale.json())

    second = client.post("/api/sessions", json={"from_template": "paper-is"})
    assert second.status_code == 201, second.text
    is_result = client.get(f"/api/sessions/{second.json()['id']}/result")
    assert is_result.status_code == 200, is_result.text
    dump("result-is.json", is_result.json())

    # a cyclic triple on a three-child root: accepted, flagged, huge CR
    probe = client.post(
        "/api/sessions",
        json={
            "model": {
                "schema_version": "1",
                "goal": "Contradiction probe",
                "criteria": [{"id": "a"}, {"id": "b"}, {"id": "c"}],
            }
        },
    )
    assert probe.status_code == 201, probe.text
    flagged = client.put(
        f"/api/sessions/{probe.json()['id']}/judgments/goal",
        json={"revision": 1, "judgments": CONTRADICTION},
    )
    assert flagged.status_code == 200, flagged.text
    dump("judgments-contradiction.json", flagged.json())

    # unjudged model: hierarchy present, no matrices yet
    blank = client.post("/api/sessions", json={})
    assert blank.status_code == 201, blank.text
    bare = client.put(
        f"/api/sessions/{blank.json()['id']}/hierarchy",
        json={
            "revision": 1,
            "goal": "Pick a laptop",
            "criteria": [{"id": "price"}, {"id": "battery"}],
            "alternatives": [{"id": "L1"}, {"id": "L2"}],
        },
    )
    assert bare.status_code == 200, bare.text
    dump("session-unjudged.json", bare.json())
    missing = client.get(f"/api/sessions/{blank.json()['id']}/result")
    assert missing.status_code == 409, missing.text
    dump("result-409.json", missing.json())


if __name__ == "__main__":
    import tempfile

    with tempfile.TemporaryDirectory() as tmp:
        main(Path(tmp))
    sys.exit(0)

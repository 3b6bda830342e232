import json
import shutil
import threading
from pathlib import Path

import pytest
from fastapi.testclient import TestClient

from transferpath import audit, ingest_catalog, parse_transcript, rank_programs, whatif
from transferpath.analyzer import analysis_to_json, outcome_to_json
from transferpath.audit import audit_result_to_json
from transferpath.serialize import loads
from transferpath.service import create_app

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture(scope="module")
def client():
    app = create_app(FIXTURES / "catalog")
    with TestClient(app, raise_server_exceptions=False) as c:
        yield c


@pytest.fixture(scope="module")
def transcript_body():
    return loads((FIXTURES / "transcripts" / "two_cc_transfer.json").read_text("utf-8"))


def test_institutions_lists_catalog(client):
    response = client.get("/v1/institutions")
    assert response.status_code == 200
    body = response.json()
    assert body["snapshot_version"] >= 1
    ids = [i["id"] for i in body["institutions"]]
    assert "summit-state" in ids and "riverbend-cc" in ids


def test_programs_filter_by_institution(client):
    body = client.get("/v1/programs", params={"institution": "summit-state"}).json()
    assert [p["id"] for p in body["programs"]] == ["ssu-bs-cs", "ssu-bs-gs", "ssu-gened"]
    assert client.get("/v1/programs", params={"institution": "nowhere"}).status_code == 404


def test_program_detail_and_404(client):
    body = client.get("/v1/programs/ssu-gened").json()
    assert body["program"]["root"]["kind"] == "all"
    assert len(body["program"]["root"]["children"]) == 4
    missing = client.get("/v1/programs/nope")
    assert missing.status_code == 404
    assert missing.json()["code"] == "unknown_program"


def test_audit_endpoint_matches_library(client, transcript_body):
    response = client.post("/v1/audit", json={
        "program_id": "ssu-bs-cs", "transcript": transcript_body,
    })
    assert response.status_code == 200
    snapshot = ingest_catalog(FIXTURES / "catalog")
    transcript = parse_transcript(json.dumps(transcript_body), snapshot.courses)
    direct = audit(transcript, snapshot.programs["ssu-bs-cs"], courses=snapshot.courses)
    assert response.json()["result"] == json.loads(json.dumps(audit_result_to_json(direct)))


def test_audit_empty_transcript_applies_nothing(client):
    response = client.post("/v1/audit", json={
        "program_id": "ssu-bs-cs", "transcript": {"records": []},
    })
    assert response.status_code == 200
    assert response.json()["result"]["applied_credit_hours"] == 0


def test_whatif_endpoint_matches_library(client, transcript_body):
    response = client.post("/v1/whatif", json={"transcript": transcript_body})
    assert response.status_code == 200
    body = response.json()

    snapshot = ingest_catalog(FIXTURES / "catalog")
    transcript = parse_transcript(json.dumps(transcript_body), snapshot.courses)
    from transferpath import Credential

    targets = sorted(p.id for p in snapshot.programs.values()
                     if p.credential is Credential.BACHELOR)
    outcomes = whatif(transcript, targets, snapshot)
    ranked = rank_programs([o.analysis for o in outcomes if o.ok])
    expected_outcomes = json.loads(json.dumps([outcome_to_json(o) for o in outcomes]))
    expected_ranked = json.loads(json.dumps([analysis_to_json(a) for a in ranked]))
    assert body["outcomes"] == expected_outcomes
    assert body["ranked"] == expected_ranked
    assert [a["target_program_id"] for a in body["ranked"]][0] == "at-bs-cs"


def test_plan_endpoint(client, transcript_body):
    response = client.post("/v1/plan", json={
        "program_id": "ssu-bs-cs", "transcript": transcript_body,
    })
    assert response.status_code == 200
    body = response.json()
    assert body["plan"]["terms"] == [
        ["ssu-cs101"], ["ssu-cs102", "ssu-math150"],
        ["ssu-cs210", "ssu-cs220"], ["ssu-cs310", "ssu-cs330"],
    ]


def test_validation_errors_are_400(client):
    assert client.post("/v1/audit", json={"program_id": "ssu-bs-cs"}).status_code == 400
    assert client.post(
        "/v1/audit", content=b"{not json", headers={"content-type": "application/json"}
    ).status_code == 400
    bad_hours = {"records": [{
        "institution_id": "summit-state", "course_id": "ssu-cs101",
        "grade": "A", "credit_hours": 99,
    }]}
    response = client.post("/v1/audit", json={"program_id": "ssu-bs-cs", "transcript": bad_hours})
    assert response.status_code == 400
    assert "does not match" in response.json()["message"]


def test_engine_errors_are_422_with_codes(client, transcript_body):
    response = client.post("/v1/plan", json={
        "program_id": "ssu-bs-cs",
        "transcript": transcript_body,
        "constraints": {"num_terms": 2},
    })
    assert response.status_code == 422
    assert response.json()["code"] == "infeasible"


def test_unknown_program_404_on_posts(client, transcript_body):
    response = client.post("/v1/audit", json={
        "program_id": "ghost", "transcript": transcript_body,
    })
    assert response.status_code == 404


def test_reload_bumps_version_and_409_when_busy(tmp_path, transcript_body):
    catalog_dir = tmp_path / "catalog"
    shutil.copytree(FIXTURES / "catalog", catalog_dir)
    app = create_app(catalog_dir)
    with TestClient(app) as client:
        v1 = client.get("/v1/institutions").json()["snapshot_version"]
        reloaded = client.post("/v1/admin/reload")
        assert reloaded.status_code == 200
        assert reloaded.json()["snapshot_version"] > v1

        holder = app.state.holder
        assert holder._reload_lock.acquire()
        try:
            busy = client.post("/v1/admin/reload")
            assert busy.status_code == 409
            assert busy.json()["code"] == "reload_in_progress"
        finally:
            holder._reload_lock.release()


def test_snapshot_consistency_under_concurrent_reload(tmp_path):
    """100 concurrent reads during reloads never mix snapshot versions."""
    catalog_dir = tmp_path / "catalog"
    catalog_dir.mkdir()
    (catalog_dir / "inst.json").write_text(json.dumps({
        "institutions": [
            {"id": f"inst-{i}", "name": f"Institution {i}", "kind": "university"}
            for i in range(3)
        ],
    }), encoding="utf-8")
    app = create_app(catalog_dir)
    with TestClient(app) as client:
        version_to_count: dict[int, int] = {}
        lock = threading.Lock()
        failures: list[str] = []

        def flip_catalog(n_institutions: int):
            (catalog_dir / "inst.json").write_text(json.dumps({
                "institutions": [
                    {"id": f"inst-{i}", "name": f"Institution {i}", "kind": "university"}
                    for i in range(n_institutions)
                ],
            }), encoding="utf-8")

        def reader():
            body = client.get("/v1/institutions").json()
            version = body["snapshot_version"]
            count = len(body["institutions"])
            with lock:
                known = version_to_count.setdefault(version, count)
                if known != count:
                    failures.append(f"version {version} served {count} and {known}")

        def reloader():
            for n in (4, 5, 6, 7):
                flip_catalog(n)
                client.post("/v1/admin/reload")

        threads = [threading.Thread(target=reader) for _ in range(100)]
        threads.append(threading.Thread(target=reloader))
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert not failures
        # Every version seen maps to exactly one institution count.
        assert len(set(version_to_count.values())) == len(version_to_count)

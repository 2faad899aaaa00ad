import json

import pytest
from fastapi.testclient import TestClient

import lda
from lda.service import make_app


@pytest.fixture()
def client(seed_kb):
    return TestClient(make_app(seed_kb), raise_server_exceptions=False)


def envelope(response, expect_ok=True):
    body = response.json()
    assert body["api-version"] == "lda/1"
    assert set(body) == {"ok", "data" if body["ok"] else "error", "api-version"}
    assert body["ok"] is expect_ok
    return body["data"] if expect_ok else body["error"]


def decide(client, sid, seq, action, concept, **extra):
    record = {"seq": seq, "action": action, "concept": concept, **extra}
    return client.post("/sessions/%s/decisions" % sid, json=record)


def test_health(client, seed_kb):
    data = envelope(client.get("/health"))
    assert data["status"] == "ok"
    assert data["kb-ref"] == lda.kb_hash(seed_kb)


def test_create_session_matches_open_session(client, seed_kb):
    data = envelope(client.post("/sessions"))
    assert data["state-hash"] == lda.open_session(seed_kb).state_hash
    assert data["selected"] == [] and data["pending"] == []


def test_fresh_session_ids_differ(client):
    a = envelope(client.post("/sessions"))["session-id"]
    b = envelope(client.post("/sessions"))["session-id"]
    assert a != b


def test_decision_flow_and_parity_with_library(client, seed_kb):
    sid = envelope(client.post("/sessions"))["session-id"]
    data = envelope(decide(client, sid, 1, "select", "assignment"))
    assert data["update"]["newly-pending"] == ["expression", "variable-ref"]

    session = lda.apply_decision(lda.open_session(seed_kb),
                                 lda.Decision(1, "select", "assignment")).session
    assert data["state-hash"] == session.state_hash

    fetched = envelope(client.get("/sessions/%s" % sid))
    assert fetched["state-hash"] == session.state_hash
    assert fetched["pending"] == ["expression", "variable-ref"]


def test_seq_gap_is_409(client):
    sid = envelope(client.post("/sessions"))["session-id"]
    response = decide(client, sid, 5, "select", "goto")
    assert response.status_code == 409
    error = envelope(response, expect_ok=False)
    assert error["code"] == "stale-sequence"


def test_unknown_session_is_404(client):
    response = client.get("/sessions/nope")
    assert response.status_code == 404
    envelope(response, expect_ok=False)


def test_malformed_body_is_400(client):
    sid = envelope(client.post("/sessions"))["session-id"]
    response = client.post("/sessions/%s/decisions" % sid,
                           content=b"{not json", headers={"content-type":
                                                          "application/json"})
    assert response.status_code == 400
    response = client.post("/sessions/%s/decisions" % sid, json={"action": "dance"})
    assert response.status_code == 400


def test_domain_violation_is_422(client):
    sid = envelope(client.post("/sessions"))["session-id"]
    response = decide(client, sid, 1, "select", "no-such-concept")
    assert response.status_code == 422
    error = envelope(response, expect_ok=False)
    assert error["code"] == "unknown-concept"


def test_conflict_surfaces_in_diagnostics(client):
    sid = envelope(client.post("/sessions"))["session-id"]
    envelope(decide(client, sid, 1, "select", "strong-typing"))
    data = envelope(decide(client, sid, 2, "select", "untyped"))
    violations = data["update"]["newly-violated"]
    assert violations and violations[0]["kind"] == "conflict"
    report = envelope(client.get("/sessions/%s/diagnostics" % sid))
    assert report["violations"][0]["members"] == ["strong-typing", "untyped"]


def test_kb_endpoints(client, seed_kb):
    concepts = envelope(client.get("/kb/concepts"))
    assert any(c["id"] == "binary-op" and c["parameters"] for c in concepts)
    data = envelope(client.post("/kb/query", json={"query": {"by-kind": "attribute"}}))
    assert "untyped" in data["ids"]
    assert data["ids"] == lda.query_kb(seed_kb, lda.ByKind("attribute"))
    response = client.post("/kb/query", json={"nope": 1})
    assert response.status_code == 400


def _drive_calc(client, sid, log):
    for d in log:
        record = d.to_json()
        response = client.post("/sessions/%s/decisions" % sid, json=record)
        assert response.status_code == 200, response.text
    return envelope(client.get("/sessions/%s" % sid))


def test_finalize_endpoint(client, calc_log, repo):
    sid = envelope(client.post("/sessions"))["session-id"]
    _drive_calc(client, sid, calc_log)
    data = envelope(client.post("/sessions/%s/finalize" % sid,
                                json={"name": "Calc", "start": "Prog"}))
    assert len(data["blocks"]) == 8
    golden = json.loads((repo / "golden" / "calc.desc.json").read_text())
    assert data["description"] == golden


def test_finalize_unresolved_is_422(client):
    sid = envelope(client.post("/sessions"))["session-id"]
    envelope(decide(client, sid, 1, "select", "assignment"))
    response = client.post("/sessions/%s/finalize" % sid,
                           json={"name": "X", "start": "Stmt"})
    assert response.status_code == 422
    assert envelope(response, expect_ok=False)["code"] == "unresolved-design"


def test_preview_round_trip(client, calc_log):
    sid = envelope(client.post("/sessions"))["session-id"]
    _drive_calc(client, sid, calc_log)
    data = envelope(client.post("/sessions/%s/preview" % sid,
                                json={"program": "x:=1;print x+2;", "start": "Prog"}))
    assert data["formatted"] == "x := 1 ;\nprint x + 2 ;\n"
    assert data["term"]["label"] == "Seq"
    assert any(p.startswith("Assign:") for p in data["grammar"]["productions"])


def test_preview_empty_program(client, calc_log):
    sid = envelope(client.post("/sessions"))["session-id"]
    _drive_calc(client, sid, calc_log)
    data = envelope(client.post("/sessions/%s/preview" % sid,
                                json={"program": "", "start": "Prog"}))
    assert data["formatted"] == ""
    assert "term" not in data


def test_preview_syntax_error_carries_position(client, calc_log):
    sid = envelope(client.post("/sessions"))["session-id"]
    _drive_calc(client, sid, calc_log)
    response = client.post("/sessions/%s/preview" % sid,
                           json={"program": "x := ;", "start": "Prog"})
    assert response.status_code == 422
    error = envelope(response, expect_ok=False)
    assert error["code"] == "syntax-error"
    assert error["details"]["line"] == 1 and error["details"]["column"] == 6


def test_snapshot_restore(seed_kb, tmp_path):
    snapdir = tmp_path / "snaps"
    client = TestClient(make_app(seed_kb, snapshot_dir=str(snapdir)))
    sid = envelope(client.post("/sessions"))["session-id"]
    envelope(decide(client, sid, 1, "select", "goto"))
    hash_before = envelope(client.get("/sessions/%s" % sid))["state-hash"]

    revived = TestClient(make_app(seed_kb, snapshot_dir=str(snapdir)))
    data = envelope(revived.get("/sessions/%s" % sid))
    assert data["state-hash"] == hash_before
    assert data["selected"] == ["goto"]


def test_unknown_route_still_enveloped(client):
    response = client.get("/no-such-route")
    assert response.status_code == 404
    error = envelope(response, expect_ok=False)
    assert error["code"] == "http-error"


def test_api_cli_parity_kb_query(client, seed_kb, capsys, repo, monkeypatch):
    from lda.cli import main
    monkeypatch.chdir(repo)
    api_ids = envelope(client.post("/kb/query",
                                   json={"query": {"by-kind": "attribute"}}))["ids"]
    assert main(["kb", "query", "--kind", "attribute", "--json"]) == 0
    cli_ids = json.loads(capsys.readouterr().out)
    assert cli_ids == api_ids


def test_api_cli_parity_session_hash(client, seed_kb, calc_log, capsys, repo,
                                     monkeypatch):
    from lda.cli import main
    monkeypatch.chdir(repo)
    sid = envelope(client.post("/sessions"))["session-id"]
    view = _drive_calc(client, sid, calc_log)
    assert main(["design", "check", "fixtures/calc.decisions.json", "--json"]) == 0
    cli_hash = json.loads(capsys.readouterr().out)["state-hash"]
    assert cli_hash == view["state-hash"]

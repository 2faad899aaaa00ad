#!/usr/bin/env python3
"""Record lda/1 API exchanges into a contract fixture for the frontend tests.

The frontend's fake server replays these exact envelopes, so its tests run
against the real API's bytes without a cross-process server.  Re-run when
the seed KB or the API shape changes.
"""

import json
import pathlib
import sys

ROOT = pathlib.Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from fastapi.testclient import TestClient

from lda import decisions_from_json, load_kb_file
from lda.service import make_app


class Recorder:
    def __init__(self, client):
        self.client = client
        self.exchanges = []

    def get(self, path):
        response = self.client.get(path)
        self.exchanges.append({"request": {"method": "GET", "path": path},
                               "response": {"status": response.status_code,
                                            "body": response.json()}})
        return response.json()

    def post(self, path, body):
        response = self.client.post(path, json=body)
        self.exchanges.append({"request": {"method": "POST", "path": path,
                                           "body": body},
                               "response": {"status": response.status_code,
                                            "body": response.json()}})
        return response.json()


def main():
    kb = load_kb_file(ROOT / "kb" / "core.kb.json")
    calc_log = decisions_from_json(
        (ROOT / "fixtures" / "calc.decisions.json").read_text(encoding="utf-8"))
    flows = {}

    client = TestClient(make_app(kb))

    r = Recorder(client)
    r.get("/health")
    r.get("/kb/concepts")
    r.post("/kb/query", {"query": {"by-kind": "attribute"}})
    flows["kb"] = r.exchanges

    r = Recorder(client)
    created = r.post("/sessions", {})
    sid = created["data"]["session-id"]
    for d in calc_log:
        r.post("/sessions/%s/decisions" % sid, d.to_json())
    r.get("/sessions/%s" % sid)
    r.get("/sessions/%s/diagnostics" % sid)
    r.post("/sessions/%s/finalize" % sid, {"name": "Calc", "start": "Prog"})
    r.post("/sessions/%s/preview" % sid,
           {"program": "x:=1;print x+2;", "start": "Prog"})
    flows["calc"] = r.exchanges

    r = Recorder(client)
    created = r.post("/sessions", {})
    sid = created["data"]["session-id"]
    r.post("/sessions/%s/decisions" % sid,
           {"seq": 1, "action": "select", "concept": "strong-typing"})
    r.post("/sessions/%s/decisions" % sid,
           {"seq": 2, "action": "select", "concept": "untyped"})
    flows["conflict"] = r.exchanges

    r = Recorder(client)
    created = r.post("/sessions", {})
    sid = created["data"]["session-id"]
    r.post("/sessions/%s/decisions" % sid,
           {"seq": 5, "action": "select", "concept": "goto"})        # 409
    r.get("/sessions/%s" % sid)
    r.post("/sessions/%s/decisions" % sid,
           {"seq": 1, "action": "select", "concept": "goto"})        # retry lands
    flows["stale"] = r.exchanges

    out = ROOT / "frontend" / "test" / "fixtures" / "contract.json"
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(flows, indent=2, sort_keys=True) + "\n",
                   encoding="utf-8")
    total = sum(len(v) for v in flows.values())
    print("recorded %d exchanges across %d flows -> %s" % (total, len(flows), out))


if __name__ == "__main__":
    main()

import json

import pytest
from fastapi.testclient import TestClient

from logrefine.corpus import (
    CorruptionKnobs,
    baseline_parse,
    generate_synthetic,
)
from logrefine.feedback import SimulatedFeedback
from logrefine.refine import pipeline
from logrefine.service import create_app

from bridging import drive_session, simulator_answer_body

CORPUS = {"generate": {"k": 4, "logs_per_cluster": 6, "param_slots": 2, "seed": 42}}
KNOBS = {"knobs": {"truncate_p": 0.6, "split_p": 0.4, "merge_p": 0.4}}


@pytest.fixture()
def client():
    with TestClient(create_app()) as c:
        yield c


def create_session(client, repeat=0, corpus=CORPUS, base=KNOBS):
    resp = client.post(
        "/sessions", json={"corpus": corpus, "base": base, "repeat": repeat}
    )
    assert resp.status_code == 201, resp.text
    return resp.json()["id"]


def local_ground_truth(corpus=CORPUS):
    params = corpus["generate"]
    return generate_synthetic(
        params["k"], params["logs_per_cluster"], params["param_slots"],
        seed=params["seed"],
    )


class TestLifecycle:
    def test_healthz(self, client):
        doc = client.get("/healthz").json()
        assert doc["status"] == "ok"
        assert doc["sessions"] == 0

    def test_unknown_session_404(self, client):
        assert client.get("/sessions/nope").status_code == 404

    def test_sessions_are_independent(self, client):
        a = create_session(client)
        b = create_session(client)
        assert a != b
        assert client.get("/healthz").json()["sessions"] == 2

    def test_invalid_corpus_rejected(self, client):
        resp = client.post("/sessions", json={"corpus": {}, "repeat": 0})
        assert resp.status_code == 400
        resp = client.post(
            "/sessions",
            json={"corpus": {"logs_path": "/does/not/exist.log"}, "repeat": 0},
        )
        assert resp.status_code == 400

    def test_result_before_finish_409(self, client):
        sid = create_session(client)
        doc = client.get(f"/sessions/{sid}/question", params={"wait": 5}).json()
        if doc["pending"]:  # still mid-run, result must refuse
            assert client.get(f"/sessions/{sid}/result").status_code == 409

    def test_full_run_to_result(self, client):
        store, gt = local_ground_truth()
        sid = create_session(client, repeat=10)
        final = drive_session(client, sid, gt)
        assert final["state"] == "finished"
        result = client.get(f"/sessions/{sid}/result").json()
        assert result["report"]["ga_after"] == 1.0
        assert result["clustering"]["n_logs"] == len(store)
        status = client.get(f"/sessions/{sid}").json()
        assert status["state"] == "finished"
        assert status["counters"]["n_total"] > 0


class TestAnswerValidation:
    def _pending(self, client, sid):
        doc = client.get(f"/sessions/{sid}/question", params={"wait": 5}).json()
        assert doc["pending"], doc
        return doc["question"]

    def test_wrong_kind_rejected(self, client):
        sid = create_session(client)
        q = self._pending(client, sid)
        assert q["kind"] == "message_loss"
        resp = client.post(
            f"/sessions/{sid}/answer",
            json={"seq": q["seq"], "kind": "select", "index": None},
        )
        assert resp.status_code == 422

    def test_malformed_payload_rejected(self, client):
        sid = create_session(client)
        q = self._pending(client, sid)
        resp = client.post(
            f"/sessions/{sid}/answer",
            json={"seq": q["seq"], "kind": "message_loss", "loss": "yes"},
        )
        assert resp.status_code == 400

    def test_future_seq_conflict(self, client):
        sid = create_session(client)
        q = self._pending(client, sid)
        resp = client.post(
            f"/sessions/{sid}/answer",
            json={"seq": q["seq"] + 5, "kind": "message_loss", "loss": True},
        )
        assert resp.status_code == 409

    def test_duplicate_answer_ignored_with_ack(self, client):
        store, gt = local_ground_truth()
        sid = create_session(client)
        q = self._pending(client, sid)
        body = simulator_answer_body(q, gt)
        first = client.post(f"/sessions/{sid}/answer", json=body)
        assert first.json()["status"] == "accepted"
        second = client.post(f"/sessions/{sid}/answer", json=body)
        assert second.status_code == 200
        assert second.json()["status"] == "ignored"

    def test_select_out_of_range_rejected(self, client):
        store, gt = local_ground_truth()
        sid = create_session(client)
        # Walk until a select question shows up.
        for _ in range(500):
            doc = client.get(f"/sessions/{sid}/question", params={"wait": 5}).json()
            if not doc["pending"]:
                pytest.skip("run finished without a select question")
            q = doc["question"]
            if q["kind"] == "select":
                resp = client.post(
                    f"/sessions/{sid}/answer",
                    json={
                        "seq": q["seq"],
                        "kind": "select",
                        "index": len(q["candidates"]) + 3,
                    },
                )
                assert resp.status_code == 422
                return
            client.post(f"/sessions/{sid}/answer", json=simulator_answer_body(q, gt))
        pytest.fail("no select question before step limit")


class TestAbort:
    def test_abort_running_session(self, client):
        sid = create_session(client)
        client.get(f"/sessions/{sid}/question", params={"wait": 5})
        doc = client.post(f"/sessions/{sid}/abort").json()
        assert doc["state"] == "aborted"
        # Idempotent.
        assert client.post(f"/sessions/{sid}/abort").json()["state"] == "aborted"
        assert client.get(f"/sessions/{sid}/result").status_code == 409

    def test_abort_finished_is_noop(self, client):
        store, gt = local_ground_truth()
        sid = create_session(client, repeat=10)
        drive_session(client, sid, gt)
        assert client.post(f"/sessions/{sid}/abort").json()["state"] == "finished"


class TestQuestionPayload:
    def test_select_candidates_carry_order_and_overlap(self, client):
        store, gt = local_ground_truth()
        sid = create_session(client)
        for _ in range(500):
            doc = client.get(f"/sessions/{sid}/question", params={"wait": 5}).json()
            if not doc["pending"]:
                pytest.skip("run finished without a select question")
            q = doc["question"]
            if q["kind"] == "select" and q["candidates"]:
                lens = [c["lcs_len"] for c in q["candidates"]]
                assert lens == sorted(lens, reverse=True)
                for cand in q["candidates"]:
                    assert len(cand["overlap"]) == cand["lcs_len"]
                    assert all(0 <= i < len(cand["tokens"]) for i in cand["overlap"])
                return
            client.post(f"/sessions/{sid}/answer", json=simulator_answer_body(q, gt))
        pytest.fail("no select question before step limit")


class TestBridging:
    def test_scripted_client_matches_headless_run(self, client):
        store, gt = local_ground_truth()
        base = baseline_parse(
            store,
            CorruptionKnobs(**KNOBS["knobs"]),
            seed=CORPUS["generate"]["seed"] + 1,
        )
        fb = SimulatedFeedback(gt)
        headless = pipeline(base.copy(), store, fb, 10)
        headless_doc = {
            "n_logs": headless.n_logs,
            "clusters": [
                {"template": list(p.template), "members": sorted(p.members)}
                for p in headless.pairs
            ],
        }
        sid = create_session(client, repeat=10)
        drive_session(client, sid, gt)
        served = client.get(f"/sessions/{sid}/result").json()["clustering"]
        served_doc = {
            "n_logs": served["n_logs"],
            "clusters": [
                {"template": c["template"], "members": c["members"]}
                for c in served["clusters"]
            ],
        }
        assert json.dumps(served_doc, sort_keys=True) == json.dumps(
            headless_doc, sort_keys=True
        )


class TestTruthlessCorpus:
    def test_logs_only_session(self, client, tmp_path):
        store, _ = generate_synthetic(2, 4, 1, seed=77)
        path = tmp_path / "plain.log"
        path.write_text("\n".join(store.raw(n) for n in range(len(store))) + "\n")
        resp = client.post(
            "/sessions",
            json={"corpus": {"logs_path": str(path)}, "repeat": 0},
        )
        assert resp.status_code == 201
        sid = resp.json()["id"]
        # Answer everything "no loss"/null until done.
        for _ in range(200):
            doc = client.get(f"/sessions/{sid}/question", params={"wait": 5}).json()
            if not doc["pending"]:
                if doc["state"] in ("finished", "aborted"):
                    break
                continue
            q = doc["question"]
            body = {"seq": q["seq"], "kind": q["kind"]}
            if q["kind"] == "message_loss":
                body["loss"] = False
            elif q["kind"] == "dummy_token":
                body["tokens"] = None
            else:
                body["index"] = None
            client.post(f"/sessions/{sid}/answer", json=body)
        result = client.get(f"/sessions/{sid}/result").json()
        assert "report" not in result
        assert result["clustering"]["n_logs"] == len(store)

"""Tests for the reward service handlers and HTTP endpoints."""

import json
import os
import random
import signal
import threading
import time
import urllib.request

import numpy as np
import pytest
from werkzeug.serving import make_server

from src.cli import main
from src.config import EXIT_USAGE, VERSION
from src.corpus import UtteranceRecord, build_report, report_to_doc
from src.errors import EmptyGroupError, MalformedRequestError
from src.reward_service import ServiceSettings, create_app, serve
from src.reward_service import app as app_module
from src.reward_service.handlers import compute_advantages, parse_request, score_batch
from src.reward_service.models import RewardRequest


@pytest.fixture
def client():
    app = create_app(ServiceSettings(default_alpha=0.5, max_batch_items=3))
    app.config["TESTING"] = True
    return app.test_client()


def random_text(rng, ph_prob=0.0):
    words = ["<ph>" if rng.random() < ph_prob else rng.choice("abcde") for _ in range(rng.randint(0, 10))]
    return " ".join(words)


# ---------------------------------------------------------------------------
# Advantages
# ---------------------------------------------------------------------------

class TestComputeAdvantages:
    def test_two_rewards(self):
        adv, mean, std, degenerate = compute_advantages([1.0, 0.0])
        assert adv.tolist() == [1.0, -1.0]
        assert (mean, std, degenerate) == (0.5, 0.5, False)

    def test_constant_group_is_degenerate(self):
        adv, _, std, degenerate = compute_advantages([0.3, 0.3, 0.3])
        assert adv.tolist() == [0.0, 0.0, 0.0]
        assert degenerate
        assert std == 0.0

    def test_three_rewards(self):
        adv, _, _, _ = compute_advantages([2.0, 4.0, 6.0])
        assert adv == pytest.approx([-1.224745, 0.0, 1.224745], abs=1e-6)

    def test_empty_group(self):
        with pytest.raises(EmptyGroupError):
            compute_advantages([])

    @pytest.mark.parametrize("bad", [float("nan"), float("inf")])
    def test_non_finite_reward(self, bad):
        with pytest.raises(MalformedRequestError):
            compute_advantages([bad, 1.0])

    def test_normalized_moments(self):
        rng = np.random.default_rng(0)
        for _ in range(1000):
            rewards = rng.normal(size=int(rng.integers(2, 16)))
            adv, _, _, degenerate = compute_advantages(rewards)
            assert not degenerate
            assert abs(adv.mean()) < 1e-9
            assert abs(adv.std() - 1.0) < 1e-9

    def test_shift_and_scale_invariance(self):
        rng = np.random.default_rng(1)
        for _ in range(100):
            rewards = rng.uniform(-1, 1, size=8)
            base, *_ = compute_advantages(rewards)
            moved, *_ = compute_advantages(3.5 * rewards - 2.0)
            np.testing.assert_allclose(base, moved, atol=1e-9)


# ---------------------------------------------------------------------------
# Handlers
# ---------------------------------------------------------------------------

class TestScoreBatch:
    def test_alpha_override(self):
        req = RewardRequest(alpha=0.2, items=[{"id": "a", "ref": "x y", "hyp": "<ph> y"}])
        [result] = score_batch(req, default_alpha=0.9)
        assert result["cost"] == 0.1

    def test_inline_item_error(self):
        req = RewardRequest(items=[
            {"id": "ok", "ref": "a", "hyp": "a"},
            {"id": "bad", "ref": "a <ph>", "hyp": "a"},
        ])
        ok, bad = score_batch(req)
        assert ok["ras"] == 1.0
        assert bad["error"] == "PlaceholderInReferenceError"

    def test_duplicate_ids_rejected(self):
        payload = {"items": [{"id": "a", "ref": "x"}, {"id": "a", "ref": "y"}]}
        with pytest.raises(MalformedRequestError):
            parse_request(RewardRequest, payload)

    def test_non_object_payload(self):
        with pytest.raises(MalformedRequestError):
            parse_request(RewardRequest, [1, 2])

    def test_matches_offline_report(self):
        rng = random.Random(77)
        records = [
            UtteranceRecord(id=f"r{i:04d}", ref=random_text(rng) or "a", hyp=random_text(rng, 0.2))
            for i in range(1000)
        ]
        doc = report_to_doc(build_report(records, 0.5064))
        req = RewardRequest(items=[{"id": r.id, "ref": r.ref, "hyp": r.hyp} for r in records])
        served = {r["id"]: r for r in score_batch(req, default_alpha=0.5064)}
        for row in doc["per_utterance"]:
            got = served[row["id"]]
            assert (got["ras"], got["usefulness"], got["cost"]) == (row["ras"], row["usefulness"], row["cost"])


# ---------------------------------------------------------------------------
# HTTP endpoints
# ---------------------------------------------------------------------------

class TestEndpoints:
    def test_health(self, client):
        resp = client.get("/health")
        assert resp.status_code == 200
        assert resp.get_json() == {"status": "ok", "version": VERSION, "default_alpha": 0.5}

    def test_score(self, client):
        resp = client.post("/score", json={"items": [{"id": "u1", "ref": "a b c", "hyp": "a <ph> c"}]})
        assert resp.status_code == 200
        body = resp.get_json()
        assert body["alpha"] == 0.5
        assert body["results"] == [{"id": "u1", "ras": 0.5, "usefulness": 0.666667, "cost": 0.166667}]

    def test_score_keeps_request_order(self, client):
        items = [{"id": i, "ref": "a", "hyp": "a"} for i in ("z", "a", "m")]
        body = client.post("/score", json={"items": items}).get_json()
        assert [r["id"] for r in body["results"]] == ["z", "a", "m"]

    def test_batch_limit(self, client):
        items = [{"id": str(i), "ref": "a"} for i in range(4)]
        resp = client.post("/score", json={"items": items})
        assert resp.status_code == 400
        assert resp.get_json()["error"] == "MalformedRequestError"

    @pytest.mark.parametrize("payload", [
        {"items": []},
        {"alpha": 1.5, "items": [{"id": "a", "ref": "a"}]},
        {"items": [{"ref": "a"}]},
        {"items": [{"id": "a", "ref": "a"}], "extra": 1},
    ])
    def test_invalid_score_requests(self, client, payload):
        assert client.post("/score", json=payload).status_code == 400

    def test_not_json(self, client):
        resp = client.post("/score", data="nope", content_type="text/plain")
        assert resp.status_code == 400

    def test_advantages(self, client):
        resp = client.post("/advantages", json={"groups": [
            {"group_id": "g1", "rewards": [1.0, 0.0]},
            {"group_id": "g2", "rewards": [0.4, 0.4]},
        ]})
        assert resp.status_code == 200
        g1, g2 = resp.get_json()["groups"]
        assert g1["advantages"] == [1.0, -1.0]
        assert g2["degenerate"] is True

    def test_empty_advantage_group(self, client):
        resp = client.post("/advantages", json={"groups": [{"group_id": "g", "rewards": []}]})
        assert resp.status_code == 400
        assert "g" in resp.get_json()["detail"]

    def test_unknown_route(self, client):
        resp = client.get("/missing")
        assert resp.status_code == 404
        assert resp.get_json()["error"] == "Not Found"

    @pytest.mark.parametrize("token", ["NaN", "Infinity", "-Infinity"])
    def test_non_finite_rewards_rejected(self, client, token):
        body = '{"groups": [{"group_id": "g", "rewards": [%s, 1.0]}]}' % token
        resp = client.post("/advantages", data=body, content_type="application/json")
        assert resp.status_code == 400
        assert "NaN" not in resp.get_data(as_text=True)


# ---------------------------------------------------------------------------
# Live server
# ---------------------------------------------------------------------------

class TestServe:
    def test_health_then_sigterm(self, monkeypatch):
        servers = []
        closed = threading.Event()

        def recording_make_server(*args, **kwargs):
            server = make_server(*args, **kwargs)
            original_close = server.server_close

            def server_close():
                original_close()
                closed.set()

            server.server_close = server_close
            servers.append(server)
            return server

        monkeypatch.setattr(app_module, "make_server", recording_make_server)
        previous = signal.getsignal(signal.SIGTERM)
        replies = []

        def client_side():
            deadline = time.monotonic() + 10
            # the SIGTERM handler is installed just before serving starts
            while signal.getsignal(signal.SIGTERM) is previous:
                if time.monotonic() > deadline:
                    return
                time.sleep(0.01)
            port = servers[0].server_port
            try:
                with urllib.request.urlopen(f"http://127.0.0.1:{port}/health", timeout=5) as resp:
                    replies.append((resp.status, json.loads(resp.read())))
            finally:
                os.kill(os.getpid(), signal.SIGTERM)

        worker = threading.Thread(target=client_side, daemon=True)
        worker.start()
        serve(ServiceSettings(host="127.0.0.1", port=0, default_alpha=0.4))
        worker.join(timeout=10)

        assert replies == [(200, {"status": "ok", "version": VERSION, "default_alpha": 0.4})]
        assert closed.is_set()
        assert signal.getsignal(signal.SIGTERM) is previous

    def test_serve_command_rejects_bad_port(self):
        assert main(["serve", "--port", "70000"]) == EXIT_USAGE

import pytest
from fastapi.testclient import TestClient

from aba_tutor.api import create_app

from conftest import make_pack


@pytest.fixture
def client(tmp_path):
    media = tmp_path / "media"
    media.mkdir()
    (media / "cat.png").write_bytes(b"\x89PNG fake image")
    app = create_app(pack=make_pack((2, 2)), media_root=media, test_clock=True)
    return TestClient(app)


def obtain_gate_token(client):
    challenge = client.post("/gate").json()
    answer = challenge["operand_a"] * challenge["operand_b"]
    resp = client.post("/gate/verify",
                       json={"challenge_id": challenge["challenge_id"], "answer": answer})
    assert resp.status_code == 200
    return resp.json()["token"]


def valid_item_body(item_id="new-item", classification_id="cls0"):
    return {
        "item_id": item_id,
        "prompt_text": "What is the cat doing?",
        "choices": ["eating", "sleeping", "running"],
        "correct_index": 0,
        "classification_id": classification_id,
        "subject": "reading",
        "media_ref": "cat.png",
    }


class TestGate:
    def test_verify_correct_product(self, client):
        assert obtain_gate_token(client)

    def test_wrong_answer_403(self, client):
        challenge = client.post("/gate").json()
        resp = client.post("/gate/verify",
                           json={"challenge_id": challenge["challenge_id"], "answer": -1})
        assert resp.status_code == 403
        assert resp.json()["reason"] == "wrong-answer"

    def test_challenge_single_use(self, client):
        challenge = client.post("/gate").json()
        answer = challenge["operand_a"] * challenge["operand_b"]
        body = {"challenge_id": challenge["challenge_id"], "answer": answer}
        assert client.post("/gate/verify", json=body).status_code == 200
        second = client.post("/gate/verify", json=body)
        assert second.status_code == 403
        assert second.json()["reason"] == "already-used"

    def test_mutation_without_token_401(self, client):
        resp = client.post("/content/items", json=valid_item_body())
        assert resp.status_code == 401
        assert resp.json()["code"] == "gate-required"

    def test_mutation_with_bogus_token_403(self, client):
        resp = client.post("/content/items", json=valid_item_body(),
                           headers={"X-Gate-Token": "forged"})
        assert resp.status_code == 403

    def test_expired_token_403(self, client):
        token = obtain_gate_token(client)
        resp = client.post("/content/items", json=valid_item_body(),
                           headers={"X-Gate-Token": token,
                                    "X-Test-Clock": str(4 * 10**9)})
        assert resp.status_code == 403


class TestContent:
    def test_post_item_201(self, client):
        token = obtain_gate_token(client)
        resp = client.post("/content/items", json=valid_item_body(),
                           headers={"X-Gate-Token": token})
        assert resp.status_code == 201
        assert resp.json()["item_id"] == "new-item"
        listed = client.get("/content").json()
        assert any(i["item_id"] == "new-item" for i in listed["items"])

    def test_validation_reports_min_two(self, client):
        token = obtain_gate_token(client)
        client.post("/content/classifications",
                    json={"classification_id": "solo", "name": "Solo", "subject": "math"},
                    headers={"X-Gate-Token": token})
        client.post("/content/items",
                    json=valid_item_body("solo-1", "solo") | {"subject": "math"},
                    headers={"X-Gate-Token": token})
        report = client.get("/content/validation").json()
        assert any(v["rule"] == "min-two-per-classification" and v["subject_id"] == "solo"
                   for v in report["violations"])

    def test_delete_unknown_item_404(self, client):
        token = obtain_gate_token(client)
        resp = client.delete("/content/items/ghost", headers={"X-Gate-Token": token})
        assert resp.status_code == 404
        assert resp.json()["code"] == "item-not-found"

    def test_put_edit_item(self, client):
        token = obtain_gate_token(client)
        resp = client.put("/content/items/cls0-item0", json={"correct_index": 1},
                          headers={"X-Gate-Token": token})
        assert resp.status_code == 200
        assert resp.json()["correct_index"] == 1

    def test_malformed_item_400(self, client):
        token = obtain_gate_token(client)
        bad = valid_item_body("bad") | {"choices": ["only-one"]}
        resp = client.post("/content/items", json=bad, headers={"X-Gate-Token": token})
        assert resp.status_code == 400


class TestSessions:
    def start(self, client, seed=7):
        resp = client.post("/sessions", json={"seed": seed})
        assert resp.status_code == 201
        return resp.json()["session_id"]

    def answer_correctly(self, client, sid, t):
        prompt = client.get(f"/sessions/{sid}/prompt",
                            headers={"X-Test-Clock": str(t)}).json()
        pack = client.get("/content").json()
        item = next(i for i in pack["items"] if i["item_id"] == prompt["item"]["item_id"])
        return client.post(f"/sessions/{sid}/answer",
                           json={"selected_index": item["correct_index"]},
                           headers={"X-Test-Clock": str(t + 1)}).json()

    def test_invalid_pack_422_with_report(self, tmp_path):
        app = create_app(pack=make_pack((1,)), test_clock=True)
        client = TestClient(app)
        resp = client.post("/sessions", json={"seed": 1})
        assert resp.status_code == 422
        body = resp.json()
        assert body["code"] == "invalid-pack"
        assert any(v["rule"] == "min-two-per-classification" for v in body["violations"])

    def test_fifth_correct_reward_75s_and_reset(self, client):
        sid = self.start(client)
        outcomes = [self.answer_correctly(client, sid, t * 10) for t in range(5)]
        assert [o["outcome"] for o in outcomes] == ["correct"] * 4 + ["reward"]
        reward = outcomes[4]
        assert reward["reward"]["duration_cap_s"] == 75.0
        assert reward["tokens"] == 0
        nxt = client.get(f"/sessions/{sid}/prompt",
                         headers={"X-Test-Clock": "60"}).json()
        assert nxt["token_display"] == 0

    def test_answer_twice_409(self, client):
        sid = self.start(client)
        self.answer_correctly(client, sid, 0)
        resp = client.post(f"/sessions/{sid}/answer", json={"selected_index": 0},
                           headers={"X-Test-Clock": "5"})
        assert resp.status_code == 409
        assert resp.json()["code"] == "no-outstanding-prompt"

    def test_double_prompt_409(self, client):
        sid = self.start(client)
        client.get(f"/sessions/{sid}/prompt", headers={"X-Test-Clock": "0"})
        resp = client.get(f"/sessions/{sid}/prompt", headers={"X-Test-Clock": "1"})
        assert resp.status_code == 409
        assert resp.json()["code"] == "prompt-outstanding"

    def test_unknown_session_404(self, client):
        assert client.get("/sessions/nope/metrics").status_code == 404

    def test_prompt_hides_correct_index(self, client):
        sid = self.start(client)
        prompt = client.get(f"/sessions/{sid}/prompt",
                            headers={"X-Test-Clock": "0"}).json()
        assert "correct_index" not in prompt["item"]

    def test_heartbeat_and_metrics(self, client):
        sid = self.start(client)
        self.answer_correctly(client, sid, 0)
        client.post(f"/sessions/{sid}/heartbeat", headers={"X-Test-Clock": "31"})
        m = client.get(f"/sessions/{sid}/metrics").json()
        assert m["engagement_hours"] == pytest.approx(31 / 3600)
        assert m["accuracy_rate_overall"] == 100.0
        assert m["generalization_rate"] is None

    def test_replay_reproduces_responses(self, tmp_path):
        # Same seed + pack + request sequence against a fresh server.
        transcripts = []
        for _ in range(2):
            client = TestClient(create_app(pack=make_pack((3, 3)), test_clock=True))
            resp = client.post("/sessions", json={"seed": 99})
            sid = resp.json()["session_id"]
            log = []
            for t in range(20):
                p = client.get(f"/sessions/{sid}/prompt",
                               headers={"X-Test-Clock": str(t * 10)}).json()
                a = client.post(f"/sessions/{sid}/answer",
                                json={"selected_index": t % 3},
                                headers={"X-Test-Clock": str(t * 10 + 5)}).json()
                log.append((p, a))
            log.append(client.get(f"/sessions/{sid}/metrics").json())
            transcripts.append(log)
        assert transcripts[0] == transcripts[1]


class TestMedia:
    def test_existing_media(self, client):
        resp = client.get("/media/cat.png")
        assert resp.status_code == 200
        assert resp.content.startswith(b"\x89PNG")

    def test_traversal_rejected(self, client):
        resp = client.get("/media/%2e%2e/secret")
        assert resp.status_code == 400
        assert resp.json()["code"] == "invalid-media-ref"

    def test_absent_file_404(self, client):
        assert client.get("/media/nothere.png").status_code == 404

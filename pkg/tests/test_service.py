import json
import time

import pytest
from fastapi.testclient import TestClient

from fibnim.service import create_app


@pytest.fixture()
def client():
    with TestClient(create_app()) as c:
        yield c


def new_game(client, **overrides):
    body = {"piles": [3, 4, 10], **overrides}
    response = client.post("/api/session", json=body)
    assert response.status_code == 200, response.text
    return response.json()


class TestCreate:
    def test_defaults(self, client):
        view = new_game(client)
        assert view["piles"] == [3, 4, 10]
        assert view["bound"] == "inf"
        assert view["dynamic"] == 2
        assert view["human_first"] is True
        assert view["hints_enabled"] is True
        assert view["status"] == "in-progress"
        assert view["turn"] == "human"
        assert view["winner"] is None
        assert view["history"] == []

    def test_engine_moves_first_when_asked(self, client):
        view = new_game(client, piles=[10], bound=2, human_first=False)
        assert view["piles"] == [8]
        assert view["bound"] == 4
        assert view["history"] == [{
            "actor": "engine", "pile_index": 0, "pile_before": 10,
            "take": 2, "piles_after": [8], "bound_after": 4,
        }]

    def test_pile_order_preserved(self, client):
        view = new_game(client, piles=[10, 3, 7])
        assert view["piles"] == [10, 3, 7]

    def test_validation_errors(self, client):
        cases = [
            ({"piles": []}, "invalid_position"),
            ({"piles": [0, 0]}, "invalid_position"),
            ({"piles": [-1]}, "invalid_position"),
            ({"piles": [20000]}, "invalid_position"),
            ({"piles": [3] * 9}, "invalid_position"),
            ({"piles": [5], "bound": 0}, "invalid_position"),
            ({"piles": "nope"}, "invalid_request"),
            ({"piles": [5], "dynamic": 3}, "invalid_request"),
            ({"piles": [5], "bound": "lots"}, "invalid_request"),
            ({}, "invalid_request"),
        ]
        for body, code in cases:
            response = client.post("/api/session", json=body)
            assert response.status_code == 400, body
            payload = response.json()
            assert payload["code"] == code, body
            assert set(payload) == {"code", "message", "detail"}


class TestMove:
    def test_legal_move_gets_engine_reply(self, client):
        game = new_game(client, piles=[10], bound=3)
        response = client.post(
            f"/api/session/{game['id']}/move", json={"pile_index": 0, "take": 2},
        )
        view = response.json()
        assert view["history"][0]["actor"] == "human"
        assert view["history"][1]["actor"] == "engine"
        assert view["status"] == "in-progress"

    def test_illegal_take_rejected_with_range(self, client):
        game = new_game(client, piles=[10], bound=2, human_first=False)
        response = client.post(
            f"/api/session/{game['id']}/move", json={"pile_index": 0, "take": 5},
        )
        assert response.status_code == 400
        payload = response.json()
        assert payload["code"] == "illegal_move"
        assert payload["detail"]["max_take"] == 4
        assert payload["detail"]["bound"] == 4

    def test_zero_and_negative_takes_rejected(self, client):
        game = new_game(client)
        for take in (0, -2):
            response = client.post(
                f"/api/session/{game['id']}/move",
                json={"pile_index": 0, "take": take},
            )
            assert response.status_code == 400
            assert response.json()["code"] == "illegal_move"

    def test_bad_pile_index(self, client):
        game = new_game(client)
        response = client.post(
            f"/api/session/{game['id']}/move", json={"pile_index": 7, "take": 1},
        )
        assert response.status_code == 400
        assert response.json()["code"] == "illegal_move"

    def test_empty_pile_rejected(self, client):
        game = new_game(client, piles=[0, 5])
        response = client.post(
            f"/api/session/{game['id']}/move", json={"pile_index": 0, "take": 1},
        )
        assert response.status_code == 400
        assert response.json()["detail"]["max_take"] == 0

    def test_unknown_session(self, client):
        response = client.post(
            "/api/session/deadbeef/move", json={"pile_index": 0, "take": 1},
        )
        assert response.status_code == 404
        assert response.json()["code"] == "not_found"

    def test_malformed_body(self, client):
        game = new_game(client)
        response = client.post(
            f"/api/session/{game['id']}/move", json={"pile_index": 0},
        )
        assert response.status_code == 400
        assert response.json()["code"] == "invalid_request"


class TestFullGame:
    def test_engine_wins_from_winning_start(self, client):
        game = new_game(client, piles=[10], bound=2, human_first=False)
        sid = game["id"]
        view = game
        while view["status"] == "in-progress":
            response = client.post(
                f"/api/session/{sid}/move", json={"pile_index": 0, "take": 1},
            )
            assert response.status_code == 200
            view = response.json()
        assert view["status"] == "engine-won"
        assert view["winner"] == "engine"
        assert view["turn"] is None
        actors = [entry["actor"] for entry in view["history"]]
        assert actors[0] == "engine" and actors[-1] == "engine"
        assert all(a != b for a, b in zip(actors, actors[1:]))

    def test_history_replays_to_final_state(self, client):
        game = new_game(client, piles=[9, 5], bound=4, human_first=False)
        sid = game["id"]
        view = game
        take = 1
        while view["status"] == "in-progress":
            index = next(
                i for i, v in enumerate(view["piles"]) if v > 0
            )
            response = client.post(
                f"/api/session/{sid}/move", json={"pile_index": index, "take": take},
            )
            assert response.status_code == 200, response.text
            view = response.json()
        piles = [9, 5]
        for entry in view["history"]:
            assert piles[entry["pile_index"]] == entry["pile_before"]
            piles[entry["pile_index"]] -= entry["take"]
            assert piles == entry["piles_after"]
        assert piles == view["piles"]

    def test_human_can_win_a_won_game(self, client):
        # ({1}; 1) with the human to move: take the last stone.
        game = new_game(client, piles=[1], bound=1)
        response = client.post(
            f"/api/session/{game['id']}/move", json={"pile_index": 0, "take": 1},
        )
        view = response.json()
        assert view["status"] == "human-won"
        assert view["winner"] == "human"
        assert view["piles"] == [0]

    def test_moves_after_game_over_rejected(self, client):
        game = new_game(client, piles=[1], bound=1)
        sid = game["id"]
        client.post(f"/api/session/{sid}/move", json={"pile_index": 0, "take": 1})
        response = client.post(
            f"/api/session/{sid}/move", json={"pile_index": 0, "take": 1},
        )
        assert response.status_code == 409
        assert response.json()["code"] == "game_over"


class TestHints:
    def test_hint_on_winning_position(self, client):
        game = new_game(client, piles=[10], bound=2)
        response = client.get(f"/api/session/{game['id']}/hint")
        assert response.status_code == 200
        assert response.json() == {
            "hint": {"pile_index": 0, "take": 2}, "outcome": "N",
        }

    def test_hint_null_when_position_lost(self, client):
        game = new_game(client, piles=[10], bound=2, human_first=False)
        response = client.get(f"/api/session/{game['id']}/hint")
        assert response.json() == {"hint": None, "outcome": "P"}

    def test_hints_disabled(self, client):
        game = new_game(client, hints_enabled=False)
        response = client.get(f"/api/session/{game['id']}/hint")
        assert response.status_code == 403
        assert response.json()["code"] == "hints_disabled"

    def test_hint_after_game_over(self, client):
        game = new_game(client, piles=[1], bound=1)
        sid = game["id"]
        client.post(f"/api/session/{sid}/move", json={"pile_index": 0, "take": 1})
        response = client.get(f"/api/session/{sid}/hint")
        assert response.status_code == 409
        assert response.json()["code"] == "game_over"


class TestVariants:
    def test_halving_dynamic_session(self, client):
        view = new_game(
            client, piles=[5, 6], bound=1, dynamic=1, human_first=False,
        )
        assert view["history"][0]["take"] == 1
        assert view["bound"] == 1  # bound repeats instead of doubling
        assert sorted(view["piles"]) in ([4, 6], [5, 5])
        assert view["piles"][0] + view["piles"][1] == 10


class TestLifecycle:
    def test_health(self, client):
        new_game(client)
        response = client.get("/api/health")
        assert response.status_code == 200
        body = response.json()
        assert body["status"] == "ok"
        assert body["sessions"] >= 1
        assert isinstance(body["memo"], int)

    def test_sessions_expire(self):
        with TestClient(create_app(session_ttl=0.05)) as client:
            game = new_game(client)
            assert client.get(f"/api/session/{game['id']}").status_code == 200
            time.sleep(0.1)
            assert client.get(f"/api/session/{game['id']}").status_code == 404

    def test_snapshot_round_trip(self, tmp_path):
        path = tmp_path / "sessions.json"
        with TestClient(create_app(snapshot_path=str(path))) as client:
            game = new_game(client, piles=[7, 2], bound=5)
        assert path.exists()
        stored = json.loads(path.read_text())
        assert len(stored) == 1
        with TestClient(create_app(snapshot_path=str(path))) as client:
            response = client.get(f"/api/session/{game['id']}")
            assert response.status_code == 200
            assert response.json()["piles"] == [7, 2]
            assert response.json()["bound"] == 5

    def test_corrupt_snapshot_ignored(self, tmp_path):
        path = tmp_path / "sessions.json"
        path.write_text("{not json")
        with TestClient(create_app(snapshot_path=str(path))) as client:
            assert client.get("/api/health").status_code == 200

    def test_static_dir_mounted(self, tmp_path):
        (tmp_path / "index.html").write_text("<h1>play</h1>")
        with TestClient(create_app(static_dir=str(tmp_path))) as client:
            response = client.get("/")
            assert response.status_code == 200
            assert "play" in response.text
            assert client.get("/api/health").status_code == 200

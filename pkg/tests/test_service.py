from __future__ import annotations

import json

import pytest
from fastapi.testclient import TestClient

from conftest import minimal_config_data

from ccideas.service import create_app


@pytest.fixture
def client(tmp_path):
    app = create_app(tmp_path / "workshop.log", deterministic_ts=True)
    with TestClient(app) as c:
        c.log_path = tmp_path / "workshop.log"
        yield c


def setup_workshop(client, teams: int = 2, members: int = 1) -> dict:
    data = minimal_config_data(teams=teams, members=members)
    response = client.post("/api/setup", json=data)
    assert response.status_code == 200, response.text
    return data


def inscribe_all(client, data) -> list[str]:
    actor_ids = []
    for team in data["teams"]:
        for member in team["members"]:
            response = client.post("/api/actors", json=member)
            assert response.status_code == 200, response.text
            actor_ids.append(response.json()["actor"])
    return actor_ids


def drive_team_to_submission(client, state_teams):
    """Drive every team through divergence, convergence and improvement."""
    ideas_by_team: dict[str, list[str]] = {}
    for team in state_teams:
        team_id = team["id"]
        client.post(f"/api/teams/{team_id}/activity-selection",
                    json={"activity": "Brainstorming"}).raise_for_status()
        for member in team["members"]:
            response = client.post(f"/api/teams/{team_id}/ideas", json={
                "author": member["id"],
                "description": f"solar boost for {member['id']}",
            })
            assert response.status_code == 200, response.text
            ideas_by_team.setdefault(team_id, []).append(response.json()["idea"])
    for round_no in range(2):
        for team in state_teams:
            team_id = team["id"]
            client.post(f"/api/teams/{team_id}/method-selection",
                        json={"ccm": "Six hats of thinking"}).raise_for_status()
            response = client.post(f"/api/teams/{team_id}/idea-cards", json={
                "title": f"{team_id} card {round_no}",
                "description": f"water pump design {round_no} for {team_id}",
                "scenery": "city street",
                "source_ideas": ideas_by_team[team_id][:1],
            })
            assert response.status_code == 200, response.text
            card_id = response.json()["card"]
            put = client.put(f"/api/teams/{team_id}/idea-cards/{card_id}", json={
                "description": f"improved water pump design {round_no} for {team_id}",
            })
            assert put.status_code == 200, put.text


class TestLifecycle:
    def test_state_before_setup(self, client):
        state = client.get("/api/state").json()
        assert state == {"configured": False, "phase": "SETUP", "completed": False,
                         "counts": {}, "gates": [], "teams": [], "problems": []}

    def test_setup_then_duplicate_rejected(self, client):
        setup_workshop(client)
        again = client.post("/api/setup", json=minimal_config_data())
        assert again.status_code == 409
        assert again.json()["error"]["code"] == "AlreadyConfigured"

    def test_invalid_config_rejected_with_condition(self, client):
        data = minimal_config_data()
        data["teams"] = data["teams"][:1]
        response = client.post("/api/setup", json=data)
        assert response.status_code == 400
        assert response.json()["error"]["code"] == "ConfigError"
        assert response.json()["error"]["detail"]["condition"] == "Team>=2"

    def test_mutations_before_setup_rejected(self, client):
        response = client.post("/api/teams/team_0001/submit")
        assert response.status_code == 409
        assert response.json()["error"]["code"] == "NotConfigured"


class TestInscription:
    def test_inscription_returns_actor_and_team(self, client):
        data = setup_workshop(client)
        response = client.post("/api/actors", json=data["teams"][0]["members"][0])
        body = response.json()
        assert body["actor"] == "act_0001"
        assert body["team"] == "team_0001"

    def test_unknown_person_404(self, client):
        setup_workshop(client)
        response = client.post("/api/actors", json={
            "name": "Zoe", "last_name": "Zero", "institution": "Nowhere",
        })
        assert response.status_code == 404
        assert response.json()["error"]["code"] == "UnknownEntity"

    def test_fresh_solver_session_offers_only_inscription(self, client):
        setup_workshop(client)
        actions = client.get("/api/teams/team_0001/allowed-actions").json()
        assert actions["actions"] == ["RequirementsInscription"]
        assert actions["commands"] == ["inscribe"]


class TestFullWorkshopOverApi:
    def test_end_to_end(self, client):
        data = setup_workshop(client)
        inscribe_all(client, data)
        state = client.get("/api/state").json()
        assert state["phase"] == "DIVERGENCE"

        drive_team_to_submission(client, state["teams"])

        # peer evaluation: each team scores the other team's two cards
        state = client.get("/api/state").json()
        cards_by_team = {t["id"]: [c["id"] for c in t["cards"]] for t in state["teams"]}
        for evaluator in cards_by_team:
            for other, cards in cards_by_team.items():
                if other == evaluator:
                    continue
                for card_id in cards:
                    response = client.post("/api/evaluations", json={
                        "evaluator_team": evaluator, "card": card_id, "score": 8,
                    })
                    assert response.status_code == 200, response.text

        for team_id in cards_by_team:
            response = client.post(f"/api/teams/{team_id}/submit")
            assert response.status_code == 200, response.text

        state = client.get("/api/state").json()
        assert state["phase"] == "AWARDS"
        assert state["completed"] is True
        assert state["counts"]["solutions"] == 2

        solutions = client.get("/api/problems/prob_1/possible-solutions").json()
        assert solutions["ranked"] is True
        assert [s["rank"] for s in solutions["solutions"]] == [1, 2]

        export = client.get("/api/ontology/export")
        assert export.status_code == 200
        assert export.text.splitlines()[0].endswith(" .")

    def test_allowed_actions_mirror_engine(self, client):
        data = setup_workshop(client)
        inscribe_all(client, data)
        engine = client.app.state.workshop.engine
        response = client.get("/api/teams/team_0001/allowed-actions").json()
        team = engine.teams["team_0001"]
        expected = set()
        for member in team.members:
            expected |= engine.allowed_activities(engine.spa_of_actor[member])
        assert set(response["actions"]) == expected


class TestErrorParity:
    def test_premature_submit_maps_to_409_gate(self, client):
        data = setup_workshop(client)
        inscribe_all(client, data)
        lines_before = client.log_path.read_text().count("\n")
        response = client.post("/api/teams/team_0001/submit")
        assert response.status_code == 409
        error = response.json()["error"]
        assert error["code"] == "GateUnsatisfied"
        assert error["detail"]["condition"] == "Idea Cards per group"
        assert error["detail"]["requirement"] == "=2"
        assert client.log_path.read_text().count("\n") == lines_before

    def test_unknown_team_404_and_log_unchanged(self, client):
        setup_workshop(client)
        lines_before = client.log_path.read_text().count("\n")
        response = client.post("/api/teams/ghost/activity-selection",
                               json={"activity": "Brainstorming"})
        assert response.status_code == 404
        assert client.log_path.read_text().count("\n") == lines_before

    def test_protocol_violation_surfaces_expected_actions(self, client):
        data = setup_workshop(client)
        inscribe_all(client, data)
        # selecting a method before anyone ideated trips the Idea>0 gate
        response = client.post("/api/teams/team_0001/method-selection",
                               json={"ccm": "Six hats of thinking"})
        assert response.status_code == 409
        assert response.json()["error"]["code"] == "GateUnsatisfied"

    def test_own_card_evaluation_rejected(self, client):
        data = setup_workshop(client)
        inscribe_all(client, data)
        state = client.get("/api/state").json()
        drive_team_to_submission(client, state["teams"])
        state = client.get("/api/state").json()
        own_card = state["teams"][0]["cards"][0]["id"]
        response = client.post("/api/evaluations", json={
            "evaluator_team": state["teams"][0]["id"], "card": own_card, "score": 5,
        })
        assert response.status_code == 409
        assert response.json()["error"]["code"] == "ForbiddenEvaluation"


class TestRestart:
    def test_restart_replays_to_identical_state(self, tmp_path):
        log_path = tmp_path / "workshop.log"
        app = create_app(log_path, deterministic_ts=True)
        with TestClient(app) as client:
            data = minimal_config_data()
            client.post("/api/setup", json=data)
            for team in data["teams"]:
                for member in team["members"]:
                    client.post("/api/actors", json=member)
            snapshot_live = app.state.workshop.engine.snapshot()

        restarted = create_app(log_path, deterministic_ts=True)
        with TestClient(restarted):
            snapshot_replayed = restarted.state.workshop.engine.snapshot()
        assert json.dumps(snapshot_live, sort_keys=True) == \
            json.dumps(snapshot_replayed, sort_keys=True)

    def test_config_path_preloads_workshop(self, tmp_path):
        config_file = tmp_path / "config.json"
        config_file.write_text(json.dumps(minimal_config_data()))
        app = create_app(tmp_path / "w.log", config_path=config_file)
        with TestClient(app) as client:
            state = client.get("/api/state").json()
            assert state["configured"] is True
            assert state["phase"] == "INSCRIPTION"

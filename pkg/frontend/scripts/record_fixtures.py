#!/usr/bin/env python3
"""Record contract-test fixtures from the real workshop service.

Drives one workshop through its phases with the in-process test client
and snapshots /api/state plus /api/teams/{id}/allowed-actions at five
role-phase combinations, along with genuine error bodies. The recorded
JSON lands in tests/fixtures/ and is what the client's contract tests
replay, so the frontend is always tested against actual server output.

Run from the frontend directory: python3 scripts/record_fixtures.py
"""

from __future__ import annotations

import json
from pathlib import Path

from fastapi.testclient import TestClient

from ccideas.service import create_app

FIXTURES = Path(__file__).parent.parent / "tests" / "fixtures"

CONFIG = {
    "event": {"name": "48h InnovENT-Edition 2016", "year": 2016},
    "sites": ["ENSGSI NANCY"],
    "industries": [{"name": "Decathlon", "problem": "make night cycling safer"}],
    "teams": [
        {"name": "Nan_Dec_1", "members": [
            {"name": "Ada", "last_name": "Byron", "institution": "ENSGSI"},
        ]},
        {"name": "Nan_Dec_2", "members": [
            {"name": "Carlos", "last_name": "Diaz", "institution": "INSA"},
        ]},
    ],
    "activities": ["Brainstorming", "Write storming"],
    "ccms": ["Six hats of thinking"],
    "seed": 7,
}


def snapshot(client: TestClient, name: str, identity: dict,
             team_id: str | None, expect_screen: str) -> dict:
    state = client.get("/api/state").json()
    allowed = None
    if identity["role"] == "SolverParticipant" and team_id:
        allowed = client.get(f"/api/teams/{team_id}/allowed-actions").json()
    fixture = {
        "name": name,
        "identity": identity,
        "state": state,
        "allowed": allowed,
        "expected_actions": allowed["actions"] if allowed else [],
        "expected_screen": expect_screen,
    }
    (FIXTURES / f"{name}.json").write_text(json.dumps(fixture, indent=2, sort_keys=True))
    print(f"recorded {name}: phase={state['phase']} actions={fixture['expected_actions']}")
    return fixture


def must(response):
    assert response.status_code == 200, response.text
    return response.json()


def main() -> None:
    FIXTURES.mkdir(parents=True, exist_ok=True)
    import tempfile

    with tempfile.TemporaryDirectory() as tmp:
        app = create_app(Path(tmp) / "fixture.log", deterministic_ts=True)
        with TestClient(app) as client:
            must(client.post("/api/setup", json=CONFIG))
            ada = {"actorId": "act_0001", "role": "SolverParticipant", "teamId": "team_0001"}

            # 1. solver participant at inscription: only registration offered
            snapshot(client, "solver-inscription", ada, "team_0001", "inscription")

            errors: dict[str, dict] = {}

            must(client.post("/api/actors", json=CONFIG["teams"][0]["members"][0]))
            must(client.post("/api/actors", json=CONFIG["teams"][1]["members"][0]))

            # 2. solver participant at divergence
            snapshot(client, "solver-divergence", ada, "team_0001", "divergence")

            # a second activity selection without ideas violates the protocol
            must(client.post("/api/teams/team_0001/activity-selection",
                             json={"activity": "Brainstorming"}))
            response = client.post("/api/teams/team_0001/activity-selection",
                                   json={"activity": "Write storming"})
            assert response.status_code == 409, response.text
            errors["protocol_violation"] = response.json()

            # premature submit: the named "=2" gate
            response = client.post("/api/teams/team_0001/submit")
            assert response.status_code == 409, response.text
            errors["gate_unsatisfied"] = response.json()

            ideas: dict[str, str] = {}
            ideas["team_0001"] = must(client.post("/api/teams/team_0001/ideas", json={
                "author": "act_0001", "description": "glow paint lane markers",
            }))["idea"]
            must(client.post("/api/teams/team_0002/activity-selection",
                             json={"activity": "Brainstorming"}))
            ideas["team_0002"] = must(client.post("/api/teams/team_0002/ideas", json={
                "author": "act_0002", "description": "radar tail light for bikes",
            }))["idea"]

            for round_no in range(2):
                for team_id in ("team_0001", "team_0002"):
                    must(client.post(f"/api/teams/{team_id}/method-selection",
                                     json={"ccm": "Six hats of thinking"}))
                    card = must(client.post(f"/api/teams/{team_id}/idea-cards", json={
                        "title": f"{team_id} idea {round_no}",
                        "description": f"night cycling concept {round_no} for {team_id}",
                        "source_ideas": [ideas[team_id]],
                    }))["card"]
                    must(client.put(f"/api/teams/{team_id}/idea-cards/{card}",
                                    json={"description": f"improved concept {round_no}"}))

            # 3. solver participant when evaluation opens
            snapshot(client, "solver-compare", ada, "team_0001", "improve")

            # 4. organizer dashboard mid-workshop
            organizer = {"actorId": "org_1", "role": "Organizer", "teamId": None}
            snapshot(client, "organizer-dashboard", organizer, None, "improve")

            state = client.get("/api/state").json()
            cards_by_team = {t["id"]: [c["id"] for c in t["cards"]] for t in state["teams"]}
            for evaluator, _ in cards_by_team.items():
                for other, cards in cards_by_team.items():
                    if other == evaluator:
                        continue
                    for card_id in cards:
                        must(client.post("/api/evaluations", json={
                            "evaluator_team": evaluator, "card": card_id, "score": 8,
                        }))
            for team_id in cards_by_team:
                must(client.post(f"/api/teams/{team_id}/submit"))

            # 5. industrial manager watching the results board
            manager = {"actorId": "mgr_1", "role": "IndustrialManager", "teamId": None}
            snapshot(client, "manager-results", manager, None, "awards")
            solutions = client.get("/api/problems/prob_1/possible-solutions").json()
            (FIXTURES / "solutions-prob_1.json").write_text(
                json.dumps(solutions, indent=2, sort_keys=True))

            (FIXTURES / "errors.json").write_text(
                json.dumps(errors, indent=2, sort_keys=True))
            print(f"recorded errors: {sorted(errors)}")
            print(f"recorded solutions board: {len(solutions['solutions'])} entries")


if __name__ == "__main__":
    main()

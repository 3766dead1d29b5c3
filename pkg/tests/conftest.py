from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from ccideas.config import parse_config
from ccideas.sim import synthetic_config
from ccideas.workshop import WorkshopEngine


def minimal_config_data(teams: int = 2, members: int = 1) -> dict:
    """Smallest hand-written configuration, one industry."""
    return {
        "event": {"name": "48h InnovENT-Edition 2016", "year": 2016},
        "sites": ["ENSGSI NANCY"],
        "industries": [{"name": "Decathlon", "problem": "safer night cycling gear"}],
        "teams": [
            {
                "name": f"Nan_Dec_{t + 1}",
                "members": [
                    {"name": f"P{t + 1}{m + 1}", "last_name": f"L{t + 1}{m + 1}",
                     "institution": "ENSGSI"}
                    for m in range(members)
                ],
            }
            for t in range(teams)
        ],
        "activities": ["Brainstorming", "Write storming"],
        "ccms": ["Six hats of thinking", "Puzzle pieces"],
        "seed": 7,
    }


@pytest.fixture
def small_config():
    return parse_config(minimal_config_data())


@pytest.fixture
def small_engine(small_config) -> WorkshopEngine:
    return WorkshopEngine(small_config)


@pytest.fixture
def sim_config():
    return synthetic_config(teams=3, members=2, industries=1, seed=5)


def drive_inscription(engine: WorkshopEngine) -> None:
    for actor_id in engine.participants():
        engine.apply("inscribe", {"actor": actor_id})


def drive_divergence(engine: WorkshopEngine, ideas_per_member: int = 1) -> None:
    for team_id in sorted(engine.teams):
        team = engine.teams[team_id]
        engine.apply("select_activity", {"team": team_id, "activity": "actv_1"})
        for member in sorted(team.members):
            for n in range(ideas_per_member):
                engine.apply("add_idea", {
                    "team": team_id, "author": member,
                    "description": f"solar {member} idea {n} water pump",
                })


def drive_convergence(engine: WorkshopEngine) -> None:
    for round_no in range(2):
        for team_id in sorted(engine.teams):
            team = engine.teams[team_id]
            pool = sorted(i for m in team.members
                          for i in engine.ideas_by_author.get(m, []))
            engine.apply("select_method", {"team": team_id, "ccm": "ccm_1"})
            created = engine.apply("create_card", {
                "team": team_id,
                "title": f"card {round_no} of {team_id}",
                "description": f"solar panel roof {team_id} round {round_no}",
                "scenery": "a sunny street",
                "priority_client": "commuters",
                "advantage": "cheap durable",
                "risk": "cloudy weather",
                "source_ideas": pool[:1],
            })
            engine.apply("improve_card", {
                "team": team_id, "card": created["card"],
                "description": f"solar panel roof {team_id} round {round_no} improved",
            })


def drive_compare(engine: WorkshopEngine) -> None:
    for problem_id in sorted(engine.problems):
        group = engine.teams_by_problem.get(problem_id, [])
        if len(group) < 2:
            continue
        assignments = engine.assign_evaluations(problem_id)
        for team_id in group:
            for card_id in assignments[team_id]:
                engine.apply("evaluate", {
                    "evaluator_team": team_id, "card": card_id, "score": 7,
                })


def drive_submission(engine: WorkshopEngine) -> None:
    for team_id in sorted(engine.teams):
        engine.apply("submit", {"team": team_id})


def drive_full(engine: WorkshopEngine) -> None:
    drive_inscription(engine)
    drive_divergence(engine)
    drive_convergence(engine)
    drive_compare(engine)
    drive_submission(engine)

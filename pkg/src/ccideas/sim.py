"""Scripted workshop runs: deterministic happy-path simulation.

``run_simulation(config, seed)`` drives every solver participant through
the full protocol - inscription, assignment, divergence, convergence,
improvement, peer evaluation, submission - and returns the command-event
trace plus the finished engine. All randomness (idea counts, texts,
scores, activity/method picks) comes from one seeded generator and lands
inside command payloads, so replaying the events rebuilds the exact
final state without any generator at all.
"""

from __future__ import annotations

import random

from .config import WorkshopConfig, config_to_dict, parse_config
from .workshop import WorkshopEngine

_NOUNS = (
    "solar", "panel", "roof", "water", "filter", "pump", "bike", "sensor",
    "garden", "battery", "bridge", "drone", "glass", "engine", "network",
    "robot", "seed", "tunnel", "valve", "wind", "market", "school", "river",
    "signal", "storage", "tool", "wheel", "cable", "lamp", "mask",
)
_VERBS = ("recycling", "charging", "sharing", "printing", "tracking",
          "cooling", "mapping", "testing", "linking", "folding")
_ADJECTIVES = ("smart", "mobile", "modular", "cheap", "durable", "portable",
               "hybrid", "compact", "flexible", "silent")

_FIRST_NAMES = ("Ada", "Blaise", "Carlos", "Dana", "Elif", "Farid", "Grace",
                "Hugo", "Ines", "Jules", "Keiko", "Lina", "Marc", "Nour",
                "Omar", "Pia", "Quentin", "Rosa", "Sami", "Tara")
_LAST_NAMES = ("Byron", "Curie", "Diaz", "Eiffel", "Fermi", "Galois",
               "Hopper", "Ito", "Jemison", "Kahlo", "Lovelace", "Moreau",
               "Noether", "Otis", "Pasteur", "Quintana", "Ravel", "Sato")
_INSTITUTIONS = ("ENSGSI", "INSA", "UCA", "CESI", "ASU", "UAQ")
_INDUSTRY_NAMES = ("Decathlon", "Bostik", "ICM", "GRDF", "Muller",
                   "Assystem", "Scarabee", "Pierre Fabre")
_PROBLEM_TEMPLATES = (
    "improve the {noun} {verb} experience for city users",
    "reduce waste in {noun} {verb} at industrial scale",
    "design a {adj} {noun} service for remote sites",
    "make {noun} maintenance safer with {adj} tools",
)
_ACTIVITIES = ("Brainstorming", "Write storming", "Brain borrow", "Copy cat")
_CCMS = ("Six hats of thinking", "Puzzle pieces", "Best off",
         "Organizational brainstorming")


def _words(rng: random.Random, lo: int, hi: int) -> str:
    bank = _NOUNS + _VERBS + _ADJECTIVES
    return " ".join(rng.choice(bank) for _ in range(rng.randint(lo, hi)))


def synthetic_config(
    teams: int = 2,
    members: int = 2,
    industries: int = 1,
    sites: int = 1,
    seed: int = 0,
    weights: dict | None = None,
    top: int = 2,
) -> WorkshopConfig:
    """Generate a valid workshop configuration for tests and demos.

    Teams are spread round-robin over the industries, so choosing
    ``industries <= teams // 2`` keeps every problem with at least two
    teams (a requirement for peer evaluation to be possible at all).
    """
    rng = random.Random(seed)
    data = {
        "event": {"name": f"48H Ideas Challenge {2016 + seed % 10}", "year": 2016 + seed % 10},
        "sites": [f"{_INSTITUTIONS[i % len(_INSTITUTIONS)]} SITE {i + 1}" for i in range(sites)],
        "industries": [
            {
                "name": f"{_INDUSTRY_NAMES[i % len(_INDUSTRY_NAMES)]} {i + 1}",
                "problem": rng.choice(_PROBLEM_TEMPLATES).format(
                    noun=rng.choice(_NOUNS), verb=rng.choice(_VERBS),
                    adj=rng.choice(_ADJECTIVES)),
            }
            for i in range(industries)
        ],
        "teams": [
            {
                "name": f"Team_{t + 1:04d}",
                "members": [
                    {
                        "name": rng.choice(_FIRST_NAMES),
                        "last_name": rng.choice(_LAST_NAMES),
                        "institution": rng.choice(_INSTITUTIONS),
                    }
                    for _ in range(members)
                ],
            }
            for t in range(teams)
        ],
        "activities": list(_ACTIVITIES),
        "ccms": list(_CCMS),
        "seed": seed,
    }
    if weights:
        data["ranking"] = {"weights": weights, "top": top}
    return parse_config(data)


def run_simulation(config: WorkshopConfig, seed: int) -> tuple[list[dict], WorkshopEngine]:
    """Run the full scripted workshop; returns (event trace, engine).

    Deterministic: the same (config, seed) yields the same event list and
    the same final snapshot, byte for byte.
    """
    engine = WorkshopEngine(config)
    rng = random.Random(seed)
    events: list[dict] = [{
        "seq": 1,
        "type": "setup",
        "agent": engine.ora,
        "payload": {"config": config_to_dict(config), "seed": seed},
    }]

    def do(command: str, agent: str, payload: dict) -> dict:
        result = engine.apply(command, payload)
        events.append({
            "seq": len(events) + 1, "type": command, "agent": agent, "payload": payload,
        })
        return result

    def lead_spa(team) -> str:
        return engine.spa_of_actor[sorted(team.members)[0]]

    # inscription
    for actor_id in engine.participants():
        do("inscribe", engine.spa_of_actor[actor_id], {"actor": actor_id})

    teams = [engine.teams[t] for t in sorted(engine.teams)]
    activity_ids = sorted(engine.activities)
    ccm_ids = sorted(engine.ccms)

    # divergence: each member produces 1..3 ideas with the team's activity
    for team in teams:
        do("select_activity", lead_spa(team),
           {"team": team.id, "activity": rng.choice(activity_ids)})
        for actor_id in sorted(team.members):
            for _ in range(rng.randint(1, 3)):
                do("add_idea", engine.spa_of_actor[actor_id], {
                    "team": team.id, "author": actor_id,
                    "description": _words(rng, 4, 8),
                })

    # convergence: two method rounds per team, each producing an improved card
    for _ in range(2):
        for team in teams:
            do("select_method", lead_spa(team),
               {"team": team.id, "ccm": rng.choice(ccm_ids)})
            pool = sorted(
                idea_id for m in team.members
                for idea_id in engine.ideas_by_author.get(m, [])
            )
            sources = rng.sample(pool, min(len(pool), rng.randint(1, 3)))
            created = do("create_card", lead_spa(team), {
                "team": team.id,
                "title": _words(rng, 2, 4),
                "description": _words(rng, 6, 12),
                "scenery": _words(rng, 3, 6) if rng.random() < 0.8 else "",
                "priority_client": _words(rng, 2, 4) if rng.random() < 0.8 else "",
                "advantage": _words(rng, 3, 6) if rng.random() < 0.8 else "",
                "risk": _words(rng, 3, 6) if rng.random() < 0.8 else "",
                "source_ideas": sorted(sources),
            })
            do("improve_card", lead_spa(team), {
                "team": team.id, "card": created["card"],
                "description": _words(rng, 6, 12),
            })

    # peer evaluation: every team scores all assigned same-problem cards
    for problem_id in sorted(engine.problems):
        group = sorted(t.id for t in teams if t.problem == problem_id)
        if not group:
            continue
        assignments = engine.assign_evaluations(problem_id)
        for team_id in group:
            for card_id in assignments[team_id]:
                do("evaluate", lead_spa(engine.teams[team_id]), {
                    "evaluator_team": team_id, "card": card_id,
                    "score": rng.randint(0, 10),
                })

    # submission; the last submit triggers ranking and result delivery
    for team in teams:
        do("submit", lead_spa(team), {"team": team.id})

    engine.verify_final()
    return events, engine

"""HTTP API over the workshop engine with event-sourced persistence.

One service instance hosts one workshop. Every mutating request is
serialized through a single lock: the engine validates and applies the
command, the event is durably appended, and only then is the response
sent. A rejected command reaches neither the engine state nor the log.
On startup the engine is rebuilt by replaying the log, so restarts are
transparent.

Engine errors map one-to-one onto API error bodies:

    {"error": {"code": "...", "message": "...", "detail": {...}}}
"""

from __future__ import annotations

import threading
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, PlainTextResponse
from pydantic import BaseModel, Field

from .errors import EngineError
from .eventlog import EventLog, replay_events
from .config import parse_config
from .liveness import (
    COMPARE_IDEAS,
    IMPROVE,
    OFFER_ACTIVITY,
    OFFER_METHOD,
    RECEIVING_POSSIBLE_SOLUTIONS,
    REQUIREMENTS_INSCRIPTION,
    SELECT_ACTIVITY,
    SELECT_METHOD,
    SENDING_IDEA_CARDS,
    WATCHING_POSSIBLE_SOLUTIONS,
    WORK_IDEAS,
    WORK_IDEA_CARDS,
)
from .workshop import Phase, WorkshopEngine

_STATUS_BY_CODE = {
    "UnknownEntity": 404,
    "UnknownAgent": 404,
    "UnregisteredInstance": 404,
    "UnknownRelation": 404,
    "UnknownConcept": 404,
    "ProtocolViolation": 409,
    "GateUnsatisfied": 409,
    "AcquaintanceViolation": 409,
    "SingleTeamProblem": 409,
    "ForbiddenEvaluation": 409,
    "DomainMismatch": 409,
    "RangeMismatch": 409,
    "InvalidPrefix": 409,
    "NotConfigured": 409,
    "AlreadyConfigured": 409,
    "CorruptLog": 500,
    "StorageError": 500,
}

#: API client commands a team can issue, derived from allowed activities.
_COMMANDS_FOR_ACTIVITY = {
    REQUIREMENTS_INSCRIPTION: "inscribe",
    OFFER_ACTIVITY: "select-activity",
    SELECT_ACTIVITY: "select-activity",
    WORK_IDEAS: "add-idea",
    OFFER_METHOD: "select-method",
    SELECT_METHOD: "select-method",
    WORK_IDEA_CARDS: "create-card",
    IMPROVE: "improve-card",
    COMPARE_IDEAS: "evaluate",
    SENDING_IDEA_CARDS: "submit",
    RECEIVING_POSSIBLE_SOLUTIONS: "view-solutions",
    WATCHING_POSSIBLE_SOLUTIONS: "view-solutions",
}


class NotConfigured(EngineError):
    def __init__(self):
        super().__init__("workshop not configured; POST /api/setup first")


class AlreadyConfigured(EngineError):
    def __init__(self):
        super().__init__("this service instance already hosts a workshop")


class InscriptionBody(BaseModel):
    name: str
    last_name: str
    institution: str


class ActivitySelectionBody(BaseModel):
    activity: str


class IdeaBody(BaseModel):
    author: str
    description: str


class MethodSelectionBody(BaseModel):
    ccm: str


class CardBody(BaseModel):
    title: str
    description: str
    scenery: str = ""
    priority_client: str = ""
    advantage: str = ""
    risk: str = ""
    source_ideas: list[str] = Field(default_factory=list)


class CardUpdateBody(BaseModel):
    title: str | None = None
    description: str | None = None
    scenery: str | None = None
    priority_client: str | None = None
    advantage: str | None = None
    risk: str | None = None


class EvaluationBody(BaseModel):
    evaluator_team: str
    card: str
    score: int


class ServiceState:
    """Engine plus log behind one mutation lock."""

    def __init__(self, log_path: str | Path, deterministic_ts: bool = False):
        self.log = EventLog(log_path, deterministic_ts=deterministic_ts)
        self.lock = threading.Lock()
        self.engine: WorkshopEngine | None = replay_events(self.log.events())

    def require_engine(self) -> WorkshopEngine:
        if self.engine is None:
            raise NotConfigured()
        return self.engine

    def setup(self, config_data: dict) -> WorkshopEngine:
        with self.lock:
            if self.engine is not None:
                raise AlreadyConfigured()
            config = parse_config(config_data)
            engine = WorkshopEngine(config)
            self.log.append("setup", engine.ora,
                            {"config": config_data, "seed": config.seed})
            self.engine = engine
            return engine

    def mutate(self, command: str, agent: str, payload: dict) -> dict:
        """Apply then durably log; rejected commands leave the log unchanged."""
        with self.lock:
            engine = self.require_engine()
            result = engine.apply(command, payload)
            self.log.append(command, agent, payload)
            return result


def create_app(log_path: str | Path, config_path: str | Path | None = None,
               deterministic_ts: bool = False) -> FastAPI:
    app = FastAPI(title="48H workshop service", version="0.1.0")
    # the browser client is served statically from anywhere; no credentials
    from fastapi.middleware.cors import CORSMiddleware

    app.add_middleware(CORSMiddleware, allow_origins=["*"],
                       allow_methods=["*"], allow_headers=["*"])
    state = ServiceState(log_path, deterministic_ts=deterministic_ts)
    app.state.workshop = state

    if config_path and state.engine is None:
        import json

        state.setup(json.loads(Path(config_path).read_text(encoding="utf-8")))

    @app.exception_handler(EngineError)
    async def engine_error_handler(_: Request, exc: EngineError):
        status = _STATUS_BY_CODE.get(exc.code, 400)
        return JSONResponse(status_code=status, content={"error": exc.to_dict()})

    # -- lifecycle ----------------------------------------------------------

    @app.post("/api/setup")
    def setup(config: dict):
        engine = state.setup(config)
        return {"event": engine.event.name, "phase": engine.phase.name,
                "agents": len(engine.router.agents),
                "teams": len(engine.teams)}

    @app.post("/api/actors")
    def inscribe(body: InscriptionBody):
        engine = state.require_engine()
        actor = engine.find_actor(body.name, body.last_name, body.institution)
        if actor is None:
            from .workshop import UnknownEntity

            raise UnknownEntity("participant", f"{body.name} {body.last_name}")
        spa = engine.spa_of_actor.get(actor.id, "")
        result = state.mutate("inscribe", spa, {"actor": actor.id})
        return {"actor": actor.id, "team": engine.actor_team.get(actor.id),
                "inscribed": result["inscribed"]}

    # -- team actions --------------------------------------------------------

    def _lead(engine: WorkshopEngine, team_id: str) -> str:
        team = engine._team(team_id)
        return engine.spa_of_actor[sorted(team.members)[0]]

    @app.post("/api/teams/{team_id}/activity-selection")
    def select_activity(team_id: str, body: ActivitySelectionBody):
        engine = state.require_engine()
        return state.mutate("select_activity", _lead(engine, team_id),
                            {"team": team_id, "activity": body.activity})

    @app.post("/api/teams/{team_id}/ideas")
    def add_idea(team_id: str, body: IdeaBody):
        engine = state.require_engine()
        agent = engine.spa_of_actor.get(body.author, "")
        return state.mutate("add_idea", agent, {
            "team": team_id, "author": body.author, "description": body.description,
        })

    @app.post("/api/teams/{team_id}/method-selection")
    def select_method(team_id: str, body: MethodSelectionBody):
        engine = state.require_engine()
        return state.mutate("select_method", _lead(engine, team_id),
                            {"team": team_id, "ccm": body.ccm})

    @app.post("/api/teams/{team_id}/idea-cards")
    def create_card(team_id: str, body: CardBody):
        engine = state.require_engine()
        payload = {"team": team_id, **body.model_dump()}
        return state.mutate("create_card", _lead(engine, team_id), payload)

    @app.put("/api/teams/{team_id}/idea-cards/{card_id}")
    def improve_card(team_id: str, card_id: str, body: CardUpdateBody):
        engine = state.require_engine()
        updates = {k: v for k, v in body.model_dump().items() if v is not None}
        payload = {"team": team_id, "card": card_id, **updates}
        return state.mutate("improve_card", _lead(engine, team_id), payload)

    @app.post("/api/evaluations")
    def evaluate(body: EvaluationBody):
        engine = state.require_engine()
        return state.mutate("evaluate", _lead(engine, body.evaluator_team), {
            "evaluator_team": body.evaluator_team, "card": body.card,
            "score": body.score,
        })

    @app.post("/api/teams/{team_id}/submit")
    def submit(team_id: str):
        engine = state.require_engine()
        return state.mutate("submit", _lead(engine, team_id), {"team": team_id})

    # -- reads ----------------------------------------------------------------

    @app.get("/api/problems/{problem_id}/possible-solutions")
    def possible_solutions(problem_id: str):
        engine = state.require_engine()
        if problem_id not in engine.problems:
            from .workshop import UnknownEntity

            raise UnknownEntity("problem", problem_id)
        solutions = engine.solutions.get(problem_id, [])
        return {
            "problem": problem_id,
            "statement": engine.problems[problem_id].statement,
            "ranked": bool(solutions),
            "solutions": [
                {"rank": s.rank, "card": s.card, "combined_score": s.combined_score,
                 "title": engine.cards[s.card].title,
                 "team": engine.cards[s.card].team}
                for s in solutions
            ],
        }

    @app.get("/api/teams/{team_id}/allowed-actions")
    def allowed_actions(team_id: str):
        engine = state.require_engine()
        team = engine._team(team_id)
        members = {}
        union: set[str] = set()
        for actor_id in sorted(team.members):
            spa = engine.spa_of_actor[actor_id]
            allowed = sorted(engine.allowed_activities(spa))
            members[actor_id] = allowed
            union.update(allowed)
        actions = sorted(union)
        commands = sorted({_COMMANDS_FOR_ACTIVITY[a] for a in actions
                           if a in _COMMANDS_FOR_ACTIVITY})
        return {
            "team": team.id,
            "phase": engine.phase.name,
            "actions": actions,
            "members": members,
            "commands": commands,
        }

    @app.get("/api/ontology/export")
    def export_ontology():
        engine = state.require_engine()
        return PlainTextResponse(engine.store.export_ntriples(),
                                 media_type="application/n-triples")

    @app.get("/api/state")
    def get_state():
        if state.engine is None:
            return {"configured": False, "phase": Phase.SETUP.name, "completed": False,
                    "counts": {}, "gates": [], "teams": [], "problems": []}
        engine = state.engine
        return {
            "configured": True,
            "phase": engine.phase.name,
            "completed": engine.completed,
            "event": engine.event.name,
            "counts": {
                "actors": len(engine.actors),
                "participants": len(engine.spa_of_actor),
                "teams": len(engine.teams),
                "industries": len(engine.industries),
                "ideas": len(engine.ideas),
                "cards": len(engine.cards),
                "evaluations": len(engine.evaluations),
                "solutions": sum(len(s) for s in engine.solutions.values()),
                "events": len(state.log.read_lines()),
                "triples": len(engine.store),
            },
            "gates": engine.gate_summary(),
            "teams": [
                {
                    "id": t.id, "name": t.name, "problem": t.problem,
                    "members": [
                        {"id": m, "name": engine.actors[m].name,
                         "last_name": engine.actors[m].last_name}
                        for m in sorted(t.members)
                    ],
                    "cards": [
                        {"id": c, "title": engine.cards[c].title,
                         "improved": c in engine.improved}
                        for c in engine.cards_by_team[t.id]
                    ],
                    "submitted": t.id in engine.submitted,
                }
                for t in engine.teams.values()
            ],
            "problems": [
                {"id": p.id, "statement": p.statement,
                 "ranked": bool(engine.solutions.get(p.id))}
                for p in engine.problems.values()
            ],
        }

    return app

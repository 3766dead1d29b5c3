"""Workshop configuration: file format, parsing and validation.

A workshop is configured by one JSON document (shared by the CLI and
the HTTP service):

    {
      "event": {"name": "48h InnovENT-Edition 2016", "year": 2016},
      "sites": ["ENSGSI NANCY", "INSA LYON"],
      "industries": [{"name": "Decathlon", "problem": "Safer urban cycling"}],
      "teams": [
        {"name": "Nan_Dec_1",
         "members": [{"name": "Ada", "last_name": "Byron", "institution": "ENSGSI"}]}
      ],
      "activities": ["Brainstorming", "Write storming"],
      "ccms": ["Six hats of thinking"],
      "ranking": {"weights": {"density": 0.25, "relevance": 0.25,
                              "novelty": 0.25, "evaluation": 0.25},
                  "top": 2},
      "seed": 42
    }

Teams may optionally pin "industry", "site" and "colour"; otherwise the
organizer assigns industries and sites round-robin in declared order.
Validation names the violated service precondition (``Event=1``,
``Industry>=1``, ``Team>=2``, ...) so rejections stay traceable to the
service model.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import EngineError
from .ranking import RankingWeights


class ConfigError(EngineError):
    def __init__(self, condition: str, message: str = ""):
        super().__init__(message or f"configuration violates {condition}", condition=condition)
        self.condition = condition


@dataclass(frozen=True)
class MemberSpec:
    name: str
    last_name: str
    institution: str


@dataclass(frozen=True)
class IndustrySpec:
    name: str
    problem: str


@dataclass(frozen=True)
class TeamSpec:
    name: str
    members: tuple[MemberSpec, ...]
    industry: str = ""
    site: str = ""
    colour: str = ""


@dataclass(frozen=True)
class WorkshopConfig:
    event_name: str
    edition_year: int
    sites: tuple[str, ...]
    industries: tuple[IndustrySpec, ...]
    teams: tuple[TeamSpec, ...]
    activities: tuple[str, ...]
    ccms: tuple[str, ...]
    weights: RankingWeights = field(default_factory=RankingWeights)
    top_k: int = 2
    seed: int = 0

    def validate(self) -> None:
        """Enforce the setup service's conditions before any agent exists."""
        if not self.event_name.strip():
            raise ConfigError("Event=1", "exactly one named event is required")
        if not self.sites:
            raise ConfigError("Site>=1", "at least one site is required")
        if not self.industries:
            raise ConfigError("Industry>=1", "at least one industry is required")
        if any(not i.problem.strip() for i in self.industries):
            raise ConfigError("Problem>=1", "every industry must state its problem")
        if len(self.teams) < 2:
            raise ConfigError("Team>=2", "at least two teams are required")
        for team in self.teams:
            if not team.members:
                raise ConfigError("Members>=1", f"team {team.name!r} has no members")
            if team.industry and team.industry not in {i.name for i in self.industries}:
                raise ConfigError("Industry>=1", f"team {team.name!r} pins unknown industry {team.industry!r}")
            if team.site and team.site not in self.sites:
                raise ConfigError("Site>=1", f"team {team.name!r} pins unknown site {team.site!r}")
        institutions = {m.institution.strip() for t in self.teams for m in t.members}
        if not any(institutions):
            raise ConfigError("Institution>=1", "members must declare institutions")
        if not self.activities:
            raise ConfigError("Activity>=1", "at least one divergence activity is required")
        if not self.ccms:
            raise ConfigError("CCM>=1", "at least one collaborative creative method is required")
        self.weights.validate()
        if self.top_k < 1:
            raise ConfigError("PossibleSolution>=2", "top must be >= 1")


def _require(data: dict, key: str, condition: str):
    if key not in data:
        raise ConfigError(condition, f"missing configuration key {key!r}")
    return data[key]


def parse_config(data: dict) -> WorkshopConfig:
    if not isinstance(data, dict):
        raise ConfigError("Event=1", "configuration must be a JSON object")
    event = _require(data, "event", "Event=1")
    if not isinstance(event, dict) or not str(event.get("name", "")).strip():
        raise ConfigError("Event=1", "event.name is required")

    industries = tuple(
        IndustrySpec(name=str(i.get("name", "")), problem=str(i.get("problem", "")))
        for i in data.get("industries", [])
    )
    teams = []
    for t in data.get("teams", []):
        members = tuple(
            MemberSpec(
                name=str(m.get("name", "")),
                last_name=str(m.get("last_name", "")),
                institution=str(m.get("institution", "")),
            )
            for m in t.get("members", [])
        )
        teams.append(TeamSpec(
            name=str(t.get("name", "")),
            members=members,
            industry=str(t.get("industry", "")),
            site=str(t.get("site", "")),
            colour=str(t.get("colour", "")),
        ))

    ranking = data.get("ranking", {})
    weight_map = ranking.get("weights", {})
    if weight_map:
        weights = RankingWeights(
            density=float(weight_map.get("density", 0.0)),
            relevance=float(weight_map.get("relevance", 0.0)),
            novelty=float(weight_map.get("novelty", 0.0)),
            evaluation=float(weight_map.get("evaluation", 0.0)),
        )
    else:
        weights = RankingWeights()

    config = WorkshopConfig(
        event_name=str(event["name"]),
        edition_year=int(event.get("year", 0)),
        sites=tuple(str(s) for s in data.get("sites", [])),
        industries=industries,
        teams=tuple(teams),
        activities=tuple(str(a) for a in data.get("activities", [])),
        ccms=tuple(str(c) for c in data.get("ccms", [])),
        weights=weights,
        top_k=int(ranking.get("top", 2)),
        seed=int(data.get("seed", 0)),
    )
    config.validate()
    return config


def load_config(path: str | Path) -> WorkshopConfig:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError("Event=1", f"configuration is not valid JSON: {exc}") from exc
    return parse_config(data)


def config_to_dict(config: WorkshopConfig) -> dict:
    """Inverse of parse_config; used to embed the config in setup events."""
    return {
        "event": {"name": config.event_name, "year": config.edition_year},
        "sites": list(config.sites),
        "industries": [{"name": i.name, "problem": i.problem} for i in config.industries],
        "teams": [
            {
                "name": t.name,
                "members": [
                    {"name": m.name, "last_name": m.last_name, "institution": m.institution}
                    for m in t.members
                ],
                **({"industry": t.industry} if t.industry else {}),
                **({"site": t.site} if t.site else {}),
                **({"colour": t.colour} if t.colour else {}),
            }
            for t in config.teams
        ],
        "activities": list(config.activities),
        "ccms": list(config.ccms),
        "ranking": {
            "weights": {
                "density": config.weights.density,
                "relevance": config.weights.relevance,
                "novelty": config.weights.novelty,
                "evaluation": config.weights.evaluation,
            },
            "top": config.top_k,
        },
        "seed": config.seed,
    }

"""The workshop engine: agents, phases, service gates and role protocols.

One engine instance hosts a single workshop. Construction (``build_runtime``)
instantiates the agents from the configuration: one SPA per solver
participant, one IMA per industry, one ORA and one CTEA bound to
synthesized organizer/expert actors, and exactly one SMKA/WSDA/CSA.

All mutation flows through ``apply(command, payload)``; commands validate
their service gates, then drive per-agent ``advance`` calls which enforce
the solver-participant liveness protocol. The engine itself holds no
randomness: identifiers, phase transitions, assertions and messages are
pure functions of the configuration plus the applied command sequence,
which is what makes event replay byte-exact.

Phases move forward only. Transitions are pushed when a stage completes
(last inscription, last card, last evaluation, last submission) or
pulled by the first command of the next stage once its gate holds.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import IntEnum

from . import liveness, ranking
from .agents import AgentDescriptor, AgentKind, MailboxRouter, Performative
from .config import WorkshopConfig
from .errors import EngineError
from .liveness import (
    ASSIGNMENT,
    AWARDS_END,
    COMPARE_IDEAS,
    GIVE_REQUIREMENTS,
    IMPROVE,
    OFFER_ACTIVITY,
    OFFER_METHOD,
    PROVIDES,
    RECEIVING_POSSIBLE_SOLUTIONS,
    REQUIREMENTS_INSCRIPTION,
    SELECT_ACTIVITY,
    SELECT_METHOD,
    SENDING_IDEA_CARDS,
    SOLVER_PARTICIPANT_EXPRESSION,
    WATCHING_POSSIBLE_SOLUTIONS,
    WORK_IDEAS,
    WORK_IDEA_CARDS,
    VerdictKind,
    judge_trace,
)
from .model import (
    CCM,
    Activity,
    Actor,
    Event48H,
    Idea,
    IdeaCard,
    Industry,
    PossibleSolution,
    Problem,
    Role,
    Site,
    Team,
    validate_actor,
    validate_idea_card,
)
from .ontology import TripleStore
from .ranking import ScoreVector


class Phase(IntEnum):
    SETUP = 0
    INSCRIPTION = 1
    ASSIGNMENT = 2
    DIVERGENCE = 3
    CONVERGENCE = 4
    IMPROVE = 5
    COMPARE = 6
    SUBMISSION = 7
    RANKING = 8
    RESULTS = 9
    AWARDS = 10


@dataclass(frozen=True)
class ServiceRow:
    """One row of the engine's service model with its pre/post conditions."""

    name: str
    precondition: str
    postcondition: str


SERVICE_OBTAIN = ServiceRow(
    "Obtain information of actors and assignation of roles",
    "Event=1",
    "Institution>=1 Industry>=1 Role>=2 Team>=2 Problem>=1",
)
SERVICE_ACTIVITY = ServiceRow(
    "Selection and application of activity for ideas",
    "Ideas per participant at least in mind",
    "Idea>0",
)
SERVICE_METHODS = ServiceRow(
    "Selection and Application of Methods for idea Cards",
    "2 Idea Cards per group =2",
    "Idea Cards >2",
)
SERVICE_EVALUATION = ServiceRow(
    "Evaluation by partners and improving idea card as a goal",
    "2 Idea Cards per group",
    "Idea Cards >2",
)
SERVICE_CLASSIFY = ServiceRow(
    "Classification of Idea Cards",
    "At least 2 Idea Cards",
    "Idea Cards >n",
)
SERVICE_SENDING = ServiceRow(
    "Sending Possible Solutions",
    "2 possible solution per group",
    "Possible solution >=2",
)

SERVICE_ROWS = (
    SERVICE_OBTAIN,
    SERVICE_ACTIVITY,
    SERVICE_METHODS,
    SERVICE_EVALUATION,
    SERVICE_CLASSIFY,
    SERVICE_SENDING,
)


class ProtocolViolation(EngineError):
    def __init__(self, agent: str, activity: str, expected):
        expected = sorted(expected)
        super().__init__(
            f"agent {agent}: activity {activity!r} violates the role protocol "
            f"(expected one of {expected})",
            agent=agent, activity=activity, expected=expected,
        )
        self.agent = agent
        self.activity = activity
        self.expected = tuple(expected)


class GateUnsatisfied(EngineError):
    def __init__(self, service: str, condition: str, requirement: str = ""):
        label = f"{condition} {requirement}".strip()
        super().__init__(
            f"service {service!r}: condition {label!r} not satisfied",
            service=service, condition=condition, requirement=requirement,
        )
        self.service = service
        self.condition = condition
        self.requirement = requirement


class SingleTeamProblem(EngineError):
    def __init__(self, problem: str):
        super().__init__(
            f"problem {problem} has a single team: no admissible peer evaluations",
            problem=problem,
        )


class UnknownEntity(EngineError):
    def __init__(self, kind: str, entity_id: str):
        super().__init__(f"unknown {kind} {entity_id!r}", kind=kind, entity=entity_id)


class ValidationFailed(EngineError):
    def __init__(self, message: str, issues=()):
        super().__init__(message, issues=[str(i) for i in issues] or None)


class ForbiddenEvaluation(EngineError):
    def __init__(self, message: str, team: str, card: str):
        super().__init__(message, team=team, card=card)


@dataclass(frozen=True)
class Evaluation:
    evaluator_team: str
    card: str
    score: int


@dataclass
class WorkshopState:
    """Read view over the engine's registries."""

    phase: Phase
    actors: dict[str, Actor]
    teams: dict[str, Team]
    ideas: dict[str, Idea]
    cards: dict[str, IdeaCard]
    evaluations: list[Evaluation]
    solutions: dict[str, list[PossibleSolution]]
    traces: dict[str, list[str]]


_COLOURS = ("red", "blue", "green", "yellow", "orange", "purple", "cyan", "magenta")


class WorkshopEngine:
    """Deterministic single-workshop runtime."""

    def __init__(self, config: WorkshopConfig):
        config.validate()
        self.config = config
        self.automaton = liveness.parse_liveness(SOLVER_PARTICIPANT_EXPRESSION)
        self.store = TripleStore()
        self.router = MailboxRouter()
        self.phase = Phase.SETUP
        self.completed = False

        self.actors: dict[str, Actor] = {}
        self.sites: dict[str, Site] = {}
        self.industries: dict[str, Industry] = {}
        self.problems: dict[str, Problem] = {}
        self.teams: dict[str, Team] = {}
        self.activities: dict[str, Activity] = {}
        self.ccms: dict[str, CCM] = {}
        self.ideas: dict[str, Idea] = {}
        self.cards: dict[str, IdeaCard] = {}
        self.evaluations: list[Evaluation] = []
        self.scores: dict[str, ScoreVector] = {}
        self.solutions: dict[str, list[PossibleSolution]] = {}

        self.traces: dict[str, list[str]] = {}
        self._spa_states: dict[str, frozenset[int]] = {}
        self.inscribed: set[str] = set()
        self.ideas_by_author: dict[str, list[str]] = {}
        self.cards_by_team: dict[str, list[str]] = {}
        self.improved: set[str] = set()
        self.pending_improve: dict[str, str | None] = {}
        self.team_activity: dict[str, str] = {}
        self.team_method: dict[str, str] = {}
        self.submitted: set[str] = set()
        self.evaluated_pairs: set[tuple[str, str]] = set()

        self.spa_of_actor: dict[str, str] = {}
        self.actor_team: dict[str, str] = {}
        self.ima_of_industry: dict[str, str] = {}
        self.teams_by_problem: dict[str, list[str]] = {}
        self.members_order: dict[str, list[str]] = {}
        self._required_pairs: frozenset[tuple[str, str]] | None = None
        self._remaining_evaluations = 0
        self._by_name: dict[str, dict[str, str]] = {"team": {}, "activity": {}, "ccm": {}}
        self._idea_seq = 0
        self._card_seq = 0

        self._build_entities()
        self._build_agents()
        self._assert_setup_triples()
        self.phase = Phase.INSCRIPTION

    # ------------------------------------------------------------------ setup

    def _build_entities(self) -> None:
        cfg = self.config
        self.event = Event48H(id="ev_1", name=cfg.event_name, edition_year=cfg.edition_year)

        for i, name in enumerate(cfg.sites, start=1):
            site = Site(id=f"site_{i}", name=name, event=self.event.id)
            self.sites[site.id] = site
        site_ids = list(self.sites)

        for i, spec in enumerate(cfg.industries, start=1):
            problem = Problem(id=f"prob_{i}", statement=spec.problem)
            industry = Industry(id=f"ind_{i}", name=spec.name, problem=problem.id)
            self.problems[problem.id] = problem
            self.industries[industry.id] = industry
        industry_ids = list(self.industries)

        for i, name in enumerate(cfg.activities, start=1):
            activity = Activity(id=f"actv_{i}", name=name)
            self.activities[activity.id] = activity
            self._by_name["activity"][name] = activity.id
        for i, name in enumerate(cfg.ccms, start=1):
            ccm = CCM(id=f"ccm_{i}", name=name)
            self.ccms[ccm.id] = ccm
            self._by_name["ccm"][name] = ccm.id

        actor_n = 0
        for t_index, team_spec in enumerate(cfg.teams):
            member_ids = []
            for member in team_spec.members:
                actor_n += 1
                actor = Actor(
                    id=f"act_{actor_n:04d}",
                    name=member.name,
                    last_name=member.last_name,
                    institution=member.institution,
                )
                self.actors[actor.id] = actor
                member_ids.append(actor.id)

            if team_spec.industry:
                industry_id = next(
                    i.id for i in self.industries.values() if i.name == team_spec.industry
                )
            else:
                industry_id = industry_ids[t_index % len(industry_ids)]
            if team_spec.site:
                site_id = next(s.id for s in self.sites.values() if s.name == team_spec.site)
            else:
                site_id = site_ids[t_index % len(site_ids)]

            team = Team(
                id=f"team_{t_index + 1:04d}",
                name=team_spec.name,
                members=frozenset(member_ids),
                problem=self.industries[industry_id].problem,
                site=site_id,
                colour=team_spec.colour or _COLOURS[t_index % len(_COLOURS)],
            )
            self.teams[team.id] = team
            self._by_name["team"][team.name] = team.id
            for actor_id in member_ids:
                self.actor_team[actor_id] = team.id
            self.cards_by_team[team.id] = []
            self.pending_improve[team.id] = None
            self.members_order[team.id] = sorted(member_ids)
            self.teams_by_problem.setdefault(team.problem, []).append(team.id)

        # synthesized staff actors
        self.organizer = Actor(
            id="org_1", name="Olive", last_name="Organizer",
            institution="Workshop Organization", roles=frozenset({Role.ORGANIZER}),
        )
        self.expert = Actor(
            id="exp_1", name="Eve", last_name="Expert",
            institution="Workshop Organization",
            roles=frozenset({Role.CREATIVE_EXPERT, Role.TECHNICAL_EXPERT}),
        )
        self.actors[self.organizer.id] = self.organizer
        self.actors[self.expert.id] = self.expert
        self.managers: dict[str, Actor] = {}
        for i, industry_id in enumerate(self.industries, start=1):
            manager = Actor(
                id=f"mgr_{i}", name=f"Mo{i}", last_name="Manager",
                institution=self.industries[industry_id].name,
                roles=frozenset({Role.INDUSTRIAL_MANAGER}),
            )
            self.actors[manager.id] = manager
            self.managers[industry_id] = manager

    def _build_agents(self) -> None:
        self.ora = self.router.add(AgentDescriptor("ora_1", AgentKind.ORA, bound_actor=self.organizer.id)).id
        self.ctea = self.router.add(AgentDescriptor("ctea_1", AgentKind.CTEA, bound_actor=self.expert.id)).id
        for i, industry_id in enumerate(self.industries, start=1):
            agent = self.router.add(
                AgentDescriptor(f"ima_{i}", AgentKind.IMA, bound_actor=self.managers[industry_id].id)
            )
            self.ima_of_industry[industry_id] = agent.id
        spa_n = 0
        for team in self.teams.values():
            for actor_id in sorted(team.members):
                spa_n += 1
                agent = self.router.add(
                    AgentDescriptor(f"spa_{spa_n:04d}", AgentKind.SPA,
                                    bound_actor=actor_id, bound_team=team.id)
                )
                self.spa_of_actor[actor_id] = agent.id
                self._spa_states[agent.id] = frozenset({self.automaton.start})
        self.smka = self.router.add(AgentDescriptor("smka_1", AgentKind.SMKA)).id
        self.wsda = self.router.add(AgentDescriptor("wsda_1", AgentKind.WSDA)).id
        self.csa = self.router.add(AgentDescriptor("csa_1", AgentKind.CSA)).id
        for agent_id in self.router.agents:
            self.traces[agent_id] = []

    def _assert_setup_triples(self) -> None:
        store = self.store
        for role in Role:
            store.register(f"role_{role.value}", "Role", label=role.value)
        store.register(self.event.id, "Event", label=self.event.name)
        for actor in self.actors.values():
            store.register(actor.id, "Actor", label=f"{actor.name} {actor.last_name}",
                           roles=actor.roles)
        for site in self.sites.values():
            store.register(site.id, "Site", label=site.name)
        for problem in self.problems.values():
            store.register(problem.id, "Problem", label=problem.statement)
        for industry in self.industries.values():
            store.register(industry.id, "Industry", label=industry.name)
        for team in self.teams.values():
            store.register(team.id, "Team", label=team.name)
        for activity in self.activities.values():
            store.register(activity.id, "Activity", label=activity.name)
        for ccm in self.ccms.values():
            store.register(ccm.id, "CCM", label=ccm.name)

        org = self.organizer.id
        store.assert_triple(org, "Plays", f"role_{Role.ORGANIZER.value}")
        store.assert_triple(org, "Create", self.event.id)
        store.assert_triple(self.expert.id, "Plays", f"role_{Role.CREATIVE_EXPERT.value}")
        store.assert_triple(self.expert.id, "Plays", f"role_{Role.TECHNICAL_EXPERT.value}")
        for site in self.sites.values():
            store.assert_triple(org, "Assign", site.id)
            store.assert_triple(site.id, "IsAssignedTo", self.event.id)
            store.assert_triple(site.id, "IsAssignedTo", f"role_{Role.SOLVER_PARTICIPANT.value}")
        for industry_id, manager in self.managers.items():
            store.assert_triple(manager.id, "Plays", f"role_{Role.INDUSTRIAL_MANAGER.value}")
            store.assert_triple(manager.id, "Propose", industry_id)
            store.assert_triple(org, "Assign", industry_id)
        for team in self.teams.values():
            store.assert_triple(org, "Assign", team.id)
            industry_id = self.industries_by_problem()[team.problem]
            store.assert_triple(industry_id, "IsAssignedTo", team.id)
            store.assert_triple(team.id, "IsAssignedTo", f"role_{Role.SOLVER_PARTICIPANT.value}")

    def industries_by_problem(self) -> dict[str, str]:
        return {i.problem: i.id for i in self.industries.values()}

    # ------------------------------------------------------------- resolution

    def _team(self, ref: str) -> Team:
        team_id = self._by_name["team"].get(ref, ref)
        try:
            return self.teams[team_id]
        except KeyError:
            raise UnknownEntity("team", ref) from None

    def _activity(self, ref: str) -> Activity:
        activity_id = self._by_name["activity"].get(ref, ref)
        try:
            return self.activities[activity_id]
        except KeyError:
            raise UnknownEntity("activity", ref) from None

    def _ccm(self, ref: str) -> CCM:
        ccm_id = self._by_name["ccm"].get(ref, ref)
        try:
            return self.ccms[ccm_id]
        except KeyError:
            raise UnknownEntity("ccm", ref) from None

    def _card(self, card_id: str) -> IdeaCard:
        try:
            return self.cards[card_id]
        except KeyError:
            raise UnknownEntity("card", card_id) from None

    def find_actor(self, name: str, last_name: str, institution: str) -> Actor | None:
        for actor in self.actors.values():
            if (actor.name, actor.last_name, actor.institution) == (name, last_name, institution):
                return actor
        return None

    def participants(self) -> list[str]:
        """Solver-participant actor ids in SPA order."""
        return [self.router.agent(spa).bound_actor
                for spa in sorted(self.spa_of_actor.values())]

    def _members_in_order(self, team: Team) -> list[str]:
        return self.members_order[team.id]

    def _lead_spa(self, team: Team) -> str:
        return self.spa_of_actor[self._members_in_order(team)[0]]

    # ----------------------------------------------------------------- advance

    def allowed_activities(self, agent_id: str) -> frozenset[str]:
        descriptor = self.router.agent(agent_id)
        if descriptor.kind is not AgentKind.SPA:
            return frozenset()
        return self.automaton.outgoing(self._spa_states[agent_id])

    def _require_protocol(self, actor_ids, activity: str) -> None:
        """Reject a whole team command before any member trace is touched.

        Checking the first activity of a member's step sequence suffices:
        inside a group the automaton's follow sets are singletons, so the
        subsequent steps cannot fail once the first one is allowed.
        """
        for actor_id in actor_ids:
            spa = self.spa_of_actor[actor_id]
            allowed = self.allowed_activities(spa)
            if activity not in allowed:
                raise ProtocolViolation(spa, activity, allowed)

    def advance(self, agent_id: str, activity: str, payload: dict | None = None):
        """Record one protocol activity for one agent.

        SPA traces are checked against the solver-participant automaton;
        the other agent kinds have no printed liveness expression and are
        constrained by the service gates only.
        """
        descriptor = self.router.agent(agent_id)
        if descriptor.kind is AgentKind.SPA:
            states = self._spa_states[agent_id]
            allowed = self.automaton.outgoing(states)
            if activity not in allowed:
                raise ProtocolViolation(agent_id, activity, allowed)
            self._spa_states[agent_id] = self.automaton.step(states, activity)
        self.traces[agent_id].append(activity)
        return self.state

    # ---------------------------------------------------------------- commands

    def apply(self, command: str, payload: dict | None = None) -> dict:
        """Validate and execute one command; returns result info for the caller."""
        handler = getattr(self, f"_cmd_{command}", None)
        if handler is None:
            raise ValidationFailed(f"unknown command {command!r}")
        return handler(payload or {})

    def _require_phase(self, expected: Phase, service: ServiceRow,
                       condition: str, requirement: str = "") -> None:
        if self.phase != expected:
            raise GateUnsatisfied(service.name, condition, requirement)

    def _cmd_inscribe(self, payload: dict) -> dict:
        actor_id = payload.get("actor", "")
        actor = self.actors.get(actor_id)
        if actor is None or actor_id not in self.spa_of_actor:
            raise UnknownEntity("participant", actor_id)
        if self.phase != Phase.INSCRIPTION:
            raise GateUnsatisfied(SERVICE_OBTAIN.name, "Event", "=1")
        if actor_id in self.inscribed:
            raise ValidationFailed(f"participant {actor_id} already inscribed")
        result = validate_actor(actor)
        if not result.ok:
            raise ValidationFailed("inscription requires name, last name and institution",
                                   result.issues)
        self._require_protocol([actor_id], REQUIREMENTS_INSCRIPTION)
        spa = self.spa_of_actor[actor_id]
        self.router.send(self.ora, spa, Performative.REQUEST,
                         {"activity": REQUIREMENTS_INSCRIPTION})
        self.advance(spa, REQUIREMENTS_INSCRIPTION)
        self.router.send(spa, self.ora, Performative.INFORM, {
            "activity": GIVE_REQUIREMENTS, "name": actor.name,
            "last_name": actor.last_name, "institution": actor.institution,
        })
        self.advance(spa, GIVE_REQUIREMENTS)
        self.store.assert_triple(self.organizer.id, "Requires", actor_id)
        self.inscribed.add(actor_id)
        if len(self.inscribed) == len(self.spa_of_actor):
            self._run_assignment()
        return {"actor": actor_id, "inscribed": len(self.inscribed)}

    def _run_assignment(self) -> None:
        """The organizer assigns roles, teams and sites to every participant."""
        self.phase = Phase.ASSIGNMENT
        role_instance = f"role_{Role.SOLVER_PARTICIPANT.value}"
        self.store.assert_triple(self.organizer.id, "Assign", role_instance)
        for team in self.teams.values():
            for actor_id in self._members_in_order(team):
                actor = self.actors[actor_id]
                self.actors[actor_id] = replace(
                    actor, roles=actor.roles | {Role.SOLVER_PARTICIPANT})
                self.store.register(actor_id, "Actor",
                                    roles=frozenset({Role.SOLVER_PARTICIPANT}))
                spa = self.spa_of_actor[actor_id]
                self.router.send(self.ora, spa, Performative.INFORM, {
                    "activity": ASSIGNMENT,
                    "role": Role.SOLVER_PARTICIPANT.value,
                    "team": team.id, "site": team.site,
                })
                self.advance(spa, ASSIGNMENT)
                self.router.send(self.ora, spa, Performative.INFORM, {
                    "activity": PROVIDES, "team": team.id, "problem": team.problem,
                })
                self.advance(spa, PROVIDES)
                self.store.assert_triple(actor_id, "Plays", role_instance)
                self.store.assert_triple(actor_id, "IsPartOf", team.id)
        self.phase = Phase.DIVERGENCE

    def _cmd_select_activity(self, payload: dict) -> dict:
        team = self._team(payload.get("team", ""))
        if self.phase != Phase.DIVERGENCE:
            raise GateUnsatisfied(SERVICE_ACTIVITY.name, SERVICE_ACTIVITY.precondition)
        activity = self._activity(payload.get("activity", ""))
        self._require_protocol(self._members_in_order(team), OFFER_ACTIVITY)
        for actor_id in self._members_in_order(team):
            spa = self.spa_of_actor[actor_id]
            self.router.send(self.ctea, spa, Performative.PROPOSE,
                             {"activity": OFFER_ACTIVITY, "offered": activity.id})
            self.advance(spa, OFFER_ACTIVITY)
            self.advance(spa, SELECT_ACTIVITY)
            self.router.send(spa, self.ctea, Performative.INFORM,
                             {"activity": SELECT_ACTIVITY, "selected": activity.id})
            self.store.assert_triple(actor_id, "Select", activity.id)
        self.store.assert_triple(self.expert.id, "Offers", activity.id)
        self.team_activity[team.id] = activity.id
        return {"team": team.id, "activity": activity.id}

    def _cmd_add_idea(self, payload: dict) -> dict:
        team = self._team(payload.get("team", ""))
        if self.phase != Phase.DIVERGENCE:
            raise GateUnsatisfied(SERVICE_ACTIVITY.name, SERVICE_ACTIVITY.precondition)
        author_id = payload.get("author", "")
        if author_id not in team.members:
            raise ValidationFailed(f"author {author_id!r} is not a member of {team.id}")
        description = str(payload.get("description", "")).strip()
        if not description:
            raise ValidationFailed("idea description must be non-empty")
        activity_id = self.team_activity.get(team.id)
        spa = self.spa_of_actor[author_id]
        allowed = self.allowed_activities(spa)
        if WORK_IDEAS not in allowed and OFFER_ACTIVITY in allowed and activity_id:
            # a completed divergence round reopens with the current activity
            self.advance(spa, OFFER_ACTIVITY)
            self.advance(spa, SELECT_ACTIVITY)
        self.advance(spa, WORK_IDEAS)
        self._idea_seq += 1
        idea = Idea(id=f"idea_{self._idea_seq:05d}", author=author_id,
                    activity=activity_id or "", description=description)
        self.ideas[idea.id] = idea
        self.ideas_by_author.setdefault(author_id, []).append(idea.id)
        self.store.register(idea.id, "Idea", label=description)
        self.store.assert_triple(author_id, "Create", idea.id)
        desc_node = f"{idea.id}.desc"
        self.store.register(desc_node, "IdeaDesc", label=description)
        self.store.assert_triple(desc_node, "IsPartOf", idea.id)
        self.router.send(spa, self.ctea, Performative.INFORM,
                         {"activity": WORK_IDEAS, "idea": idea.id})
        return {"idea": idea.id}

    def _divergence_done(self) -> bool:
        return all(self.ideas_by_author.get(a) for a in self.spa_of_actor)

    def _cmd_select_method(self, payload: dict) -> dict:
        team = self._team(payload.get("team", ""))
        self._pull_convergence()
        if self.phase != Phase.CONVERGENCE or len(self.cards_by_team[team.id]) >= 2:
            raise GateUnsatisfied(SERVICE_METHODS.name, "Idea Cards per group", "=2")
        ccm = self._ccm(payload.get("ccm", ""))
        self._require_protocol(self._members_in_order(team), OFFER_METHOD)
        for actor_id in self._members_in_order(team):
            spa = self.spa_of_actor[actor_id]
            self.router.send(self.ctea, spa, Performative.PROPOSE,
                             {"activity": OFFER_METHOD, "offered": ccm.id})
            self.advance(spa, OFFER_METHOD)
            self.advance(spa, SELECT_METHOD)
            self.router.send(spa, self.ctea, Performative.INFORM,
                             {"activity": SELECT_METHOD, "selected": ccm.id})
        self.store.assert_triple(team.id, "Select", ccm.id)
        self.store.assert_triple(self.expert.id, "Offer", ccm.id)
        self.team_method[team.id] = ccm.id
        return {"team": team.id, "ccm": ccm.id}

    def _pull_convergence(self) -> None:
        if self.phase == Phase.DIVERGENCE:
            if not self._divergence_done():
                raise GateUnsatisfied(SERVICE_ACTIVITY.name, "Idea", ">0")
            self.phase = Phase.CONVERGENCE
        elif self.phase < Phase.DIVERGENCE:
            raise GateUnsatisfied(SERVICE_ACTIVITY.name, SERVICE_ACTIVITY.precondition)

    def _cmd_create_card(self, payload: dict) -> dict:
        team = self._team(payload.get("team", ""))
        self._pull_convergence()
        if len(self.cards_by_team[team.id]) >= 2 or self.phase != Phase.CONVERGENCE:
            raise GateUnsatisfied(SERVICE_METHODS.name, "Idea Cards per group", "=2")
        method = self.team_method.get(team.id)
        members = self._members_in_order(team)
        lead = self.spa_of_actor[members[0]]
        if method is None:
            raise ProtocolViolation(lead, WORK_IDEA_CARDS, self.allowed_activities(lead))
        source_ideas = frozenset(str(i) for i in payload.get("source_ideas", []))
        team_ideas = {i for m in members for i in self.ideas_by_author.get(m, [])}
        if source_ideas - team_ideas:
            raise ValidationFailed(
                f"source ideas must be the team's own: {sorted(source_ideas - team_ideas)}")
        self._card_seq += 1
        card = IdeaCard(
            id=f"card_{self._card_seq:04d}",
            team=team.id,
            method=method,
            source_ideas=source_ideas,
            title=str(payload.get("title", "")),
            description=str(payload.get("description", "")),
            scenery=str(payload.get("scenery", "")),
            priority_client=str(payload.get("priority_client", "")),
            advantage=str(payload.get("advantage", "")),
            risk=str(payload.get("risk", "")),
        )
        result = validate_idea_card(card)
        if not result.ok:
            self._card_seq -= 1
            raise ValidationFailed("idea card failed validation", result.issues)
        try:
            self._require_protocol(members, WORK_IDEA_CARDS)
        except ProtocolViolation:
            self._card_seq -= 1
            raise
        for actor_id in members:
            self.advance(self.spa_of_actor[actor_id], WORK_IDEA_CARDS)
        self.cards[card.id] = card
        self.cards_by_team[team.id].append(card.id)
        self.store.register(card.id, "IdeaCard", label=card.title)
        self.store.annotate_idea_card(card)
        for idea_id in sorted(card.source_ideas):
            self.store.assert_triple(method, "Use", idea_id)
        self.pending_improve[team.id] = card.id
        self.router.send(lead, self.ctea, Performative.INFORM,
                         {"activity": WORK_IDEA_CARDS, "card": card.id})
        if all(len(ids) == 2 for ids in self.cards_by_team.values()):
            self.phase = Phase.IMPROVE
        return {"card": card.id}

    def _cmd_improve_card(self, payload: dict) -> dict:
        team = self._team(payload.get("team", ""))
        if self.phase not in (Phase.CONVERGENCE, Phase.IMPROVE):
            if self.phase < Phase.CONVERGENCE:
                raise GateUnsatisfied(SERVICE_ACTIVITY.name, "Idea", ">0")
            raise GateUnsatisfied(SERVICE_EVALUATION.name, SERVICE_EVALUATION.precondition)
        card_id = payload.get("card", "")
        card = self._card(card_id)
        if card.team != team.id:
            raise ForbiddenEvaluation("a team improves only its own cards", team.id, card_id)
        if self.pending_improve.get(team.id) != card_id:
            raise ValidationFailed(f"card {card_id} is not awaiting improvement")
        updates = {
            key: str(payload[key])
            for key in ("title", "description", "scenery", "priority_client",
                        "advantage", "risk")
            if key in payload
        }
        updated = replace(card, **updates)
        result = validate_idea_card(updated)
        if not result.ok:
            raise ValidationFailed("improved card failed validation", result.issues)
        members = self._members_in_order(team)
        self._require_protocol(members, IMPROVE)
        lead = self.spa_of_actor[members[0]]
        self.router.send(lead, self.ctea, Performative.REQUEST,
                         {"activity": IMPROVE, "card": card_id})
        self.router.send(self.ctea, lead, Performative.RESULT,
                         {"activity": IMPROVE, "card": card_id})
        for actor_id in members:
            self.advance(self.spa_of_actor[actor_id], IMPROVE)
        self.cards[card_id] = updated
        self.store.annotate_idea_card(updated)
        self.store.assert_triple(team.id, "Improve", card_id)
        self.store.assert_triple(self.expert.id, "Help", team.id)
        self.improved.add(card_id)
        self.pending_improve[team.id] = None
        return {"card": card_id}

    # ------------------------------------------------------------- evaluation

    def assign_evaluations(self, problem_id: str) -> dict[str, tuple[str, ...]]:
        """Every team evaluates all same-problem cards except its own two."""
        if problem_id not in self.problems:
            raise UnknownEntity("problem", problem_id)
        group = self.teams_by_problem.get(problem_id, [])
        if len(group) < 2:
            raise SingleTeamProblem(problem_id)
        for team_id in group:
            if len(self.cards_by_team[team_id]) != 2:
                raise GateUnsatisfied(SERVICE_EVALUATION.name,
                                      SERVICE_EVALUATION.precondition)
        assignments: dict[str, tuple[str, ...]] = {}
        for team_id in group:
            assignments[team_id] = tuple(sorted(
                card_id
                for other in group if other != team_id
                for card_id in self.cards_by_team[other]
            ))
        return assignments

    def _cmd_evaluate(self, payload: dict) -> dict:
        team = self._team(payload.get("evaluator_team", ""))
        if self.phase == Phase.IMPROVE and all(
            card_id in self.improved for ids in self.cards_by_team.values() for card_id in ids
        ):
            self._enter_compare()
        if self.phase != Phase.COMPARE:
            raise GateUnsatisfied(SERVICE_EVALUATION.name, SERVICE_EVALUATION.precondition)
        card = self._card(payload.get("card", ""))
        score = payload.get("score")
        if not isinstance(score, int) or not 0 <= score <= 10:
            raise ValidationFailed("score must be an integer in 0..10")
        if card.team == team.id:
            raise ForbiddenEvaluation(
                "teams may not evaluate their own idea cards", team.id, card.id)
        pair = (team.id, card.id)
        if self._required_pairs is None or pair not in self._required_pairs:
            raise ForbiddenEvaluation(
                "teams evaluate idea cards from the same problem only", team.id, card.id)
        if pair in self.evaluated_pairs:
            raise ValidationFailed(f"team {team.id} already evaluated {card.id}")
        members = self._members_in_order(team)
        self._require_protocol(members, COMPARE_IDEAS)
        for actor_id in members:
            self.advance(self.spa_of_actor[actor_id], COMPARE_IDEAS)
        self.evaluations.append(Evaluation(team.id, card.id, score))
        self.evaluated_pairs.add(pair)
        self._remaining_evaluations -= 1
        self.router.send(self.spa_of_actor[members[0]], self.ctea, Performative.INFORM,
                         {"activity": COMPARE_IDEAS, "card": card.id, "score": score})
        if self._remaining_evaluations == 0:
            self.phase = Phase.SUBMISSION
        return {"card": card.id, "score": score}

    def _enter_compare(self) -> None:
        """Freeze the admissible (evaluator team, card) pairs; the card set
        no longer changes once every team has two improved cards."""
        self.phase = Phase.COMPARE
        required: set[tuple[str, str]] = set()
        for group in self.teams_by_problem.values():
            if len(group) < 2:
                continue
            for team_id in group:
                for other in group:
                    if other != team_id:
                        for card_id in self.cards_by_team[other]:
                            required.add((team_id, card_id))
        self._required_pairs = frozenset(required)
        self._remaining_evaluations = len(required - self.evaluated_pairs)

    # -------------------------------------------------------------- submission

    def _cmd_submit(self, payload: dict) -> dict:
        team = self._team(payload.get("team", ""))
        if len(self.cards_by_team[team.id]) != 2:
            raise GateUnsatisfied(SERVICE_METHODS.name, "Idea Cards per group", "=2")
        if self.phase != Phase.SUBMISSION:
            raise GateUnsatisfied(SERVICE_EVALUATION.name, "evaluations", "complete")
        if team.id in self.submitted:
            raise ValidationFailed(f"team {team.id} already submitted")
        members = self._members_in_order(team)
        self._require_protocol(members, SENDING_IDEA_CARDS)
        for actor_id in members:
            self.advance(self.spa_of_actor[actor_id], SENDING_IDEA_CARDS)
        lead = self.spa_of_actor[members[0]]
        self.router.send(lead, self.smka, Performative.SUBMIT,
                         {"activity": SENDING_IDEA_CARDS,
                          "cards": sorted(self.cards_by_team[team.id])})
        self.router.send(lead, self.ora, Performative.INFORM,
                         {"activity": SENDING_IDEA_CARDS, "team": team.id})
        self.submitted.add(team.id)
        if self.submitted == set(self.teams):
            self.run_ranking()
            self.deliver_results()
        return {"team": team.id, "submitted": len(self.submitted)}

    # ----------------------------------------------------------------- ranking

    def run_ranking(self) -> dict[str, list[PossibleSolution]]:
        """Score every problem's cards and nominate the top-k as solutions."""
        if len(self.cards) < 2:
            raise GateUnsatisfied(SERVICE_CLASSIFY.name, SERVICE_CLASSIFY.precondition)
        self.phase = Phase.RANKING
        cards_before = len(self.cards)
        for problem_id in sorted(self.problems):
            group = self.teams_by_problem.get(problem_id, [])
            card_ids = sorted(c for t in group for c in self.cards_by_team[t])
            if not card_ids:
                continue
            cards = [self.cards[c] for c in card_ids]
            marks: dict[str, list[int]] = {}
            for evaluation in self.evaluations:
                if evaluation.card in card_ids:
                    marks.setdefault(evaluation.card, []).append(evaluation.score)
            for agent_id in (self.smka, self.wsda, self.csa):
                self.router.send(self.ctea, agent_id, Performative.REQUEST,
                                 {"problem": problem_id, "cards": card_ids})
            scored = ranking.score_cards(
                cards, self.problems[problem_id].statement,
                self.config.weights, marks)
            for card, vector in scored:
                self.scores[card.id] = vector
                profile = ranking.profile_card(card)
                self.store.register_vocabulary(card.id, set(profile.tokens))
            for agent_id, measure in ((self.smka, "width_density"),
                                      (self.wsda, "relevance"),
                                      (self.csa, "novelty")):
                self.router.send(agent_id, self.ctea, Performative.RESULT, {
                    "problem": problem_id,
                    "measure": measure,
                    "values": {c.id: getattr(v, measure) for c, v in scored},
                })
            solutions = ranking.select_possible_solutions(scored, k=self.config.top_k)
            self.solutions[problem_id] = solutions
            industry_id = self.industries_by_problem()[problem_id]
            for solution in solutions:
                ps_id = f"ps_{problem_id}_{solution.rank}"
                self.store.register(ps_id, "PossibleSolutions",
                                    label=f"rank {solution.rank}: {solution.card}")
                card = self.cards[solution.card]
                presenting = self.teams[card.team]
                lead_actor = self._members_in_order(presenting)[0]
                self.store.assert_triple(presenting.id, "Present", ps_id)
                self.store.assert_triple(lead_actor, "Send", ps_id)
                self.store.assert_triple(self.managers[industry_id].id, "Receive", ps_id)
        if len(self.cards) != cards_before:
            raise ValidationFailed("classification must not change the card set")
        return self.solutions

    def deliver_results(self) -> None:
        """Push the ranked solutions to every participant and close the workshop."""
        for problem_id in sorted(self.problems):
            if not self.teams_by_problem.get(problem_id):
                continue
            if len(self.solutions.get(problem_id, [])) < 2:
                raise GateUnsatisfied(SERVICE_SENDING.name, SERVICE_SENDING.precondition)
        self.phase = Phase.RESULTS
        spas = sorted(self.spa_of_actor.values())
        for spa in spas:
            descriptor = self.router.agent(spa)
            team = self.teams[descriptor.bound_team]
            industry_id = self.industries_by_problem()[team.problem]
            self.router.send(self.ima_of_industry[industry_id], spa, Performative.INFORM, {
                "activity": RECEIVING_POSSIBLE_SOLUTIONS,
                "solutions": [s.card for s in self.solutions.get(team.problem, [])],
            })
            self.advance(spa, RECEIVING_POSSIBLE_SOLUTIONS)
        for spa in spas:
            self.advance(spa, WATCHING_POSSIBLE_SOLUTIONS)
        self.phase = Phase.AWARDS
        for spa in spas:
            self.router.send(self.ora, spa, Performative.INFORM, {"activity": AWARDS_END})
            self.advance(spa, AWARDS_END)
        self.completed = True

    # ------------------------------------------------------------------ checks

    def gate_summary(self) -> list[dict]:
        """Current truth value of each service row's post-condition."""
        roles_filled = {role for a in self.actors.values() for role in a.roles}
        per_team_two = bool(self.cards) and all(
            len(ids) == 2 for ids in self.cards_by_team.values())
        rows = [
            (SERVICE_OBTAIN, len({a.institution for a in self.actors.values()} - {""}) >= 1
             and len(self.industries) >= 1 and len(roles_filled) >= 2
             and len(self.teams) >= 2 and len(self.problems) >= 1),
            (SERVICE_ACTIVITY, bool(self.ideas)
             and all(self.ideas_by_author.get(a) for a in self.spa_of_actor)),
            (SERVICE_METHODS, len(self.cards) > 2 and per_team_two),
            (SERVICE_EVALUATION, len(self.cards) > 2 and bool(self.evaluations)),
            (SERVICE_CLASSIFY, bool(self.scores) and len(self.cards) >= 2),
            (SERVICE_SENDING, sum(len(s) for s in self.solutions.values()) >= 2),
        ]
        return [
            {"service": row.name, "precondition": row.precondition,
             "postcondition": row.postcondition, "satisfied": ok}
            for row, ok in rows
        ]

    def verify_final(self) -> dict:
        """Assert the safety conditions and post-conditions at workshop end."""
        failures = []
        for actor_id in self.spa_of_actor:
            if not self.ideas_by_author.get(actor_id):
                failures.append(f"participant {actor_id} has no idea")
        for team_id, ids in self.cards_by_team.items():
            if len(ids) != 2:
                failures.append(f"team {team_id} has {len(ids)} cards, expected 2")
        for spa in sorted(self.spa_of_actor.values()):
            verdict = judge_trace(self.automaton, self.traces[spa])
            if verdict.kind is not VerdictKind.ACCEPTED:
                failures.append(f"trace of {spa} is {verdict.kind.value}")
        audit = self.store.audit()
        failures.extend(audit)
        if not all(row["satisfied"] for row in self.gate_summary()):
            unsatisfied = [r["service"] for r in self.gate_summary() if not r["satisfied"]]
            failures.append(f"unsatisfied post-conditions: {unsatisfied}")
        if failures:
            raise ValidationFailed("final verification failed", failures)
        return {
            "participants": len(self.spa_of_actor),
            "ideas": len(self.ideas),
            "cards": len(self.cards),
            "cards_per_team": 2,
            "evaluations": len(self.evaluations),
            "possible_solutions": sum(len(s) for s in self.solutions.values()),
            "triples": len(self.store),
        }

    # ------------------------------------------------------------------- views

    @property
    def state(self) -> WorkshopState:
        return WorkshopState(
            phase=self.phase,
            actors=self.actors,
            teams=self.teams,
            ideas=self.ideas,
            cards=self.cards,
            evaluations=self.evaluations,
            solutions=self.solutions,
            traces=self.traces,
        )

    def snapshot(self) -> dict:
        """Canonical JSON-able state image; replay equality compares these."""
        return {
            "phase": self.phase.name,
            "completed": self.completed,
            "actors": {
                a.id: {"name": a.name, "last_name": a.last_name,
                       "institution": a.institution,
                       "roles": sorted(r.value for r in a.roles)}
                for a in self.actors.values()
            },
            "teams": {
                t.id: {"name": t.name, "members": sorted(t.members),
                       "problem": t.problem, "site": t.site, "colour": t.colour}
                for t in self.teams.values()
            },
            "ideas": {
                i.id: {"author": i.author, "activity": i.activity,
                       "description": i.description}
                for i in self.ideas.values()
            },
            "cards": {
                c.id: {"team": c.team, "method": c.method,
                       "source_ideas": sorted(c.source_ideas), **c.text_fields()}
                for c in self.cards.values()
            },
            "evaluations": [
                [e.evaluator_team, e.card, e.score] for e in self.evaluations
            ],
            "scores": {
                card_id: [v.width_density, v.relevance, v.novelty, v.evaluation, v.combined]
                for card_id, v in sorted(self.scores.items())
            },
            "solutions": {
                problem_id: [[s.card, s.combined_score, s.rank] for s in solutions]
                for problem_id, solutions in sorted(self.solutions.items())
            },
            "traces": {agent: list(trace) for agent, trace in sorted(self.traces.items())},
            "messages": [
                [m.seq, m.from_agent, m.to_agent, m.performative.value, m.payload]
                for m in self.router.delivered
            ],
            "ontology": self.store.export_ntriples(),
        }


def build_runtime(config: WorkshopConfig) -> WorkshopEngine:
    """Instantiate the agent runtime for a validated configuration."""
    return WorkshopEngine(config)

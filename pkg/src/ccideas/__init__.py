"""Multi-agent idea-management engine for the 48H creativity workshop.

Role protocols compiled from liveness expressions, a schema-validating
triple store for all workshop knowledge, semantic ranking of idea cards,
and an event-sourced runtime exposed over HTTP and a CLI.
"""

from .agents import (
    ACQUAINTANCE_EDGES,
    AcquaintanceViolation,
    AgentDescriptor,
    AgentKind,
    AgentMessage,
    MailboxRouter,
    Performative,
    acquaintance_allows,
)
from .config import ConfigError, WorkshopConfig, load_config, parse_config
from .errors import EngineError
from .eventlog import CorruptLog, EventLog, WorkshopEvent, append_event, replay, replay_events
from .liveness import (
    InvalidPrefix,
    ParseError,
    ProtocolAutomaton,
    TraceVerdict,
    UnknownActivity,
    VerdictKind,
    allowed_next,
    default_corpus,
    judge_trace,
    parse_corpus,
    parse_liveness,
)
from .model import (
    Actor,
    IdeaCard,
    PossibleSolution,
    Role,
    ValidationResult,
    VocabularyCategory,
    validate_actor,
    validate_idea_card,
)
from .ontology import (
    COMPETENCY_QUESTIONS,
    CONCEPTS,
    RELATIONS,
    ConceptSchema,
    Triple,
    TripleStore,
    builtin_schema,
    check_competency,
)
from .ranking import (
    RankingWeights,
    ScoreVector,
    TokenProfile,
    WeightError,
    comparative_similarity,
    profile_card,
    score_cards,
    select_possible_solutions,
    semantic_distance,
    tokenize,
    width_density,
)
from .sim import run_simulation, synthetic_config
from .workshop import (
    GateUnsatisfied,
    Phase,
    ProtocolViolation,
    SERVICE_ROWS,
    SingleTeamProblem,
    WorkshopEngine,
    build_runtime,
)

__version__ = "0.1.0"

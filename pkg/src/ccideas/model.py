"""Domain types for the 48H creativity workshop.

Every entity that the ontology's concept table names has a value type
here. Instances are plain frozen dataclasses: safe to copy, hash and
send between execution contexts. Identifiers are opaque strings
assigned by the engine, unique per entity kind.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum


class Role(Enum):
    """The five workshop roles. Closed enumeration."""

    ORGANIZER = "Organizer"
    SOLVER_PARTICIPANT = "SolverParticipant"
    CREATIVE_EXPERT = "CreativeExpert"
    TECHNICAL_EXPERT = "TechnicalExpert"
    INDUSTRIAL_MANAGER = "IndustrialManager"


class VocabularyCategory(Enum):
    """Grammatical categories used to classify idea-card vocabulary."""

    ADJECTIVE = "Adjective"
    ADVERB = "Adverb"
    NOUN = "Noun"
    VERB = "Verb"
    ARTICLE = "Article"
    PRONOUN = "Pronoun"
    PREPOSITION = "Preposition"
    CONJUNCTION = "Conjunction"
    INTERJECTION = "Interjection"


#: Open-class categories; everything else is closed-class.
CONTENT_CATEGORIES = frozenset(
    {
        VocabularyCategory.ADJECTIVE,
        VocabularyCategory.ADVERB,
        VocabularyCategory.NOUN,
        VocabularyCategory.VERB,
    }
)


@dataclass(frozen=True)
class Actor:
    """A workshop participant. Inscription requires the three text fields."""

    id: str
    name: str
    last_name: str
    institution: str
    roles: frozenset[Role] = frozenset()

    def has_role(self, role: Role) -> bool:
        return role in self.roles


@dataclass(frozen=True)
class Event48H:
    """One edition of the creativity workshop."""

    id: str
    name: str
    edition_year: int = 0


@dataclass(frozen=True)
class Site:
    """A physical place where actors work; belongs to exactly one event."""

    id: str
    name: str
    event: str


@dataclass(frozen=True)
class Problem:
    id: str
    statement: str


@dataclass(frozen=True)
class Industry:
    """Sponsor organisation; carries exactly one problem."""

    id: str
    name: str
    problem: str


@dataclass(frozen=True)
class Team:
    """A group of solver participants sharing one problem and one site."""

    id: str
    name: str
    members: frozenset[str]
    problem: str
    site: str
    colour: str = ""


@dataclass(frozen=True)
class Activity:
    """A divergence technique used to produce individual ideas."""

    id: str
    name: str


@dataclass(frozen=True)
class CCM:
    """A collaborative creative method used to converge ideas into cards."""

    id: str
    name: str


@dataclass(frozen=True)
class Idea:
    """An individual idea captured during divergence."""

    id: str
    author: str
    activity: str
    description: str


@dataclass(frozen=True)
class IdeaCard:
    """The six-field team deliverable built from individual ideas.

    Title and description are mandatory; the other four text fields may
    be left empty (participants often skip them) but are always present.
    """

    id: str
    team: str
    method: str
    source_ideas: frozenset[str]
    title: str
    description: str
    scenery: str = ""
    priority_client: str = ""
    advantage: str = ""
    risk: str = ""

    def text_fields(self) -> dict[str, str]:
        return {
            "title": self.title,
            "description": self.description,
            "scenery": self.scenery,
            "priority_client": self.priority_client,
            "advantage": self.advantage,
            "risk": self.risk,
        }


@dataclass(frozen=True)
class PossibleSolution:
    """An idea card nominated by top combined semantic score."""

    card: str
    combined_score: float
    rank: int


@dataclass(frozen=True)
class ValidationIssue:
    kind: str
    field: str = ""

    def __str__(self) -> str:
        return f"{self.kind}({self.field})" if self.field else self.kind


@dataclass(frozen=True)
class ValidationResult:
    issues: tuple[ValidationIssue, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.issues

    def __bool__(self) -> bool:
        return self.ok


MISSING_FIELD = "MissingField"
NO_SOURCE_IDEAS = "NoSourceIdeas"


def validate_actor(actor: Actor) -> ValidationResult:
    """Check the three inscription fields. Pure: no state consulted."""
    issues = []
    for fname in ("name", "last_name", "institution"):
        if not getattr(actor, fname).strip():
            issues.append(ValidationIssue(MISSING_FIELD, fname))
    return ValidationResult(tuple(issues))


def validate_idea_card(card: IdeaCard) -> ValidationResult:
    """A card is usable iff it has a title, a description and >=1 source idea."""
    issues = []
    if not card.title.strip():
        issues.append(ValidationIssue(MISSING_FIELD, "title"))
    if not card.description.strip():
        issues.append(ValidationIssue(MISSING_FIELD, "description"))
    if not card.source_ideas:
        issues.append(ValidationIssue(NO_SOURCE_IDEAS))
    return ValidationResult(tuple(issues))

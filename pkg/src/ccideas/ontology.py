"""CCIDEAS: the collaborative-creative-ideas ontology and its triple store.

The schema is fixed: 25 concepts and 34 subject-verb-object relation
descriptors. Relation names repeat with different domain/range pairs
(``Assign`` appears four times, ``IsPartOf1``..``IsPartOf6`` stay
distinct); a triple is valid when some descriptor of that name matches
both ends.

The five role concepts (Organizer, SolverParticipant, CreativeExpert,
TechnicalExpert, IndustrialManager) are subconcepts of Actor: a domain
or range naming one of them accepts an Actor instance holding the
corresponding role, and the stored triple records the specialized
concept so exports stay self-describing.

The store is in-memory, single-writer / multiple-reader: serialize
mutations through one owner; queries read immutable snapshots.
"""

from __future__ import annotations

from dataclasses import dataclass
from urllib.parse import quote, unquote

from .errors import EngineError
from .model import IdeaCard, Role, validate_idea_card

# --- errors -----------------------------------------------------------------


class UnknownConcept(EngineError):
    def __init__(self, concept: str):
        super().__init__(f"unknown concept {concept!r}", concept=concept)


class UnknownRelation(EngineError):
    def __init__(self, relation: str):
        super().__init__(f"unknown relation {relation!r}", relation=relation)


class DomainMismatch(EngineError):
    def __init__(self, relation: str, expected: str, actual: str):
        super().__init__(
            f"relation {relation!r} expects domain {expected}, got {actual}",
            relation=relation, expected=expected, actual=actual,
        )
        self.expected = expected
        self.actual = actual


class RangeMismatch(EngineError):
    def __init__(self, relation: str, expected: str, actual: str):
        super().__init__(
            f"relation {relation!r} expects range {expected}, got {actual}",
            relation=relation, expected=expected, actual=actual,
        )
        self.expected = expected
        self.actual = actual


class UnregisteredInstance(EngineError):
    def __init__(self, instance_id: str):
        super().__init__(f"instance {instance_id!r} is not registered", instance=instance_id)


class NTriplesSyntaxError(EngineError):
    def __init__(self, line: int, message: str = "malformed line"):
        super().__init__(f"line {line}: {message}", line=line)
        self.line = line


class InvalidEntity(EngineError):
    def __init__(self, entity: str, issues):
        super().__init__(f"{entity} failed validation: {', '.join(map(str, issues))}", entity=entity)


# --- schema -----------------------------------------------------------------

CONCEPTS: tuple[str, ...] = (
    "Activity",
    "Actor",
    "CCM",
    "Event",
    "Idea",
    "IdeaDesc",
    "IdeaCard",
    "ICDesc",
    "ICTitle",
    "ICScenery",
    "ICPrioCli",
    "ICAvant",
    "ICRisk",
    "Industry",
    "Problem",
    "Role",
    "Site",
    "Team",
    "Vocabulary",
    "Organizer",
    "SolverParticipant",
    "CreativeExpert",
    "TechnicalExpert",
    "IndustrialManager",
    "PossibleSolutions",
)

#: Actor subconcepts, keyed by the role that qualifies an actor for them.
ROLE_CONCEPTS: dict[Role, str] = {
    Role.ORGANIZER: "Organizer",
    Role.SOLVER_PARTICIPANT: "SolverParticipant",
    Role.CREATIVE_EXPERT: "CreativeExpert",
    Role.TECHNICAL_EXPERT: "TechnicalExpert",
    Role.INDUSTRIAL_MANAGER: "IndustrialManager",
}

_ROLE_CONCEPT_NAMES = frozenset(ROLE_CONCEPTS.values())
_ROLE_FOR_CONCEPT = {concept: role for role, concept in ROLE_CONCEPTS.items()}


@dataclass(frozen=True)
class RelationDescriptor:
    name: str
    domain: str
    range: str
    definition: str


RELATIONS: tuple[RelationDescriptor, ...] = (
    RelationDescriptor("Select", "SolverParticipant", "Activity", "Solver participant selects an activity to create individual ideas."),
    RelationDescriptor("Offers", "CreativeExpert", "Activity", "Creative expert offers an activity."),
    RelationDescriptor("Plays", "Actor", "Role", "Actor plays a role."),
    RelationDescriptor("Assign", "Organizer", "Role", "Organizer assigns the roles in the workshop."),
    RelationDescriptor("Propose", "IndustrialManager", "Industry", "Industrial manager proposes an industry."),
    RelationDescriptor("Create", "Organizer", "Event", "Organizer creates an event."),
    RelationDescriptor("Assign", "Organizer", "Site", "Organizer assigns sites."),
    RelationDescriptor("Assign", "Organizer", "Industry", "Organizer assigns industries."),
    RelationDescriptor("Assign", "Organizer", "Team", "Organizer assigns teams."),
    RelationDescriptor("Requires", "Organizer", "Actor", "Organizer requires actors for the inscription."),
    RelationDescriptor("Help", "TechnicalExpert", "Team", "Technical expert helps teams."),
    RelationDescriptor("IsAssignedTo", "Industry", "Team", "Industry is assigned to a team."),
    RelationDescriptor("Receive", "IndustrialManager", "PossibleSolutions", "Industrial manager receives the possible solutions."),
    RelationDescriptor("IsPartOf", "Actor", "Team", "Actor is part of a team."),
    RelationDescriptor("IsAssignedTo", "Site", "Event", "Site is assigned to an event."),
    RelationDescriptor("Send", "SolverParticipant", "PossibleSolutions", "Solver participant sends the possible solutions."),
    RelationDescriptor("Present", "Team", "PossibleSolutions", "Team presents the possible solutions."),
    RelationDescriptor("IsAssignedTo", "Site", "Role", "Site is assigned to a role."),
    RelationDescriptor("IsAssignedTo", "Team", "Role", "Team is assigned to a role."),
    RelationDescriptor("Create", "Team", "IdeaCard", "Team creates idea cards."),
    RelationDescriptor("Improve", "Team", "IdeaCard", "Team improves idea cards."),
    RelationDescriptor("Select", "Team", "CCM", "Team selects a collaborative creative method."),
    RelationDescriptor("Use", "CCM", "Idea", "A collaborative creative method uses ideas."),
    RelationDescriptor("Form", "Idea", "IdeaCard", "Ideas form an idea card."),
    RelationDescriptor("Use", "IdeaCard", "CCM", "An idea card uses a collaborative creative method."),
    RelationDescriptor("Offer", "CreativeExpert", "CCM", "Creative expert offers a collaborative creative method."),
    RelationDescriptor("IsPartOf", "IdeaDesc", "Idea", "The description is part of the idea."),
    RelationDescriptor("Create", "SolverParticipant", "Idea", "Solver participant creates ideas."),
    RelationDescriptor("IsPartOf1", "ICDesc", "IdeaCard", "The description field is part of the idea card."),
    RelationDescriptor("IsPartOf2", "ICTitle", "IdeaCard", "The title field is part of the idea card."),
    RelationDescriptor("IsPartOf3", "ICScenery", "IdeaCard", "The scenery field is part of the idea card."),
    RelationDescriptor("IsPartOf4", "ICPrioCli", "IdeaCard", "The priority-client field is part of the idea card."),
    RelationDescriptor("IsPartOf5", "ICAvant", "IdeaCard", "The advantage field is part of the idea card."),
    RelationDescriptor("IsPartOf6", "ICRisk", "IdeaCard", "The risk field is part of the idea card."),
)


@dataclass(frozen=True)
class ConceptSchema:
    concepts: frozenset[str]
    relations: tuple[RelationDescriptor, ...]

    def relations_named(self, name: str) -> tuple[RelationDescriptor, ...]:
        return tuple(r for r in self.relations if r.name == name)

    def relation_names(self) -> frozenset[str]:
        return frozenset(r.name for r in self.relations)


_SCHEMA = ConceptSchema(concepts=frozenset(CONCEPTS), relations=RELATIONS)


def builtin_schema() -> ConceptSchema:
    """The fixed CCIDEAS schema: 25 concepts, 34 relation descriptors."""
    return _SCHEMA


# --- instances and triples --------------------------------------------------


@dataclass(frozen=True)
class InstanceEntry:
    id: str
    concept: str
    label: str
    roles: frozenset[Role] = frozenset()

    def effective_concepts(self) -> frozenset[str]:
        names = {self.concept}
        if self.concept == "Actor":
            names.update(ROLE_CONCEPTS[r] for r in self.roles)
        elif self.concept in _ROLE_CONCEPT_NAMES:
            names.add("Actor")
        return frozenset(names)


@dataclass(frozen=True)
class InstanceRef:
    concept: str
    id: str


@dataclass(frozen=True)
class Triple:
    subject: InstanceRef
    relation: str
    object: InstanceRef


IRI_PREFIX = "urn:ccideas:"


def instance_iri(ref: InstanceRef) -> str:
    return f"{IRI_PREFIX}{ref.concept}:{quote(ref.id, safe='._-')}"


def relation_iri(name: str) -> str:
    return f"{IRI_PREFIX}rel:{quote(name, safe='._-')}"


def _parse_iri(iri: str, line: int) -> tuple[str, str]:
    if not iri.startswith(IRI_PREFIX):
        raise NTriplesSyntaxError(line, f"unexpected IRI scheme in {iri!r}")
    rest = iri[len(IRI_PREFIX):]
    kind, _, tail = rest.partition(":")
    if not kind or not tail:
        raise NTriplesSyntaxError(line, f"malformed IRI {iri!r}")
    return kind, unquote(tail)


class TripleStore:
    """Schema-validating triple store over a registry of typed instances."""

    def __init__(self, schema: ConceptSchema | None = None):
        self.schema = schema or builtin_schema()
        self.registry: dict[str, InstanceEntry] = {}
        self._triples: set[Triple] = set()

    # -- registry --

    def register(self, instance_id: str, concept: str, label: str = "",
                 roles: frozenset[Role] = frozenset()) -> InstanceEntry:
        if concept not in self.schema.concepts:
            raise UnknownConcept(concept)
        existing = self.registry.get(instance_id)
        if existing is not None:
            # merging roles is the only allowed update
            if existing.concept != concept:
                raise UnknownConcept(
                    f"{instance_id!r} already registered as {existing.concept}"
                )
            if roles - existing.roles:
                entry = InstanceEntry(instance_id, concept, existing.label or label,
                                      existing.roles | roles)
                self.registry[instance_id] = entry
                return entry
            return existing
        entry = InstanceEntry(instance_id, concept, label or instance_id, frozenset(roles))
        self.registry[instance_id] = entry
        return entry

    def entry(self, instance_id: str) -> InstanceEntry:
        try:
            return self.registry[instance_id]
        except KeyError:
            raise UnregisteredInstance(instance_id) from None

    # -- assertion --

    def assert_triple(self, subject_id: str, relation: str, object_id: str) -> Triple:
        """Validate against the schema and store (idempotently)."""
        candidates = self.schema.relations_named(relation)
        if not candidates:
            raise UnknownRelation(relation)
        s_entry = self.entry(subject_id)
        o_entry = self.entry(object_id)
        s_concepts = s_entry.effective_concepts()
        o_concepts = o_entry.effective_concepts()

        domain_ok = [d for d in candidates if d.domain in s_concepts]
        if not domain_ok:
            expected = " or ".join(sorted({d.domain for d in candidates}))
            raise DomainMismatch(relation, expected, s_entry.concept)
        for descriptor in domain_ok:
            if descriptor.range in o_concepts:
                triple = Triple(
                    InstanceRef(descriptor.domain, subject_id),
                    relation,
                    InstanceRef(descriptor.range, object_id),
                )
                self._triples.add(triple)
                return triple
        expected = " or ".join(sorted({d.range for d in domain_ok}))
        raise RangeMismatch(relation, expected, o_entry.concept)

    # -- queries --

    def query(self, subject: str | None = None, relation: str | None = None,
              obj: str | None = None) -> frozenset[Triple]:
        """Wildcard pattern match; ``None`` fields match anything."""
        return frozenset(
            t for t in self._triples
            if (subject is None or t.subject.id == subject)
            and (relation is None or t.relation == relation)
            and (obj is None or t.object.id == obj)
        )

    def __len__(self) -> int:
        return len(self._triples)

    def triples(self) -> frozenset[Triple]:
        return frozenset(self._triples)

    def audit(self) -> list[str]:
        """Re-validate every stored triple; returns human-readable violations."""
        problems = []
        for t in sorted(self._triples, key=lambda t: (t.subject.id, t.relation, t.object.id)):
            matches = [
                d for d in self.schema.relations_named(t.relation)
                if d.domain == t.subject.concept and d.range == t.object.concept
            ]
            if not matches:
                problems.append(
                    f"({t.subject.concept}:{t.subject.id}, {t.relation}, "
                    f"{t.object.concept}:{t.object.id}) matches no descriptor"
                )
                continue
            for ref in (t.subject, t.object):
                entry = self.registry.get(ref.id)
                if entry is None:
                    problems.append(f"{ref.id} is not registered")
                elif ref.concept not in entry.effective_concepts():
                    problems.append(f"{ref.id} stored as {ref.concept} but registered as {entry.concept}")
        return problems

    # -- N-Triples ------------------------------------------------------------

    def export_ntriples(self) -> str:
        """Deterministic export: one sorted line per triple."""
        lines = sorted(
            f"<{instance_iri(t.subject)}> <{relation_iri(t.relation)}> <{instance_iri(t.object)}> ."
            for t in self._triples
        )
        return "".join(line + "\n" for line in lines)

    def import_ntriples(self, text: str) -> list[Triple]:
        """Parse and re-assert exported triples, auto-registering instances
        from their concept-carrying IRIs. Validation applies per line."""
        asserted = []
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line:
                continue
            if not line.endswith(" ."):
                raise NTriplesSyntaxError(lineno, "missing terminal ' .'")
            parts = line[:-2].split(" ")
            if len(parts) != 3 or not all(p.startswith("<") and p.endswith(">") for p in parts):
                raise NTriplesSyntaxError(lineno)
            s_concept, s_id = _parse_iri(parts[0][1:-1], lineno)
            p_kind, p_name = _parse_iri(parts[1][1:-1], lineno)
            o_concept, o_id = _parse_iri(parts[2][1:-1], lineno)
            if p_kind != "rel":
                raise NTriplesSyntaxError(lineno, "predicate is not a relation IRI")
            if not self.schema.relations_named(p_name):
                raise UnknownRelation(p_name)
            for concept, instance_id in ((s_concept, s_id), (o_concept, o_id)):
                # a role-specialized IRI registers the actor with that role
                role = _ROLE_FOR_CONCEPT.get(concept)
                existing = self.registry.get(instance_id)
                if existing is None:
                    if role is not None:
                        self.register(instance_id, "Actor", roles=frozenset({role}))
                    else:
                        self.register(instance_id, concept)
                elif role is not None and existing.concept == "Actor":
                    self.register(instance_id, "Actor", roles=frozenset({role}))
            asserted.append(self.assert_triple(s_id, p_name, o_id))
        return asserted

    # -- idea-card annotation --------------------------------------------------

    #: field name -> (concept, relation, id suffix), in relation-table order
    CARD_FIELD_RELATIONS: tuple[tuple[str, str, str, str], ...] = (
        ("description", "ICDesc", "IsPartOf1", "desc"),
        ("title", "ICTitle", "IsPartOf2", "title"),
        ("scenery", "ICScenery", "IsPartOf3", "scenery"),
        ("priority_client", "ICPrioCli", "IsPartOf4", "priocli"),
        ("advantage", "ICAvant", "IsPartOf5", "avant"),
        ("risk", "ICRisk", "IsPartOf6", "risk"),
    )

    def annotate_idea_card(self, card: IdeaCard) -> tuple[Triple, ...]:
        """Assert the part-of triples for the card's non-empty fields plus
        its team/method/source-idea links. The card, its team, method and
        source ideas must already be registered; field text nodes are
        synthesized here."""
        result = validate_idea_card(card)
        if not result.ok:
            raise InvalidEntity(card.id, result.issues)
        for required in (card.team, card.method, card.id, *sorted(card.source_ideas)):
            self.entry(required)

        asserted: list[Triple] = []
        fields = card.text_fields()
        for field_name, concept, relation, suffix in self.CARD_FIELD_RELATIONS:
            text = fields[field_name]
            if not text.strip():
                continue
            node_id = f"{card.id}.{suffix}"
            self.register(node_id, concept, label=text)
            asserted.append(self.assert_triple(node_id, relation, card.id))
        asserted.append(self.assert_triple(card.team, "Create", card.id))
        asserted.append(self.assert_triple(card.id, "Use", card.method))
        for idea_id in sorted(card.source_ideas):
            asserted.append(self.assert_triple(idea_id, "Form", card.id))
        return tuple(asserted)

    def register_vocabulary(self, card_id: str, tokens) -> int:
        """Instantiate the vocabulary concept for each distinct token of a
        card. No relation of the schema takes Vocabulary as a domain or
        range, so tokens become registered instances without triples."""
        count = 0
        for token in sorted(set(tokens)):
            node_id = f"{card_id}.voc.{token}"
            if node_id not in self.registry:
                self.register(node_id, "Vocabulary", label=token)
                count += 1
        return count


# --- competency questions ----------------------------------------------------


@dataclass(frozen=True)
class CompetencyQuestion:
    """A query the ontology must be able to answer, used as a schema check."""

    text: str
    relation: str
    domain: str
    range: str


COMPETENCY_QUESTIONS: tuple[CompetencyQuestion, ...] = (
    CompetencyQuestion("Which activities did a solver participant select?", "Select", "SolverParticipant", "Activity"),
    CompetencyQuestion("Which role does an actor play?", "Plays", "Actor", "Role"),
    CompetencyQuestion("Which actors are part of a team?", "IsPartOf", "Actor", "Team"),
    CompetencyQuestion("Which idea cards did a team create?", "Create", "Team", "IdeaCard"),
    CompetencyQuestion("Which ideas form an idea card?", "Form", "Idea", "IdeaCard"),
    CompetencyQuestion("Which creative method does an idea card use?", "Use", "IdeaCard", "CCM"),
    CompetencyQuestion("Which sites are assigned to the event?", "IsAssignedTo", "Site", "Event"),
    CompetencyQuestion("Which industry is assigned to a team?", "IsAssignedTo", "Industry", "Team"),
    CompetencyQuestion("Who receives the possible solutions?", "Receive", "IndustrialManager", "PossibleSolutions"),
    CompetencyQuestion("Which possible solutions does a team present?", "Present", "Team", "PossibleSolutions"),
)


def schema_answers(question: CompetencyQuestion, schema: ConceptSchema | None = None) -> bool:
    """True iff the schema has a descriptor matching the question exactly."""
    schema = schema or builtin_schema()
    return any(
        d.domain == question.domain and d.range == question.range
        for d in schema.relations_named(question.relation)
    )


def check_competency(store: TripleStore) -> dict[str, frozenset[Triple]]:
    """Run every competency question against a populated store."""
    answers: dict[str, frozenset[Triple]] = {}
    for q in COMPETENCY_QUESTIONS:
        answers[q.text] = frozenset(
            t for t in store.query(relation=q.relation)
            if t.subject.concept == q.domain and t.object.concept == q.range
        )
    return answers

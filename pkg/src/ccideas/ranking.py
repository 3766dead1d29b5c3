"""Semantic measures used to nominate possible solutions.

Three measures rank the idea cards of one problem:

* width-density   - lexical variety: distinct / total content tokens;
* semantic distance - 1 - cosine similarity of term-frequency vectors
  (relevance = 1 - distance to the problem statement);
* comparative similarity - mean Jaccard overlap with the peer cards
  (novelty = 1 - similarity).

The concrete formulas are engine choices behind this module's surface;
each takes token profiles, so alternative measures can be swapped in
without touching the callers. Everything here is a pure function over
immutable profiles: no shared state, trivially parallel across cards.

Tokenization is deterministic and dependency-free: lowercase, strip
punctuation, classify closed-class words from built-in lists and the
rest by suffix, defaulting to noun. No stemming or lemmatization.
"""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass, field

from .errors import EngineError
from .model import CONTENT_CATEGORIES, IdeaCard, PossibleSolution, VocabularyCategory

_WORD_RE = re.compile(r"[^\W_]+", re.UNICODE)

ARTICLES = frozenset("a an the".split())
PRONOUNS = frozenset(
    "i you he she it we they me him her us them my your his its our their "
    "mine yours ours theirs this that these those who whom which what "
    "somebody someone anything everything nothing".split()
)
PREPOSITIONS = frozenset(
    "of in on at by for with about against between into through during "
    "before after above below to from up down under over off near inside "
    "outside without within along across behind beyond".split()
)
CONJUNCTIONS = frozenset(
    "and but or nor so yet because although while if when than as unless "
    "since whereas".split()
)
INTERJECTIONS = frozenset("oh ah wow hey ouch oops hi hello alas hurray".split())

_CLOSED_CLASS = {
    **{w: VocabularyCategory.ARTICLE for w in ARTICLES},
    **{w: VocabularyCategory.PRONOUN for w in PRONOUNS},
    **{w: VocabularyCategory.PREPOSITION for w in PREPOSITIONS},
    **{w: VocabularyCategory.CONJUNCTION for w in CONJUNCTIONS},
    **{w: VocabularyCategory.INTERJECTION for w in INTERJECTIONS},
}

_ADVERB_SUFFIXES = ("ly",)
_VERB_SUFFIXES = ("ing", "ed", "ize", "ise", "ify")
_ADJECTIVE_SUFFIXES = ("ous", "ful", "ive", "able", "ible", "ic", "ish", "less")


class WeightError(EngineError):
    pass


def categorize(token: str) -> VocabularyCategory:
    """Deterministic part-of-speech guess: closed-class lists first, then
    suffix heuristics, defaulting to noun."""
    closed = _CLOSED_CLASS.get(token)
    if closed is not None:
        return closed
    for suffixes, category in (
        (_ADVERB_SUFFIXES, VocabularyCategory.ADVERB),
        (_VERB_SUFFIXES, VocabularyCategory.VERB),
        (_ADJECTIVE_SUFFIXES, VocabularyCategory.ADJECTIVE),
    ):
        for suffix in suffixes:
            if len(token) >= len(suffix) + 2 and token.endswith(suffix):
                return category
    return VocabularyCategory.NOUN


@dataclass(frozen=True)
class TokenProfile:
    """Normalized token multiset of a card or problem statement."""

    tokens: tuple[str, ...]
    categories: dict[str, VocabularyCategory] = field(hash=False, default_factory=dict)
    card_id: str = ""

    @property
    def counts(self) -> Counter:
        return Counter(self.tokens)

    @property
    def content_tokens(self) -> tuple[str, ...]:
        return tuple(t for t in self.tokens if self.categories[t] in CONTENT_CATEGORIES)

    @property
    def content_counts(self) -> Counter:
        return Counter(self.content_tokens)

    @property
    def content_set(self) -> frozenset[str]:
        return frozenset(self.content_tokens)


def tokenize(text: str, card_id: str = "") -> TokenProfile:
    """Lowercase, strip punctuation, classify every token."""
    tokens = tuple(_WORD_RE.findall(text.lower()))
    categories = {t: categorize(t) for t in set(tokens)}
    return TokenProfile(tokens=tokens, categories=categories, card_id=card_id)


#: Title tokens count double: titles summarize the idea.
TITLE_WEIGHT = 2


def profile_card(card: IdeaCard, title_weight: int = TITLE_WEIGHT) -> TokenProfile:
    """Profile a card from all six text fields, title repeated ``title_weight`` times."""
    parts = [card.title] * max(1, title_weight)
    parts += [card.description, card.scenery, card.priority_client, card.advantage, card.risk]
    return tokenize(" ".join(p for p in parts if p), card_id=card.id)


def width_density(profile: TokenProfile) -> float:
    """Distinct content tokens over total content tokens; 0 when empty."""
    content = profile.content_tokens
    if not content:
        return 0.0
    return len(set(content)) / len(content)


def semantic_distance(a: TokenProfile, b: TokenProfile) -> float:
    """1 - cosine similarity of content term-frequency vectors.

    Two empty profiles are identical (0); an empty profile is maximally
    distant from a non-empty one (1).
    """
    ca, cb = a.content_counts, b.content_counts
    if ca == cb:
        return 0.0
    if not ca or not cb:
        return 1.0
    dot = sum(count * cb[token] for token, count in ca.items())
    norm = math.sqrt(sum(c * c for c in ca.values())) * math.sqrt(sum(c * c for c in cb.values()))
    return min(1.0, max(0.0, 1.0 - dot / norm))


def jaccard(a: frozenset[str], b: frozenset[str]) -> float:
    """Set overlap; two empty sets are identical (1)."""
    if not a and not b:
        return 1.0
    union = a | b
    return len(a & b) / len(union)


def comparative_similarity(profile: TokenProfile, peers) -> float:
    """Mean Jaccard similarity between the card's distinct content tokens
    and each peer's; 0 when there are no peers."""
    peers = list(peers)
    if not peers:
        return 0.0
    mine = profile.content_set
    return sum(jaccard(mine, p.content_set) for p in peers) / len(peers)


@dataclass(frozen=True)
class RankingWeights:
    density: float = 1 / 3
    relevance: float = 1 / 3
    novelty: float = 1 / 3
    evaluation: float = 0.0

    def validate(self) -> None:
        values = (self.density, self.relevance, self.novelty, self.evaluation)
        if any(w < 0 for w in values):
            raise WeightError(f"weights must be non-negative, got {values}")
        total = sum(values)
        if abs(total - 1.0) > 1e-9:
            raise WeightError(f"weights must sum to 1, got {total}")

    def normalized(self) -> RankingWeights:
        values = (self.density, self.relevance, self.novelty, self.evaluation)
        total = sum(values)
        if total <= 0 or any(w < 0 for w in values):
            raise WeightError(f"weights cannot be normalized: {values}")
        return RankingWeights(*(w / total for w in values))


@dataclass(frozen=True)
class ScoreVector:
    width_density: float
    relevance: float
    novelty: float
    evaluation: float
    combined: float


def score_cards(
    cards: list[IdeaCard],
    problem_statement: str,
    weights: RankingWeights | None = None,
    evaluations: dict[str, list[int]] | None = None,
    title_weight: int = TITLE_WEIGHT,
) -> list[tuple[IdeaCard, ScoreVector]]:
    """Score one problem's cards and sort by combined score.

    relevance = 1 - distance(card, problem); novelty = 1 - mean Jaccard
    against the peers; evaluation = mean 0..10 partner score / 10.
    Ties break on ascending card id so the ranking is total.
    """
    weights = weights or RankingWeights()
    weights.validate()
    evaluations = evaluations or {}

    problem_profile = tokenize(problem_statement)
    profiles = {card.id: profile_card(card, title_weight) for card in cards}

    scored: list[tuple[IdeaCard, ScoreVector]] = []
    for card in cards:
        profile = profiles[card.id]
        peers = [profiles[c.id] for c in cards if c.id != card.id]
        density = width_density(profile)
        relevance = 1.0 - semantic_distance(profile, problem_profile)
        novelty = 1.0 - comparative_similarity(profile, peers)
        marks = evaluations.get(card.id, [])
        evaluation = (sum(marks) / len(marks)) / 10.0 if marks else 0.0
        combined = (
            weights.density * density
            + weights.relevance * relevance
            + weights.novelty * novelty
            + weights.evaluation * evaluation
        )
        scored.append((card, ScoreVector(density, relevance, novelty, evaluation, combined)))

    scored.sort(key=lambda pair: (-pair[1].combined, pair[0].id))
    return scored


def select_possible_solutions(
    scored: list[tuple[IdeaCard, ScoreVector]], k: int = 2
) -> list[PossibleSolution]:
    """Top-k nominated cards with gap-free ranks 1..k (clamped to the input)."""
    return [
        PossibleSolution(card=card.id, combined_score=vector.combined, rank=i + 1)
        for i, (card, vector) in enumerate(scored[:k])
    ]

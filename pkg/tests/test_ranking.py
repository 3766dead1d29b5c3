from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ccideas.model import IdeaCard, VocabularyCategory
from ccideas.ranking import (
    RankingWeights,
    WeightError,
    categorize,
    comparative_similarity,
    jaccard,
    profile_card,
    score_cards,
    select_possible_solutions,
    semantic_distance,
    tokenize,
    width_density,
)
from naive_ranking import naive_score_cards

UNIVERSE = ["solar", "panel", "roof", "water", "filter", "pump", "garden",
            "bike", "sensor", "wind"]


def card(card_id: str, title: str, description: str = "", **fields) -> IdeaCard:
    return IdeaCard(
        id=card_id, team=fields.pop("team", "t1"), method="ccm_1",
        source_ideas=frozenset({"i1"}),
        title=title, description=description, **fields,
    )


def profile_of(words: list[str]):
    return tokenize(" ".join(words))


tokens_strategy = st.lists(st.sampled_from(UNIVERSE), min_size=0, max_size=12)


class TestTokenize:
    def test_closed_class_words_filtered_from_content(self):
        profile = tokenize("The solar panel on the roof")
        assert set(profile.content_tokens) == {"solar", "panel", "roof"}
        assert profile.categories["the"] is VocabularyCategory.ARTICLE
        assert profile.categories["on"] is VocabularyCategory.PREPOSITION

    def test_empty_text_empty_profile(self):
        profile = tokenize("")
        assert profile.tokens == ()
        assert width_density(profile) == 0.0

    def test_case_and_punctuation_normalization(self):
        profile = tokenize("Roof, roof!")
        assert profile.counts == {"roof": 2}

    def test_suffix_heuristics(self):
        assert categorize("quickly") is VocabularyCategory.ADVERB
        assert categorize("recycling") is VocabularyCategory.VERB
        assert categorize("durable") is VocabularyCategory.ADJECTIVE
        assert categorize("roof") is VocabularyCategory.NOUN

    def test_every_token_categorized(self):
        profile = tokenize("a durable solar roof for recycling quickly")
        assert set(profile.categories) == set(profile.tokens)

    def test_title_weighted_twice_in_card_profile(self):
        c = card("c1", title="solar roof", description="garden pump")
        profile = profile_card(c)
        assert profile.counts["solar"] == 2
        assert profile.counts["garden"] == 1


class TestWidthDensity:
    def test_hand_counted_example(self):
        assert width_density(profile_of(["water", "filter", "water", "pump"])) == 0.75

    def test_single_token(self):
        assert width_density(profile_of(["solar"])) == 1.0

    def test_empty_content_degenerate_zero(self):
        assert width_density(profile_of([])) == 0.0
        assert width_density(tokenize("the of and")) == 0.0


class TestSemanticDistance:
    def test_identical_profiles_distance_zero(self):
        p = profile_of(["solar", "roof"])
        assert semantic_distance(p, p) == 0.0

    def test_disjoint_vocabularies_distance_one(self):
        assert semantic_distance(profile_of(["solar"]), profile_of(["water"])) == 1.0

    def test_half_overlap(self):
        a = profile_of(["solar", "roof"])
        b = profile_of(["solar", "garden"])
        assert semantic_distance(a, b) == pytest.approx(0.5)

    def test_empty_versus_nonempty(self):
        assert semantic_distance(profile_of([]), profile_of(["solar"])) == 1.0
        assert semantic_distance(profile_of([]), profile_of([])) == 0.0


class TestComparativeSimilarity:
    def test_hand_enumerated_jaccard(self):
        mine = profile_of(["solar", "panel", "roof"])
        peer = profile_of(["solar", "roof", "garden"])
        assert comparative_similarity(mine, [peer]) == pytest.approx(0.5)

    def test_no_peers_zero(self):
        assert comparative_similarity(profile_of(["solar"]), []) == 0.0

    def test_identical_single_peer(self):
        p = profile_of(["solar", "roof"])
        assert comparative_similarity(p, [profile_of(["solar", "roof"])]) == 1.0


class TestProperties:
    @given(tokens_strategy, tokens_strategy)
    @settings(max_examples=300)
    def test_distance_symmetric_and_in_range(self, a, b):
        pa, pb = profile_of(a), profile_of(b)
        d_ab = semantic_distance(pa, pb)
        d_ba = semantic_distance(pb, pa)
        assert d_ab == pytest.approx(d_ba)
        assert 0.0 <= d_ab <= 1.0

    @given(tokens_strategy)
    @settings(max_examples=200)
    def test_identity_properties(self, a):
        p = profile_of(a)
        assert semantic_distance(p, p) == pytest.approx(0.0)
        assert jaccard(p.content_set, p.content_set) == 1.0
        assert 0.0 <= width_density(p) <= 1.0

    @given(tokens_strategy, st.lists(tokens_strategy, max_size=4))
    @settings(max_examples=200)
    def test_similarity_in_range(self, a, peers):
        value = comparative_similarity(profile_of(a), [profile_of(p) for p in peers])
        assert 0.0 <= value <= 1.0


class TestScoreCards:
    def test_identical_cards_tie_broken_by_id(self):
        cards = [card("c2", "solar roof", "water pump"),
                 card("c1", "solar roof", "water pump")]
        weights = RankingWeights(0.25, 0.25, 0.25, 0.25)
        scored = score_cards(cards, "solar problem", weights)
        assert [c.id for c, _ in scored] == ["c1", "c2"]
        assert scored[0][1].combined == pytest.approx(scored[1][1].combined)

    def test_density_only_weighting_matches_density_order(self):
        cards = [
            card("c1", "solar solar solar"),              # low density
            card("c2", "solar roof pump"),                # high density
            card("c3", "water water pump"),               # middle
        ]
        scored = score_cards(cards, "anything", RankingWeights(1, 0, 0, 0))
        densities = [v.width_density for _, v in scored]
        assert densities == sorted(densities, reverse=True)
        assert [c.id for c, _ in scored][0] == "c2"

    def test_weights_must_sum_to_one(self):
        with pytest.raises(WeightError):
            score_cards([card("c1", "t")], "p", RankingWeights(2, 0, 0, 0))
        with pytest.raises(WeightError):
            score_cards([card("c1", "t")], "p", RankingWeights(-0.5, 0.5, 0.5, 0.5))

    def test_evaluation_component(self):
        cards = [card("c1", "solar"), card("c2", "solar")]
        scored = score_cards(cards, "solar", RankingWeights(0, 0, 0, 1),
                             evaluations={"c1": [10, 8], "c2": [2]})
        by_id = {c.id: v for c, v in scored}
        assert by_id["c1"].evaluation == pytest.approx(0.9)
        assert by_id["c2"].evaluation == pytest.approx(0.2)
        assert [c.id for c, _ in scored] == ["c1", "c2"]

    def test_shuffling_input_never_changes_ranking(self):
        rng = random.Random(11)
        cards = [card(f"c{i}", " ".join(rng.choice(UNIVERSE) for _ in range(4)),
                      " ".join(rng.choice(UNIVERSE) for _ in range(6)))
                 for i in range(6)]
        weights = RankingWeights(0.3, 0.3, 0.4, 0)
        baseline = [c.id for c, _ in score_cards(cards, "solar water", weights)]
        for _ in range(5):
            shuffled = cards[:]
            rng.shuffle(shuffled)
            assert [c.id for c, _ in score_cards(shuffled, "solar water", weights)] == baseline

    def test_token_duplication_stable_without_density(self):
        # cosine (TF) and Jaccard (sets) ignore uniform duplication
        cards = [card("c1", "solar roof", "water"), card("c2", "garden pump", "wind")]
        doubled = [card(c.id, f"{c.title} {c.title}", f"{c.description} {c.description}")
                   for c in cards]
        weights = RankingWeights(0, 0.5, 0.5, 0)
        order_a = [c.id for c, _ in score_cards(cards, "solar wind", weights)]
        order_b = [c.id for c, _ in score_cards(doubled, "solar wind", weights)]
        assert order_a == order_b

    def test_matches_naive_recomputation(self):
        rng = random.Random(23)
        for _ in range(40):
            n = rng.randint(1, 5)
            cards = [
                card(f"c{i}", " ".join(rng.choice(UNIVERSE) for _ in range(rng.randint(0, 3))),
                     " ".join(rng.choice(UNIVERSE) for _ in range(rng.randint(0, 3))))
                for i in range(n)
            ]
            problem = " ".join(rng.choice(UNIVERSE) for _ in range(4))
            evaluations = {c.id: [rng.randint(0, 10)] for c in cards if rng.random() < 0.5}
            weights = RankingWeights(0.25, 0.25, 0.25, 0.25)
            scored = score_cards(cards, problem, weights, evaluations)
            expected = naive_score_cards(cards, problem, weights, evaluations)
            assert [c.id for c, _ in scored] == [row[0] for row in expected]
            for (c, v), row in zip(scored, expected):
                assert v.combined == pytest.approx(row[5], abs=1e-9)


class TestSelectPossibleSolutions:
    def scored(self, n):
        cards = [card(f"c{i}", f"{UNIVERSE[i]} roof", "water pump") for i in range(n)]
        return score_cards(cards, "solar water", RankingWeights(0.4, 0.3, 0.3, 0))

    def test_top_two_of_six(self):
        scored = self.scored(6)
        solutions = select_possible_solutions(scored, k=2)
        assert [s.rank for s in solutions] == [1, 2]
        assert [s.card for s in solutions] == [c.id for c, _ in scored[:2]]

    def test_k_larger_than_input_clamps(self):
        solutions = select_possible_solutions(self.scored(3), k=10)
        assert len(solutions) == 3
        assert [s.rank for s in solutions] == [1, 2, 3]

    def test_scores_descend_with_rank(self):
        solutions = select_possible_solutions(self.scored(5), k=5)
        values = [s.combined_score for s in solutions]
        assert values == sorted(values, reverse=True)


class TestWeights:
    def test_normalize(self):
        weights = RankingWeights(2, 0, 0, 0).normalized()
        assert weights.density == pytest.approx(1.0)
        weights.validate()

    def test_normalize_rejects_all_zero(self):
        with pytest.raises(WeightError):
            RankingWeights(0, 0, 0, 0).normalized()

    def test_default_weights_valid(self):
        RankingWeights().validate()

"""Additive decomposition identities for rating explanations."""

from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from susrate.explain import (
    AllNeutral,
    explain,
    explain_by_preference,
    explain_by_preference_tag,
    explain_by_product_tag,
    product_tag_shares,
)
from susrate.ontology import (
    AssociationOverride,
    Ontology,
    Preference,
    PreferenceTag,
    PrimitiveConcept,
    Product,
    ProductTag,
)
from susrate.rating import (
    STRATEGIES,
    RatingConfig,
    normalized_aggregated_association,
    rate,
)

from conftest import random_ontology, random_scores

CFG = RatingConfig()


def single_chain_ontology(score: float = 1.0):
    """One product tag, one preference tag, one preference."""
    return Ontology(
        concepts=[PrimitiveConcept("x"), PrimitiveConcept("s")],
        product_tags=[ProductTag("z", "z", frozenset({"x"}))],
        preference_tags=[PreferenceTag("w", "w", frozenset({"s"}))],
        preferences=[Preference("P.1", "toy", "health", frozenset({"w"}))],
        products=[Product("p", "p", tag_ids=frozenset({"z"}))],
        overrides=[AssociationOverride("z", "w", score)],
    )


class TestPreferenceLevel:
    def test_single_full_support(self):
        o = single_chain_ontology(1.0)
        contributions = explain_by_preference(o, o.products["p"], {"P.1": 10}, CFG)
        assert contributions == {"P.1": pytest.approx(5.0)}
        rating = rate(o, o.products["p"], {"P.1": 10}, CFG)
        assert CFG.beta + sum(contributions.values()) == pytest.approx(rating.scaled)

    def test_neutral_preference_contributes_zero(self, seed):
        contributions = explain_by_preference(
            seed, seed.products["p.apple"], {"E.1": 8.0, "Q.2": 5.0}, CFG
        )
        assert contributions["Q.2"] == 0.0

    def test_all_neutral_raises(self, seed):
        with pytest.raises(AllNeutral):
            explain_by_preference(seed, seed.products["p.apple"], {}, CFG)

    def test_identity_on_seed_users(self, seed):
        rng = random.Random(11)
        for _ in range(25):
            scores = random_scores(rng, seed)
            if not any(v != 5.0 for v in scores.values()):
                continue
            for product in seed.products.values():
                rating = rate(seed, product, scores, CFG)
                if rating.strict_violation is not None:
                    continue
                contributions = explain_by_preference(seed, product, scores, CFG)
                assert CFG.beta + sum(contributions.values()) == pytest.approx(
                    rating.scaled, abs=1e-9
                )


class TestPreferenceTagLevel:
    def test_single_tag_preference_collapses(self, seed):
        scores = {"H.12": 9.0}
        by_pref = explain_by_preference(seed, seed.products["p.tofu"], scores, CFG)
        by_tag = explain_by_preference_tag(seed, seed.products["p.tofu"], scores, CFG)
        assert by_tag["vegan-diet"] == pytest.approx(by_pref["H.12"], abs=1e-12)

    def test_two_tag_preference_splits_by_value(self):
        o = Ontology(
            concepts=[PrimitiveConcept(c) for c in "ab"],
            product_tags=[ProductTag("z", "z", frozenset({"a"}))],
            preference_tags=[
                PreferenceTag("w1", "w1", frozenset({"a"})),
                PreferenceTag("w2", "w2", frozenset({"b"})),
            ],
            preferences=[Preference("P.1", "toy", "health", frozenset({"w1", "w2"}))],
            products=[Product("p", "p", tag_ids=frozenset({"z"}))],
        )
        contributions = explain_by_preference_tag(o, o.products["p"], {"P.1": 10}, CFG)
        # normalized values are 1 and 0; the supported aspect carries all of it
        assert contributions["w1"] == pytest.approx(2.5)
        assert contributions["w2"] == 0.0

    def test_single_active_preference_attribution(self, seed):
        # With one active preference, the tag-level mass is exactly that
        # preference's contribution.
        scores = {"E.1": 9.5}
        product = seed.products["p.gf-bread"]
        by_pref = explain_by_preference(seed, product, scores, CFG)
        by_tag = explain_by_preference_tag(seed, product, scores, CFG)
        linked = seed.preferences["E.1"].tag_ids
        assert sum(by_tag[w] for w in linked) == pytest.approx(
            by_pref["E.1"], abs=1e-9
        )
        assert sum(v for w, v in by_tag.items() if w not in linked) == 0.0


class TestProductTagLevel:
    def test_chain_collapse(self):
        o = single_chain_ontology(0.8)
        scores = {"P.1": 10}
        by_pref = explain_by_preference(o, o.products["p"], scores, CFG)
        by_product_tag = explain_by_product_tag(o, o.products["p"], scores, CFG)
        assert by_product_tag["z"] == pytest.approx(by_pref["P.1"], abs=1e-12)

    def test_clipped_mass_split_proportionally(self):
        o = Ontology(
            concepts=[PrimitiveConcept("x"), PrimitiveConcept("s")],
            product_tags=[
                ProductTag("z1", "z1", frozenset({"x"})),
                ProductTag("z2", "z2", frozenset({"x"})),
            ],
            preference_tags=[PreferenceTag("w", "w", frozenset({"s"}))],
            preferences=[Preference("P.1", "toy", "health", frozenset({"w"}))],
            products=[Product("p", "p", tag_ids=frozenset({"z1", "z2"}))],
            overrides=[
                AssociationOverride("z1", "w", 0.6),
                AssociationOverride("z2", "w", 0.8),
            ],
        )
        shares = product_tag_shares(o, o.products["p"], CFG)["w"]
        clipped = normalized_aggregated_association(
            o, o.products["p"], o.preference_tags["w"], CFG
        )
        assert clipped == pytest.approx(1.0)
        assert shares["z1"] == pytest.approx(0.6 / 1.4, abs=1e-12)
        assert shares["z2"] == pytest.approx(0.8 / 1.4, abs=1e-12)
        assert sum(shares.values()) == pytest.approx(clipped, abs=1e-12)

    def test_zero_aggregate_zero_shares(self):
        o = Ontology(
            concepts=[PrimitiveConcept("x"), PrimitiveConcept("s")],
            product_tags=[
                ProductTag("z1", "z1", frozenset({"x"})),
                ProductTag("z2", "z2", frozenset({"x"})),
            ],
            preference_tags=[PreferenceTag("w", "w", frozenset({"s"}))],
            preferences=[Preference("P.1", "toy", "health", frozenset({"w"}))],
            products=[Product("p", "p", tag_ids=frozenset({"z1", "z2"}))],
            overrides=[
                AssociationOverride("z1", "w", 0.5),
                AssociationOverride("z2", "w", -0.5),
            ],
        )
        shares = product_tag_shares(o, o.products["p"], CFG)["w"]
        assert shares == {"z1": 0.0, "z2": 0.0}

    def test_sign_coherence(self, seed):
        # Fair-trade chocolate with a fair-trade-supporting user: the
        # fair-trade label tag must not contribute negatively.
        scores = {"S.6": 10.0, "S.5": 8.0, "S.4": 7.0}
        contributions = explain_by_product_tag(
            seed, seed.products["p.chocolate"], scores, CFG
        )
        assert contributions["fair-trade-label"] >= 0


class TestExplainBundle:
    def test_neutral_user_gets_baseline_only(self, seed):
        explanation = explain(seed, seed.products["p.apple"], {}, CFG)
        assert explanation.scaled_rating == CFG.beta
        assert explanation.preference_contributions == {}
        assert explanation.preference_tag_contributions == {}
        assert explanation.product_tag_contributions == {}
        assert explanation.strict_violation is None

    def test_strict_violation_skips_decomposition(self, seed):
        explanation = explain(seed, seed.products["p.cheese"], {"H.12": 10.0}, CFG)
        assert explanation.strict_violation == "H.12"
        assert explanation.scaled_rating == 0.0
        assert explanation.preference_contributions == {}

    @given(st.integers(0, 2**32 - 1))
    @settings(max_examples=80, deadline=None)
    def test_identities_hold_at_all_levels(self, seed_int):
        rng = random.Random(seed_int)
        o = random_ontology(rng, with_overrides=rng.random() < 0.4)
        cfg = RatingConfig(reference_strategy=rng.choice(STRATEGIES))
        scores = random_scores(rng, o)
        for product in o.products.values():
            explanation = explain(o, product, scores, cfg)
            if explanation.strict_violation is not None:
                continue
            rating = rate(o, product, scores, cfg)
            for contributions in (
                explanation.preference_contributions,
                explanation.preference_tag_contributions,
                explanation.product_tag_contributions,
            ):
                if not contributions and not any(
                    scores.get(pid, 5.0) != 5.0 for pid in o.preferences
                ):
                    continue  # neutral user: bare baseline
                assert cfg.beta + sum(contributions.values()) == pytest.approx(
                    rating.scaled, abs=1e-9
                )

"""Shared fixtures: the built-in knowledge base and random generators.

The random-ontology generator is intentionally unconstrained (overlapping
tags, oppose-only preference tags, products with no tags) so property
suites hit the awkward corners, not just the happy path.
"""

from __future__ import annotations

import random

import pytest

from susrate.ontology import (
    AssociationOverride,
    Ontology,
    Preference,
    PreferenceTag,
    PrimitiveConcept,
    Product,
    ProductTag,
)
from susrate.ontology import CATEGORIES
from susrate.seed import seed_ontology, seed_rules


@pytest.fixture(scope="session")
def seed():
    return seed_ontology()


@pytest.fixture(scope="session")
def rules():
    return seed_rules()


def random_ontology(
    rng: random.Random,
    *,
    max_concepts: int = 12,
    max_tags: int = 8,
    max_pref_tags: int = 5,
    max_preferences: int = 4,
    max_products: int = 4,
    with_overrides: bool = False,
) -> Ontology:
    n_concepts = rng.randint(2, max_concepts)
    concept_ids = [f"c{i}" for i in range(n_concepts)]
    concepts = [PrimitiveConcept(cid) for cid in concept_ids]

    n_tags = rng.randint(1, max_tags)
    tags = []
    for i in range(n_tags):
        size = rng.randint(1, n_concepts)
        tags.append(
            ProductTag(f"z{i}", f"tag {i}", frozenset(rng.sample(concept_ids, size)))
        )

    n_pref_tags = rng.randint(1, max_pref_tags)
    pref_tags = []
    for i in range(n_pref_tags):
        pool = list(concept_ids)
        rng.shuffle(pool)
        support_size = rng.randint(0, len(pool))
        support = frozenset(pool[:support_size])
        remaining = pool[support_size:]
        oppose_size = rng.randint(0 if support else 1, len(remaining))
        oppose = frozenset(remaining[:oppose_size])
        if not support and not oppose:
            support = frozenset(pool[:1])
        pref_tags.append(PreferenceTag(f"w{i}", f"aspect {i}", support, oppose))

    n_preferences = rng.randint(1, max_preferences)
    preferences = []
    for i in range(n_preferences):
        k = rng.randint(1, n_pref_tags)
        chosen = frozenset(t.id for t in rng.sample(pref_tags, k))
        preferences.append(
            Preference(
                id=f"P.{i}",
                statement=f"preference {i}",
                category=rng.choice(CATEGORIES),
                tag_ids=chosen,
                strict=rng.random() < 0.2,
            )
        )

    n_products = rng.randint(1, max_products)
    products = []
    for i in range(n_products):
        k = rng.randint(0, n_tags)
        chosen = frozenset(t.id for t in rng.sample(tags, k))
        products.append(Product(id=f"p{i}", name=f"product {i}", tag_ids=chosen))

    overrides = []
    if with_overrides:
        for tag in tags:
            for pref_tag in pref_tags:
                if rng.random() < 0.15:
                    overrides.append(
                        AssociationOverride(
                            tag.id,
                            pref_tag.id,
                            round(rng.uniform(-1, 1), 3),
                            rng.choice(("expert", "crowd", "ml")),
                        )
                    )

    return Ontology(concepts, tags, pref_tags, preferences, products, overrides)


def random_scores(
    rng: random.Random, ontology: Ontology, *, score_max: float = 10.0
) -> dict[str, float]:
    out = {}
    for pid in ontology.preferences:
        roll = rng.random()
        if roll < 0.2:
            continue  # leave neutral by omission
        if roll < 0.3:
            out[pid] = rng.choice((0.0, score_max))
        else:
            out[pid] = round(rng.uniform(0, score_max), 2)
    return out

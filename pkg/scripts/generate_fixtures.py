"""Regenerate the shared client/server conformance fixtures.

The browser client re-implements the rating and explanation math, so
both implementations are pinned to one fixture file: server-computed
indices and tag details as inputs, server-computed ratings and
contribution maps as expected outputs.

Usage: python scripts/generate_fixtures.py
"""

from __future__ import annotations

import json
import random
from pathlib import Path

from susrate.explain import explain
from susrate.rating import RatingConfig, RatingEngine, rate
from susrate.seed import seed_ontology, seed_rules
from susrate.service import tag_detail_payload
from susrate.store import ontology_version

OUT = Path(__file__).resolve().parent.parent / "frontend" / "fixtures"


def build_users(ontology) -> dict[str, dict[str, float]]:
    rng = random.Random(20260810)
    users: dict[str, dict[str, float]] = {
        "neutral": {},
        "strict-vegan": {"H.12": 10.0, "E.1": 8.0, "Q.2": 6.0},
        "all-opposed": {pid: 0.0 for pid in ontology.preferences},
        "all-supporting": {pid: 10.0 for pid in ontology.preferences},
        "eco-advocate": {"E.1": 9.0, "E.2": 10.0, "E.3": 8.5, "S.6": 9.0},
        "health-focused": {"H.5": 8.0, "H.6": 8.0, "H.7": 9.0, "H.12": 7.5},
    }
    for i in range(18):
        scores: dict[str, float] = {}
        for pid in ontology.preferences:
            roll = rng.random()
            if roll < 0.25:
                continue
            if roll < 0.35:
                scores[pid] = rng.choice((0.0, 10.0))
            else:
                scores[pid] = round(rng.uniform(0, 10), 2)
        users[f"user-{i:02d}"] = scores
    return users


def build_fixtures() -> dict:
    ontology = seed_ontology()
    cfg = RatingConfig()
    engine = RatingEngine(ontology, cfg)
    users = build_users(ontology)

    cases = []
    for user_id, scores in users.items():
        for product_id in engine.product_ids:
            product = ontology.products[product_id]
            rating = rate(ontology, product, scores, cfg)
            expected = {
                "raw": rating.raw,
                "scaled": rating.scaled,
                "strict_violation": rating.strict_violation,
            }
            explanation = explain(ontology, product, scores, cfg)
            if rating.strict_violation is None:
                expected["by_preference"] = explanation.preference_contributions
                expected["by_product_tag"] = explanation.product_tag_contributions
            cases.append(
                {
                    "user": user_id,
                    "product_id": product_id,
                    "scores": scores,
                    "expected": expected,
                }
            )

    return {
        "ontology_version": ontology_version(ontology, seed_rules()),
        "constants": {"s_mean": cfg.s_mean, "alpha": cfg.alpha, "beta": cfg.beta},
        "preferences": [
            {"id": p.id, "category": p.category, "strict": p.strict}
            for p in ontology.preferences.values()
        ],
        "products": {
            pid: {
                "name": ontology.products[pid].name,
                "category_id": ontology.products[pid].category_id,
                "indices": engine.indices(pid),
                "tag_detail": tag_detail_payload(engine, pid),
            }
            for pid in engine.product_ids
        },
        "cases": cases,
    }


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    path = OUT / "cross_impl_fixtures.json"
    path.write_text(
        json.dumps(build_fixtures(), indent=2, ensure_ascii=False) + "\n",
        encoding="utf-8",
    )
    fixtures = json.loads(path.read_text())
    print(f"wrote {path}: {len(fixtures['cases'])} cases")


if __name__ == "__main__":
    main()

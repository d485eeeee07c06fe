"""Exact additive decomposition of a product rating.

A scaled rating is the baseline beta plus a sum of contributions, and
that sum can be attributed at three granularities: per preference, per
preference tag, and per product tag.  Each decomposition reproduces the
rating exactly (up to float noise), which is what makes the drill-down
UI trustworthy rather than a post-hoc approximation.

Contributions are recomputed on demand; the hot rating path stays free
of bookkeeping.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional

from .ontology import Ontology, Product
from .rating import (
    THEORETICAL_UNREDUCED_CLIPPED,
    RatingConfig,
    RatingError,
    normalized_aggregated_association,
    preference_offsets,
    rate,
    sustainability_index,
)

IDENTITY_TOLERANCE = 1e-9


class AllNeutral(RatingError):
    """Every preference offset is zero; the rating is the constant beta."""

    def __init__(self) -> None:
        super().__init__("all preference offsets are zero")


@dataclass(frozen=True)
class RatingExplanation:
    """Rating with its three additive decompositions.

    For strict-violation ratings the floor is not a sum of parts, so the
    maps are empty and the violated preference is named instead.
    """

    product_id: str
    scaled_rating: float
    beta: float
    preference_contributions: dict[str, float] = field(default_factory=dict)
    preference_tag_contributions: dict[str, float] = field(default_factory=dict)
    product_tag_contributions: dict[str, float] = field(default_factory=dict)
    strict_violation: Optional[str] = None


def explain_by_preference(
    ontology: Ontology,
    product: Product,
    scores: Mapping[str, float],
    cfg: RatingConfig,
) -> dict[str, float]:
    """Per-preference share of the rating above/below the baseline."""
    offsets = preference_offsets(ontology, scores, cfg)
    denom = sum(abs(d) for d in offsets.values())
    if denom == 0:
        raise AllNeutral()
    out: dict[str, float] = {}
    for pid, preference in ontology.preferences.items():
        delta = offsets[pid]
        if delta == 0:
            out[pid] = 0.0
            continue
        index = sustainability_index(ontology, product, preference, cfg)
        out[pid] = cfg.alpha * index.value * delta / denom
    return out


def explain_by_preference_tag(
    ontology: Ontology,
    product: Product,
    scores: Mapping[str, float],
    cfg: RatingConfig,
) -> dict[str, float]:
    """Per-preference-tag share; a tag in several preferences earns from each."""
    offsets = preference_offsets(ontology, scores, cfg)
    denom = sum(abs(d) for d in offsets.values())
    if denom == 0:
        raise AllNeutral()
    out = {wid: 0.0 for wid in ontology.preference_tags}
    for pid, preference in ontology.preferences.items():
        delta = offsets[pid]
        if delta == 0:
            continue
        weight = delta / (len(preference.tag_ids) * denom)
        for wid in sorted(preference.tag_ids):
            value = normalized_aggregated_association(
                ontology, product, ontology.preference_tags[wid], cfg
            )
            out[wid] += cfg.alpha * value * weight
    return out


def product_tag_shares(
    ontology: Ontology, product: Product, cfg: RatingConfig
) -> dict[str, dict[str, float]]:
    """Per preference tag, each assigned product tag's slice of the
    normalized aggregated association.

    The slices are proportional to the tags' association scores, so they
    stay exact under clipping, reference saturation and clamping alike; a
    zero raw aggregate yields zero slices.
    """
    out: dict[str, dict[str, float]] = {}
    tag_ids = sorted(product.tag_ids)
    for wid, pref_tag in ontology.preference_tags.items():
        raw_aggregate = 0.0
        per_tag: dict[str, float] = {}
        for tid in tag_ids:
            score = ontology.association(ontology.product_tags[tid], pref_tag)
            per_tag[tid] = score
            raw_aggregate += score
        if raw_aggregate == 0:
            out[wid] = {tid: 0.0 for tid in tag_ids}
            continue
        normalized = normalized_aggregated_association(ontology, product, pref_tag, cfg)
        scale = normalized / raw_aggregate
        out[wid] = {tid: score * scale for tid, score in per_tag.items()}
    return out


def explain_by_product_tag(
    ontology: Ontology,
    product: Product,
    scores: Mapping[str, float],
    cfg: RatingConfig,
) -> dict[str, float]:
    """Per-product-tag share of the rating above/below the baseline."""
    offsets = preference_offsets(ontology, scores, cfg)
    denom = sum(abs(d) for d in offsets.values())
    if denom == 0:
        raise AllNeutral()
    shares = product_tag_shares(ontology, product, cfg)
    out = {tid: 0.0 for tid in sorted(product.tag_ids)}
    for pid, preference in ontology.preferences.items():
        delta = offsets[pid]
        if delta == 0:
            continue
        weight = delta / (len(preference.tag_ids) * denom)
        for wid in sorted(preference.tag_ids):
            for tid, slice_value in shares[wid].items():
                out[tid] += cfg.alpha * slice_value * weight
    return out


def explain(
    ontology: Ontology,
    product: Product,
    scores: Mapping[str, float],
    cfg: RatingConfig,
) -> RatingExplanation:
    """Bundle all three decompositions, checking the sum identities.

    A neutral user gets the bare-baseline explanation; a strict violation
    carries the violated preference and no decomposition.
    """
    rating = rate(ontology, product, scores, cfg)
    if rating.strict_violation is not None:
        return RatingExplanation(
            product_id=product.id,
            scaled_rating=rating.scaled,
            beta=cfg.beta,
            strict_violation=rating.strict_violation,
        )
    try:
        by_preference = explain_by_preference(ontology, product, scores, cfg)
        by_pref_tag = explain_by_preference_tag(ontology, product, scores, cfg)
        by_product_tag = explain_by_product_tag(ontology, product, scores, cfg)
    except AllNeutral:
        return RatingExplanation(
            product_id=product.id, scaled_rating=rating.scaled, beta=cfg.beta
        )
    for label, contributions in (
        ("preference", by_preference),
        ("preference tag", by_pref_tag),
        ("product tag", by_product_tag),
    ):
        reconstructed = cfg.beta + sum(contributions.values())
        if abs(reconstructed - rating.scaled) > IDENTITY_TOLERANCE:
            raise RatingError(
                f"{label} contributions sum to {reconstructed}, "
                f"rating is {rating.scaled}"
            )
    return RatingExplanation(
        product_id=product.id,
        scaled_rating=rating.scaled,
        beta=cfg.beta,
        preference_contributions=by_preference,
        preference_tag_contributions=by_pref_tag,
        product_tag_contributions=by_product_tag,
    )

"""Sustainability knowledge base and privacy-preserving product rating.

Set-theoretic association scores between product characteristics and
sustainability preferences are aggregated into user-independent
sustainability indices (servable over HTTP), while personalized ratings
and their explanations are computed locally from preference scores that
never leave the client.
"""

from .ontology import (
    AssociationOverride,
    Ontology,
    Preference,
    PreferenceTag,
    PrimitiveConcept,
    Product,
    ProductTag,
    additive_aggregated_association,
    apply_reduction_principle,
    association,
    computed_association,
    exact_aggregated_association,
    negative_association,
    overlap_error,
    positive_association,
    validate_ontology,
)
from .rating import (
    PreferenceScoreVector,
    ProductRating,
    RatingConfig,
    RatingEngine,
    SustainabilityIndex,
    clip,
    normalized_aggregated_association,
    product_representation,
    rank_products,
    rate,
    raw_rating,
    sustainability_index,
)
from .explain import RatingExplanation, explain
from .rules import AssignmentRule, AttributePredicate, assign_all, evaluate_rules
from .store import ingest_products, load_ontology, ontology_version, save_ontology

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"

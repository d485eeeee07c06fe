"""Sustainability indices and personalized product ratings.

The user-independent half (reference associations, normalized aggregated
associations, per-preference sustainability indices) is computed once per
ontology snapshot and cached by :class:`RatingEngine`.  The personalized
half (preference offsets, the offset-weighted rating) is a handful of
multiply-adds per product and is also what clients re-implement locally,
so the pure functions in this module double as the reference oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from .ontology import (
    Ontology,
    Preference,
    PreferenceTag,
    Product,
    additive_aggregated_association,
    apply_reduction_principle,
)

EXISTING_BEST = "existing_best"
THEORETICAL_REDUCED = "theoretical_reduced"
THEORETICAL_UNREDUCED_CLIPPED = "theoretical_unreduced_clipped"
STRATEGIES = (EXISTING_BEST, THEORETICAL_REDUCED, THEORETICAL_UNREDUCED_CLIPPED)


class RatingError(ValueError):
    pass


class OutOfRangeScore(RatingError):
    """A preference score falls outside [0, 2 * s_mean]."""

    def __init__(self, preference_id: str, score: float, bound: float) -> None:
        super().__init__(
            f"score {score} for preference {preference_id!r} outside [0, {bound}]"
        )
        self.preference_id = preference_id


class UnknownPreference(RatingError):
    def __init__(self, preference_id: str) -> None:
        super().__init__(f"unknown preference {preference_id!r}")
        self.preference_id = preference_id


class EmptyPreference(RatingError):
    def __init__(self, preference_id: str) -> None:
        super().__init__(f"preference {preference_id!r} has no preference tags")
        self.preference_id = preference_id


@dataclass(frozen=True)
class RatingConfig:
    """Scale parameters and reference-product strategy.

    Defaults give a [0, 10] display scale with 5 as the neutral midpoint
    and the clipped theoretical reference used in the field deployment.
    """

    s_mean: float = 5.0
    alpha: float = 5.0
    beta: float = 5.0
    tau: float = 1.0
    reference_strategy: str = THEORETICAL_UNREDUCED_CLIPPED
    strict_enforcement: bool = True

    def __post_init__(self) -> None:
        if self.alpha <= 0:
            raise RatingError("alpha must be positive")
        if self.tau <= 0:
            raise RatingError("tau must be positive")
        if self.s_mean <= 0:
            raise RatingError("s_mean must be positive")
        if self.reference_strategy not in STRATEGIES:
            raise RatingError(
                f"unknown reference strategy {self.reference_strategy!r}"
            )

    @property
    def score_max(self) -> float:
        return 2.0 * self.s_mean


@dataclass(frozen=True)
class PreferenceScoreVector:
    """Per-preference scores in [0, 2 * s_mean]; missing means neutral."""

    scores: Mapping[str, float]

    def __post_init__(self) -> None:
        object.__setattr__(self, "scores", dict(self.scores))


@dataclass(frozen=True)
class SustainabilityIndex:
    product_id: str
    preference_id: str
    value: float


@dataclass(frozen=True)
class ProductRating:
    product_id: str
    raw: float
    scaled: float
    strict_violation: Optional[str] = None


def clip(a: float, tau: float) -> float:
    """Clamp a into [-tau, tau]."""
    if a <= -tau:
        return -tau
    if a >= tau:
        return tau
    return a


def offset(score: float, cfg: RatingConfig) -> float:
    """Signed distance of a preference score from the neutral midpoint."""
    if not 0.0 <= score <= cfg.score_max:
        raise OutOfRangeScore("<score>", score, cfg.score_max)
    return score - cfg.s_mean


def reference_positive(
    ontology: Ontology,
    pref_tag: PreferenceTag,
    cfg: RatingConfig,
    *,
    reduced: Optional[Ontology] = None,
) -> Optional[float]:
    """Positive reference association, or None when nothing supports the tag.

    existing_best sums each real product's positively-scored tags and takes
    the maximum; the theoretical strategies sum every positively-scored tag
    in the (reduced or raw) ontology, the latter clipped at tau.
    """
    if cfg.reference_strategy == EXISTING_BEST:
        best = None
        for product in ontology.products.values():
            total = _signed_tag_sum(ontology, product.tag_ids, pref_tag, positive=True)
            if total > 0 and (best is None or total > best):
                best = total
        return best
    if cfg.reference_strategy == THEORETICAL_REDUCED:
        if reduced is None:
            reduced = apply_reduction_principle(ontology).ontology
        total = _signed_tag_sum(reduced, reduced.product_tags, pref_tag, positive=True)
        return total if total > 0 else None
    total = _signed_tag_sum(ontology, ontology.product_tags, pref_tag, positive=True)
    return clip(total, cfg.tau) if total > 0 else None


def reference_negative(
    ontology: Ontology,
    pref_tag: PreferenceTag,
    cfg: RatingConfig,
    *,
    reduced: Optional[Ontology] = None,
) -> Optional[float]:
    """Negative reference association (< 0), or None when nothing opposes."""
    if cfg.reference_strategy == EXISTING_BEST:
        worst = None
        for product in ontology.products.values():
            total = _signed_tag_sum(ontology, product.tag_ids, pref_tag, positive=False)
            if total < 0 and (worst is None or total < worst):
                worst = total
        return worst
    if cfg.reference_strategy == THEORETICAL_REDUCED:
        if reduced is None:
            reduced = apply_reduction_principle(ontology).ontology
        total = _signed_tag_sum(reduced, reduced.product_tags, pref_tag, positive=False)
        return total if total < 0 else None
    total = _signed_tag_sum(ontology, ontology.product_tags, pref_tag, positive=False)
    return clip(total, cfg.tau) if total < 0 else None


def _signed_tag_sum(
    ontology: Ontology,
    tag_ids: Iterable[str],
    pref_tag: PreferenceTag,
    *,
    positive: bool,
) -> float:
    total = 0.0
    for tag_id in sorted(tag_ids):
        score = ontology.association(ontology.product_tags[tag_id], pref_tag)
        if positive and score > 0:
            total += score
        elif not positive and score < 0:
            total += score
    return total


def normalized_aggregated_association(
    ontology: Ontology,
    product: Product,
    pref_tag: PreferenceTag,
    cfg: RatingConfig,
    *,
    references: Optional[tuple[Optional[float], Optional[float]]] = None,
    reduced: Optional[Ontology] = None,
    warnings: Optional[list[str]] = None,
) -> float:
    """Aggregated association scaled into [-1, 1] by the reference product.

    The sign of the (possibly clipped) aggregate is preserved.  When the
    needed reference is absent while the aggregate is non-zero (possible
    only with inconsistent overrides), the value saturates at +/-1 and a
    warning is recorded.
    """
    aggregate = additive_aggregated_association(ontology, product, pref_tag)
    if cfg.reference_strategy == THEORETICAL_UNREDUCED_CLIPPED:
        aggregate = clip(aggregate, cfg.tau)
    if aggregate == 0:
        return 0.0
    if references is None:
        references = (
            reference_positive(ontology, pref_tag, cfg, reduced=reduced),
            reference_negative(ontology, pref_tag, cfg, reduced=reduced),
        )
    ref_pos, ref_neg = references
    if aggregate > 0:
        if ref_pos is None:
            _warn(warnings, product.id, pref_tag.id, "positive")
            return 1.0
        value = aggregate / ref_pos
    else:
        if ref_neg is None:
            _warn(warnings, product.id, pref_tag.id, "negative")
            return -1.0
        value = aggregate / abs(ref_neg)
    return min(1.0, max(-1.0, value))


def _warn(warnings: Optional[list[str]], product_id: str, tag_id: str, side: str) -> None:
    if warnings is not None:
        warnings.append(
            f"product {product_id!r}, preference tag {tag_id!r}: non-zero "
            f"aggregate with no {side} reference; saturated"
        )


def sustainability_index(
    ontology: Ontology,
    product: Product,
    preference: Preference,
    cfg: RatingConfig,
    *,
    reduced: Optional[Ontology] = None,
) -> SustainabilityIndex:
    """Mean normalized aggregated association over the preference's tags."""
    if not preference.tag_ids:
        raise EmptyPreference(preference.id)
    total = 0.0
    for tag_id in sorted(preference.tag_ids):
        total += normalized_aggregated_association(
            ontology, product, ontology.preference_tags[tag_id], cfg, reduced=reduced
        )
    return SustainabilityIndex(product.id, preference.id, total / len(preference.tag_ids))


def product_representation(
    ontology: Ontology,
    product: Product,
    cfg: RatingConfig,
    *,
    reduced: Optional[Ontology] = None,
) -> list[SustainabilityIndex]:
    """Index vector over all preferences, ordered by preference id."""
    return [
        sustainability_index(ontology, product, preference, cfg, reduced=reduced)
        for preference in ontology.preferences.values()
    ]


def representation_mean(indices: Sequence[SustainabilityIndex]) -> float:
    """Non-personalized single-number estimate: mean of the index vector."""
    if not indices:
        return 0.0
    return sum(i.value for i in indices) / len(indices)


def preference_offsets(
    ontology: Ontology, scores: Mapping[str, float], cfg: RatingConfig
) -> dict[str, float]:
    """Offsets per preference id; unknown ids or out-of-range scores raise."""
    for pid, score in scores.items():
        if pid not in ontology.preferences:
            raise UnknownPreference(pid)
        if not 0.0 <= score <= cfg.score_max:
            raise OutOfRangeScore(pid, score, cfg.score_max)
    return {
        pid: scores.get(pid, cfg.s_mean) - cfg.s_mean
        for pid in ontology.preferences
    }


def raw_rating(
    ontology: Ontology,
    product: Product,
    scores: Mapping[str, float],
    cfg: RatingConfig,
    *,
    reduced: Optional[Ontology] = None,
) -> float:
    """Offset-weighted mean of sustainability indices, in [-1, 1].

    An all-neutral score vector rates everything 0 (the display midpoint
    after scaling) rather than dividing by zero.
    """
    offsets = preference_offsets(ontology, scores, cfg)
    denom = sum(abs(d) for d in offsets.values())
    if denom == 0:
        return 0.0
    total = 0.0
    for pid in ontology.preferences:
        delta = offsets[pid]
        if delta == 0:
            continue
        index = sustainability_index(
            ontology, product, ontology.preferences[pid], cfg, reduced=reduced
        )
        total += index.value * delta
    return min(1.0, max(-1.0, total / denom))


def strict_violation(
    ontology: Ontology,
    scores: Mapping[str, float],
    cfg: RatingConfig,
    index_of,
) -> Optional[str]:
    """First strict preference fully supported while the product opposes it.

    ``index_of`` maps a preference id to the product's sustainability
    index; injected so the cached and uncached paths share the rule.
    """
    if not cfg.strict_enforcement:
        return None
    for pid, preference in ontology.preferences.items():
        if not preference.strict:
            continue
        if scores.get(pid, cfg.s_mean) == cfg.score_max and index_of(pid) < 0:
            return pid
    return None


def rate(
    ontology: Ontology,
    product: Product,
    scores: Mapping[str, float],
    cfg: RatingConfig,
    *,
    reduced: Optional[Ontology] = None,
) -> ProductRating:
    """Scaled personal rating; strict violations floor it to beta - alpha."""
    violated = strict_violation(
        ontology,
        scores,
        cfg,
        lambda pid: sustainability_index(
            ontology, product, ontology.preferences[pid], cfg, reduced=reduced
        ).value,
    )
    if violated is not None:
        return ProductRating(product.id, -1.0, cfg.beta - cfg.alpha, violated)
    raw = raw_rating(ontology, product, scores, cfg, reduced=reduced)
    return ProductRating(product.id, raw, cfg.alpha * raw + cfg.beta)


def rank_products(
    ontology: Ontology,
    products: Sequence[Product],
    scores: Mapping[str, float],
    cfg: RatingConfig,
    *,
    reduced: Optional[Ontology] = None,
) -> list[tuple[str, ProductRating]]:
    """Products by descending scaled rating; ties break on ascending id.

    The sort key is the raw rating: the scaled value is a positive affine
    map of it, so the order is the same, but keying on raw keeps the order
    bit-identical across different (alpha, beta) choices.
    """
    ratings = [
        rate(ontology, product, scores, cfg, reduced=reduced) for product in products
    ]
    ratings.sort(key=lambda r: (-r.raw, r.product_id))
    return [(r.product_id, r) for r in ratings]


class RatingEngine:
    """Precomputed, vectorized rating path over one ontology snapshot.

    Sustainability indices are user-independent, so they are built once
    (the server-side half); a single rating evaluation is then one dot
    product against the user's offsets (the client-side half).
    """

    def __init__(self, ontology: Ontology, cfg: Optional[RatingConfig] = None) -> None:
        self.ontology = ontology
        self.cfg = cfg or RatingConfig()
        self.warnings: list[str] = []
        self.preference_ids: list[str] = list(ontology.preferences)
        self.product_ids: list[str] = list(ontology.products)
        self.pref_tag_ids: list[str] = list(ontology.preference_tags)
        self._product_row = {pid: i for i, pid in enumerate(self.product_ids)}
        self._pref_col = {pid: j for j, pid in enumerate(self.preference_ids)}
        self._tag_col = {tid: j for j, tid in enumerate(self.pref_tag_ids)}
        self._build()

    def _build(self) -> None:
        o, cfg = self.ontology, self.cfg
        for preference in o.preferences.values():
            if not preference.tag_ids:
                raise EmptyPreference(preference.id)
        reduced = None
        if cfg.reference_strategy == THEORETICAL_REDUCED:
            reduced = apply_reduction_principle(o).ontology
        self.references: dict[str, tuple[Optional[float], Optional[float]]] = {}
        for wid in self.pref_tag_ids:
            pref_tag = o.preference_tags[wid]
            self.references[wid] = (
                reference_positive(o, pref_tag, cfg, reduced=reduced),
                reference_negative(o, pref_tag, cfg, reduced=reduced),
            )

        n_products = len(self.product_ids)
        n_tags = len(self.pref_tag_ids)
        product_tag_ids = list(o.product_tags)
        tag_row = {tid: i for i, tid in enumerate(product_tag_ids)}
        scores = np.zeros((len(product_tag_ids), n_tags))
        for i, tid in enumerate(product_tag_ids):
            tag = o.product_tags[tid]
            for j, wid in enumerate(self.pref_tag_ids):
                scores[i, j] = o.association(tag, o.preference_tags[wid])

        self.aggregates = np.zeros((n_products, n_tags))
        for r, pid in enumerate(self.product_ids):
            for tid in sorted(o.products[pid].tag_ids):
                self.aggregates[r] += scores[tag_row[tid]]

        effective = self.aggregates
        if cfg.reference_strategy == THEORETICAL_UNREDUCED_CLIPPED:
            effective = np.clip(self.aggregates, -cfg.tau, cfg.tau)
        self.effective_aggregates = effective

        self.normalized = np.zeros((n_products, n_tags))
        for j, wid in enumerate(self.pref_tag_ids):
            ref_pos, ref_neg = self.references[wid]
            col = effective[:, j]
            out = np.zeros(n_products)
            pos = col > 0
            neg = col < 0
            if ref_pos is None:
                if pos.any():
                    out[pos] = 1.0
                    for r in np.flatnonzero(pos):
                        _warn(self.warnings, self.product_ids[r], wid, "positive")
            else:
                out[pos] = col[pos] / ref_pos
            if ref_neg is None:
                if neg.any():
                    out[neg] = -1.0
                    for r in np.flatnonzero(neg):
                        _warn(self.warnings, self.product_ids[r], wid, "negative")
            else:
                out[neg] = col[neg] / abs(ref_neg)
            self.normalized[:, j] = np.clip(out, -1.0, 1.0)

        self.index_matrix = np.zeros((n_products, len(self.preference_ids)))
        self._strict_cols: list[int] = []
        for j, pid in enumerate(self.preference_ids):
            preference = o.preferences[pid]
            cols = [self._tag_col[t] for t in sorted(preference.tag_ids)]
            acc = np.zeros(n_products)
            for c in cols:
                acc += self.normalized[:, c]
            self.index_matrix[:, j] = acc / len(cols)
            if preference.strict:
                self._strict_cols.append(j)

    def sustainability_index(self, product_id: str, preference_id: str) -> float:
        return float(
            self.index_matrix[self._product_row[product_id], self._pref_col[preference_id]]
        )

    def indices(self, product_id: str) -> dict[str, float]:
        row = self.index_matrix[self._product_row[product_id]]
        return {pid: float(row[j]) for j, pid in enumerate(self.preference_ids)}

    def normalized_association(self, product_id: str, pref_tag_id: str) -> float:
        return float(
            self.normalized[self._product_row[product_id], self._tag_col[pref_tag_id]]
        )

    def aggregate(self, product_id: str, pref_tag_id: str) -> float:
        return float(
            self.aggregates[self._product_row[product_id], self._tag_col[pref_tag_id]]
        )

    def effective_aggregate(self, product_id: str, pref_tag_id: str) -> float:
        return float(
            self.effective_aggregates[
                self._product_row[product_id], self._tag_col[pref_tag_id]
            ]
        )

    def offset_vector(self, scores: Mapping[str, float]) -> np.ndarray:
        cfg = self.cfg
        for pid, score in scores.items():
            if pid not in self._pref_col:
                raise UnknownPreference(pid)
            if not 0.0 <= score <= cfg.score_max:
                raise OutOfRangeScore(pid, score, cfg.score_max)
        deltas = np.zeros(len(self.preference_ids))
        for pid, score in scores.items():
            deltas[self._pref_col[pid]] = score - cfg.s_mean
        return deltas

    def rate(self, product_id: str, scores: Mapping[str, float]) -> ProductRating:
        return self._rate_row(self._product_row[product_id], scores)

    def _rate_row(self, row: int, scores: Mapping[str, float]) -> ProductRating:
        cfg = self.cfg
        product_id = self.product_ids[row]
        deltas = self.offset_vector(scores)
        indices = self.index_matrix[row]
        if cfg.strict_enforcement:
            for j in self._strict_cols:
                pid = self.preference_ids[j]
                if scores.get(pid, cfg.s_mean) == cfg.score_max and indices[j] < 0:
                    return ProductRating(product_id, -1.0, cfg.beta - cfg.alpha, pid)
        denom = float(np.abs(deltas).sum())
        if denom == 0:
            return ProductRating(product_id, 0.0, cfg.beta)
        raw = float(indices @ deltas) / denom
        raw = min(1.0, max(-1.0, raw))
        return ProductRating(product_id, raw, cfg.alpha * raw + cfg.beta)

    def rate_catalog(self, scores: Mapping[str, float]) -> list[ProductRating]:
        return [self._rate_row(r, scores) for r in range(len(self.product_ids))]

    def rank(self, scores: Mapping[str, float]) -> list[tuple[str, ProductRating]]:
        ratings = self.rate_catalog(scores)
        ratings.sort(key=lambda r: (-r.raw, r.product_id))
        return [(r.product_id, r) for r in ratings]

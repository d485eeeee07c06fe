"""Preference-interaction measurements and index distributions.

Pairs of preferences can reinforce each other or pull in opposite
directions (a rebound risk: satisfying one undermines the other).  Both
effects show up as rank correlation, measured either on the association
scores the knowledge base anticipates (ontology level) or on the indices
actual products realize (product level).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .ontology import Ontology, Preference
from .rating import RatingConfig, RatingEngine

ONTOLOGY_LEVEL = "ontology"
PRODUCT_LEVEL = "product"


class LengthMismatch(ValueError):
    def __init__(self, nx: int, ny: int) -> None:
        super().__init__(f"series lengths differ: {nx} vs {ny}")


def _average_ranks(values: Sequence[float]) -> list[float]:
    # Ties share the mean of the rank positions they span.
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        mean_rank = (i + j) / 2 + 1
        for k in range(i, j + 1):
            ranks[order[k]] = mean_rank
        i = j + 1
    return ranks


def spearman(xs: Sequence[float], ys: Sequence[float]) -> Optional[float]:
    """Rank correlation with average ranks for ties.

    Returns None for a constant series, where the coefficient is
    undefined; reporting 0 there would fake independence.
    """
    if len(xs) != len(ys):
        raise LengthMismatch(len(xs), len(ys))
    if len(xs) < 2:
        raise ValueError("need at least two points")
    if len(set(xs)) < 2 or len(set(ys)) < 2:
        return None
    rx = _average_ranks(xs)
    ry = _average_ranks(ys)
    n = len(xs)
    mean = (n + 1) / 2
    cov = sum((a - mean) * (b - mean) for a, b in zip(rx, ry))
    var_x = sum((a - mean) ** 2 for a in rx)
    var_y = sum((b - mean) ** 2 for b in ry)
    return cov / (var_x * var_y) ** 0.5


def shared_product_tags(
    ontology: Ontology,
    pref1: Preference,
    pref2: Preference,
    *,
    positive_only: bool = False,
) -> list[str]:
    """Product tags carrying signal towards both preferences.

    A tag counts when it has a non-zero (or, with ``positive_only``,
    strictly positive) association with at least one preference tag on
    each side.
    """

    def relates(tag_id: str, preference: Preference) -> bool:
        tag = ontology.product_tags[tag_id]
        for wid in preference.tag_ids:
            score = ontology.association(tag, ontology.preference_tags[wid])
            if (score > 0) if positive_only else (score != 0):
                return True
        return False

    return [
        tid
        for tid in ontology.product_tags
        if relates(tid, pref1) and relates(tid, pref2)
    ]


def average_association(
    ontology: Ontology, tag_id: str, preference: Preference
) -> float:
    """Mean association of one product tag over a preference's tags."""
    tag = ontology.product_tags[tag_id]
    total = 0.0
    for wid in sorted(preference.tag_ids):
        total += ontology.association(tag, ontology.preference_tags[wid])
    return total / len(preference.tag_ids)


def ontology_level_interaction(
    ontology: Ontology,
    pref1: Preference,
    pref2: Preference,
    *,
    positive_only: bool = False,
) -> Optional[float]:
    """Correlation of the two preferences' average scores on shared tags."""
    shared = shared_product_tags(ontology, pref1, pref2, positive_only=positive_only)
    if len(shared) < 2:
        return None
    xs = [average_association(ontology, tid, pref1) for tid in shared]
    ys = [average_association(ontology, tid, pref2) for tid in shared]
    return spearman(xs, ys)


def product_level_interaction(
    engine: RatingEngine,
    pref1_id: str,
    pref2_id: str,
    product_ids: Optional[Sequence[str]] = None,
) -> Optional[float]:
    """Correlation of the two preferences' sustainability indices."""
    ids = list(product_ids) if product_ids is not None else engine.product_ids
    if len(ids) < 2:
        return None
    xs = [engine.sustainability_index(pid, pref1_id) for pid in ids]
    ys = [engine.sustainability_index(pid, pref2_id) for pid in ids]
    return spearman(xs, ys)


@dataclass(frozen=True)
class InteractionMatrix:
    level: str
    preference_ids: tuple[str, ...]
    values: tuple[tuple[Optional[float], ...], ...]

    def value(self, pref1_id: str, pref2_id: str) -> Optional[float]:
        i = self.preference_ids.index(pref1_id)
        j = self.preference_ids.index(pref2_id)
        return self.values[i][j]


def interaction_matrix(
    ontology: Ontology,
    level: str,
    cfg: Optional[RatingConfig] = None,
    *,
    positive_only: bool = False,
) -> InteractionMatrix:
    """Symmetric preference-by-preference correlation matrix.

    Cells without enough data (fewer than two shared tags, or a constant
    index series) are None; the diagonal is 1 where defined.
    """
    if level not in (ONTOLOGY_LEVEL, PRODUCT_LEVEL):
        raise ValueError(f"unknown interaction level {level!r}")
    pref_ids = list(ontology.preferences)
    engine = RatingEngine(ontology, cfg) if level == PRODUCT_LEVEL else None
    n = len(pref_ids)
    cells: list[list[Optional[float]]] = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            if level == ONTOLOGY_LEVEL:
                rho = ontology_level_interaction(
                    ontology,
                    ontology.preferences[pref_ids[i]],
                    ontology.preferences[pref_ids[j]],
                    positive_only=positive_only,
                )
            else:
                assert engine is not None
                rho = product_level_interaction(engine, pref_ids[i], pref_ids[j])
            cells[i][j] = rho
            cells[j][i] = rho
    return InteractionMatrix(
        level, tuple(pref_ids), tuple(tuple(row) for row in cells)
    )


@dataclass(frozen=True)
class Histogram:
    """Counts over uniform bins spanning [-1, 1]."""

    preference_id: str
    edges: tuple[float, ...]
    counts: tuple[int, ...]

    @property
    def total(self) -> int:
        return sum(self.counts)


def index_density(
    engine: RatingEngine, preference_id: str, bins: int
) -> Histogram:
    """Distribution of one preference's index over the whole catalog.

    Bins are inclusive on the left edge; the last bin also includes its
    right edge so the value 1 is counted.
    """
    if bins < 1:
        raise ValueError("bins must be >= 1")
    width = 2.0 / bins
    edges = tuple(-1.0 + width * i for i in range(bins + 1))
    counts = [0] * bins
    for pid in engine.product_ids:
        value = engine.sustainability_index(pid, preference_id)
        slot = int((value - (-1.0)) / width)
        if slot >= bins:
            slot = bins - 1
        if slot < 0:
            slot = 0
        counts[slot] += 1
    return Histogram(preference_id, edges, tuple(counts))

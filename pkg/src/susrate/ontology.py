"""Core data model and set-theoretic association scoring.

The knowledge base is built on a shared universe of primitive concepts.
Product tags are concept sets describing product characteristics;
preference tags carry two concept sets, one supporting and one opposing
the preference aspect they stand for.  Association scores between the
two tag kinds are overlap ratios of those sets, optionally overridden by
calibrated scores from experts, crowdsourcing or ML.

Everything here is immutable after construction: transforms such as
:func:`apply_reduction_principle` return new :class:`Ontology` values.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from decimal import Decimal
from typing import Iterable, Mapping, Optional, Union

Scalar = Union[Decimal, str]

CATEGORIES = ("environment", "health", "social", "quality")

OVERRIDE_SOURCES = ("expert", "crowd", "ml")

#: Product sizes above which the subset expansion of the overlap error is
#: refused (2^n subsets); the direct union formula has no such limit.
INCLUSION_EXCLUSION_TAG_LIMIT = 20


class OntologyError(ValueError):
    """Malformed ontology input (duplicate ids, bad field values)."""


@dataclass(frozen=True)
class PrimitiveConcept:
    """Atomic semantic unit; the universe is the set of all concept ids."""

    id: str
    label: str = ""

    def __post_init__(self) -> None:
        if not self.id:
            raise OntologyError("concept id must be non-empty")


@dataclass(frozen=True)
class ProductTag:
    """Named set of primitive concepts summarizing a product characteristic.

    An empty ``concepts`` set is tolerated as a placeholder for a tag whose
    decomposition is unknown; validation reports it and the reduction
    transform refuses to touch overrides attached to it.
    """

    id: str
    name: str
    concepts: frozenset[str] = frozenset()

    def __post_init__(self) -> None:
        if not self.id:
            raise OntologyError("product tag id must be non-empty")
        object.__setattr__(self, "concepts", frozenset(self.concepts))

    @property
    def is_placeholder(self) -> bool:
        return not self.concepts


@dataclass(frozen=True)
class PreferenceTag:
    """One aspect of a preference: supporting and opposing concept sets."""

    id: str
    name: str
    support_concepts: frozenset[str] = frozenset()
    oppose_concepts: frozenset[str] = frozenset()

    def __post_init__(self) -> None:
        if not self.id:
            raise OntologyError("preference tag id must be non-empty")
        object.__setattr__(self, "support_concepts", frozenset(self.support_concepts))
        object.__setattr__(self, "oppose_concepts", frozenset(self.oppose_concepts))
        if self.support_concepts & self.oppose_concepts:
            raise OntologyError(
                f"preference tag {self.id!r}: a concept cannot both support and oppose"
            )


@dataclass(frozen=True)
class Preference:
    """User-facing sustainability statement grouping preference tags."""

    id: str
    statement: str
    category: str
    tag_ids: frozenset[str]
    description: str = ""
    strict: bool = False

    def __post_init__(self) -> None:
        if not self.id:
            raise OntologyError("preference id must be non-empty")
        if self.category not in CATEGORIES:
            raise OntologyError(
                f"preference {self.id!r}: unknown category {self.category!r}"
            )
        object.__setattr__(self, "tag_ids", frozenset(self.tag_ids))


@dataclass(frozen=True)
class Product:
    """Catalog entry with attributes for rule evaluation and assigned tags."""

    id: str
    name: str
    category_id: str = ""
    unit_price: Optional[Decimal] = None
    attributes: Mapping[str, Scalar] = field(default_factory=dict)
    tag_ids: frozenset[str] = frozenset()

    def __post_init__(self) -> None:
        if not self.id:
            raise OntologyError("product id must be non-empty")
        if self.unit_price is not None and self.unit_price < 0:
            raise OntologyError(f"product {self.id!r}: negative unit price")
        object.__setattr__(self, "attributes", dict(self.attributes))
        object.__setattr__(self, "tag_ids", frozenset(self.tag_ids))

    def __hash__(self) -> int:  # attributes dict is never mutated
        return hash(self.id)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Product):
            return NotImplemented
        return (
            self.id == other.id
            and self.name == other.name
            and self.category_id == other.category_id
            and self.unit_price == other.unit_price
            and dict(self.attributes) == dict(other.attributes)
            and self.tag_ids == other.tag_ids
        )


@dataclass(frozen=True)
class AssociationOverride:
    """Calibrated association score that replaces the computed overlap."""

    product_tag_id: str
    preference_tag_id: str
    score: float
    source: str = "expert"

    def __post_init__(self) -> None:
        if self.source not in OVERRIDE_SOURCES:
            raise OntologyError(f"unknown override source {self.source!r}")


class Ontology:
    """Immutable knowledge base snapshot.

    Collections are exposed as id-keyed mappings with deterministic
    (sorted) iteration order.  Construction enforces id uniqueness only;
    referential integrity is checked by :func:`validate_ontology`.
    """

    __slots__ = (
        "concepts",
        "product_tags",
        "preference_tags",
        "preferences",
        "products",
        "overrides",
    )

    def __init__(
        self,
        concepts: Iterable[PrimitiveConcept] = (),
        product_tags: Iterable[ProductTag] = (),
        preference_tags: Iterable[PreferenceTag] = (),
        preferences: Iterable[Preference] = (),
        products: Iterable[Product] = (),
        overrides: Iterable[AssociationOverride] = (),
    ) -> None:
        self.concepts = _index(concepts, "concept")
        self.product_tags = _index(product_tags, "product tag")
        self.preference_tags = _index(preference_tags, "preference tag")
        self.preferences = _index(preferences, "preference")
        self.products = _index(products, "product")
        ovr: dict[tuple[str, str], AssociationOverride] = {}
        for o in overrides:
            key = (o.product_tag_id, o.preference_tag_id)
            if key in ovr:
                raise OntologyError(f"duplicate override for {key}")
            ovr[key] = o
        self.overrides = dict(sorted(ovr.items()))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Ontology):
            return NotImplemented
        return (
            self.concepts == other.concepts
            and self.product_tags == other.product_tags
            and self.preference_tags == other.preference_tags
            and self.preferences == other.preferences
            and self.products == other.products
            and self.overrides == other.overrides
        )

    def with_products(self, products: Iterable[Product]) -> "Ontology":
        """Copy of this ontology with the product collection replaced."""
        return Ontology(
            self.concepts.values(),
            self.product_tags.values(),
            self.preference_tags.values(),
            self.preferences.values(),
            products,
            self.overrides.values(),
        )

    # -- association scoring ------------------------------------------------

    def association(self, tag: ProductTag, pref_tag: PreferenceTag) -> float:
        """Signed association score in [-1, 1].

        A stored override wins over the set-theoretic computation; either
        path is clamped so the bound holds even for out-of-range overrides
        (which validation reports separately).
        """
        override = self.overrides.get((tag.id, pref_tag.id))
        if override is not None:
            return min(1.0, max(-1.0, override.score))
        return computed_association(tag, pref_tag)

    def product_concept_union(self, product: Product) -> frozenset[str]:
        """Union of the primitive concepts of all tags assigned to a product."""
        out: set[str] = set()
        for tag_id in product.tag_ids:
            out |= self.product_tags[tag_id].concepts
        return frozenset(out)


def _index(items, kind):
    out = {}
    for item in items:
        if item.id in out:
            raise OntologyError(f"duplicate {kind} id {item.id!r}")
        out[item.id] = item
    return dict(sorted(out.items()))


def positive_association(tag: ProductTag, pref_tag: PreferenceTag) -> float:
    """Share of the supporting concepts covered by the product tag.

    Defined as 0 when the supporting set is empty: a preference aspect
    without supporting concepts cannot be supported.
    """
    if not pref_tag.support_concepts:
        return 0.0
    overlap = len(tag.concepts & pref_tag.support_concepts)
    return overlap / len(pref_tag.support_concepts)


def negative_association(tag: ProductTag, pref_tag: PreferenceTag) -> float:
    """Share of the opposing concepts covered by the product tag."""
    if not pref_tag.oppose_concepts:
        return 0.0
    overlap = len(tag.concepts & pref_tag.oppose_concepts)
    return overlap / len(pref_tag.oppose_concepts)


def computed_association(tag: ProductTag, pref_tag: PreferenceTag) -> float:
    """Set-theoretic signed association, ignoring any override."""
    return positive_association(tag, pref_tag) - negative_association(tag, pref_tag)


def association(ontology: "Ontology", tag: ProductTag, pref_tag: PreferenceTag) -> float:
    """Override-aware association score; see :meth:`Ontology.association`."""
    return ontology.association(tag, pref_tag)


def exact_aggregated_association(
    ontology: Ontology, product: Product, pref_tag: PreferenceTag
) -> float:
    """Aggregated association computed on the union of the product's concepts.

    This is the exact (overlap-free) value and serves as the brute-force
    oracle for the additive approximation.
    """
    union = ontology.product_concept_union(product)
    pos = 0.0
    if pref_tag.support_concepts:
        pos = len(union & pref_tag.support_concepts) / len(pref_tag.support_concepts)
    neg = 0.0
    if pref_tag.oppose_concepts:
        neg = len(union & pref_tag.oppose_concepts) / len(pref_tag.oppose_concepts)
    return pos - neg


def additive_aggregated_association(
    ontology: Ontology,
    product: Product,
    pref_tag: PreferenceTag,
    *,
    use_overrides: bool = True,
) -> float:
    """Sum of per-tag associations over the product's tags.

    Not clipped here; the value may leave [-1, 1] when assigned tags share
    concepts.  ``use_overrides=False`` restricts the sum to the purely
    set-theoretic scores, which is the form the overlap error is defined on.
    """
    total = 0.0
    for tag_id in sorted(product.tag_ids):
        tag = ontology.product_tags[tag_id]
        if use_overrides:
            total += ontology.association(tag, pref_tag)
        else:
            total += computed_association(tag, pref_tag)
    return total


def overlap_error(
    ontology: Ontology, product: Product, pref_tag: PreferenceTag
) -> float:
    """Gap between the additive sum and the exact union-based aggregate.

    Positive when shared concepts on the supporting side are double
    counted, negative when the double counting happens on the opposing
    side.  Computed on set-theoretic scores only, so that it equals the
    subset-expansion form and vanishes for concept-disjoint tags even when
    calibrated overrides are present.  Each side is a single division of
    an integer overcount, so disjoint tags give exactly 0.0.
    """
    tag_sets = [ontology.product_tags[t].concepts for t in sorted(product.tag_ids)]
    union = frozenset().union(*tag_sets) if tag_sets else frozenset()

    def overcount(target: frozenset[str]) -> float:
        if not target:
            return 0.0
        total = sum(len(ts & target) for ts in tag_sets)
        return (total - len(union & target)) / len(target)

    return overcount(pref_tag.support_concepts) - overcount(pref_tag.oppose_concepts)


def inclusion_exclusion_error(
    ontology: Ontology, product: Product, pref_tag: PreferenceTag
) -> float:
    """Overlap error via the alternating subset expansion of the union.

    Exponential in the number of assigned tags, so refused above
    :data:`INCLUSION_EXCLUSION_TAG_LIMIT`; exists as the independent
    cross-check for :func:`overlap_error`.
    """
    tag_sets = [ontology.product_tags[t].concepts for t in sorted(product.tag_ids)]
    if len(tag_sets) > INCLUSION_EXCLUSION_TAG_LIMIT:
        raise OntologyError(
            f"subset expansion refused for {len(tag_sets)} tags "
            f"(limit {INCLUSION_EXCLUSION_TAG_LIMIT})"
        )

    def correction(target: frozenset[str]) -> float:
        # Alternating-sign sum over tag subsets of size >= 2; equals
        # |union of per-tag overlaps| - sum of per-tag overlaps (<= 0).
        total = 0
        for size in range(2, len(tag_sets) + 1):
            sign = -1 if size % 2 == 0 else 1
            for combo in itertools.combinations(tag_sets, size):
                inter = frozenset.intersection(*combo) & target
                total += sign * len(inter)
        return float(total)

    pos_term = 0.0
    if pref_tag.support_concepts:
        pos_term = correction(pref_tag.support_concepts) / len(
            pref_tag.support_concepts
        )
    neg_term = 0.0
    if pref_tag.oppose_concepts:
        neg_term = correction(pref_tag.oppose_concepts) / len(pref_tag.oppose_concepts)
    # The additive sum exceeds the union form by the (negated) positive
    # correction and undershoots it by the negative one.
    return -pos_term + neg_term


# -- reduction design principle ---------------------------------------------


@dataclass(frozen=True)
class ReductionConflict:
    """Tag pair the reduction transform could not rewrite safely."""

    product_tag_ids: tuple[str, str]
    reason: str


@dataclass(frozen=True)
class ReductionResult:
    ontology: Ontology
    extracted_tag_ids: tuple[str, ...]
    conflicts: tuple[ReductionConflict, ...]


def shared_tag_id(concepts: Iterable[str]) -> str:
    """Deterministic id for a tag extracted from a shared concept set."""
    return "shared." + "+".join(sorted(concepts))


def apply_reduction_principle(ontology: Ontology) -> ReductionResult:
    """Rewrite the ontology so co-assigned product tags are concept-disjoint.

    Two rules run to a fixed point:

    1. When one co-assigned tag's concept set contains another's, only the
       superset tag stays assigned to that product (ties keep the smaller
       id).
    2. Strictly overlapping co-assigned tag pairs have their shared
       concepts extracted into a new tag, assigned to every product
       carrying either original; the shared concepts are removed from the
       originals and any override on them is lowered by the shared set's
       own computed association.

    Placeholder tags (empty concept sets) are never rewritten; if such a
    tag is co-assigned with another and an override is attached to either,
    the pair is reported as a conflict because the split amount cannot be
    derived.
    """
    tag_concepts: dict[str, set[str]] = {
        t.id: set(t.concepts) for t in ontology.product_tags.values()
    }
    tag_names: dict[str, str] = {
        t.id: t.name for t in ontology.product_tags.values()
    }
    assignments: dict[str, set[str]] = {
        p.id: set(p.tag_ids) for p in ontology.products.values()
    }
    overrides: dict[tuple[str, str], AssociationOverride] = dict(ontology.overrides)
    extracted: list[str] = []

    overridden_tags = {z for (z, _w) in overrides}
    conflicts: list[ReductionConflict] = []
    seen_conflicts: set[tuple[str, str]] = set()
    for pid in sorted(assignments):
        for z1, z2 in itertools.combinations(sorted(assignments[pid]), 2):
            if not tag_concepts[z1] and not tag_concepts[z2]:
                continue  # two placeholders: nothing to split either way
            if tag_concepts[z1] and tag_concepts[z2]:
                continue
            if (z1 in overridden_tags or z2 in overridden_tags) and (
                z1,
                z2,
            ) not in seen_conflicts:
                seen_conflicts.add((z1, z2))
                conflicts.append(
                    ReductionConflict(
                        (z1, z2),
                        "placeholder concept set: override split amount unknown",
                    )
                )

    def split_override(tag_id: str, shared: frozenset[str]) -> None:
        for pref_tag in ontology.preference_tags.values():
            key = (tag_id, pref_tag.id)
            if key not in overrides:
                continue
            probe = ProductTag(id="_shared", name="", concepts=shared)
            delta = computed_association(probe, pref_tag)
            old = overrides[key]
            overrides[key] = replace(old, score=old.score - delta)

    changed = True
    while changed:
        changed = False

        # Rule 1: drop per-product assignments of contained tags.
        for pid in sorted(assignments):
            drop: set[str] = set()
            current = sorted(assignments[pid])
            for z1, z2 in itertools.combinations(current, 2):
                q1, q2 = tag_concepts[z1], tag_concepts[z2]
                if not q1 or not q2 or z1 in drop or z2 in drop:
                    continue
                if q1 == q2:
                    drop.add(max(z1, z2))
                elif q1 < q2:
                    drop.add(z1)
                elif q2 < q1:
                    drop.add(z2)
            if drop:
                assignments[pid] -= drop
                changed = True

        if changed:
            continue

        # Rule 2: extract the first strictly overlapping co-assigned pair.
        pair = None
        for pid in sorted(assignments):
            for z1, z2 in itertools.combinations(sorted(assignments[pid]), 2):
                q1, q2 = tag_concepts[z1], tag_concepts[z2]
                if q1 and q2 and (q1 & q2):
                    pair = (z1, z2)
                    break
            if pair:
                break
        if pair is None:
            break

        z1, z2 = pair
        shared = frozenset(tag_concepts[z1] & tag_concepts[z2])
        new_id = shared_tag_id(shared)
        if new_id not in tag_concepts:
            tag_concepts[new_id] = set(shared)
            tag_names[new_id] = "shared: " + " + ".join(sorted(shared))
            extracted.append(new_id)
        carriers = {pid for pid, tags in assignments.items() if z1 in tags or z2 in tags}
        for pid in carriers:
            assignments[pid].add(new_id)
        tag_concepts[z1] -= shared
        tag_concepts[z2] -= shared
        split_override(z1, shared)
        split_override(z2, shared)
        changed = True

    new_tags = [
        ProductTag(id=tid, name=tag_names[tid], concepts=frozenset(cs))
        for tid, cs in tag_concepts.items()
    ]
    new_products = [
        replace(p, tag_ids=frozenset(assignments[p.id]))
        for p in ontology.products.values()
    ]
    reduced = Ontology(
        ontology.concepts.values(),
        new_tags,
        ontology.preference_tags.values(),
        ontology.preferences.values(),
        new_products,
        overrides.values(),
    )
    return ReductionResult(reduced, tuple(extracted), tuple(conflicts))


# -- validation ---------------------------------------------------------------

ERROR = "error"
WARNING = "warning"


@dataclass(frozen=True)
class Finding:
    severity: str
    kind: str
    message: str
    subject: tuple[str, ...] = ()
    value: Optional[float] = None


@dataclass(frozen=True)
class ValidationReport:
    findings: tuple[Finding, ...]

    @property
    def errors(self) -> tuple[Finding, ...]:
        return tuple(f for f in self.findings if f.severity == ERROR)

    @property
    def warnings(self) -> tuple[Finding, ...]:
        return tuple(f for f in self.findings if f.severity == WARNING)

    @property
    def ok(self) -> bool:
        return not self.errors


def validate_ontology(ontology: Ontology) -> ValidationReport:
    """Collect integrity errors and design warnings without raising.

    Errors: dangling references, out-of-range overrides, preference tags
    with no concepts at all, preferences with no tags.  Warnings:
    placeholder product tags and co-assigned overlapping tag pairs with
    their per-preference-tag overlap error.
    """
    findings: list[Finding] = []

    def err(kind: str, message: str, *subject: str) -> None:
        findings.append(Finding(ERROR, kind, message, tuple(subject)))

    def warn(kind: str, message: str, *subject: str) -> None:
        findings.append(Finding(WARNING, kind, message, tuple(subject)))

    universe = set(ontology.concepts)
    for tag in ontology.product_tags.values():
        for c in sorted(tag.concepts - universe):
            err("dangling_concept", f"product tag {tag.id!r} uses unknown concept {c!r}", tag.id, c)
        if tag.is_placeholder:
            warn("placeholder_tag", f"product tag {tag.id!r} has no concepts", tag.id)

    for pt in ontology.preference_tags.values():
        for c in sorted((pt.support_concepts | pt.oppose_concepts) - universe):
            err("dangling_concept", f"preference tag {pt.id!r} uses unknown concept {c!r}", pt.id, c)
        if not pt.support_concepts and not pt.oppose_concepts:
            err("empty_preference_tag", f"preference tag {pt.id!r} has no concepts", pt.id)

    for pref in ontology.preferences.values():
        if not pref.tag_ids:
            err("empty_preference", f"preference {pref.id!r} has no preference tags", pref.id)
        for t in sorted(pref.tag_ids - set(ontology.preference_tags)):
            err("dangling_tag", f"preference {pref.id!r} references unknown tag {t!r}", pref.id, t)

    for product in ontology.products.values():
        for t in sorted(product.tag_ids - set(ontology.product_tags)):
            err("dangling_tag", f"product {product.id!r} references unknown tag {t!r}", product.id, t)

    for (z, w), override in ontology.overrides.items():
        if z not in ontology.product_tags:
            err("dangling_tag", f"override references unknown product tag {z!r}", z, w)
        if w not in ontology.preference_tags:
            err("dangling_tag", f"override references unknown preference tag {w!r}", z, w)
        if abs(override.score) > 1:
            err(
                "override_out_of_bounds",
                f"override ({z!r}, {w!r}) score {override.score} outside [-1, 1]",
                z,
                w,
            )

    if not any(f.severity == ERROR for f in findings):
        findings.extend(_overlap_findings(ontology))

    return ValidationReport(tuple(findings))


def _overlap_findings(ontology: Ontology) -> list[Finding]:
    findings: list[Finding] = []
    seen: set[tuple[str, str]] = set()
    for product in ontology.products.values():
        for z1, z2 in itertools.combinations(sorted(product.tag_ids), 2):
            if (z1, z2) in seen:
                continue
            shared = (
                ontology.product_tags[z1].concepts
                & ontology.product_tags[z2].concepts
            )
            if not shared:
                continue
            seen.add((z1, z2))
            probe = ProductTag(id="_shared", name="", concepts=frozenset(shared))
            for pt in ontology.preference_tags.values():
                eps = computed_association(probe, pt)
                if eps == 0:
                    continue
                findings.append(
                    Finding(
                        WARNING,
                        "tag_overlap",
                        f"co-assigned tags {z1!r} and {z2!r} share "
                        f"{sorted(shared)}: overlap error {eps:+.6f} "
                        f"towards {pt.id!r}",
                        (z1, z2, pt.id),
                        eps,
                    )
                )
    return findings

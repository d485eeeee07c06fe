"""Declarative tag assignment rules evaluated over product attributes.

A rule is a conjunction of attribute predicates targeting one product
tag; disjunction is expressed as several rules for the same tag.
Evaluation is total and order-independent: a predicate on a missing or
type-mismatched attribute is simply false.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from decimal import Decimal, InvalidOperation
from typing import Iterable, Sequence

from .ontology import Ontology, Product, Scalar

NUMERIC_OPS = ("eq", "neq", "lt", "le", "gt", "ge")
STRING_OPS = ("contains", "has_label")
OPS = NUMERIC_OPS + STRING_OPS

#: Separator for multi-label attribute values, e.g. "organic;low-fat".
LABEL_SEPARATOR = ";"


class RuleError(ValueError):
    """Malformed rule definition."""


class UnknownTag(KeyError):
    """A rule targets a product tag that is not part of the ontology."""


@dataclass(frozen=True)
class AttributePredicate:
    """Single comparison against one product attribute.

    Numeric operators compare decimals; ``contains`` is a substring test
    and ``has_label`` checks membership in a separator-delimited label
    list.  Comparisons between a numeric attribute and a string value (or
    vice versa) are false rather than errors.
    """

    attribute: str
    op: str
    value: Scalar

    def __post_init__(self) -> None:
        if self.op not in OPS:
            raise RuleError(f"unknown predicate operator {self.op!r}")
        if self.op in ("lt", "le", "gt", "ge") and not isinstance(
            self.value, Decimal
        ):
            raise RuleError(f"operator {self.op!r} requires a numeric value")
        if self.op in STRING_OPS and not isinstance(self.value, str):
            raise RuleError(f"operator {self.op!r} requires a string value")

    def holds(self, product: Product) -> bool:
        actual = product.attributes.get(self.attribute)
        if actual is None:
            return False
        if self.op == "eq":
            return _comparable(actual, self.value) and actual == self.value
        if self.op == "neq":
            return _comparable(actual, self.value) and actual != self.value
        if self.op in ("lt", "le", "gt", "ge"):
            if not isinstance(actual, Decimal):
                return False
            if self.op == "lt":
                return actual < self.value
            if self.op == "le":
                return actual <= self.value
            if self.op == "gt":
                return actual > self.value
            return actual >= self.value
        if not isinstance(actual, str):
            return False
        if self.op == "contains":
            return str(self.value) in actual
        labels = [part.strip() for part in actual.split(LABEL_SEPARATOR)]
        return str(self.value) in labels


def _comparable(a: Scalar, b: Scalar) -> bool:
    return isinstance(a, Decimal) == isinstance(b, Decimal)


@dataclass(frozen=True)
class AssignmentRule:
    """Conjunctive rule: when every condition holds, the tag is assigned."""

    id: str
    product_tag_id: str
    conditions: tuple[AttributePredicate, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        if not self.conditions:
            raise RuleError(f"rule {self.id!r} has no conditions")
        object.__setattr__(self, "conditions", tuple(self.conditions))

    def fires(self, product: Product) -> bool:
        return all(cond.holds(product) for cond in self.conditions)


def evaluate_rules(
    product: Product, rules: Sequence[AssignmentRule]
) -> frozenset[str]:
    """Product tag ids of every rule whose conditions all hold."""
    return frozenset(rule.product_tag_id for rule in rules if rule.fires(product))


def assign_all(ontology: Ontology, rules: Sequence[AssignmentRule]) -> Ontology:
    """Extend every product's tags with the rule-derived ones.

    Manual assignments are never removed, so re-running is idempotent and
    the tag set never shrinks.
    """
    for rule in rules:
        if rule.product_tag_id not in ontology.product_tags:
            raise UnknownTag(rule.product_tag_id)
    new_products = []
    for product in ontology.products.values():
        derived = evaluate_rules(product, rules)
        new_products.append(replace(product, tag_ids=product.tag_ids | derived))
    return ontology.with_products(new_products)


def parse_scalar(raw: str) -> Scalar:
    """Interpret a raw field as a decimal when it parses as one.

    Shared by the catalog CSV reader and the ontology JSON reader so both
    surfaces agree on what counts as a number.
    """
    text = raw.strip()
    if not text:
        return raw
    try:
        value = Decimal(text)
    except InvalidOperation:
        return raw
    return value if value.is_finite() else raw


def load_rules(records: Iterable[dict]) -> list[AssignmentRule]:
    """Build rules from the `rules` array of an ontology document."""
    out = []
    for record in records:
        conditions = tuple(
            AttributePredicate(
                attribute=c["attribute"],
                op=c["op"],
                value=str(c["value"])
                if c["op"] in STRING_OPS
                else parse_scalar(str(c["value"])),
            )
            for c in record.get("conditions", ())
        )
        out.append(
            AssignmentRule(
                id=record["id"],
                product_tag_id=record["product_tag_id"],
                conditions=conditions,
            )
        )
    return out

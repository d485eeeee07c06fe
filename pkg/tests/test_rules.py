"""Attribute predicates and rule-driven tag assignment."""

from __future__ import annotations

from decimal import Decimal

import pytest

from susrate.ontology import Product
from susrate.rules import (
    AssignmentRule,
    AttributePredicate,
    RuleError,
    UnknownTag,
    assign_all,
    evaluate_rules,
    parse_scalar,
)
from susrate.seed import seed_ontology, seed_rules


def product(**attributes) -> Product:
    parsed = {k: parse_scalar(str(v)) for k, v in attributes.items()}
    return Product("p", "p", attributes=parsed)


def rule(tag_id: str, *conditions: tuple) -> AssignmentRule:
    predicates = tuple(AttributePredicate(a, op, v) for a, op, v in conditions)
    return AssignmentRule(f"r.{tag_id}", tag_id, predicates)


class TestPredicates:
    def test_low_fat_threshold(self):
        low_fat = rule("low-fat", ("fat_g_per_100g", "le", Decimal("3")))
        assert evaluate_rules(product(fat_g_per_100g="1.5"), [low_fat]) == {"low-fat"}
        assert evaluate_rules(product(fat_g_per_100g="3"), [low_fat]) == {"low-fat"}
        assert evaluate_rules(product(fat_g_per_100g="3.1"), [low_fat]) == frozenset()

    def test_empty_rule_list(self):
        assert evaluate_rules(product(fat_g_per_100g="1"), []) == frozenset()

    def test_missing_attribute_never_fires(self):
        low_fat = rule("low-fat", ("fat_g_per_100g", "le", Decimal("3")))
        assert evaluate_rules(product(salt_g_per_100g="0.1"), [low_fat]) == frozenset()

    def test_type_mismatch_is_false(self):
        numeric = rule("t", ("weird", "lt", Decimal("3")))
        assert evaluate_rules(product(weird="not-a-number"), [numeric]) == frozenset()
        text = rule("t", ("fat_g_per_100g", "contains", "fat"))
        assert evaluate_rules(product(fat_g_per_100g="2"), [text]) == frozenset()

    def test_eq_neq(self):
        eq_rule = rule("t", ("origin", "eq", "CH"))
        neq_rule = rule("u", ("origin", "neq", "CH"))
        assert evaluate_rules(product(origin="CH"), [eq_rule, neq_rule]) == {"t"}
        assert evaluate_rules(product(origin="DE"), [eq_rule, neq_rule]) == {"u"}
        assert evaluate_rules(product(other="CH"), [eq_rule, neq_rule]) == frozenset()

    def test_has_label_and_contains(self):
        labelled = rule("t", ("labels", "has_label", "organic"))
        sub = rule("u", ("name_text", "contains", "choc"))
        assert evaluate_rules(product(labels="organic;fair-trade"), [labelled]) == {"t"}
        assert evaluate_rules(product(labels="inorganic"), [labelled]) == frozenset()
        assert evaluate_rules(product(name_text="dark chocolate"), [sub]) == {"u"}

    def test_label_monotonicity(self):
        labelled = rule("t", ("labels", "has_label", "organic"))
        base = product(labels="organic")
        extended = product(labels="organic;new-label")
        assert evaluate_rules(base, [labelled]) <= evaluate_rules(extended, [labelled])

    def test_conjunction(self):
        both = rule(
            "t", ("fat_g_per_100g", "le", Decimal("3")), ("labels", "has_label", "light")
        )
        assert evaluate_rules(product(fat_g_per_100g="1", labels="light"), [both]) == {"t"}
        assert evaluate_rules(product(fat_g_per_100g="1"), [both]) == frozenset()

    def test_bad_rule_definitions_rejected(self):
        with pytest.raises(RuleError):
            AttributePredicate("a", "matches", "x")
        with pytest.raises(RuleError):
            AttributePredicate("a", "lt", "three")
        with pytest.raises(RuleError):
            AttributePredicate("a", "has_label", Decimal("3"))
        with pytest.raises(RuleError):
            AssignmentRule("r", "t", ())


class TestAssignAll:
    def test_rule_derived_tags_added(self, seed):
        tagged = {
            pid: p.tag_ids for pid, p in seed_ontology(assign=False).products.items()
        }
        assigned = assign_all(seed_ontology(assign=False), seed_rules())
        apple = assigned.products["p.apple"]
        assert "low-fat" in apple.tag_ids
        assert "regional" in apple.tag_ids
        assert tagged["p.apple"] <= apple.tag_ids

    def test_idempotent_and_never_shrinks(self, seed, rules):
        once = assign_all(seed_ontology(assign=False), rules)
        twice = assign_all(once, rules)
        assert once == twice
        for pid, p in seed_ontology(assign=False).products.items():
            assert p.tag_ids <= once.products[pid].tag_ids

    def test_two_rules_same_tag_assign_once(self):
        o = seed_ontology(assign=False)
        rules = [
            rule("low-fat", ("fat_g_per_100g", "le", Decimal("3"))),
            rule("low-fat", ("labels", "has_label", "light")),
        ]
        rules[1] = AssignmentRule("r.other", "low-fat", rules[1].conditions)
        assigned = assign_all(o, rules)
        tags = assigned.products["p.apple"].tag_ids
        assert list(tags).count("low-fat") == 1

    def test_unknown_tag_raises(self):
        o = seed_ontology(assign=False)
        bad = rule("no-such-tag", ("fat_g_per_100g", "le", Decimal("3")))
        with pytest.raises(UnknownTag):
            assign_all(o, [bad])


def test_parse_scalar():
    assert parse_scalar("1.5") == Decimal("1.5")
    assert parse_scalar("organic") == "organic"
    assert parse_scalar("NaN") == "NaN"
    assert parse_scalar("") == ""

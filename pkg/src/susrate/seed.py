"""Built-in food-domain knowledge base.

A representative slice of a grocery sustainability ontology: 25
preferences across the four categories, a tag vocabulary over a shared
concept universe, calibrated override scores for the canonical
tag-pair meanings, a small catalog, and the attribute rules that tag it.
A production deployment replaces this with its own curated data; the
shapes are identical.
"""

from __future__ import annotations

from decimal import Decimal

from .ontology import (
    AssociationOverride,
    Ontology,
    Preference,
    PreferenceTag,
    PrimitiveConcept,
    Product,
    ProductTag,
)
from .rules import (
    STRING_OPS,
    AssignmentRule,
    AttributePredicate,
    assign_all,
    parse_scalar,
)

_CONCEPTS = [
    ("plant-part", "Consists of parts of plants"),
    ("not-animal-product", "No animal products involved"),
    ("animal-product", "Contains animal products"),
    ("animal-involved", "Animals involved in production"),
    ("meat", "Contains meat"),
    ("fish-content", "Contains fish or seafood"),
    ("egg-content", "Contains eggs"),
    ("lactose", "Contains lactose"),
    ("gluten-grain", "Contains gluten grains"),
    ("nut-content", "Contains nuts"),
    ("soy-content", "Contains soy"),
    ("gluten-free-recipe", "Recipe guaranteed free of gluten"),
    ("lactose-free-recipe", "Recipe guaranteed free of lactose"),
    ("lean-nutrition", "Low overall fat content"),
    ("low-sodium", "Low salt content"),
    ("minimal-added-sugar", "Little or no added sugar"),
    ("complete-protein", "Rich in complete protein"),
    ("vitamin-rich", "Rich in vitamins"),
    ("antioxidant-compound", "Contains natural antioxidants"),
    ("added-sugar", "Added sugar in the recipe"),
    ("high-salt", "High salt content"),
    ("saturated-fat", "High in saturated fat"),
    ("trans-fat", "Contains industrial trans fat"),
    ("artificial-colorant", "Artificial coloring agents"),
    ("flavor-enhancer", "Artificial flavor enhancers"),
    ("preservative-agent", "Chemical preservatives"),
    ("emulsifier-agent", "Emulsifiers, thickeners or stabilizers"),
    ("low-co2-footprint", "Low CO2 footprint"),
    ("low-water-footprint", "Low water footprint"),
    ("no-toxic-waste", "Production avoids toxic waste"),
    ("recyclable-packaging", "Packaging can be recycled"),
    ("biodegradable-material", "Biodegradable materials"),
    ("low-transport-distance", "Short transport distances"),
    ("domestic-origin", "Produced in the home market"),
    ("short-shelf-chain", "Short farm-to-shelf chain"),
    ("integrated-pest-management", "Integrated pest management"),
    ("no-till-farming", "No-till or regenerative farming"),
    ("aquaculture-sourced", "Aquaculture instead of free fishing"),
    ("animal-welfare-practice", "Animal welfare practices"),
    ("no-factory-farming", "No factory farming"),
    ("no-animal-testing", "No animal testing"),
    ("fair-wages", "Fair wages along the supply chain"),
    ("no-child-labor", "No child labor"),
    ("fair-resource-use", "Fair use of shared resources"),
    ("charity-engagement", "Engages in charity and social programs"),
    ("open-operations", "Openly reported operations"),
    ("third-party-audit", "Independently audited processes"),
    ("quality-award", "Recognized quality award"),
]

_PRODUCT_TAGS = [
    ("vegetable", "Vegetable", {"plant-part", "not-animal-product", "low-co2-footprint"}),
    ("fruit", "Fruit", {"plant-part", "not-animal-product", "vitamin-rich"}),
    ("cereal", "Cereal", {"plant-part", "not-animal-product", "gluten-grain"}),
    ("meat", "Meat", {"meat", "animal-product", "animal-involved"}),
    ("dairy", "Dairy", {"animal-product", "animal-involved", "lactose"}),
    ("contains-eggs", "Contains eggs", {"egg-content", "animal-product", "animal-involved"}),
    ("contains-fish", "Contains fish", {"fish-content", "animal-product", "animal-involved"}),
    ("contains-lactose", "Contains lactose", {"lactose", "animal-product"}),
    ("contains-gluten", "Contains gluten", {"gluten-grain"}),
    ("contains-nuts", "Contains nuts", {"nut-content"}),
    ("contains-soy", "Contains soy", {"soy-content"}),
    ("gluten-free", "Gluten-free", {"gluten-free-recipe"}),
    ("lactose-free", "Lactose-free", {"lactose-free-recipe"}),
    ("low-fat", "Low fat", {"lean-nutrition"}),
    ("low-salt", "Low salt", {"low-sodium"}),
    ("low-sugar", "Low sugar", {"minimal-added-sugar"}),
    ("high-protein", "High protein", {"complete-protein"}),
    ("vitamin-c-10rda", "10% RDA vitamin C", {"vitamin-rich"}),
    ("rich-in-antioxidants", "Rich in antioxidants", {"antioxidant-compound"}),
    ("contains-sugar", "Contains sugar", {"added-sugar"}),
    ("salty", "Salty", {"high-salt"}),
    ("contains-ldl", "Contains LDL-raising fat", {"saturated-fat"}),
    ("contains-additives", "Artificial additives", {"artificial-colorant", "flavor-enhancer"}),
    ("contains-preservatives", "Contains preservatives", {"preservative-agent"}),
    ("contains-emulsifiers", "Contains emulsifiers", {"emulsifier-agent"}),
    ("eco-packaging", "Eco packaging", {"recyclable-packaging", "biodegradable-material"}),
    ("regional", "Regional product", {"domestic-origin", "low-transport-distance"}),
    ("fresh", "Fresh product", {"short-shelf-chain"}),
    ("organic", "Organic farming", {"integrated-pest-management", "no-till-farming"}),
    ("aquaculture-farmed", "Aquaculture farmed", {"aquaculture-sourced"}),
    ("free-range", "Free range", {"animal-welfare-practice", "no-factory-farming"}),
    ("fair-trade-label", "Fair trade label",
     {"fair-wages", "no-child-labor", "fair-resource-use", "open-operations"}),
    ("audited", "Audited sustainability", {"third-party-audit", "open-operations"}),
    ("charity-brand", "Charity-engaged brand", {"charity-engagement"}),
    ("award-winning", "Award winning", {"quality-award"}),
]

_PREFERENCE_TAGS = [
    ("vegetarian-diet", "Vegetarian diet",
     {"plant-part", "not-animal-product"}, {"meat", "fish-content"}),
    ("vegan-diet", "Vegan diet",
     {"plant-part", "not-animal-product"}, {"animal-product", "animal-involved"}),
    ("gluten-free-diet", "Gluten-free diet", {"gluten-free-recipe"}, {"gluten-grain"}),
    ("lactose-free-diet", "Lactose-free diet", {"lactose-free-recipe"}, {"lactose"}),
    ("allergen-free", "Free of main allergens", set(),
     {"egg-content", "nut-content", "soy-content", "gluten-grain", "lactose", "fish-content"}),
    ("low-fat-diet", "Low fat diet", {"lean-nutrition"}, {"saturated-fat", "trans-fat"}),
    ("low-salt-diet", "Low salt diet", {"low-sodium"}, {"high-salt"}),
    ("low-sugar-diet", "Low sugar diet", {"minimal-added-sugar"}, {"added-sugar"}),
    ("high-protein-diet", "High protein diet", {"complete-protein"}, set()),
    ("antioxidant-rich", "Rich in antioxidants",
     {"antioxidant-compound", "vitamin-rich"}, set()),
    ("healthy-diet", "Healthy diet",
     {"vitamin-rich", "complete-protein", "antioxidant-compound"},
     {"added-sugar", "saturated-fat", "trans-fat", "high-salt"}),
    ("no-artificial-additives", "No artificial colors or enhancers", set(),
     {"artificial-colorant", "flavor-enhancer"}),
    ("no-preservatives", "No preservatives", set(), {"preservative-agent"}),
    ("no-emulsifiers", "No emulsifiers or stabilizers", set(), {"emulsifier-agent"}),
    ("recyclability", "Recyclable", {"recyclable-packaging"}, set()),
    ("biodegradability", "Biodegradable", {"biodegradable-material"}, set()),
    ("low-emission-production", "Low-emission production",
     {"low-co2-footprint", "low-water-footprint", "no-toxic-waste"}, set()),
    ("local-sourcing", "Locally sourced",
     {"domestic-origin", "low-transport-distance"}, set()),
    ("sustainable-farming", "Sustainable farming",
     {"integrated-pest-management", "no-till-farming", "aquaculture-sourced"}, set()),
    ("animal-welfare", "Animal welfare",
     {"animal-welfare-practice", "no-factory-farming", "no-animal-testing"}, set()),
    ("fair-trade", "Fair trade",
     {"fair-wages", "no-child-labor", "fair-resource-use"}, set()),
    ("workplace-equality", "Workplace fairness and equality",
     {"fair-wages", "no-child-labor"}, set()),
    ("social-good", "Social good engagement", {"charity-engagement"}, set()),
    ("transparency", "Transparent operations", {"open-operations"}, set()),
    ("audited-sustainability", "Audited sustainability criteria",
     {"third-party-audit"}, set()),
    ("freshness", "Freshness", {"short-shelf-chain"}, set()),
    ("certified-quality", "Certified quality", {"quality-award"}, set()),
]

_PREFERENCES = [
    ("E.1", "environment", False,
     "I prefer products that can be disposed of in an environmentally friendly way.",
     "Recyclable or biodegradable products and packaging.",
     {"recyclability", "biodegradability"}),
    ("E.2", "environment", False,
     "I prefer products produced and distributed in an environmentally friendly way.",
     "Low CO2 and water footprint, no toxic waste along the lifecycle.",
     {"low-emission-production"}),
    ("E.3", "environment", False,
     "I prefer sustainably farmed products.",
     "Farming methods such as integrated pest management or no-till agriculture; "
     "aquaculture instead of free fishing.",
     {"sustainable-farming"}),
    ("Q.1", "quality", False,
     "I prefer award-winning or certified high-quality products.",
     "Officially recognized quality awards and certifications.",
     {"certified-quality"}),
    ("Q.2", "quality", False,
     "I prefer fresh products.",
     "Short chain from production to shelf.",
     {"freshness"}),
    ("Q.3", "quality", False,
     "I prefer locally originated and domestic products.",
     "Country of origin matches the market the product is sold in.",
     {"local-sourcing"}),
    ("S.1", "social", False,
     "I prefer products evaluated by sustainability audits.",
     "Third-party auditing against sustainability criteria.",
     {"audited-sustainability"}),
    ("S.2", "social", False,
     "I prefer products from companies that contribute to the public and social good.",
     "Sponsoring of charities, scholarships, research and social activities.",
     {"social-good"}),
    ("S.3", "social", False,
     "I prefer products from companies that protect animal rights.",
     "No factory farming, no animal testing, no mistreatment.",
     {"animal-welfare"}),
    ("S.4", "social", False,
     "I prefer products from companies with fair and equal workplaces.",
     "Fair wages, no discrimination, no child labor.",
     {"workplace-equality"}),
    ("S.5", "social", False,
     "I prefer products from companies with transparent activities.",
     "Open reporting on the impact and nature of operations.",
     {"transparency"}),
    ("S.6", "social", False,
     "I prefer products from fair-trade companies.",
     "Fair prices for raw materials and fair resource sharing.",
     {"fair-trade"}),
    ("H.1", "health", False,
     "I prefer allergen-free products.",
     "Free of the main food allergens such as eggs, nuts, soy, gluten, "
     "lactose and fish.",
     {"allergen-free"}),
    ("H.2", "health", True,
     "I prefer gluten-free products.",
     "Strictly excludes gluten from wheat and related grains.",
     {"gluten-free-diet"}),
    ("H.3", "health", False,
     "I prefer high-protein products.",
     "Rich in complete protein.",
     {"high-protein-diet"}),
    ("H.4", "health", True,
     "I prefer lactose-free products.",
     "No lactose in the recipe.",
     {"lactose-free-diet"}),
    ("H.5", "health", False,
     "I prefer low-fat products.",
     "Low total fat; avoids saturated and trans fats.",
     {"low-fat-diet"}),
    ("H.6", "health", False,
     "I prefer low-salt products.",
     "Low sodium content.",
     {"low-salt-diet"}),
    ("H.7", "health", False,
     "I prefer low-sugar products.",
     "Little or no added sugar.",
     {"low-sugar-diet"}),
    ("H.8", "health", False,
     "I prefer products rich in antioxidants.",
     "Natural antioxidant compounds and vitamins.",
     {"antioxidant-rich"}),
    ("H.9", "health", False,
     "I prefer products without artificial colors or flavor enhancers.",
     "No artificial coloring or flavor-enhancing additives.",
     {"no-artificial-additives"}),
    ("H.10", "health", False,
     "I prefer products without preservatives.",
     "No chemical preservatives.",
     {"no-preservatives"}),
    ("H.11", "health", False,
     "I prefer products without thickeners, stabilizers or emulsifiers.",
     "No emulsifying, thickening or stabilizing additives.",
     {"no-emulsifiers"}),
    ("H.12", "health", True,
     "I prefer vegan products.",
     "No animal products or animal involvement at all.",
     {"vegan-diet"}),
    ("H.13", "health", True,
     "I prefer vegetarian products.",
     "No meat or fish; dairy, eggs and honey are acceptable.",
     {"vegetarian-diet"}),
]

_OVERRIDES = [
    ("vegetable", "vegetarian-diet", 1.0, "expert"),
    ("contains-eggs", "vegan-diet", -1.0, "expert"),
    ("vitamin-c-10rda", "healthy-diet", 0.25, "expert"),
    ("contains-ldl", "healthy-diet", -0.3, "expert"),
    ("contains-sugar", "animal-welfare", 0.0, "expert"),
]

_PRODUCTS = [
    ("p.apple", "Apple", "produce", "0.79",
     {"fat_g_per_100g": "0.2", "added_sugar_g_per_100g": "0",
      "salt_g_per_100g": "0", "shelf_days": "14", "origin_country": "CH",
      "labels": "regional"},
     {"fruit", "fresh"}),
    ("p.carrots", "Carrot bundle", "produce", "1.20",
     {"fat_g_per_100g": "0.3", "added_sugar_g_per_100g": "0",
      "salt_g_per_100g": "0.1", "shelf_days": "10", "origin_country": "CH",
      "labels": "organic;regional"},
     {"vegetable", "fresh"}),
    ("p.salad-mix", "Orange-lettuce-rice salad", "prepared", "4.50",
     {"fat_g_per_100g": "2.1", "added_sugar_g_per_100g": "2",
      "salt_g_per_100g": "0.6", "shelf_days": "3", "origin_country": "CH",
      "labels": ""},
     {"vegetable", "fruit", "cereal"}),
    ("p.beef", "Beef steak", "meat", "9.90",
     {"fat_g_per_100g": "15", "protein_g_per_100g": "26",
      "salt_g_per_100g": "0.2", "shelf_days": "5", "origin_country": "CH",
      "labels": ""},
     {"meat", "contains-ldl"}),
    ("p.cheese", "Mountain cheese", "dairy", "5.40",
     {"fat_g_per_100g": "32", "protein_g_per_100g": "25",
      "salt_g_per_100g": "1.6", "shelf_days": "40", "origin_country": "CH",
      "labels": "award"},
     {"dairy", "contains-lactose", "contains-ldl"}),
    ("p.eggs", "Free-range eggs", "dairy", "3.60",
     {"fat_g_per_100g": "9", "protein_g_per_100g": "13",
      "salt_g_per_100g": "0.3", "shelf_days": "21", "origin_country": "CH",
      "labels": "free-range"},
     {"contains-eggs", "free-range"}),
    ("p.tofu", "Organic tofu", "pantry", "2.80",
     {"fat_g_per_100g": "4.5", "protein_g_per_100g": "12",
      "salt_g_per_100g": "0.1", "shelf_days": "30", "origin_country": "DE",
      "labels": "organic;vegan"},
     {"contains-soy", "gluten-free"}),
    ("p.bread", "Whole-grain bread", "bakery", "3.20",
     {"fat_g_per_100g": "1.8", "added_sugar_g_per_100g": "1",
      "salt_g_per_100g": "1.1", "protein_g_per_100g": "8",
      "shelf_days": "4", "origin_country": "CH", "labels": ""},
     {"cereal", "contains-gluten"}),
    ("p.gf-bread", "Gluten-free bread", "bakery", "4.80",
     {"fat_g_per_100g": "2.5", "added_sugar_g_per_100g": "2",
      "salt_g_per_100g": "0.9", "shelf_days": "6", "origin_country": "CH",
      "labels": "gluten-free"},
     {"gluten-free", "eco-packaging"}),
    ("p.chocolate", "Chocolate bar", "snacks", "2.10",
     {"fat_g_per_100g": "31", "added_sugar_g_per_100g": "45",
      "salt_g_per_100g": "0.1", "shelf_days": "180", "origin_country": "GH",
      "labels": "fair-trade"},
     {"contains-sugar", "contains-emulsifiers", "contains-nuts"}),
    ("p.cola", "Cola", "beverages", "1.50",
     {"fat_g_per_100g": "0", "added_sugar_g_per_100g": "35",
      "salt_g_per_100g": "0", "shelf_days": "240", "origin_country": "US",
      "labels": ""},
     {"contains-sugar", "contains-additives", "contains-preservatives"}),
    ("p.orange-juice", "Orange juice", "beverages", "2.40",
     {"fat_g_per_100g": "0.2", "added_sugar_g_per_100g": "0",
      "salt_g_per_100g": "0", "shelf_days": "12", "origin_country": "ES",
      "labels": ""},
     {"fruit", "vitamin-c-10rda"}),
    ("p.yogurt", "Natural yogurt", "dairy", "1.80",
     {"fat_g_per_100g": "3.5", "added_sugar_g_per_100g": "4",
      "salt_g_per_100g": "0.1", "protein_g_per_100g": "5",
      "shelf_days": "14", "origin_country": "CH", "labels": "free-range"},
     {"dairy", "contains-lactose"}),
    ("p.chips", "Salted chips", "snacks", "2.60",
     {"fat_g_per_100g": "30", "added_sugar_g_per_100g": "1",
      "salt_g_per_100g": "1.8", "shelf_days": "120", "origin_country": "CH",
      "labels": ""},
     {"vegetable", "salty", "contains-additives"}),
    ("p.lentils", "Dried lentils", "pantry", "2.20",
     {"fat_g_per_100g": "1.1", "added_sugar_g_per_100g": "0",
      "salt_g_per_100g": "0", "protein_g_per_100g": "24",
      "shelf_days": "365", "origin_country": "CA", "labels": "vegan"},
     {"vegetable", "eco-packaging"}),
    ("p.salmon", "Smoked salmon", "fish", "7.90",
     {"fat_g_per_100g": "11", "protein_g_per_100g": "22",
      "salt_g_per_100g": "2.9", "shelf_days": "9", "origin_country": "NO",
      "labels": "aquaculture"},
     {"contains-fish", "aquaculture-farmed", "audited"}),
    ("p.water", "Mineral water", "beverages", "0.90",
     {"fat_g_per_100g": "0", "added_sugar_g_per_100g": "0",
      "salt_g_per_100g": "0", "shelf_days": "365", "origin_country": "CH",
      "labels": ""},
     {"eco-packaging", "regional"}),
    ("p.coffee", "Ground coffee", "beverages", "6.50",
     {"fat_g_per_100g": "0.5", "added_sugar_g_per_100g": "0",
      "salt_g_per_100g": "0", "shelf_days": "365", "origin_country": "CO",
      "labels": "fair-trade;organic"},
     {"rich-in-antioxidants", "charity-brand", "award-winning"}),
]

_RULES = [
    ("r.low-fat", "low-fat", [("fat_g_per_100g", "le", "3")]),
    ("r.low-salt", "low-salt", [("salt_g_per_100g", "le", "0.3")]),
    ("r.low-sugar", "low-sugar", [("added_sugar_g_per_100g", "le", "5")]),
    ("r.salty", "salty", [("salt_g_per_100g", "ge", "1.5")]),
    ("r.sugary", "contains-sugar", [("added_sugar_g_per_100g", "ge", "20")]),
    ("r.high-protein", "high-protein", [("protein_g_per_100g", "ge", "12")]),
    ("r.fresh", "fresh", [("shelf_days", "le", "7")]),
    ("r.regional", "regional", [("origin_country", "eq", "CH")]),
    ("r.organic-label", "organic", [("labels", "has_label", "organic")]),
    ("r.fair-trade-label", "fair-trade-label", [("labels", "has_label", "fair-trade")]),
    ("r.gluten-free-label", "gluten-free", [("labels", "has_label", "gluten-free")]),
    ("r.free-range-label", "free-range", [("labels", "has_label", "free-range")]),
    ("r.aquaculture-label", "aquaculture-farmed", [("labels", "has_label", "aquaculture")]),
    ("r.award-label", "award-winning", [("labels", "has_label", "award")]),
]


def seed_rules() -> list[AssignmentRule]:
    out = []
    for rule_id, tag_id, conditions in _RULES:
        predicates = tuple(
            AttributePredicate(
                attribute=attr,
                op=op,
                value=value if op in STRING_OPS else parse_scalar(value),
            )
            for attr, op, value in conditions
        )
        out.append(AssignmentRule(id=rule_id, product_tag_id=tag_id, conditions=predicates))
    return out


def seed_ontology(*, assign: bool = True) -> Ontology:
    """Build the built-in knowledge base.

    With ``assign`` (the default) the attribute rules have already been
    applied to the catalog, matching what a freshly ingested store looks
    like.
    """
    ontology = Ontology(
        concepts=[PrimitiveConcept(cid, label) for cid, label in _CONCEPTS],
        product_tags=[
            ProductTag(tid, name, frozenset(concepts))
            for tid, name, concepts in _PRODUCT_TAGS
        ],
        preference_tags=[
            PreferenceTag(tid, name, frozenset(support), frozenset(oppose))
            for tid, name, support, oppose in _PREFERENCE_TAGS
        ],
        preferences=[
            Preference(
                id=pid,
                statement=statement,
                description=description,
                category=category,
                tag_ids=frozenset(tag_ids),
                strict=strict,
            )
            for pid, category, strict, statement, description, tag_ids in _PREFERENCES
        ],
        products=[
            Product(
                id=pid,
                name=name,
                category_id=category,
                unit_price=Decimal(price),
                attributes={k: parse_scalar(v) for k, v in attributes.items()},
                tag_ids=frozenset(tag_ids),
            )
            for pid, name, category, price, attributes, tag_ids in _PRODUCTS
        ],
        overrides=[
            AssociationOverride(z, w, score, source)
            for z, w, score, source in _OVERRIDES
        ],
    )
    if assign:
        ontology = assign_all(ontology, seed_rules())
    return ontology

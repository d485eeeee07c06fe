"""Knowledge-base persistence: canonical JSON documents and CSV catalogs.

The on-disk document is versioned, UTF-8 JSON with every collection
sorted by id and every number carried as a decimal string, so equal
ontologies serialize to identical bytes on any platform.  That byte
stability is what makes the content hash usable as a cache key.
"""

from __future__ import annotations

import csv
import hashlib
import json
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from pathlib import Path
from typing import Optional, Sequence, Union

from .ontology import (
    AssociationOverride,
    Finding,
    Ontology,
    OntologyError,
    Preference,
    PreferenceTag,
    PrimitiveConcept,
    Product,
    ProductTag,
    ValidationReport,
    validate_ontology,
)
from .rules import AssignmentRule, assign_all, load_rules, parse_scalar

SCHEMA_VERSION = "1"

#: Finding kinds that make a document unusable rather than just suspect.
HARD_ERROR_KINDS = frozenset({"dangling_concept", "dangling_tag"})


class ParseError(ValueError):
    """Unreadable document or catalog row."""


class IntegrityError(ValueError):
    """Document references identifiers that do not exist."""


@dataclass(frozen=True)
class LoadedOntology:
    ontology: Ontology
    rules: tuple[AssignmentRule, ...]
    report: ValidationReport
    version: str


def canonical_document(
    ontology: Ontology, rules: Sequence[AssignmentRule] = ()
) -> dict:
    """Plain-data form of the knowledge base with deterministic ordering."""
    return {
        "schema_version": SCHEMA_VERSION,
        "concepts": [
            {"id": c.id, "label": c.label} for c in ontology.concepts.values()
        ],
        "product_tags": [
            {"id": t.id, "name": t.name, "concepts": sorted(t.concepts)}
            for t in ontology.product_tags.values()
        ],
        "preference_tags": [
            {
                "id": t.id,
                "name": t.name,
                "support_concepts": sorted(t.support_concepts),
                "oppose_concepts": sorted(t.oppose_concepts),
            }
            for t in ontology.preference_tags.values()
        ],
        "preferences": [
            {
                "id": p.id,
                "statement": p.statement,
                "description": p.description,
                "category": p.category,
                "tag_ids": sorted(p.tag_ids),
                "strict": p.strict,
            }
            for p in ontology.preferences.values()
        ],
        "products": [
            {
                "id": p.id,
                "name": p.name,
                "category_id": p.category_id,
                "unit_price": None if p.unit_price is None else str(p.unit_price),
                "attributes": {
                    k: str(v) for k, v in sorted(p.attributes.items())
                },
                "tag_ids": sorted(p.tag_ids),
            }
            for p in ontology.products.values()
        ],
        "overrides": [
            {
                "product_tag_id": o.product_tag_id,
                "preference_tag_id": o.preference_tag_id,
                "score": repr(o.score),
                "source": o.source,
            }
            for o in ontology.overrides.values()
        ],
        "rules": [
            {
                "id": r.id,
                "product_tag_id": r.product_tag_id,
                "conditions": [
                    {"attribute": c.attribute, "op": c.op, "value": str(c.value)}
                    for c in r.conditions
                ],
            }
            for r in sorted(rules, key=lambda r: r.id)
        ],
    }


def canonical_bytes(ontology: Ontology, rules: Sequence[AssignmentRule] = ()) -> bytes:
    text = json.dumps(
        canonical_document(ontology, rules), indent=2, ensure_ascii=False
    )
    return (text + "\n").encode("utf-8")


def ontology_version(ontology: Ontology, rules: Sequence[AssignmentRule] = ()) -> str:
    """Content hash of the canonical serialization."""
    return hashlib.sha256(canonical_bytes(ontology, rules)).hexdigest()[:16]


def save_ontology(
    ontology: Ontology,
    path: Union[str, Path],
    rules: Sequence[AssignmentRule] = (),
) -> None:
    Path(path).write_bytes(canonical_bytes(ontology, rules))


def _parse_score(raw: object, context: str) -> float:
    try:
        return float(str(raw))
    except ValueError as exc:
        raise ParseError(f"{context}: bad number {raw!r}") from exc


def _parse_document(doc: dict) -> tuple[Ontology, tuple[AssignmentRule, ...]]:
    version = doc.get("schema_version")
    if version != SCHEMA_VERSION:
        raise ParseError(f"unrecognized schema_version {version!r}")
    try:
        concepts = [
            PrimitiveConcept(id=c["id"], label=c.get("label", ""))
            for c in doc.get("concepts", ())
        ]
        product_tags = [
            ProductTag(
                id=t["id"], name=t.get("name", t["id"]),
                concepts=frozenset(t.get("concepts", ())),
            )
            for t in doc.get("product_tags", ())
        ]
        preference_tags = [
            PreferenceTag(
                id=t["id"],
                name=t.get("name", t["id"]),
                support_concepts=frozenset(t.get("support_concepts", ())),
                oppose_concepts=frozenset(t.get("oppose_concepts", ())),
            )
            for t in doc.get("preference_tags", ())
        ]
        preferences = [
            Preference(
                id=p["id"],
                statement=p.get("statement", ""),
                description=p.get("description", ""),
                category=p["category"],
                tag_ids=frozenset(p.get("tag_ids", ())),
                strict=bool(p.get("strict", False)),
            )
            for p in doc.get("preferences", ())
        ]
        products = []
        for p in doc.get("products", ()):
            price = p.get("unit_price")
            attributes = {
                k: parse_scalar(str(v)) for k, v in p.get("attributes", {}).items()
            }
            products.append(
                Product(
                    id=p["id"],
                    name=p.get("name", p["id"]),
                    category_id=p.get("category_id", ""),
                    unit_price=None if price in (None, "") else Decimal(str(price)),
                    attributes=attributes,
                    tag_ids=frozenset(p.get("tag_ids", ())),
                )
            )
        overrides = [
            AssociationOverride(
                product_tag_id=o["product_tag_id"],
                preference_tag_id=o["preference_tag_id"],
                score=_parse_score(o["score"], "override"),
                source=o.get("source", "expert"),
            )
            for o in doc.get("overrides", ())
        ]
        rules = tuple(load_rules(doc.get("rules", ())))
    except (KeyError, TypeError, InvalidOperation, OntologyError) as exc:
        raise ParseError(f"malformed ontology document: {exc}") from exc
    try:
        ontology = Ontology(
            concepts, product_tags, preference_tags, preferences, products, overrides
        )
    except OntologyError as exc:
        raise ParseError(str(exc)) from exc
    return ontology, rules


def _integrity_failures(
    ontology: Ontology, rules: Sequence[AssignmentRule], report: ValidationReport
) -> list[str]:
    failures = [
        f.message for f in report.findings if f.kind in HARD_ERROR_KINDS
    ]
    failures.extend(
        f"rule {r.id!r} references unknown tag {r.product_tag_id!r}"
        for r in rules
        if r.product_tag_id not in ontology.product_tags
    )
    return failures


def load_ontology(path: Union[str, Path]) -> LoadedOntology:
    """Load, validate and version a knowledge-base document.

    Referential-integrity failures raise; everything else (bounds,
    overlaps, placeholders) stays in the attached report.
    """
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise ParseError(f"{path}: top level must be an object")
    ontology, rules = _parse_document(doc)
    report = validate_ontology(ontology)
    failures = _integrity_failures(ontology, rules, report)
    if failures:
        raise IntegrityError("; ".join(failures))
    return LoadedOntology(
        ontology=ontology,
        rules=rules,
        report=report,
        version=ontology_version(ontology, rules),
    )


CSV_FIXED_COLUMNS = ("id", "name", "category", "unit_price")
ATTRIBUTE_PREFIX = "attr:"


def read_catalog_csv(path: Union[str, Path]) -> list[Product]:
    """Parse a product catalog CSV into tagless product records.

    Columns: id, name, category, unit_price, then any number of
    ``attr:``-prefixed attribute columns.  Numeric-looking attribute
    values become decimals, everything else stays a string.
    """
    products: list[Product] = []
    seen: dict[str, int] = {}
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.DictReader(handle)
        header = reader.fieldnames or []
        missing = [c for c in CSV_FIXED_COLUMNS if c not in header]
        if missing:
            raise ParseError(f"{path}: missing columns {missing}")
        attr_columns = [c for c in header if c.startswith(ATTRIBUTE_PREFIX)]
        for row_number, row in enumerate(reader, start=2):
            pid = (row.get("id") or "").strip()
            if not pid:
                raise ParseError(f"{path}:{row_number}: empty product id")
            if pid in seen:
                raise ParseError(
                    f"{path}:{row_number}: duplicate id {pid!r} "
                    f"(first seen on line {seen[pid]})"
                )
            seen[pid] = row_number
            price_raw = (row.get("unit_price") or "").strip()
            price: Optional[Decimal] = None
            if price_raw:
                try:
                    price = Decimal(price_raw)
                except InvalidOperation as exc:
                    raise ParseError(
                        f"{path}:{row_number}: bad unit_price {price_raw!r}"
                    ) from exc
                if price < 0:
                    raise ParseError(
                        f"{path}:{row_number}: negative unit_price {price_raw!r}"
                    )
            attributes = {}
            for column in attr_columns:
                raw = row.get(column)
                if raw is None or raw == "":
                    continue
                attributes[column[len(ATTRIBUTE_PREFIX):]] = parse_scalar(raw)
            products.append(
                Product(
                    id=pid,
                    name=(row.get("name") or "").strip(),
                    category_id=(row.get("category") or "").strip(),
                    unit_price=price,
                    attributes=attributes,
                )
            )
    return products


def ingest_products(
    csv_path: Union[str, Path],
    ontology: Ontology,
    rules: Sequence[AssignmentRule] = (),
) -> Ontology:
    """Merge a catalog CSV into the ontology and re-run tag assignment.

    Incoming records replace same-id products (newer wins); products
    absent from the file are kept untouched.
    """
    incoming = {p.id: p for p in read_catalog_csv(csv_path)}
    merged = dict(ontology.products)
    merged.update(incoming)
    return assign_all(ontology.with_products(merged.values()), rules)


def report_lines(report: ValidationReport) -> list[str]:
    return [f"{f.severity}: {f.message}" for f in report.findings]


def finding_to_dict(finding: Finding) -> dict:
    return {
        "severity": finding.severity,
        "kind": finding.kind,
        "message": finding.message,
        "subject": list(finding.subject),
        "value": finding.value,
    }

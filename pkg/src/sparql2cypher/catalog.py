"""Relationship-type / property-key partition of predicate IRIs.

Every triple pattern is classified against this catalog before any Cypher
is built, so the two sets must be disjoint and must not contain rdf:type.
"""

from __future__ import annotations

import enum
import json
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path

from .errors import CatalogError, MixedPredicate, ParseError, UnknownPredicate
from .rdf_model import RDF_TYPE, RdfGraph, RdfTerm
from .sparql.ast import PathExpr, TriplePattern, Var


class TripleKind(enum.Enum):
    TYPE = "Type"
    VAR_EDGE = "VarEdge"
    IRI_EDGE = "IRIEdge"
    PROPERTY = "Property"


@dataclass(frozen=True)
class SchemaCatalog:
    relationship_types: frozenset[str] = field(default_factory=frozenset)
    property_keys: frozenset[str] = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "relationship_types", frozenset(self.relationship_types))
        object.__setattr__(self, "property_keys", frozenset(self.property_keys))
        both = self.relationship_types & self.property_keys
        if both:
            raise CatalogError("IRI(s) listed as both relationship type and property key: " + ", ".join(sorted(both)))
        if RDF_TYPE in self.relationship_types or RDF_TYPE in self.property_keys:
            raise CatalogError("rdf:type cannot be a relationship type or property key")

    def to_json(self) -> str:
        return json.dumps(
            {
                "relationship_types": sorted(self.relationship_types),
                "property_keys": sorted(self.property_keys),
            },
            indent=2,
        ) + "\n"

    @classmethod
    def from_json(cls, text: str) -> SchemaCatalog:
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"catalog is not valid JSON: {exc.msg}", exc.lineno, exc.colno) from None
        if not isinstance(data, dict):
            raise ParseError("catalog must be a JSON object")
        out = {}
        for key in ("relationship_types", "property_keys"):
            values = data.get(key, [])
            if not isinstance(values, list) or not all(isinstance(v, str) and v for v in values):
                raise ParseError(f"catalog key {key!r} must be an array of IRI strings")
            out[key] = frozenset(values)
        return cls(out["relationship_types"], out["property_keys"])


def derive_catalog(g: RdfGraph, mixed: str | None = None) -> SchemaCatalog:
    """Split the non-rdf:type predicates of `g` by the kind of their objects.

    `mixed` is None (raise :class:`MixedPredicate`), ``"edge"`` or
    ``"property"`` to force predicates seen with both object kinds.
    """
    kinds: dict[str, set[bool]] = defaultdict(set)
    for t in g:
        if t.predicate.lexical == RDF_TYPE:
            continue
        kinds[t.predicate.lexical].add(t.object.is_literal)
    rel, prop, bad = set(), set(), set()
    for p, seen in kinds.items():
        if seen == {True}:
            prop.add(p)
        elif seen == {False}:
            rel.add(p)
        else:
            bad.add(p)
    if bad:
        if mixed == "edge":
            rel |= bad
        elif mixed == "property":
            prop |= bad
        elif mixed is None:
            raise MixedPredicate(bad)
        else:
            raise ValueError(f"mixed-predicate policy must be 'edge' or 'property', not {mixed!r}")
    return SchemaCatalog(frozenset(rel), frozenset(prop))


def classify_iri(p: str, cat: SchemaCatalog) -> TripleKind:
    if p == RDF_TYPE:
        return TripleKind.TYPE
    if p in cat.relationship_types:
        return TripleKind.IRI_EDGE
    if p in cat.property_keys:
        return TripleKind.PROPERTY
    raise UnknownPredicate(p)


def classify_triple(tp: TriplePattern, cat: SchemaCatalog) -> TripleKind:
    if isinstance(tp.pp, PathExpr):
        raise ValueError("property paths are classified step by step by the translator")
    if isinstance(tp.pp, Var):
        return TripleKind.VAR_EDGE
    assert isinstance(tp.pp, RdfTerm)
    return classify_iri(tp.pp.lexical, cat)


def load_catalog(path: str | Path) -> SchemaCatalog:
    return SchemaCatalog.from_json(Path(path).read_text(encoding="utf-8"))


def save_catalog(cat: SchemaCatalog, path: str | Path) -> None:
    Path(path).write_text(cat.to_json(), encoding="utf-8")

"""In-memory labelled property graph and the RDF-to-property-graph data mapping."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Mapping

from .catalog import SchemaCatalog, TripleKind, classify_iri
from .errors import GraphError
from .rdf_model import RDF_TYPE, PrefixMap, RdfGraph, RdfTerm, literal_value

URI_KEY = "uri"


class NodeId(str):
    """Identifier of a node; a str so it prints and compares naturally."""

    __slots__ = ()

    def __repr__(self):
        return f"NodeId({str(self)!r})"


class RelId(str):
    __slots__ = ()

    def __repr__(self):
        return f"RelId({str(self)!r})"


class VocabName(str):
    """A label or relationship-type display name returned by labels()/type()."""

    __slots__ = ()

    def __repr__(self):
        return f"VocabName({str(self)!r})"


@dataclass(frozen=True)
class Node:
    id: NodeId
    labels: tuple[str, ...] = ()
    properties: Mapping[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class Relationship:
    id: RelId
    src: NodeId
    rel_type: str
    dst: NodeId
    properties: Mapping[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class PropertyGraph:
    """``(N, R, st, L, T, P)`` with insertion-ordered nodes and relationships.

    `vocabulary` maps the display names used for labels, types and keys
    back to the IRIs they abbreviate.
    """

    nodes: tuple[Node, ...] = ()
    relationships: tuple[Relationship, ...] = ()
    vocabulary: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        ids = [n.id for n in self.nodes]
        if len(set(ids)) != len(ids):
            raise GraphError("duplicate node id")
        rids = [r.id for r in self.relationships]
        if len(set(rids)) != len(rids):
            raise GraphError("duplicate relationship id")
        known = set(ids)
        for r in self.relationships:
            if r.src not in known or r.dst not in known:
                raise GraphError(f"relationship {r.id} has an endpoint outside the graph")

    @cached_property
    def node(self) -> dict[NodeId, Node]:
        return {n.id: n for n in self.nodes}

    @cached_property
    def rel(self) -> dict[RelId, Relationship]:
        return {r.id: r for r in self.relationships}

    @cached_property
    def outgoing(self) -> dict[NodeId, list[Relationship]]:
        idx = defaultdict(list)
        for r in self.relationships:
            idx[r.src].append(r)
        return idx

    @cached_property
    def incoming(self) -> dict[NodeId, list[Relationship]]:
        idx = defaultdict(list)
        for r in self.relationships:
            idx[r.dst].append(r)
        return idx

    @cached_property
    def by_label(self) -> dict[str, list[NodeId]]:
        idx = defaultdict(list)
        for n in self.nodes:
            for label in n.labels:
                idx[label].append(n.id)
        return idx

    def st(self, rid: RelId) -> tuple[NodeId, NodeId]:
        r = self.rel[rid]
        return r.src, r.dst

    def labels(self, nid: NodeId) -> tuple[str, ...]:
        return self.node[nid].labels

    def rel_type(self, rid: RelId) -> str:
        return self.rel[rid].rel_type

    def prop(self, element_id: str, key: str):
        if isinstance(element_id, RelId):
            return self.rel[element_id].properties.get(key)
        return self.node[element_id].properties.get(key)

    def iri_of(self, name: str) -> str:
        return self.vocabulary.get(name, name)

    def dump(self) -> str:
        """Line-oriented listing of nodes then relationships."""
        lines = []
        for n in self.nodes:
            labels = "".join(":" + label for label in n.labels)
            props = ", ".join(f"{k}: {v!r}" for k, v in n.properties.items())
            lines.append(f"({n.id}{labels} {{{props}}})")
        for r in self.relationships:
            lines.append(f"({r.src})-[{r.id}:{r.rel_type}]->({r.dst})")
        return "\n".join(lines) + ("\n" if lines else "")


def rdf_to_pg(
    g: RdfGraph, cat: SchemaCatalog, prefixes: Mapping[str, str] | PrefixMap | None = None
) -> PropertyGraph:
    """Load RDF triples into a property graph, neosemantics style.

    Every subject and every resource object of a relationship triple
    becomes a node carrying its IRI (or blank-node label) as ``uri``;
    ``rdf:type`` objects become labels, literal triples become
    properties and the remaining resource triples become relationships.
    Display names for labels, types and keys come from `prefixes`
    (default: the graph's own prefix map).  A predicate with several
    values on one node is stored as a list.
    """
    pmap = prefixes if isinstance(prefixes, PrefixMap) else PrefixMap(g.prefix_map).merged(prefixes or {})
    vocab: dict[str, str] = {URI_KEY: URI_KEY}

    def name_of(iri_value: str) -> str:
        display = pmap.shorten(iri_value)
        if vocab.setdefault(display, iri_value) != iri_value:
            raise GraphError(f"display name {display} is ambiguous")
        return display

    order: dict[RdfTerm, NodeId] = {}

    def node_id(term: RdfTerm) -> NodeId:
        if term not in order:
            order[term] = NodeId(f"n{len(order) + 1}")
        return order[term]

    labels: dict[NodeId, list[str]] = defaultdict(list)
    props: dict[NodeId, dict[str, Any]] = defaultdict(dict)
    rels: list[Relationship] = []
    for t in g:
        s = node_id(t.subject)
        p = t.predicate.lexical
        kind = classify_iri(p, cat)
        if kind is TripleKind.TYPE:
            if t.object.is_literal:
                raise GraphError(f"rdf:type with literal object {t.object}")
            label = name_of(t.object.lexical)
            if label not in labels[s]:
                labels[s].append(label)
        elif kind is TripleKind.PROPERTY:
            if not t.object.is_literal:
                raise GraphError(f"property key {p} used with resource object {t.object}")
            key = name_of(p)
            if key == URI_KEY:
                raise GraphError("a predicate displays as 'uri', which is reserved for node IRIs")
            value = literal_value(t.object)
            if key in props[s]:
                old = props[s][key]
                props[s][key] = (old if isinstance(old, list) else [old]) + [value]
            else:
                props[s][key] = value
        else:
            if t.object.is_literal:
                raise GraphError(f"relationship type {p} used with literal object {t.object}")
            o = node_id(t.object)
            rels.append(Relationship(RelId(f"r{len(rels) + 1}"), s, name_of(p), o))
    nodes = tuple(
        Node(nid, tuple(labels.get(nid, ())), {URI_KEY: term.lexical, **props.get(nid, {})})
        for term, nid in order.items()
    )
    return PropertyGraph(nodes, tuple(rels), vocab)


def partition_counts(pg: PropertyGraph) -> dict[str, int]:
    """Relationship, property-value and label-assignment totals (``uri`` excluded)."""
    n_props = 0
    for n in pg.nodes:
        for k, v in n.properties.items():
            if k != URI_KEY:
                n_props += len(v) if isinstance(v, list) else 1
    return {
        "relationships": len(pg.relationships),
        "properties": n_props,
        "labels": sum(len(n.labels) for n in pg.nodes),
    }


def triple_partition(g: RdfGraph, cat: SchemaCatalog) -> dict[str, int]:
    """The same totals counted directly on the RDF side."""
    out = {"relationships": 0, "properties": 0, "labels": 0}
    for t in g:
        if t.predicate.lexical == RDF_TYPE:
            out["labels"] += 1
        elif t.predicate.lexical in cat.relationship_types:
            out["relationships"] += 1
        elif t.predicate.lexical in cat.property_keys:
            out["properties"] += 1
    return out

"""Graph-relational SPARQL evaluation and the interpretation functions.

:func:`eval_algebra` evaluates a graph pattern to a graph relation whose
values are RDF terms; :func:`zeta` reads such a relation as a bag of
mappings; :func:`xi` turns a relation produced over a property graph
(node and relationship ids) into the URI space of the RDF graph.
"""

from __future__ import annotations

from collections import Counter
from typing import Mapping

from ..catalog import SchemaCatalog, TripleKind, classify_triple
from ..errors import AmbiguousRelationship, UnsupportedFeature
from ..pg_model import URI_KEY, NodeId, PropertyGraph, RelId, VocabName
from ..rdf_model import PrefixMap, RdfGraph, RdfTerm, bnode, iri, literal
from ..sparql import ast as s
from .relation import Attr, GraphRelation, join, left_join, outer_union
from .sparql_eval import holds, match_triple


def _display(el, prefixes: PrefixMap) -> str:
    if isinstance(el, s.Var):
        return el.name
    if el.is_iri:
        return prefixes.shorten(el.lexical)
    return str(el)


def _attr(el, prefixes: PrefixMap) -> Attr:
    return Attr(_display(el, prefixes), el.name if isinstance(el, s.Var) else None)


def gen_pr(tp: s.TriplePattern, cat: SchemaCatalog, prefixes: Mapping[str, str] | None = None) -> list[tuple[str, Attr]]:
    """Projection/rename list over the raw ``(s, p, o)`` columns of a triple pattern."""
    pm = prefixes if isinstance(prefixes, PrefixMap) else PrefixMap(prefixes or {})
    columns = [("s", _attr(tp.sp, pm))]
    if isinstance(tp.pp, s.PathExpr):
        columns.append(("o", _attr(tp.op, pm)))
        return columns
    kind = classify_triple(tp, cat)
    if kind in (TripleKind.IRI_EDGE, TripleKind.VAR_EDGE):
        if tp.pp != tp.sp:
            columns.append(("p", _attr(tp.pp, pm)))
            columns.append(("o", _attr(tp.op, pm)))
    elif kind is TripleKind.TYPE:
        if isinstance(tp.op, s.Var):
            columns.append(("o", Attr(f"L({_display(tp.sp, pm)})", tp.op.name)))
    elif isinstance(tp.op, s.Var):
        columns.append(("o", Attr(f"{_display(tp.sp, pm)}.{_display(tp.pp, pm)}", tp.op.name)))
    return columns


def eval_triple(
    tp: s.TriplePattern,
    g: RdfGraph,
    cat: SchemaCatalog,
    prefixes: Mapping[str, str] | None = None,
    edge_only_predicate_vars: bool = True,
) -> GraphRelation:
    """Match `tp` into an ``(s, p, o)`` relation, then project and rename it."""
    columns = gen_pr(tp, cat, prefixes)
    rows = []
    for mu in match_triple(tp, g, None, edge_only_predicate_vars):
        raw = {
            "s": mu.get(tp.sp.name) if isinstance(tp.sp, s.Var) else tp.sp,
            "p": mu.get(tp.pp.name) if isinstance(tp.pp, s.Var) else tp.pp,
            "o": mu.get(tp.op.name) if isinstance(tp.op, s.Var) else tp.op,
        }
        rows.append(tuple(raw[col] for col, _ in columns))
    # a variable repeated in one pattern yields one attribute
    keep, seen = [], set()
    for n, (_, a) in enumerate(columns):
        if a.key not in seen:
            seen.add(a.key)
            keep.append(n)
    return GraphRelation(tuple(columns[n][1] for n in keep), [tuple(r[n] for n in keep) for r in rows])


def row_mapping(rel: GraphRelation, row: tuple) -> dict:
    return {a.var: v for a, v in zip(rel.schema, row) if a.var is not None and v is not None}


def eval_algebra(
    gp: s.GraphPattern,
    g: RdfGraph,
    cat: SchemaCatalog,
    prefixes: Mapping[str, str] | None = None,
    edge_only_predicate_vars: bool = True,
) -> GraphRelation:
    """Evaluate a graph pattern with joins, left outer joins, outer unions and selections."""

    def ev(p):
        return eval_algebra(p, g, cat, prefixes, edge_only_predicate_vars)

    if isinstance(gp, s.Bgp):
        out = None
        for tp in gp.triples:
            r = eval_triple(tp, g, cat, prefixes, edge_only_predicate_vars)
            out = r if out is None else join(out, r)
        return out
    if isinstance(gp, s.AndPattern):
        return join(ev(gp.left), ev(gp.right))
    if isinstance(gp, s.UnionPattern):
        return outer_union(ev(gp.left), ev(gp.right))
    if isinstance(gp, s.FilterPattern):
        r = ev(gp.inner)
        return GraphRelation(r.schema, [row for row in r.rows if holds(gp.cond, row_mapping(r, row))])
    if isinstance(gp, s.OptPattern):
        right, cond = gp.right, None
        if isinstance(right, s.FilterPattern):
            right, cond = right.inner, right.cond
        left_r, right_r = ev(gp.left), ev(right)
        if cond is None:
            return left_join(left_r, right_r)
        merged = join(GraphRelation(left_r.schema), GraphRelation(right_r.schema))

        def check(named: dict) -> bool:
            mu = {a.var: named[a.name] for a in merged.schema if a.var and named[a.name] is not None}
            return holds(cond, mu)

        return left_join(left_r, right_r, check)
    raise UnsupportedFeature(f"graph pattern {type(gp).__name__}")


def zeta(r: GraphRelation) -> list[dict]:
    """Read each row as a mapping over its variable attributes, dropping NULLs."""
    return [row_mapping(r, row) for row in r.rows]


def _term_of_uri(u: str) -> RdfTerm:
    return bnode(u) if u.startswith("_:") else iri(u)


def xi(r: GraphRelation, pg: PropertyGraph) -> GraphRelation:
    """Move a property-graph relation into URI space.

    Relationship columns are renamed to their (single) relationship type,
    node ids become their ``uri``, relationship ids become their type IRI,
    label and type names become IRIs and plain values become literals.
    """
    pairs = Counter((rel.src, rel.rel_type, rel.dst) for rel in pg.relationships)

    def rel_term(rid: RelId) -> RdfTerm:
        rel = pg.rel[rid]
        if pairs[(rel.src, rel.rel_type, rel.dst)] > 1:
            raise AmbiguousRelationship(rel.src, rel.rel_type, rel.dst)
        return iri(pg.iri_of(rel.rel_type))

    def conv(v):
        if v is None:
            return None
        if isinstance(v, NodeId):
            return _term_of_uri(pg.node[v].properties[URI_KEY])
        if isinstance(v, RelId):
            return rel_term(v)
        if isinstance(v, VocabName):
            return iri(pg.iri_of(v))
        if isinstance(v, (list, tuple)):
            # labels(x) of a single-label node answers `?x a ?c` with one class
            if len(v) == 1 and isinstance(v[0], VocabName):
                return conv(v[0])
            return tuple(conv(x) for x in v)
        return literal(v)

    schema = []
    for n, a in enumerate(r.schema):
        types = {pg.rel_type(row[n]) for row in r.rows if isinstance(row[n], RelId)}
        only_rels = all(row[n] is None or isinstance(row[n], RelId) for row in r.rows)
        if len(types) == 1 and only_rels:
            schema.append(Attr(next(iter(types)), a.var))
        else:
            schema.append(a)
    return GraphRelation(tuple(schema), [tuple(conv(v) for v in row) for row in r.rows])

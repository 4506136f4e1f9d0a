from __future__ import annotations

import pytest
from conftest import GOLDEN, SUITE

from sparql2cypher.errors import ParseError, UnsupportedFeature
from sparql2cypher.rdf_model import RDF_TYPE, XSD, iri, literal
from sparql2cypher.sparql.ast import (
    AggFn,
    Aggregate,
    AndPattern,
    BoolAnd,
    Bgp,
    Compare,
    Const,
    ElementKind,
    FilterPattern,
    OptPattern,
    OrderKey,
    PathExpr,
    PathKind,
    TriplePattern,
    UnionPattern,
    Var,
    element_kind,
)
from sparql2cypher.sparql.parser import parse_sparql, to_sparql

P = "PREFIX : <http://bsbm.org/> PREFIX b: <http://b/> "
V = "http://bsbm.org/"


def test_a_becomes_rdf_type():
    q = parse_sparql(P + "SELECT ?x WHERE { ?x a :Review }")
    assert q.pattern == Bgp((TriplePattern(Var("x"), iri(RDF_TYPE), iri(V + "Review")),))
    assert q.modifiers.projection == ("x",)


def test_count_aggregate_with_alias():
    q = parse_sparql("PREFIX b: <http://b/> SELECT (count(?p) as ?total) WHERE{ ?R a b:R. ?R b:rF ?p. }")
    assert isinstance(q.pattern, Bgp) and len(q.pattern.triples) == 2
    assert q.modifiers.projection == (Aggregate(AggFn.COUNT, "p", "total"),)


def test_sequence_path():
    q = parse_sparql(P + "SELECT ?x WHERE { ?x :r1/:r2 ?o }")
    (tp,) = q.pattern.triples
    assert tp.pp == PathExpr(
        PathKind.SEQUENCE,
        parts=(PathExpr(PathKind.PREDICATE, V + "r1"), PathExpr(PathKind.PREDICATE, V + "r2")),
    )


@pytest.mark.parametrize(
    "text, kind",
    [("^:r", PathKind.INVERSE), (":r*", PathKind.ZERO_OR_MORE), (":r+", PathKind.ONE_OR_MORE), (":r?", PathKind.ZERO_OR_ONE)],
)
def test_single_step_paths(text, kind):
    (tp,) = parse_sparql(P + f"SELECT ?s WHERE {{ ?s {text} ?o }}").pattern.triples
    assert tp.pp == PathExpr(kind, V + "r")


@pytest.mark.parametrize(
    "element, kind",
    [(Var("x"), ElementKind.VARIABLE), (iri("http://xmlns.com/foaf/0.1/know"), ElementKind.IRI), (literal(100), ElementKind.LITERAL)],
)
def test_element_kind(element, kind):
    assert element_kind(element) is kind


def test_variables_are_stored_bare():
    (tp,) = parse_sparql(P + "SELECT ?x WHERE { ?x :p $y }").pattern.triples
    assert tp.sp == Var("x") and tp.op == Var("y")


def test_literal_forms():
    q = parse_sparql(P + 'SELECT ?x WHERE { ?x :a 1 ; :b 2.5 ; :c "s" ; :d "t"@en ; :e "9"^^<http://www.w3.org/2001/XMLSchema#integer> ; :f true }')
    objects = [tp.op for tp in q.pattern.triples]
    assert objects == [
        literal("1", XSD + "integer"),
        literal("2.5", XSD + "decimal"),
        literal("s"),
        literal("t", lang="en"),
        literal("9", XSD + "integer"),
        literal("true", XSD + "boolean"),
    ]


def test_group_structure():
    q = parse_sparql(
        P + "SELECT ?x ?y WHERE { ?x :p ?y . OPTIONAL { ?y :q ?z FILTER(?z > 1) } { ?x :a ?w } UNION { ?x :b ?w } }"
    )
    gp = q.pattern
    assert isinstance(gp, AndPattern)
    assert isinstance(gp.right, UnionPattern)
    assert isinstance(gp.left, OptPattern)
    assert isinstance(gp.left.right, FilterPattern)


def test_filter_wraps_its_group():
    q = parse_sparql(P + "SELECT ?x WHERE { ?x :p ?v . FILTER(?v < 300 && ?v > 100) }")
    assert isinstance(q.pattern, FilterPattern)
    assert q.pattern.cond == BoolAnd(
        Compare("<", Var("v"), Const(literal(300))), Compare(">", Var("v"), Const(literal(100)))
    )


def test_modifiers():
    q = parse_sparql(P + "SELECT DISTINCT ?a ?b WHERE { ?a :p ?b } ORDER BY (?a) DESC(?b) LIMIT 5 OFFSET 2")
    m = q.modifiers
    assert m.distinct and m.limit == 5 and m.skip == 2
    assert m.order == (OrderKey("a"), OrderKey("b", True))


def test_select_star_projects_pattern_variables():
    q = parse_sparql(P + "SELECT * WHERE { ?x :p ?y . ?y :q ?z }")
    assert q.modifiers.projection == ("x", "y", "z")


def test_group_by_with_aggregate():
    q = parse_sparql(P + "SELECT ?x (MAX(?v) AS ?m) WHERE { ?x :p ?v } GROUP BY ?x")
    assert q.modifiers.group == ("x",)
    assert q.modifiers.aggregates == [Aggregate(AggFn.MAX, "v", "m")]


@pytest.mark.parametrize(
    "text, construct",
    [
        ("ASK { ?x ?p ?o }", "ASK"),
        (P + "SELECT ?x WHERE { ?x :p ?y MINUS { ?x :q ?y } }", "MINUS"),
        (P + "SELECT ?x WHERE { GRAPH ?g { ?x :p ?y } }", "GRAPH"),
        (P + 'SELECT ?x WHERE { ?x :p ?y FILTER regex(?y, "a") }', "regex"),
        (P + "SELECT ?x WHERE { ?x :p|:q ?y }", "alternative"),
        (P + "SELECT ?x WHERE { ?x :p ?y FILTER NOT EXISTS { ?x :q ?y } }", "NOT EXISTS"),
    ],
)
def test_unsupported_features_are_named(text, construct):
    with pytest.raises(UnsupportedFeature) as info:
        parse_sparql(text)
    assert construct.lower() in str(info.value).lower()


@pytest.mark.parametrize(
    "text",
    [
        P + "SELECT ?x WHERE { ?x :p }",
        P + "SELECT ?x WHERE { ?x :p ?y ",
        P + "SELECT ?q WHERE { ?x :p ?y }",
        P + 'SELECT ?x WHERE { ?x "lit" ?y }',
        "SELECT ?x WHERE { ?x undeclared:p ?y }",
        P + "SELECT ?x WHERE { ?x :p ?y } ORDER BY ?nope",
        P + "SELECT (COUNT(?y) AS ?y) WHERE { ?x :p ?y }",
        P + "SELECT ?x WHERE { ?x :p ?y } LIMIT -1",
    ],
)
def test_syntax_and_validation_errors(text):
    with pytest.raises(ParseError):
        parse_sparql(text)


def test_syntax_error_reports_position():
    with pytest.raises(ParseError) as info:
        parse_sparql(P + "SELECT ?x\nWHERE { ?x :p }")
    assert info.value.line == 2


ALL_QUERIES = sorted(SUITE.glob("*.rq")) + sorted(GOLDEN.glob("*.rq"))


@pytest.mark.parametrize("path", ALL_QUERIES, ids=lambda p: p.stem)
def test_print_and_reparse_is_identity(path):
    q = parse_sparql(path.read_text())
    assert parse_sparql(to_sparql(q)) == q

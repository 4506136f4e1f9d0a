from __future__ import annotations

import pytest

from sparql2cypher.errors import ParseError
from sparql2cypher.rdf_model import (
    RDF_TYPE,
    XSD,
    PrefixMap,
    RdfGraph,
    RdfTerm,
    RdfTriple,
    TermKind,
    bnode,
    iri,
    literal,
    literal_value,
    parse_ntriples,
    parse_prefix_file,
    serialize_ntriples,
    term_key,
)

BSBM = {"bsbm": "http://bsbm.org/inst/", "": "http://bsbm.org/"}


def test_prefixed_names_in_angle_brackets_expand():
    g = parse_ntriples("<bsbm:R1> <rdf:type> <bsbm:Review> .", BSBM)
    (t,) = g.triples
    assert t.subject == iri("http://bsbm.org/inst/R1")
    assert t.predicate == iri(RDF_TYPE)
    assert t.object == iri("http://bsbm.org/inst/Review")


def test_empty_input_gives_empty_graph():
    assert len(parse_ntriples("")) == 0
    assert len(parse_ntriples("# only a comment\n\n")) == 0


def test_duplicate_lines_collapse():
    line = '<http://a/s> <http://a/p> "x" .\n'
    assert len(parse_ntriples(line * 2)) == 1


def test_parse_is_deterministic():
    text = '<http://a/s> <http://a/p> "x" .\n<http://a/s> <http://a/q> <http://a/o> .\n'
    assert parse_ntriples(text) == parse_ntriples(text)


@pytest.mark.parametrize(
    "line, expected",
    [
        ('<http://a/s> <http://a/p> "5"^^<http://www.w3.org/2001/XMLSchema#integer> .', 5),
        ('<http://a/s> <http://a/p> "2.5"^^<http://www.w3.org/2001/XMLSchema#decimal> .', 2.5),
        ('<http://a/s> <http://a/p> "2.5e0"^^<http://www.w3.org/2001/XMLSchema#double> .', 2.5),
        ('<http://a/s> <http://a/p> "5" .', "5"),
        ('<http://a/s> <http://a/p> "chat"@fr .', "chat"),
        ('<http://a/s> <http://a/p> "a\\"b\\nc" .', 'a"b\nc'),
    ],
)
def test_literal_values(line, expected):
    (t,) = parse_ntriples(line).triples
    assert literal_value(t.object) == expected


def test_language_tags_do_not_affect_comparison():
    assert term_key(literal("chat", lang="fr")) == term_key(literal("chat"))


def test_numeric_literals_compare_by_value():
    assert term_key(literal("1", XSD + "integer")) == term_key(literal("1.0", XSD + "decimal"))


def test_blank_nodes():
    (t,) = parse_ntriples("_:b1 <http://a/p> _:b2 .").triples
    assert t.subject == bnode("b1") and t.object.kind is TermKind.BNODE


@pytest.mark.parametrize(
    "text, lineno",
    [
        ("<http://a/s> <http://a/p> <http://a/o>", 1),
        ('\n"lit" <http://a/p> <http://a/o> .', 2),
        ("<http://a/s> <http://a/p> .", 1),
        ('<http://a/s> "p" <http://a/o> .', 1),
        ("<http://a/s> <http://a/p> <http://a/o> . <http://a/x>", 1),
        ("<http://a/s> <http://a/p> @@ .", 1),
    ],
)
def test_malformed_lines_name_the_line(text, lineno):
    with pytest.raises(ParseError) as info:
        parse_ntriples(text)
    assert info.value.line == lineno


@pytest.mark.parametrize(
    "build",
    [
        lambda: RdfTerm(TermKind.IRI, ""),
        lambda: RdfTerm(TermKind.BNODE, "b1"),
        lambda: RdfTerm(TermKind.IRI, "http://a", datatype=XSD + "string"),
        lambda: RdfTriple(literal("x"), iri("http://a/p"), iri("http://a/o")),
        lambda: RdfTriple(iri("http://a/s"), literal("p"), iri("http://a/o")),
    ],
)
def test_term_and_triple_invariants(build):
    with pytest.raises(ValueError):
        build()


def test_serialize_round_trip():
    text = (
        '<http://a/s> <http://a/p> "x\\ty"@en .\n'
        '<http://a/s> <http://a/q> "3"^^<http://www.w3.org/2001/XMLSchema#integer> .\n'
        "_:b0 <http://a/r> <http://a/s> .\n"
    )
    g = parse_ntriples(text)
    assert parse_ntriples(serialize_ntriples(g)) == g


def test_graph_from_triples_dedupes_and_keeps_order():
    a = RdfTriple(iri("http://a/1"), iri("http://a/p"), literal("x"))
    b = RdfTriple(iri("http://a/2"), iri("http://a/p"), literal("y"))
    g = RdfGraph.from_triples([b, a, b])
    assert g.triples == (b, a)
    assert a in g


@pytest.mark.parametrize(
    "value, shown",
    [
        ("http://bsbm.org/inst/R1", "bsbm:R1"),
        ("http://bsbm.org/reviewFor", ":reviewFor"),
        (RDF_TYPE, "rdf:type"),
        ("http://elsewhere/x", "http://elsewhere/x"),
    ],
)
def test_prefix_shortening_prefers_longest_namespace(value, shown):
    assert PrefixMap(BSBM).shorten(value) == shown


def test_prefix_expand():
    pm = PrefixMap(BSBM)
    assert pm.expand("bsbm:R1") == "http://bsbm.org/inst/R1"
    assert pm.expand("nope:R1") is None


def test_prefix_file():
    text = "# comment\nb: http://x/\nb-inst <http://y/>\n"
    assert parse_prefix_file(text) == {"b": "http://x/", "b-inst": "http://y/"}
    with pytest.raises(ParseError):
        parse_prefix_file("just-one-token\n")

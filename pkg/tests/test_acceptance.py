"""One check per headline criterion; each prints a PASS or FAIL line."""

from __future__ import annotations

import statistics
import time
from dataclasses import replace

import pytest
import test_algebra_laws as laws
from bruteforce import agrees, cases
from conftest import DATA, FAMILIES, GOLDEN, suite_queries

from sparql2cypher.catalog import SchemaCatalog, derive_catalog
from sparql2cypher.cypher.ast import (
    Direction,
    LabelsOf,
    NodePattern,
    PathPattern,
    Prop,
    Ref,
    RelationshipPattern,
    ReturnItem,
    TypeOf,
)
from sparql2cypher.cypher.render import normalize_whitespace
from sparql2cypher.oracle import (
    check_equivalence,
    eval_algebra,
    eval_mapping,
    exec_query,
    mapping_multiset,
    multiset,
    xi,
    zeta,
)
from sparql2cypher.pg_model import partition_counts, rdf_to_pg, triple_partition
from sparql2cypher.rdf_model import PrefixMap, iri, literal, parse_ntriples, parse_prefix_file
from sparql2cypher.sparql.ast import PathExpr, PathKind, TriplePattern, Var
from sparql2cypher.sparql.parser import parse_sparql
from sparql2cypher.synthetic import PREFIXES, generate
from sparql2cypher.translator import TranslateOptions, map_property_path, pmm, translate, translate_text

V, I = "http://bsbm.org/", "http://bsbm.org/inst/"
PM = PrefixMap({"": V})
CAT = SchemaCatalog(frozenset({V + "reviewFor", V + "knows"}), frozenset({V + "title"}))


def _table2() -> tuple[bool, str]:
    rel = RelationshipPattern(Direction.OUT, "_r", ":reviewFor")
    rows = [
        ("?x a :Review", (PathPattern((NodePattern("x", (":Review",)),)),), {"x": Ref("x")}),
        ('?x :title "review1"', (PathPattern((NodePattern("x", (), ((":title", "review1"),)),)),), {"x": Ref("x")}),
        ("?x :reviewFor ?y", (PathPattern((NodePattern("x"), NodePattern("y")), (rel,)),), {"x": Ref("x"), "y": Ref("y")}),
        ("?x a ?y", (PathPattern((NodePattern("x"),)),), {"x": Ref("x"), "y": LabelsOf("x")}),
        (
            "?x ?y ?z",
            (PathPattern((NodePattern("x"), NodePattern("z")), (RelationshipPattern(Direction.OUT, "y"),)),),
            {"x": Ref("x"), "y": TypeOf("y"), "z": Ref("z")},
        ),
        ("?x :title ?t", (PathPattern((NodePattern("x"),)),), {"x": Ref("x"), "t": Prop("x", ":title")}),
    ]
    good = 0
    for body, patterns, env in rows:
        tps = parse_sparql(f"PREFIX : <{V}> SELECT * WHERE {{ {body} }}").pattern.triples
        ps = pmm(tps, CAT, PM, rel_names="anonymous")
        good += ps.patterns == patterns and ps.env == env
    return good == len(rows), f"{good}/{len(rows)} rows"


def _table4() -> tuple[bool, str]:
    rows = [
        (PathKind.PREDICATE, Direction.OUT, None),
        (PathKind.INVERSE, Direction.IN, None),
        (PathKind.ZERO_OR_MORE, Direction.OUT, (0, None)),
        (PathKind.ONE_OR_MORE, Direction.OUT, (1, None)),
        (PathKind.ZERO_OR_ONE, Direction.OUT, (0, 1)),
    ]
    good = 0
    for kind, direction, range_ in rows:
        p = map_property_path(TriplePattern(Var("s"), PathExpr(kind, V + "reviewFor"), Var("o")), CAT, PM, "anonymous")
        good += p.nodes == (NodePattern("s"), NodePattern("o")) and p.rels == (
            RelationshipPattern(direction, "_r", ":reviewFor", (), range_),
        )
    seq = PathExpr(PathKind.SEQUENCE, parts=(PathExpr(PathKind.PREDICATE, V + "reviewFor"), PathExpr(PathKind.INVERSE, V + "knows")))
    p = map_property_path(TriplePattern(Var("s"), seq, Var("o")), CAT, PM, "anonymous")
    good += [n.name for n in p.nodes] == ["s", "_n1", "o"] and [(r.direction, r.rel_type) for r in p.rels] == [
        (Direction.OUT, ":reviewFor"),
        (Direction.IN, ":knows"),
    ]
    return good == 6, f"{good}/6 rows"


def _goldens() -> tuple[bool, str]:
    cat = SchemaCatalog.from_json((DATA / "bsbm.catalog").read_text())
    opts = TranslateOptions(prefixes=parse_prefix_file((DATA / "bsbm.prefixes").read_text()))
    names = ["count1", "nodefilter2", "relationship1_2", "reltype3"]
    good = [
        n
        for n in names
        if normalize_whitespace(translate_text((GOLDEN / f"{n}.rq").read_text(), cat, opts))
        == normalize_whitespace((GOLDEN / f"{n}.cypher").read_text())
    ]
    return len(good) == 4, f"{len(good)}/4 match"


def _worked_chain() -> tuple[bool, str]:
    prefixes = parse_prefix_file((DATA / "reviews.prefixes").read_text())
    g = parse_ntriples((DATA / "reviews.nt").read_text(), prefixes)
    cat = derive_catalog(g)
    pg = rdf_to_pg(g, cat, prefixes)
    q = parse_sparql(f"PREFIX : <{V}> SELECT ?x ?y ?z WHERE {{ ?x a :Review . ?x :reviewFor ?y . ?y :date ?z }}")
    cq = translate(q, cat, TranslateOptions(rel_names="anonymous", prefixes=prefixes))
    cq = replace(cq, return_items=tuple(ReturnItem(e) for e in (Ref("x"), Ref("_r"), Ref("y"), Prop("y", ":date"))))
    r_prime = exec_query(cq, pg)
    ok_prime = sorted(r_prime.rows) == [("n1", "r1", "n2", "20011024"), ("n4", "r3", "n2", "20011024")]
    r = eval_algebra(q.pattern, g, cat, prefixes)
    ok_r = multiset(xi(r_prime, pg)) == multiset(r) and len(r) == 2
    date = literal("20011024")
    omega = mapping_multiset(
        [{"x": iri(I + "R1"), "y": iri(I + "Pr1"), "z": date}, {"x": iri(I + "R2"), "y": iri(I + "Pr1"), "z": date}]
    )
    ok_omega = mapping_multiset(zeta(r)) == omega == mapping_multiset(eval_mapping(q, g))
    return ok_prime and ok_r and ok_omega, f"R' {ok_prime}, xi(R') = R {ok_r}, zeta(R) = Omega {ok_omega}"


def _suite() -> tuple[bool, str]:
    queries = suite_queries()
    covered = all(any(member(n, t) for n, t in queries) for member in FAMILIES.values())
    prefixes = parse_prefix_file((DATA / "bsbm.prefixes").read_text())
    g = parse_ntriples((DATA / "bsbm100.nt").read_text(), prefixes)
    cat = SchemaCatalog.from_json((DATA / "bsbm.catalog").read_text())
    nodes = len(rdf_to_pg(g, cat, prefixes).nodes)
    start = time.perf_counter()
    passed = sum(check_equivalence(parse_sparql(t), g, cat, name=n).passed for n, t in queries)
    elapsed = time.perf_counter() - start
    ok = len(queries) >= 40 and covered and passed == len(queries) and elapsed < 60
    return ok, f"{passed}/{len(queries)} equal over {nodes} nodes, all families covered: {covered}, {elapsed:.1f} s"


def _bruteforce() -> tuple[bool, str]:
    sample = cases()
    good = sum(agrees(c) for c in sample)
    return len(sample) >= 200 and good == len(sample), f"{good}/{len(sample)} random BGPs"


def _laws() -> tuple[bool, str]:
    checks = [
        laws.test_disjoint_join_is_cartesian,
        laws.test_outer_union_is_additive,
        laws.test_left_join_keeps_every_left_row,
        laws.test_filter_selects_a_sub_bag,
        laws.test_distinct_has_no_duplicates,
        laws.test_limit_and_skip_bounds,
    ]
    failed = []
    for check in checks:
        try:
            check()
        except AssertionError:
            failed.append(check.__name__)
    return not failed, f"{len(checks) - len(failed)}/{len(checks)} laws hold" + (f", failing: {failed}" if failed else "")


def _latency() -> tuple[bool, str]:
    cat = SchemaCatalog.from_json((DATA / "bsbm.catalog").read_text())
    times = []
    for _, text in suite_queries():
        q = parse_sparql(text)
        t0 = time.perf_counter()
        translate(q, cat)
        times.append((time.perf_counter() - t0) * 1000)
    median = statistics.median(times)
    return median <= 50, f"median {median:.2f} ms, max {max(times):.2f} ms"


def _partitions() -> tuple[bool, str]:
    prefixes = parse_prefix_file((DATA / "reviews.prefixes").read_text())
    reviews = parse_ntriples((DATA / "reviews.nt").read_text(), prefixes)
    synth = generate(2)
    out = []
    for g, pm in ((reviews, prefixes), (synth, PREFIXES)):
        cat = derive_catalog(g)
        out.append((partition_counts(rdf_to_pg(g, cat, pm)), triple_partition(g, cat)))
    ok = all(a == b for a, b in out) and out[0][0] == {"relationships": 3, "properties": 4, "labels": 2}
    return ok, f"reviews {out[0][0]}, synthetic ({len(synth)} triples) {out[1][0]}"


CRITERIA = [
    ("triple-pattern mapping table", _table2),
    ("property-path mapping table", _table4),
    ("golden translations", _goldens),
    ("worked example chain", _worked_chain),
    ("semantic preservation suite", _suite),
    ("brute-force oracle cross-check", _bruteforce),
    ("algebra laws", _laws),
    ("translation latency", _latency),
    ("data mapping partition counts", _partitions),
]


@pytest.mark.parametrize("name, check", CRITERIA, ids=[n for n, _ in CRITERIA])
def test_criterion(name, check, capsys):
    ok, detail = check()
    with capsys.disabled():
        print(f"\n{'PASS' if ok else 'FAIL'} {name}: {detail}")
    assert ok, detail

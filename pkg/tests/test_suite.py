from __future__ import annotations

import time

import pytest
from conftest import FAMILIES, suite_queries

from sparql2cypher.oracle import check_equivalence
from sparql2cypher.pg_model import rdf_to_pg
from sparql2cypher.sparql.parser import parse_sparql
from sparql2cypher.translator import TranslateOptions

QUERIES = suite_queries()


def test_suite_size_and_coverage():
    assert len(QUERIES) >= 40
    for family, member in FAMILIES.items():
        assert any(member(n, t) for n, t in QUERIES), family


@pytest.fixture(scope="module")
def bsbm_pg(bsbm, bsbm_catalog, bsbm_prefixes):
    return rdf_to_pg(bsbm, bsbm_catalog, bsbm_prefixes)


@pytest.mark.parametrize("name, text", QUERIES, ids=[n for n, _ in QUERIES])
def test_query_is_preserved(name, text, bsbm, bsbm_catalog, bsbm_pg):
    rep = check_equivalence(parse_sparql(text), bsbm, bsbm_catalog, name=name, pg=bsbm_pg)
    assert rep.passed, rep.diff_text()
    assert rep.translate_ms < 50


@pytest.mark.parametrize(
    "options",
    [TranslateOptions(null_guards=True), TranslateOptions(rel_names="anonymous")],
    ids=["null-guards", "anonymous-relationships"],
)
def test_suite_under_other_options(options, bsbm, bsbm_catalog, bsbm_pg):
    failed = []
    for name, text in QUERIES:
        rep = check_equivalence(parse_sparql(text), bsbm, bsbm_catalog, options, name=name, pg=bsbm_pg)
        if not rep.passed:
            failed.append(rep.diff_text())
    assert not failed, "\n".join(failed)


def test_suite_runs_within_a_minute(bsbm, bsbm_catalog):
    start = time.perf_counter()
    for name, text in QUERIES:
        check_equivalence(parse_sparql(text), bsbm, bsbm_catalog, name=name)
    assert time.perf_counter() - start < 60


def test_suite_queries_return_rows(bsbm, bsbm_catalog, bsbm_pg):
    # most queries must have non-empty answers for the comparison to mean anything
    counts = [check_equivalence(parse_sparql(t), bsbm, bsbm_catalog, pg=bsbm_pg).a_count for _, t in QUERIES]
    assert sum(c > 0 for c in counts) >= len(QUERIES) - 3

from __future__ import annotations

from pathlib import Path

import pytest

from sparql2cypher.catalog import SchemaCatalog, derive_catalog
from sparql2cypher.pg_model import rdf_to_pg
from sparql2cypher.rdf_model import parse_ntriples, parse_prefix_file

DATA = Path(__file__).parent / "data"
GOLDEN = DATA / "golden"
SUITE = DATA / "suite"
VOCAB = "http://bsbm.org/"
INST = "http://bsbm.org/inst/"


@pytest.fixture(scope="session")
def reviews_prefixes() -> dict[str, str]:
    return parse_prefix_file((DATA / "reviews.prefixes").read_text())


@pytest.fixture(scope="session")
def reviews(reviews_prefixes):
    return parse_ntriples((DATA / "reviews.nt").read_text(), reviews_prefixes)


@pytest.fixture(scope="session")
def reviews_catalog(reviews) -> SchemaCatalog:
    return derive_catalog(reviews)


@pytest.fixture(scope="session")
def reviews_pg(reviews, reviews_catalog, reviews_prefixes):
    return rdf_to_pg(reviews, reviews_catalog, reviews_prefixes)


@pytest.fixture(scope="session")
def bsbm_prefixes() -> dict[str, str]:
    return parse_prefix_file((DATA / "bsbm.prefixes").read_text())


@pytest.fixture(scope="session")
def bsbm(bsbm_prefixes):
    return parse_ntriples((DATA / "bsbm100.nt").read_text(), bsbm_prefixes)


@pytest.fixture(scope="session")
def bsbm_catalog() -> SchemaCatalog:
    return SchemaCatalog.from_json((DATA / "bsbm.catalog").read_text())


def suite_queries() -> list[tuple[str, str]]:
    return [(p.stem, p.read_text()) for p in sorted(SUITE.glob("*.rq"))]


# feature family -> test on (file stem, query text)
FAMILIES = {
    "aggregators": lambda n, t: n.startswith("agg_"),
    "filters": lambda n, t: "FILTER" in t,
    "order": lambda n, t: "ORDER BY" in t,
    "distinct": lambda n, t: "DISTINCT" in t,
    "limit": lambda n, t: "LIMIT" in t,
    "optional": lambda n, t: "OPTIONAL" in t,
    "labels": lambda n, t: n.startswith("label"),
    "chain-1": lambda n, t: n.startswith("relationship1"),
    "chain-2": lambda n, t: n.startswith("relationship2"),
    "chain-3": lambda n, t: n.startswith("relationship3"),
    "chain-4": lambda n, t: n.startswith("relationship4"),
    "property-paths": lambda n, t: n.startswith("path_"),
    "star": lambda n, t: n.startswith("star_"),
    "union": lambda n, t: "UNION" in t,
    "mixed": lambda n, t: n == "mixed",
}

from __future__ import annotations

from conftest import DATA

from sparql2cypher.catalog import derive_catalog
from sparql2cypher.rdf_model import RDF_TYPE, serialize_ntriples
from sparql2cypher.synthetic import INST, Sizes, generate


def test_scale_one_matches_fixture():
    assert serialize_ntriples(generate(1)) == (DATA / "bsbm100.nt").read_text()


def test_generation_is_seeded():
    assert generate(1, seed=3) == generate(1, seed=3)
    assert generate(1, seed=3) != generate(1, seed=4)


def test_sizes():
    g = generate(2)
    assert len(g) == 994
    subjects = {t.subject for t in g}
    assert len(subjects) == Sizes.scaled(2).nodes == 200
    assert all(s.lexical.startswith(INST) for s in subjects)


def test_every_resource_has_one_class():
    g = generate(1)
    classes = {}
    for t in g:
        if t.predicate.lexical == RDF_TYPE:
            classes.setdefault(t.subject, []).append(t.object)
    assert set(classes) == {t.subject for t in g}
    assert all(len(c) == 1 for c in classes.values())


def test_catalog_is_unambiguous():
    cat = derive_catalog(generate(3))
    assert cat.relationship_types and cat.property_keys

"""Seeded generator for small e-commerce style RDF datasets.

The data is schema-regular: every resource has exactly one class and
every property listed for its class, except ``b:rating2`` (present on
some reviews only) and ``b:reviewer`` (some reviews are anonymous),
which exist for OPTIONAL queries.  ``b:bt`` links product features into
a tree, so closure paths terminate and never revisit a node.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .rdf_model import RDF_TYPE, RDFS, RdfGraph, RdfTriple, iri, literal

VOCAB = "http://bsbm.example.org/vocabulary/"
INST = "http://bsbm.example.org/instances/"
PREFIXES = {"b": VOCAB, "b-inst": INST}

_WORDS = (
    "alpha amber birch cobalt delta ember fjord garnet harbor indigo juniper kelp "
    "lumen maple nectar onyx prism quartz raven sierra tundra umber velvet willow"
).split()
_COUNTRIES = ("DE", "FR", "JP", "US", "BR")


@dataclass(frozen=True)
class Sizes:
    producers: int
    vendors: int
    persons: int
    features: int
    products: int
    offers: int
    reviews: int
    product_types: int = 4

    @classmethod
    def scaled(cls, scale: int) -> Sizes:
        return cls(4 * scale, 3 * scale, 8 * scale, 10 * scale, 20 * scale, 25 * scale, 30 * scale)

    @property
    def nodes(self) -> int:
        return (
            self.producers + self.vendors + self.persons + self.features
            + self.products + self.offers + self.reviews
        )


def generate(scale: int = 1, seed: int = 7) -> RdfGraph:
    """Build a dataset with about ``100 * scale`` resources and ``500 * scale`` triples."""
    rng = random.Random(seed)
    sizes = Sizes.scaled(scale)
    triples: list[RdfTriple] = []

    def add(s: str, p: str, o) -> None:
        triples.append(RdfTriple(iri(INST + s), iri(p), o))

    def typed(s: str, cls: str) -> None:
        add(s, RDF_TYPE, iri(cls))

    def words(n: int) -> str:
        return " ".join(rng.choice(_WORDS) for _ in range(n))

    label = RDFS + "label"
    for i in range(1, sizes.producers + 1):
        s = f"Producer{i}"
        typed(s, VOCAB + "pr")
        add(s, label, literal(words(2)))
        add(s, VOCAB + "country", literal(rng.choice(_COUNTRIES)))
    for i in range(1, sizes.vendors + 1):
        s = f"Vendor{i}"
        typed(s, VOCAB + "V")
        add(s, label, literal(words(2)))
        add(s, VOCAB + "country", literal(rng.choice(_COUNTRIES)))
    for i in range(1, sizes.persons + 1):
        s = f"Person{i}"
        typed(s, VOCAB + "Pe")
        add(s, VOCAB + "name", literal(f"{words(1)} {i}"))
        add(s, VOCAB + "country", literal(rng.choice(_COUNTRIES)))
    for i in range(1, sizes.features + 1):
        s = f"Feature{i}"
        typed(s, VOCAB + "F")
        add(s, label, literal(words(1) + f" {i}"))
        if i > 1:
            add(s, VOCAB + "bt", iri(INST + f"Feature{i // 2}"))
    for i in range(1, sizes.products + 1):
        s = f"Product{i}"
        typed(s, INST + f"PT{1 + (i - 1) % sizes.product_types}")
        add(s, label, literal(words(3)))
        add(s, VOCAB + "pPN1", literal(rng.randint(1, 500)))
        add(s, VOCAB + "pPN2", literal(rng.randint(1, 1000)))
        add(s, VOCAB + "pr", iri(INST + f"Producer{rng.randint(1, sizes.producers)}"))
        for f in sorted(rng.sample(range(1, sizes.features + 1), 2)):
            add(s, VOCAB + "pf", iri(INST + f"Feature{f}"))
    for i in range(1, sizes.offers + 1):
        s = f"Offer{i}"
        typed(s, VOCAB + "O")
        add(s, VOCAB + "price", literal(rng.randint(10, 400) + rng.choice((0.0, 0.25, 0.5))))
        add(s, VOCAB + "prd", iri(INST + f"Product{rng.randint(1, sizes.products)}"))
        add(s, VOCAB + "v", iri(INST + f"Vendor{rng.randint(1, sizes.vendors)}"))
        add(s, VOCAB + "publisher", iri(INST + f"Vendor{rng.randint(1, sizes.vendors)}"))
    for i in range(1, sizes.reviews + 1):
        s = f"Review{i}"
        typed(s, VOCAB + "R")
        add(s, VOCAB + "title", literal(f"review {words(2)} {i}"))
        add(s, VOCAB + "rating1", literal(rng.randint(1, 10)))
        if rng.random() < 0.5:
            add(s, VOCAB + "rating2", literal(rng.randint(1, 10)))
        add(s, VOCAB + "rF", iri(INST + f"Product{rng.randint(1, sizes.products)}"))
        if rng.random() < 0.7:
            add(s, VOCAB + "rB", iri(INST + f"Person{rng.randint(1, sizes.persons)}"))
    return RdfGraph.from_triples(triples, PREFIXES)

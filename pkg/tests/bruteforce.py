"""Random small graphs and BGPs, with a naive evaluator to compare against."""

from __future__ import annotations

import itertools
import random
from collections import Counter
from dataclasses import dataclass

from sparql2cypher.catalog import SchemaCatalog
from sparql2cypher.oracle import eval_mapping, mapping_multiset
from sparql2cypher.rdf_model import RDF_TYPE, RdfGraph, RdfTriple, iri, literal
from sparql2cypher.sparql.ast import Var
from sparql2cypher.sparql.parser import parse_sparql

NS = "http://t.example/"
ENTITIES = [iri(NS + f"e{i}") for i in range(5)]
EDGES = [iri(NS + "p"), iri(NS + "q")]
KEYS = [iri(NS + "k")]
CLASSES = [iri(NS + "C"), iri(NS + "D")]
LITERALS = [literal("x"), literal("y"), literal(1)]
TYPE = iri(RDF_TYPE)
CATALOG = SchemaCatalog(frozenset(e.lexical for e in EDGES), frozenset(k.lexical for k in KEYS))
VARS = ["a", "b", "c"]


@dataclass(frozen=True)
class Case:
    graph: RdfGraph
    text: str


def random_graph(rng: random.Random, single_valued: bool = False) -> RdfGraph:
    """A random graph; `single_valued` keeps one class and one value per key per resource."""
    triples = []
    for _ in range(rng.randint(0, 20) if rng.random() < 0.1 else rng.randint(10, 20)):
        s = rng.choice(ENTITIES)
        kind = rng.random()
        if kind < 0.5:
            triples.append(RdfTriple(s, rng.choice(EDGES), rng.choice(ENTITIES)))
        elif kind < 0.75:
            triples.append(RdfTriple(s, KEYS[0], rng.choice(LITERALS)))
        else:
            triples.append(RdfTriple(s, TYPE, rng.choice(CLASSES)))
    if single_valued:
        seen, kept = set(), []
        for t in triples:
            slot = (t.subject, t.predicate) if t.predicate in (TYPE, KEYS[0]) else t
            if slot not in seen:
                seen.add(slot)
                kept.append(t)
        triples = kept
    return RdfGraph.from_triples(triples)


def _node(rng: random.Random) -> str:
    return f"?{rng.choice(VARS)}" if rng.random() < 0.8 else f"<{rng.choice(ENTITIES).lexical}>"


def random_bgp(rng: random.Random) -> str:
    patterns = []
    for _ in range(rng.randint(1, 3)):
        s = _node(rng)
        shape = rng.random()
        if shape < 0.45:
            p, o = rng.choice(EDGES), _node(rng)
            patterns.append(f"{s} <{p.lexical}> {o}")
        elif shape < 0.65:
            o = f"?{rng.choice(VARS)}" if rng.random() < 0.7 else f'"{rng.choice(["x", "y"])}"'
            patterns.append(f"{s} <{KEYS[0].lexical}> {o}")
        elif shape < 0.85:
            o = f"?{rng.choice(VARS)}" if rng.random() < 0.5 else f"<{rng.choice(CLASSES).lexical}>"
            patterns.append(f"{s} a {o}")
        else:
            patterns.append(f"{s} ?p{rng.randint(0, 1)} ?{rng.choice(VARS)}")
    return "SELECT * WHERE { " + " . ".join(patterns) + " }"


def cases(n: int = 250, seed: int = 11, single_valued: bool = False) -> list[Case]:
    rng = random.Random(seed)
    return [Case(random_graph(rng, single_valued), random_bgp(rng)) for _ in range(n)]


def naive(text: str, g: RdfGraph) -> Counter:
    """Try every assignment of graph terms to the variables of a BGP."""
    q = parse_sparql(text)
    tps = q.pattern.triples
    names = sorted({v.name for tp in tps for v in (tp.sp, tp.pp, tp.op) if isinstance(v, Var)})
    present = {(t.subject, t.predicate, t.object) for t in g.triples}
    domain = sorted({t for tr in g.triples for t in (tr.subject, tr.predicate, tr.object)}, key=repr)
    out = []
    for values in itertools.product(domain, repeat=len(names)):
        mu = dict(zip(names, values))
        ok = True
        for tp in tps:
            s, p, o = (mu[x.name] if isinstance(x, Var) else x for x in (tp.sp, tp.pp, tp.op))
            if (s, p, o) not in present:
                ok = False
                break
            # a predicate variable only ranges over resource-to-resource links
            if isinstance(tp.pp, Var) and (p == TYPE or o.is_literal):
                ok = False
                break
        if ok:
            out.append(mu)
    return mapping_multiset(out)


def agrees(case: Case) -> bool:
    return mapping_multiset(eval_mapping(parse_sparql(case.text), case.graph)) == naive(case.text, case.graph)

"""End-to-end check that a translation preserves query answers.

Three answers are computed for a query over an RDF graph:

* A: mapping-based SPARQL evaluation;
* B: the translated Cypher run on the converted property graph, read back
  through ``xi`` and ``zeta``;
* C: graph-relational SPARQL evaluation read through ``zeta``, followed by
  the solution modifiers.

They must agree as multisets.  With LIMIT/OFFSET the selected rows may
legitimately differ among ties, so the unsliced answers are compared
exactly and the sliced ones by size, containment and order keys.
"""

from __future__ import annotations

import time
from collections import Counter
from dataclasses import dataclass, field, replace
from typing import Callable

from ..catalog import SchemaCatalog
from ..cypher.ast import CypherQuery, Direction, PathPattern
from ..cypher.render import render
from ..errors import S2CError
from ..pg_model import PropertyGraph, rdf_to_pg
from ..rdf_model import RdfGraph
from ..sparql.ast import SparqlQuery
from ..translator.core import TranslateOptions, display_prefixes, translate
from .algebra import eval_algebra, xi, zeta
from .cypher_exec import DEFAULT_MAX_DEPTH, exec_query
from .ordering import order_key
from .sparql_eval import apply_modifiers, eval_pattern, mapping_key, unsliced


@dataclass
class EquivalenceReport:
    name: str
    passed: bool
    a_count: int = 0
    b_count: int = 0
    c_count: int = 0
    mode: str = "exact"
    cypher: str = ""
    translate_ms: float = 0.0
    error: str | None = None
    missing_b: list = field(default_factory=list)
    extra_b: list = field(default_factory=list)
    missing_c: list = field(default_factory=list)
    extra_c: list = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "mode": self.mode,
            "a": self.a_count,
            "b": self.b_count,
            "c": self.c_count,
            "translate_ms": round(self.translate_ms, 3),
            "error": self.error,
            "notes": self.notes,
        }

    def summary_line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        if self.error:
            return f"{status} {self.name}: {self.error}"
        return (
            f"{status} {self.name} |A|={self.a_count} |B|={self.b_count} |C|={self.c_count} "
            f"translate={self.translate_ms:.2f}ms"
        )

    def diff_text(self) -> str:
        lines = [self.summary_line()]
        if self.cypher:
            lines.append(f"  cypher: {self.cypher}")
        lines.extend(f"  note: {n}" for n in self.notes)
        for label, rows in (
            ("missing from Cypher answer", self.missing_b),
            ("extra in Cypher answer", self.extra_b),
            ("missing from algebra answer", self.missing_c),
            ("extra in algebra answer", self.extra_c),
        ):
            for row in rows:
                lines.append(f"  {label}: {_show(row)}")
        return "\n".join(lines)


def _show(key: tuple) -> str:
    return "{" + ", ".join(f"?{var}={val[-1]!s}" for var, val in key) + "}"


def _diff(expected: Counter, actual: Counter) -> tuple[list, list]:
    missing = sorted((expected - actual).elements(), key=repr)
    extra = sorted((actual - expected).elements(), key=repr)
    return missing, extra


def inject_fault(q: CypherQuery) -> CypherQuery:
    """Deliberately break a translation, for negative-control runs.

    Flips the first fixed-length relationship; failing that drops every
    WHERE; failing that returns no rows.
    """
    for i, m in enumerate(q.matches):
        for j, p in enumerate(m.patterns):
            for k, rel in enumerate(p.rels):
                if rel.range is None and rel.direction is not Direction.BOTH:
                    rels = list(p.rels)
                    rels[k] = replace(rel, direction=rel.direction.reversed())
                    patterns = list(m.patterns)
                    patterns[j] = PathPattern(p.nodes, tuple(rels))
                    matches = list(q.matches)
                    matches[i] = replace(m, patterns=tuple(patterns))
                    return replace(q, matches=tuple(matches))
    if q.where is not None or any(m.where is not None for m in q.matches):
        return replace(q, where=None, matches=tuple(replace(m, where=None) for m in q.matches))
    return replace(q, limit=0)


def _order_vector(mu: dict, order_vars) -> tuple:
    return tuple(order_key(mu.get(v)) for v in order_vars)


def check_equivalence(
    qs: SparqlQuery,
    gs: RdfGraph,
    cat: SchemaCatalog,
    options: TranslateOptions | None = None,
    name: str = "query",
    max_depth: int = DEFAULT_MAX_DEPTH,
    corrupt: Callable[[CypherQuery], CypherQuery] | None = None,
    pg: PropertyGraph | None = None,
) -> EquivalenceReport:
    """Compare the three answers to `qs` over `gs`; errors become a failing report."""
    options = options or TranslateOptions()
    extra = {**gs.prefix_map, **options.prefixes}
    opts = replace(options, prefixes=extra)
    report = EquivalenceReport(name, False)
    try:
        t0 = time.perf_counter()
        cq = translate(qs, cat, opts)
        report.translate_ms = (time.perf_counter() - t0) * 1000
        if corrupt is not None:
            cq = corrupt(cq)
        report.cypher = render(cq)
        if pg is None:
            pg = rdf_to_pg(gs, cat, display_prefixes(qs, extra))
        m = qs.modifiers
        omega = eval_pattern(qs.pattern, gs)
        rel_c = eval_algebra(qs.pattern, gs, cat, display_prefixes(qs, extra))
        sliced = m.limit is not None or m.skip is not None

        def answers(cypher: CypherQuery, mods, slice_: bool):
            a = apply_modifiers(omega, mods, slice_)
            b = zeta(xi(exec_query(cypher, pg, max_depth), pg))
            c = apply_modifiers(zeta(rel_c), mods, slice_)
            return a, b, c

        if not sliced:
            a, b, c = answers(cq, m, True)
            _fill(report, a, b, c)
            report.passed = not (report.missing_b or report.extra_b or report.missing_c or report.extra_c)
            return report

        report.mode = "sliced"
        full_cq = replace(cq, limit=None, skip=None)
        fa, fb, fc = answers(full_cq, unsliced(m), False)
        _fill(report, fa, fb, fc)
        ok = not (report.missing_b or report.extra_b or report.missing_c or report.extra_c)
        if not ok:
            report.notes.append("answers differ before LIMIT/OFFSET")
        a, b, c = answers(cq, m, True)
        report.a_count, report.b_count, report.c_count = len(a), len(b), len(c)
        if not (len(a) == len(b) == len(c)):
            ok = False
            report.notes.append("sliced answers differ in size")
        for label, part, whole in (("A", a, fa), ("B", b, fb), ("C", c, fc)):
            if Counter(mapping_key(mu) for mu in part) - Counter(mapping_key(mu) for mu in whole):
                ok = False
                report.notes.append(f"sliced answer {label} has rows outside its unsliced answer")
        order_vars = [k.var for k in m.order]
        if order_vars and all(v in m.output_names for v in order_vars):
            vecs = [Counter(_order_vector(mu, order_vars) for mu in x) for x in (a, b, c)]
            if not (vecs[0] == vecs[1] == vecs[2]):
                ok = False
                report.notes.append("sliced answers select different ORDER BY keys")
        report.passed = ok
        return report
    except S2CError as exc:
        report.error = f"{type(exc).__name__}: {exc}"
        return report


def _fill(report: EquivalenceReport, a, b, c) -> None:
    ka = Counter(mapping_key(mu) for mu in a)
    kb = Counter(mapping_key(mu) for mu in b)
    kc = Counter(mapping_key(mu) for mu in c)
    report.a_count, report.b_count, report.c_count = len(a), len(b), len(c)
    report.missing_b, report.extra_b = _diff(ka, kb)
    report.missing_c, report.extra_c = _diff(ka, kc)

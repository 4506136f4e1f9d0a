"""Mapping-based SPARQL evaluation: bags of partial variable bindings."""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import replace
from typing import Iterable, Iterator

from ..errors import UnsupportedFeature
from ..rdf_model import NUMERIC_TYPES, RDF_TYPE, XSD, RdfGraph, RdfTerm, literal, literal_value, term_key
from ..sparql import ast as s
from .ordering import order_key, sort_rows

Mapping_ = dict  # variable name -> RdfTerm
MappingSet = list  # bag of mappings

_ERROR = object()  # SPARQL expression error


def mapping_key(mu: dict) -> tuple:
    return tuple(sorted((k, _cell_key(v)) for k, v in mu.items()))


def _cell_key(v) -> tuple:
    if isinstance(v, RdfTerm):
        return term_key(v)
    if isinstance(v, (list, tuple)):
        return ("list", tuple(_cell_key(x) for x in v))
    return ("raw", repr(v))


def mapping_multiset(omega: Iterable[dict]) -> Counter:
    return Counter(mapping_key(mu) for mu in omega)


# --- triple and path matching ----------------------------------------------------


def _reach(g: RdfGraph, path: s.PathExpr, t: RdfTerm, forward: bool) -> list[RdfTerm]:
    """Terms reachable from `t` along `path` (or against it when not `forward`)."""
    k = path.kind
    if k is s.PathKind.SEQUENCE:
        first, second = path.parts if forward else reversed(path.parts)
        return [z for y in _reach(g, first, t, forward) for z in _reach(g, second, y, forward)]
    p = path.iri
    if k is s.PathKind.INVERSE:
        forward = not forward
    if k in (s.PathKind.PREDICATE, s.PathKind.INVERSE):
        return _one_step(g, p, t, forward)
    seen: dict[RdfTerm, None] = {}
    if k in (s.PathKind.ZERO_OR_MORE, s.PathKind.ZERO_OR_ONE):
        seen[t] = None
    if k is s.PathKind.ZERO_OR_ONE:
        seen.update(dict.fromkeys(_one_step(g, p, t, forward)))
        return list(seen)
    frontier = [t]
    reached: dict[RdfTerm, None] = {}
    while frontier:
        nxt = []
        for x in frontier:
            for y in _one_step(g, p, x, forward):
                if y not in reached:
                    reached[y] = None
                    nxt.append(y)
        frontier = nxt
    seen.update(reached)
    return list(seen)


def _one_step(g: RdfGraph, p: str, t: RdfTerm, forward: bool) -> list[RdfTerm]:
    if forward:
        return [tr.object for tr in g.by_subject.get(t, ()) if tr.predicate.lexical == p]
    return [tr.subject for tr in g.by_object.get(t, ()) if tr.predicate.lexical == p]


def _value(e, mu: dict):
    if isinstance(e, s.Var):
        return mu.get(e.name)
    return e


def _extend(mu: dict, pairs) -> dict | None:
    out = dict(mu)
    for el, term in pairs:
        if isinstance(el, s.Var):
            have = out.get(el.name)
            if have is None:
                out[el.name] = term
            elif have != term:
                return None
        elif el != term:
            return None
    return out


def match_triple(
    tp: s.TriplePattern, g: RdfGraph, mu: dict | None = None, edge_only_predicate_vars: bool = True
) -> Iterator[dict]:
    """Extensions of `mu` that make `tp` match a triple (or path) of `g`.

    With `edge_only_predicate_vars` a predicate variable ranges only over
    triples that link two resources and are not ``rdf:type`` statements.
    """
    mu = mu or {}
    sv, ov = _value(tp.sp, mu), _value(tp.op, mu)
    if isinstance(tp.pp, s.PathExpr):
        if sv is not None:
            for o in _reach(g, tp.pp, sv, True):
                ext = _extend(mu, [(tp.sp, sv), (tp.op, o)])
                if ext is not None:
                    yield ext
        elif ov is not None:
            for sub in _reach(g, tp.pp, ov, False):
                ext = _extend(mu, [(tp.sp, sub), (tp.op, ov)])
                if ext is not None:
                    yield ext
        else:
            for start in g.terms:
                for o in _reach(g, tp.pp, start, True):
                    ext = _extend(mu, [(tp.sp, start), (tp.op, o)])
                    if ext is not None:
                        yield ext
        return
    pv = _value(tp.pp, mu)
    if sv is not None:
        cands = g.by_subject.get(sv, ())
    elif ov is not None:
        cands = g.by_object.get(ov, ())
    elif pv is not None:
        cands = g.by_predicate.get(pv, ())
    else:
        cands = g.triples
    for t in cands:
        if isinstance(tp.pp, s.Var) and edge_only_predicate_vars:
            if t.predicate.lexical == RDF_TYPE or t.object.is_literal:
                continue
        ext = _extend(mu, [(tp.sp, t.subject), (tp.pp, t.predicate), (tp.op, t.object)])
        if ext is not None:
            yield ext


def eval_bgp(triples, g: RdfGraph, edge_only_predicate_vars: bool = True) -> MappingSet:
    omega: MappingSet = [{}]
    for tp in triples:
        omega = [ext for mu in omega for ext in match_triple(tp, g, mu, edge_only_predicate_vars)]
    return omega


# --- filters ------------------------------------------------------------------


def _is_numeric(t: RdfTerm) -> bool:
    return t.is_literal and t.datatype in NUMERIC_TYPES and not isinstance(literal_value(t), str)


def _is_plain(t: RdfTerm) -> bool:
    return t.is_literal and t.lang is None and t.datatype in (None, XSD + "string")


def compare_terms(op: str, a: RdfTerm, b: RdfTerm):
    """SPARQL operator semantics; returns True, False or the error marker."""
    if _is_numeric(a) and _is_numeric(b):
        x, y = literal_value(a), literal_value(b)
    elif _is_plain(a) and _is_plain(b):
        x, y = a.lexical, b.lexical
    elif (
        a.is_literal and b.is_literal and a.datatype == b.datatype == XSD + "boolean"
    ):
        x, y = a.lexical in ("true", "1"), b.lexical in ("true", "1")
    elif a.is_literal and b.is_literal and a.lang and a.lang == b.lang:
        x, y = a.lexical, b.lexical
    else:
        if op not in ("=", "!="):
            return _ERROR
        if a == b:
            return op == "="
        if a.is_literal and b.is_literal:
            return _ERROR  # unknown datatypes cannot be proven unequal
        return op == "!="
    return {
        "=": x == y, "!=": x != y, "<": x < y, "<=": x <= y, ">": x > y, ">=": x >= y,
    }[op]


def eval_filter(e: s.Expr, mu: dict):
    """Value of a filter expression: True, False or the error marker."""
    if isinstance(e, s.Compare):
        a, b = _value(e.left, mu), _value(e.right, mu)
        if isinstance(a, s.Const):
            a = a.term
        if isinstance(b, s.Const):
            b = b.term
        if a is None or b is None:
            return _ERROR
        return compare_terms(e.op, a, b)
    if isinstance(e, s.BoolAnd):
        x, y = eval_filter(e.left, mu), eval_filter(e.right, mu)
        if x is False or y is False:
            return False
        if x is _ERROR or y is _ERROR:
            return _ERROR
        return True
    if isinstance(e, s.BoolOr):
        x, y = eval_filter(e.left, mu), eval_filter(e.right, mu)
        if x is True or y is True:
            return True
        if x is _ERROR or y is _ERROR:
            return _ERROR
        return False
    if isinstance(e, s.Not):
        x = eval_filter(e.operand, mu)
        return x if x is _ERROR else not x
    if isinstance(e, s.Const):
        t = e.term
        if t.datatype == XSD + "boolean":
            return t.lexical in ("true", "1")
        return _ERROR
    if isinstance(e, s.Var):
        v = mu.get(e.name)
        if v is not None and v.datatype == XSD + "boolean":
            return v.lexical in ("true", "1")
        return _ERROR
    raise UnsupportedFeature(f"filter expression {type(e).__name__}")


def holds(e: s.Expr, mu: dict) -> bool:
    return eval_filter(e, mu) is True


# --- graph patterns -------------------------------------------------------------


def compatible(m1: dict, m2: dict) -> bool:
    return all(m2[k] == v for k, v in m1.items() if k in m2)


def eval_pattern(gp: s.GraphPattern, g: RdfGraph, edge_only_predicate_vars: bool = True) -> MappingSet:
    if isinstance(gp, s.Bgp):
        return eval_bgp(gp.triples, g, edge_only_predicate_vars)
    if isinstance(gp, s.AndPattern):
        left = eval_pattern(gp.left, g, edge_only_predicate_vars)
        right = eval_pattern(gp.right, g, edge_only_predicate_vars)
        return [{**a, **b} for a in left for b in right if compatible(a, b)]
    if isinstance(gp, s.UnionPattern):
        return eval_pattern(gp.left, g, edge_only_predicate_vars) + eval_pattern(
            gp.right, g, edge_only_predicate_vars
        )
    if isinstance(gp, s.FilterPattern):
        return [mu for mu in eval_pattern(gp.inner, g, edge_only_predicate_vars) if holds(gp.cond, mu)]
    if isinstance(gp, s.OptPattern):
        right_gp, cond = gp.right, None
        if isinstance(right_gp, s.FilterPattern):
            right_gp, cond = right_gp.inner, right_gp.cond
        left = eval_pattern(gp.left, g, edge_only_predicate_vars)
        right = eval_pattern(right_gp, g, edge_only_predicate_vars)
        out = []
        for a in left:
            ext = [{**a, **b} for b in right if compatible(a, b)]
            if cond is not None:
                ext = [m for m in ext if holds(cond, m)]
            out.extend(ext or [a])
        return out
    raise UnsupportedFeature(f"graph pattern {type(gp).__name__}")


# --- solution modifiers ------------------------------------------------------------


def _numeric(t: RdfTerm):
    return literal_value(t) if isinstance(t, RdfTerm) and _is_numeric(t) else None


def _aggregate(a: s.Aggregate, group: list[dict]) -> RdfTerm | None:
    if a.arg is None:
        return literal(len(group))
    values = [mu[a.arg] for mu in group if a.arg in mu]
    if a.distinct:
        values = list({term_key(v): v for v in values}.values())
    if a.fn is s.AggFn.COUNT:
        return literal(len(values))
    if a.fn in (s.AggFn.MAX, s.AggFn.MIN):
        if not values:
            return None
        pick = max if a.fn is s.AggFn.MAX else min
        return pick(values, key=order_key)
    nums = [_numeric(v) for v in values]
    if any(n is None for n in nums):
        return None  # a non-numeric value makes the aggregate an error
    if a.fn is s.AggFn.SUM:
        return literal(sum(nums))
    if a.fn is s.AggFn.AVG:
        return literal(sum(nums) / len(nums)) if nums else literal(0)
    raise UnsupportedFeature(f"aggregate {a.fn.value}")


def group_and_aggregate(omega: MappingSet, m: s.SolutionModifiers) -> MappingSet:
    aggs = m.aggregates
    groups: dict[tuple, list[dict]] = defaultdict(list)
    for mu in omega:
        key = tuple(term_key(mu.get(v)) for v in m.group)
        groups[key].append(mu)
    if not omega and not m.group:
        if aggs and all(a.fn is s.AggFn.COUNT for a in aggs):
            groups[()] = []
    out = []
    for members in groups.values():
        row = {}
        if members:
            for v in m.group:
                if v in members[0]:
                    row[v] = members[0][v]
        for a in aggs:
            val = _aggregate(a, members)
            if val is not None:
                row[a.alias] = val
        out.append(row)
    return out


def apply_modifiers(omega: MappingSet, m: s.SolutionModifiers, slice_: bool = True) -> MappingSet:
    """GROUP/aggregate, ORDER BY, project, DISTINCT, then OFFSET/LIMIT."""
    if m.aggregates or m.group:
        omega = group_and_aggregate(omega, m)
    if m.order:
        omega = sort_rows(omega, [((lambda mu, v=k.var: mu.get(v)), k.descending) for k in m.order])
    names = m.output_names
    omega = [{k: mu[k] for k in names if k in mu} for mu in omega]
    if m.distinct:
        seen, uniq = set(), []
        for mu in omega:
            k = mapping_key(mu)
            if k not in seen:
                seen.add(k)
                uniq.append(mu)
        omega = uniq
    if slice_:
        start = m.skip or 0
        stop = None if m.limit is None else start + m.limit
        omega = omega[start:stop]
    return omega


def unsliced(m: s.SolutionModifiers) -> s.SolutionModifiers:
    return replace(m, limit=None, skip=None)


def eval_mapping(q: s.SparqlQuery, g: RdfGraph, edge_only_predicate_vars: bool = True) -> MappingSet:
    """Evaluate a SELECT query to its (ordered) bag of solution mappings."""
    return apply_modifiers(eval_pattern(q.pattern, g, edge_only_predicate_vars), q.modifiers)

"""Reference executor for the Cypher AST over an in-memory property graph.

Pattern matching builds graph relations with :func:`get_nodes` and
:func:`expand_out` / :func:`expand_in`; clauses combine by inner join
(MATCH), left outer join (OPTIONAL MATCH), outer union (UNION) and
selection (WHERE).  Expressions follow Cypher's three-valued logic.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from typing import Any, Iterable, Mapping

from ..cypher.ast import (
    Agg,
    And,
    CExpr,
    Cmp,
    CypherQuery,
    Direction,
    In,
    IsNotNull,
    LabelsOf,
    Lit,
    MatchClause,
    NodePattern,
    Not,
    Or,
    Prop,
    Ref,
    ReturnItem,
    TypeOf,
)
from ..cypher.render import column_name
from ..errors import EvaluationError
from ..pg_model import NodeId, PropertyGraph, RelId, VocabName
from ..rdf_model import is_number
from .ordering import order_key, sort_rows
from .relation import Attr, GraphRelation, hashable, row_key

DEFAULT_MAX_DEPTH = 15


# --- values ---------------------------------------------------------------------


def _kind(v) -> str:
    if v is None:
        return "null"
    if isinstance(v, bool):
        return "bool"
    if is_number(v):
        return "number"
    if isinstance(v, NodeId):
        return "node"
    if isinstance(v, RelId):
        return "rel"
    if isinstance(v, (list, tuple)):
        return "list"
    return "string"


def cypher_equals(a, b) -> bool | None:
    ka, kb = _kind(a), _kind(b)
    if ka == "null" or kb == "null":
        return None
    if ka != kb:
        return False
    if ka == "list":
        if len(a) != len(b):
            return False
        result: bool | None = True
        for x, y in zip(a, b):
            r = cypher_equals(x, y)
            if r is False:
                return False
            if r is None:
                result = None
        return result
    if ka == "number":
        return float(a) == float(b)
    return a == b


def cypher_compare(op: str, a, b) -> bool | None:
    if op == "=":
        return cypher_equals(a, b)
    if op == "<>":
        r = cypher_equals(a, b)
        return None if r is None else not r
    ka, kb = _kind(a), _kind(b)
    if ka != kb or ka not in ("number", "string"):
        return None
    if ka == "string":
        a, b = str(a), str(b)
    return {"<": a < b, "<=": a <= b, ">": a > b, ">=": a >= b}[op]


def _and(a, b):
    if a is False or b is False:
        return False
    if a is None or b is None:
        return None
    return True


def _or(a, b):
    if a is True or b is True:
        return True
    if a is None or b is None:
        return None
    return False


def eval_expr(e: CExpr, env: Mapping[str, Any], g: PropertyGraph):
    """Evaluate a non-aggregate expression in a row environment."""
    if isinstance(e, Ref):
        if e.name not in env:
            raise EvaluationError(f"reference to unbound name {e.name}")
        return env[e.name]
    if isinstance(e, Lit):
        return e.value
    if isinstance(e, Prop):
        v = eval_expr(Ref(e.name), env, g)
        if v is None:
            return None
        if isinstance(v, (NodeId, RelId)):
            return g.prop(v, e.key)
        raise EvaluationError(f"property access on a non-element value {v!r}")
    if isinstance(e, LabelsOf):
        v = eval_expr(Ref(e.name), env, g)
        return None if v is None else tuple(VocabName(label) for label in g.labels(v))
    if isinstance(e, TypeOf):
        v = eval_expr(Ref(e.name), env, g)
        return None if v is None else VocabName(g.rel_type(v))
    if isinstance(e, Cmp):
        return cypher_compare(e.op, eval_expr(e.left, env, g), eval_expr(e.right, env, g))
    if isinstance(e, And):
        return _and(eval_expr(e.left, env, g), eval_expr(e.right, env, g))
    if isinstance(e, Or):
        return _or(eval_expr(e.left, env, g), eval_expr(e.right, env, g))
    if isinstance(e, Not):
        v = eval_expr(e.operand, env, g)
        return None if v is None else not v
    if isinstance(e, IsNotNull):
        return eval_expr(e.operand, env, g) is not None
    if isinstance(e, In):
        item = eval_expr(e.item, env, g)
        coll = eval_expr(e.collection, env, g)
        if coll is None or item is None:
            return None
        saw_null = False
        for x in coll:
            r = cypher_equals(item, x)
            if r:
                return True
            saw_null |= r is None
        return None if saw_null else False
    if isinstance(e, Agg):
        raise EvaluationError("aggregate outside RETURN")
    raise EvaluationError(f"unknown expression {e!r}")


# --- pattern operators ------------------------------------------------------------


def _node_ok(g: PropertyGraph, nid: NodeId, labels: Iterable[str], props) -> bool:
    node = g.node[nid]
    if not set(labels) <= set(node.labels):
        return False
    return all(cypher_equals(node.properties.get(k), v) is True for k, v in props)


def get_nodes(
    g: PropertyGraph, name: str, labels: Iterable[str] = (), props: Iterable[tuple[str, Any]] = ()
) -> GraphRelation:
    """Single-attribute relation of the nodes carrying `labels` and `props`."""
    labels, props = tuple(labels), tuple(props)
    if labels:
        candidates = g.by_label.get(labels[0], [])
    else:
        candidates = [n.id for n in g.nodes]
    return GraphRelation((Attr(name),), [(n,) for n in candidates if _node_ok(g, n, labels, props)])


def _steps(g: PropertyGraph, nid: NodeId, direction: Direction, rel_type: str | None):
    """(relationship, neighbour) pairs one hop away."""
    if direction in (Direction.OUT, Direction.BOTH):
        for r in g.outgoing.get(nid, ()):
            if rel_type is None or r.rel_type == rel_type:
                yield r.id, r.dst
    if direction in (Direction.IN, Direction.BOTH):
        for r in g.incoming.get(nid, ()):
            if rel_type is None or r.rel_type == rel_type:
                # a self-loop is already listed once as outgoing
                if direction is Direction.BOTH and r.src == r.dst:
                    continue
                yield r.id, r.src


def _trails(g, start, direction, rel_type, lo, hi):
    """(relationship tuple, end node) for every trail of length lo..hi from `start`."""
    stack = [((), start)]
    while stack:
        rels, node = stack.pop()
        if len(rels) >= lo:
            yield rels, node
        if len(rels) == hi:
            continue
        for rid, nxt in _steps(g, node, direction, rel_type):
            if rid not in rels:
                stack.append((rels + (rid,), nxt))


def expand(
    r: GraphRelation,
    x: str,
    y: str,
    e: str,
    g: PropertyGraph,
    rel_type: str | None = None,
    range: tuple[int, int | None] | None = None,
    direction: Direction = Direction.OUT,
    max_depth: int = DEFAULT_MAX_DEPTH,
) -> GraphRelation:
    """Add columns `y` (reached node) and `e` (relationship, or tuple of them when variable-length)."""
    try:
        xi = r.index(x)
    except KeyError:
        raise EvaluationError(f"expand from missing attribute {x}") from None
    rows = []
    for row in r.rows:
        start = row[xi]
        if start is None:
            continue
        if range is None:
            for rid, nxt in _steps(g, start, direction, rel_type):
                rows.append(row + (nxt, rid))
        else:
            lo, hi = range
            hi = max_depth if hi is None else min(hi, max_depth)
            found = sorted(_trails(g, start, direction, rel_type, lo, hi), key=lambda t: (len(t[0]), t[0]))
            for rels, end in found:
                rows.append(row + (end, rels))
    return GraphRelation(r.schema + (Attr(y), Attr(e)), rows)


def expand_out(r, x, y, e, g, rel_type=None, range=None, max_depth=DEFAULT_MAX_DEPTH) -> GraphRelation:
    return expand(r, x, y, e, g, rel_type, range, Direction.OUT, max_depth)


def expand_in(r, x, y, e, g, rel_type=None, range=None, max_depth=DEFAULT_MAX_DEPTH) -> GraphRelation:
    return expand(r, x, y, e, g, rel_type, range, Direction.IN, max_depth)


# --- clauses ----------------------------------------------------------------------


def _clause_names(clause: MatchClause) -> list[str]:
    names: dict[str, None] = {}
    for p in clause.patterns:
        for i, node in enumerate(p.nodes):
            if node.name:
                names.setdefault(node.name)
            if i < len(p.rels) and p.rels[i].name:
                names.setdefault(p.rels[i].name)
    return list(names)


class _Matcher:
    def __init__(self, g: PropertyGraph, max_depth: int):
        self.g = g
        self.max_depth = max_depth
        self._anon = itertools.count(1)

    def anon(self) -> str:
        return f" anon{next(self._anon)}"

    def bind_node(self, r: GraphRelation, node: NodePattern) -> tuple[GraphRelation, str]:
        name = node.name or self.anon()
        if name in r.names:
            i = r.index(name)
            rows = [
                row for row in r.rows
                if row[i] is not None and _node_ok(self.g, row[i], node.labels, node.properties)
            ]
            return GraphRelation(r.schema, rows), name
        nodes = get_nodes(self.g, name, node.labels, node.properties)
        return GraphRelation(r.schema + nodes.schema, [a + b for a in r.rows for b in nodes.rows]), name

    def unify(self, r: GraphRelation, tmp: str, name: str) -> GraphRelation:
        """Rename column `tmp` to `name`, or filter on equality when `name` is already bound."""
        ti = r.index(tmp)
        if name in r.names:
            ni = r.index(name)
            rows = [row[:ti] + row[ti + 1:] for row in r.rows if hashable(row[ti]) == hashable(row[ni])]
            return GraphRelation(r.schema[:ti] + r.schema[ti + 1:], rows)
        schema = list(r.schema)
        schema[ti] = Attr(name)
        return GraphRelation(tuple(schema), r.rows)

    def match(self, r: GraphRelation, clause: MatchClause) -> GraphRelation:
        """Extend every row of `r` with the matches of `clause` (inner semantics)."""
        g = self.g
        rel_cols = []
        for path in clause.patterns:
            r, cur = self.bind_node(r, path.nodes[0])
            for rel, node in zip(path.rels, path.nodes[1:]):
                ty, te = self.anon(), self.anon()
                r = expand(r, cur, ty, te, g, rel.rel_type, rel.range, rel.direction, self.max_depth)
                ti = r.index(ty)
                rows = [row for row in r.rows if _node_ok(g, row[ti], node.labels, node.properties)]
                if rel.properties:
                    ei = r.index(te)
                    rows = [
                        row for row in rows
                        if all(cypher_equals(g.prop(row[ei], k), v) is True for k, v in rel.properties)
                    ]
                r = GraphRelation(r.schema, rows)
                name = node.name or self.anon()
                r = self.unify(r, ty, name)
                ename = rel.name or self.anon()
                r = self.unify(r, te, ename)
                rel_cols.append(ename)
                cur = name
        # one relationship may be used at most once within a MATCH
        idx = [r.index(c) for c in dict.fromkeys(rel_cols)]
        rows = []
        for row in r.rows:
            used: list = []
            for i in idx:
                v = row[i]
                used.extend(v if isinstance(v, tuple) else [v])
            if len(used) == len(set(used)):
                rows.append(row)
        r = GraphRelation(r.schema, rows)
        if clause.where is not None:
            names = r.names
            r = GraphRelation(
                r.schema, [row for row in r.rows if eval_expr(clause.where, dict(zip(names, row)), g) is True]
            )
        return r

    def clause(self, r: GraphRelation, clause: MatchClause) -> GraphRelation:
        keep = [a for a in r.schema] + [Attr(n) for n in _clause_names(clause) if n not in r.names]
        width = len(r.schema)
        if not clause.optional:
            out = self.match(r, clause)
            return _reorder(out, keep)
        rows = []
        for row in r.rows:
            sub = _reorder(self.match(GraphRelation(r.schema, [row]), clause), keep)
            rows.extend(sub.rows or [row + (None,) * (len(keep) - width)])
        return GraphRelation(tuple(keep), rows)


def _reorder(r: GraphRelation, schema: list[Attr]) -> GraphRelation:
    idx = [r.index(a.name) for a in schema]
    return GraphRelation(tuple(schema), [tuple(row[i] for i in idx) for row in r.rows])


# --- projection -------------------------------------------------------------------


def _aggregate(agg: Agg, envs: list[dict], g: PropertyGraph):
    if agg.arg is None:
        return len(envs)
    values = [v for v in (eval_expr(agg.arg, env, g) for env in envs) if v is not None]
    if agg.distinct:
        values = list({hashable(v): v for v in values}.values())
    if agg.fn == "count":
        return len(values)
    if agg.fn == "sum":
        return sum(values) if values else 0
    if agg.fn == "avg":
        return sum(values) / len(values) if values else None
    if agg.fn in ("max", "min"):
        if not values:
            return None
        pick = max if agg.fn == "max" else min
        return pick(values, key=order_key)
    raise EvaluationError(f"unknown aggregate {agg.fn}")


def _project(q: CypherQuery, envs: list[dict], g: PropertyGraph) -> GraphRelation:
    items: tuple[ReturnItem, ...] = q.return_items
    schema = tuple(Attr(column_name(i), i.var) for i in items)
    aggs = [isinstance(i.expr, Agg) for i in items]
    # each output row carries the environment its ORDER BY may read
    out: list[tuple[tuple, dict]] = []
    if any(aggs):
        groups: dict[tuple, list[dict]] = defaultdict(list)
        firsts: dict[tuple, tuple] = {}
        for env in envs:
            vals = tuple(None if a else eval_expr(i.expr, env, g) for i, a in zip(items, aggs))
            k = row_key(vals)
            groups[k].append(env)
            firsts.setdefault(k, vals)
        if not envs and not any(not a for a in aggs):
            # no grouping key and no input: only an all-count projection yields a row
            if all(i.expr.fn == "count" for i in items):
                groups[()] = []
                firsts[()] = tuple(None for _ in items)
        for k, members in groups.items():
            vals = tuple(
                _aggregate(i.expr, members, g) if a else v for i, a, v in zip(items, aggs, firsts[k])
            )
            out.append((vals, _order_env(items, vals, None)))
    else:
        for env in envs:
            vals = tuple(eval_expr(i.expr, env, g) for i in items)
            out.append((vals, _order_env(items, vals, env)))
    if q.distinct:
        seen = set()
        uniq = []
        for vals, env in out:
            k = row_key(vals)
            if k not in seen:
                seen.add(k)
                uniq.append((vals, _order_env(items, vals, None)))
        out = uniq
    if q.order:
        keys = [(_order_getter(o.expr, items, g), o.descending) for o in q.order]
        out = sort_rows(out, keys)
    start = q.skip or 0
    stop = None if q.limit is None else start + q.limit
    return GraphRelation(schema, [vals for vals, _ in out[start:stop]])


def _order_env(items, vals, env) -> dict:
    scope = dict(env) if env is not None else {}
    for i, v in zip(items, vals):
        scope[column_name(i)] = v
        if i.alias:
            scope[i.alias] = v
        if isinstance(i.expr, Ref):
            scope[i.expr.name] = v
    scope[" items"] = vals
    return scope


def _order_getter(expr: CExpr, items, g):
    positions = [n for n, i in enumerate(items) if i.expr == expr]

    def get(row):
        vals, env = row
        if positions:
            return vals[positions[0]]
        return eval_expr(expr, env, g)

    return get


# --- queries ----------------------------------------------------------------------


def _exec_arm(q: CypherQuery, g: PropertyGraph, max_depth: int) -> GraphRelation:
    if q.subquery is not None:
        inner = exec_query(q.subquery, g, max_depth)
        r = GraphRelation(tuple(Attr(a.name) for a in inner.schema), inner.rows)
    else:
        r = GraphRelation((), [()])
    m = _Matcher(g, max_depth)
    for clause in q.matches:
        r = m.clause(r, clause)
    envs = [dict(zip(r.names, row)) for row in r.rows]
    if q.where is not None:
        envs = [env for env in envs if eval_expr(q.where, env, g) is True]
    return _project(q, envs, g)


def exec_query(q: CypherQuery, g: PropertyGraph, max_depth: int = DEFAULT_MAX_DEPTH) -> GraphRelation:
    """Evaluate a Cypher query; the result schema follows its RETURN columns."""
    arms = q.arms()
    results = [_exec_arm(a, g, max_depth) for a in arms]
    out = results[0]
    for arm, res in zip(arms[:-1], results[1:]):
        if res.names != out.names:
            raise EvaluationError("UNION arms return different columns")
        out = GraphRelation(out.schema, out.rows + res.rows)
        if not arm.union_all:
            seen, rows = set(), []
            for row in out.rows:
                k = row_key(row)
                if k not in seen:
                    seen.add(k)
                    rows.append(row)
            out = GraphRelation(out.schema, rows)
    return out

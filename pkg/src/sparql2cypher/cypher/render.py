"""Deterministic Cypher text renderer."""

from __future__ import annotations

import math
import re

from ..errors import UnunifiableUnion
from .ast import (
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
    PathPattern,
    Prop,
    Ref,
    RelationshipPattern,
    ReturnItem,
    TypeOf,
    conjoin,
)

_PLAIN = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


def escape_identifier(s: str) -> str:
    """Backtick-quote `s` unless it is a plain word; inner backticks are doubled."""
    if _PLAIN.match(s):
        return s
    return "`" + s.replace("`", "``") + "`"


def render_value(v) -> str:
    if v is None:
        return "null"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        if math.isnan(v) or math.isinf(v):
            raise ValueError(f"no Cypher literal for {v}")
        text = repr(v)
        return text if any(c in text for c in ".eE") else text + ".0"
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(render_value(x) for x in v) + "]"
    s = str(v).replace("\\", "\\\\").replace("'", "\\'").replace("\n", "\\n")
    return f"'{s}'"


def _props(props) -> str:
    if not props:
        return ""
    return "{" + ", ".join(f"{escape_identifier(k)}: {render_value(v)}" for k, v in props) + "}"


def render_node(n: NodePattern) -> str:
    body = escape_identifier(n.name) if n.name else ""
    body += "".join(":" + escape_identifier(label) for label in n.labels)
    if n.properties:
        body += (" " if body else "") + _props(n.properties)
    return f"({body})"


def render_relationship(r: RelationshipPattern) -> str:
    body = escape_identifier(r.name) if r.name else ""
    if r.rel_type:
        body += ":" + escape_identifier(r.rel_type)
    if r.range is not None:
        lo, hi = r.range
        body += f"*{lo}..{'' if hi is None else hi}"
    if r.properties:
        body += " " + _props(r.properties)
    inner = f"[{body}]" if body else ""
    if r.direction is Direction.OUT:
        return f"-{inner}->"
    if r.direction is Direction.IN:
        return f"<-{inner}-"
    return f"-{inner}-"


def render_path(p: PathPattern) -> str:
    out = render_node(p.nodes[0])
    for rel, node in zip(p.rels, p.nodes[1:]):
        out += render_relationship(rel) + render_node(node)
    return out


def render_expr(e: CExpr) -> str:
    if isinstance(e, Ref):
        return escape_identifier(e.name)
    if isinstance(e, Prop):
        return f"{escape_identifier(e.name)}.{escape_identifier(e.key)}"
    if isinstance(e, LabelsOf):
        return f"labels({escape_identifier(e.name)})"
    if isinstance(e, TypeOf):
        return f"type({escape_identifier(e.name)})"
    if isinstance(e, Lit):
        return render_value(e.value)
    if isinstance(e, Cmp):
        return f"{render_expr(e.left)} {e.op} {render_expr(e.right)}"
    if isinstance(e, And):
        return f"({render_expr(e.left)} AND {render_expr(e.right)})"
    if isinstance(e, Or):
        return f"({render_expr(e.left)} OR {render_expr(e.right)})"
    if isinstance(e, Not):
        inner = render_expr(e.operand)
        return f"NOT {inner}" if inner.startswith("(") and inner.endswith(")") else f"NOT ({inner})"
    if isinstance(e, IsNotNull):
        return f"{render_expr(e.operand)} IS NOT NULL"
    if isinstance(e, In):
        return f"{render_expr(e.item)} IN {render_expr(e.collection)}"
    if isinstance(e, Agg):
        arg = "*" if e.arg is None else render_expr(e.arg)
        return f"{e.fn}({'DISTINCT ' if e.distinct else ''}{arg})"
    raise TypeError(f"not a Cypher expression: {e!r}")


def column_name(item: ReturnItem) -> str:
    """Result column label: the alias if any, else the rendered expression."""
    return item.alias if item.alias else render_expr(item.expr)


def _render_item(item: ReturnItem) -> str:
    text = render_expr(item.expr)
    if item.alias and item.alias != text:
        return f"{text} AS {escape_identifier(item.alias)}"
    return text


def _match_text(m: MatchClause, extra_where: CExpr | None = None) -> str:
    text = ("OPTIONAL MATCH " if m.optional else "MATCH ") + ", ".join(render_path(p) for p in m.patterns)
    where = conjoin(m.where, extra_where)
    if where is not None:
        text += " WHERE " + render_expr(where)
    return text


def _clauses(q: CypherQuery) -> list[str]:
    out: list[str] = []
    if q.subquery is not None:
        out.append("CALL { " + " ".join(_arm_clauses(q.subquery)) + " }")
    has_optional = any(m.optional for m in q.matches)
    for i, m in enumerate(q.matches):
        last = i == len(q.matches) - 1
        out.append(_match_text(m, q.where if (last and not has_optional) else None))
    if q.where is not None and (has_optional or not q.matches):
        out.append("WITH * WHERE " + render_expr(q.where))
    ret = "RETURN " + ("DISTINCT " if q.distinct else "") + ", ".join(_render_item(i) for i in q.return_items)
    out.append(ret)
    if q.order:
        out.append(
            "ORDER BY " + ", ".join(f"{render_expr(o.expr)} {'DESC' if o.descending else 'ASC'}" for o in q.order)
        )
    if q.skip is not None:
        out.append(f"SKIP {q.skip}")
    if q.limit is not None:
        out.append(f"LIMIT {q.limit}")
    return out


def _arm_clauses(q: CypherQuery) -> list[str]:
    arms = q.arms()
    widths = {len(a.return_items) for a in arms}
    if len(widths) > 1:
        raise UnunifiableUnion(f"UNION arms return different numbers of columns: {sorted(widths)}")
    if len(arms) > 1:
        names = [a.columns() for a in arms]
        if any(n != names[0] for n in names):
            raise UnunifiableUnion(f"UNION arms return different column names: {names}")
    out = []
    for i, arm in enumerate(arms):
        if i:
            out.append("UNION ALL" if arms[i - 1].union_all else "UNION")
        out.extend(_clauses(arm))
    return out


def render(q: CypherQuery, pretty: bool = False) -> str:
    """Render a query; `pretty` puts each clause on its own line."""
    return ("\n" if pretty else " ").join(_arm_clauses(q))


def normalize_whitespace(text: str) -> str:
    """Collapse whitespace runs; used for golden comparisons."""
    return " ".join(text.split())

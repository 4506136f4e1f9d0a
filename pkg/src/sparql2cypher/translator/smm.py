"""Solution modifier mapping: projection, DISTINCT, ORDER BY, SKIP/LIMIT, aggregates."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from ..cypher.ast import Agg, CExpr, OrderItem, Prop, Ref, ReturnItem
from ..cypher.render import render_expr
from ..errors import UnsupportedFeature
from ..sparql.ast import AggFn, Aggregate, SolutionModifiers
from .pmm import URI_KEY


@dataclass(frozen=True)
class ClauseSettings:
    return_items: tuple[ReturnItem, ...]
    distinct: bool
    order: tuple[OrderItem, ...]
    skip: int | None
    limit: int | None


def _is_node(e: CExpr, value_names: frozenset[str]) -> bool:
    return isinstance(e, Ref) and e.name not in value_names


def _value(var: str, env: Mapping[str, CExpr]) -> CExpr:
    if var not in env:
        raise UnsupportedFeature("projection of a variable the pattern never binds", f"?{var}")
    return env[var]


def return_items(
    m: SolutionModifiers,
    env: Mapping[str, CExpr],
    alias_all: bool = False,
    value_names: frozenset[str] = frozenset(),
) -> tuple[ReturnItem, ...]:
    items = []
    for p in m.projection:
        if isinstance(p, Aggregate):
            arg = None
            if p.arg is not None:
                arg = _value(p.arg, env)
                if _is_node(arg, value_names) and p.fn is not AggFn.COUNT:
                    raise UnsupportedFeature(f"{p.fn.value} over a resource variable", f"?{p.arg}")
            items.append(ReturnItem(Agg(p.fn.value.lower(), arg, p.distinct), alias=p.alias, var=p.alias))
        else:
            items.append(ReturnItem(_value(p, env), var=p))
    texts = [render_expr(i.expr) for i in items if i.alias is None]
    clash = len(texts) != len(set(texts))
    if alias_all or clash:
        items = [i if i.alias else ReturnItem(i.expr, alias=i.var, var=i.var) for i in items]
    return tuple(items)


def order_items(
    m: SolutionModifiers,
    env: Mapping[str, CExpr],
    items: tuple[ReturnItem, ...],
    value_names: frozenset[str] = frozenset(),
) -> tuple[OrderItem, ...]:
    aliases = {i.alias for i in items if i.alias}
    exprs = {i.expr for i in items}
    grouped = bool(m.aggregates) or bool(m.group)
    out = []
    for key in m.order:
        if key.var in aliases and key.var not in env:
            expr: CExpr = Ref(key.var)
        else:
            expr = _value(key.var, env)
            if (m.distinct or grouped) and expr not in exprs:
                raise UnsupportedFeature(
                    "ORDER BY a variable that is not returned, together with DISTINCT or aggregation",
                    f"?{key.var}",
                )
            if _is_node(expr, value_names):
                expr = Prop(expr.name, URI_KEY)
        out.append(OrderItem(expr, key.descending))
    return tuple(out)


def smm(
    m: SolutionModifiers,
    env: Mapping[str, CExpr],
    alias_all: bool = False,
    value_names: frozenset[str] = frozenset(),
) -> ClauseSettings:
    """Map solution modifiers onto RETURN / ORDER BY / SKIP / LIMIT settings.

    `value_names` lists names that hold plain values even though they are
    referenced with :class:`Ref` (columns coming out of a ``CALL`` block).
    """
    if m.aggregates:
        plain = [p for p in m.projection if isinstance(p, str)]
        if set(m.group) != set(plain):
            raise UnsupportedFeature("GROUP BY a variable that is not projected")
    elif m.group and set(m.group) != set(m.projection):
        raise UnsupportedFeature("GROUP BY a variable that is not projected")
    items = return_items(m, env, alias_all, value_names)
    # GROUP BY without aggregates yields one row per distinct key
    distinct = m.distinct or (bool(m.group) and not m.aggregates)
    return ClauseSettings(items, distinct, order_items(m, env, items, value_names), m.skip, m.limit)

"""Rewrite a graph pattern into UNION-free blocks of required / optional parts.

A :class:`Block` means::

    Filter[post](LeftJoin(... LeftJoin(Filter[req](Join(required)), opt1) ..., optN))

which is exactly the shape MATCH / OPTIONAL MATCH / WHERE can express.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import UnboundFilterVariable, UnsupportedFeature
from ..sparql.ast import (
    AndPattern,
    Bgp,
    Expr,
    FilterPattern,
    GraphPattern,
    OptPattern,
    TriplePattern,
    UnionPattern,
    expr_variables,
    pattern_variables,
)


@dataclass(frozen=True)
class OptArm:
    triples: tuple[TriplePattern, ...]
    filters: tuple[Expr, ...] = ()

    def variables(self) -> set[str]:
        return {v for tp in self.triples for v in tp.variables()}


@dataclass(frozen=True)
class Block:
    required: tuple[TriplePattern, ...] = ()
    req_filters: tuple[Expr, ...] = ()
    optionals: tuple[OptArm, ...] = ()
    post_filters: tuple[Expr, ...] = ()

    def certain(self) -> set[str]:
        return {v for tp in self.required for v in tp.variables()}

    def variables(self) -> set[str]:
        out = self.certain()
        for arm in self.optionals:
            out |= arm.variables()
        return out


def union_arms(gp: GraphPattern) -> list[GraphPattern]:
    """Distribute UNION to the top; the result is a list of UNION-free patterns."""
    if isinstance(gp, Bgp):
        return [gp]
    if isinstance(gp, UnionPattern):
        return union_arms(gp.left) + union_arms(gp.right)
    if isinstance(gp, AndPattern):
        return [AndPattern(a, b) for a in union_arms(gp.left) for b in union_arms(gp.right)]
    if isinstance(gp, FilterPattern):
        _check_scope(gp.cond, set(pattern_variables(gp.inner)))
        return [FilterPattern(a, gp.cond) for a in union_arms(gp.inner)]
    if isinstance(gp, OptPattern):
        if len(union_arms(gp.right)) > 1:
            raise UnsupportedFeature("UNION inside OPTIONAL")
        return [OptPattern(a, gp.right) for a in union_arms(gp.left)]
    raise TypeError(f"not a graph pattern: {gp!r}")


def _check_scope(cond: Expr, scope: set[str]) -> None:
    for v in expr_variables(cond):
        if v not in scope:
            raise UnboundFilterVariable(v)


def _new_vars(arm: OptArm, certain: set[str]) -> set[str]:
    return arm.variables() - certain


def _check_optionals(block: Block) -> Block:
    certain = block.certain()
    arms = block.optionals
    for i, a in enumerate(arms):
        fresh = _new_vars(a, certain)
        for j, b in enumerate(arms):
            if i != j and fresh & b.variables():
                raise UnsupportedFeature(
                    "OPTIONAL groups sharing variables not bound by the required pattern",
                    ", ".join("?" + v for v in sorted(fresh & b.variables())),
                )
    return block


def normalize(gp: GraphPattern) -> Block:
    """Normalise a UNION-free pattern into a :class:`Block`."""
    if isinstance(gp, Bgp):
        return Block(required=gp.triples)
    if isinstance(gp, FilterPattern):
        _check_scope(gp.cond, set(pattern_variables(gp.inner)))
        b = normalize(gp.inner)
        if not b.optionals or set(expr_variables(gp.cond)) <= b.certain():
            return Block(b.required, b.req_filters + (gp.cond,), b.optionals, b.post_filters)
        return Block(b.required, b.req_filters, b.optionals, b.post_filters + (gp.cond,))
    if isinstance(gp, AndPattern):
        left, right = normalize(gp.left), normalize(gp.right)
        for side, other in ((left, right), (right, left)):
            other_vars = other.variables()
            for arm in side.optionals:
                clash = _new_vars(arm, side.certain()) & other_vars
                if clash:
                    raise UnsupportedFeature(
                        "join with a pattern that reuses an OPTIONAL-only variable",
                        ", ".join("?" + v for v in sorted(clash)),
                    )
        return _check_optionals(
            Block(
                left.required + right.required,
                left.req_filters + right.req_filters,
                left.optionals + right.optionals,
                left.post_filters + right.post_filters,
            )
        )
    if isinstance(gp, OptPattern):
        left = normalize(gp.left)
        inner, conds = gp.right, []
        while isinstance(inner, FilterPattern):
            conds.insert(0, inner.cond)
            inner = inner.inner
        right = normalize(inner)
        if right.optionals:
            raise UnsupportedFeature("nested OPTIONAL")
        scope = set(pattern_variables(gp.left)) | set(pattern_variables(inner))
        for c in conds:
            _check_scope(c, scope)
        arm = OptArm(right.required, right.req_filters + tuple(conds))
        return _check_optionals(
            Block(left.required, left.req_filters, left.optionals + (arm,), left.post_filters)
        )
    if isinstance(gp, UnionPattern):
        raise ValueError("normalize expects a UNION-free pattern; call union_arms first")
    raise TypeError(f"not a graph pattern: {gp!r}")

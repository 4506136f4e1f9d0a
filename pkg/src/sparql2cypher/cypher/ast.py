"""Cypher query AST: patterns, expressions and clauses."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any, Union


class Direction(enum.Enum):
    OUT = "->"
    IN = "<-"
    BOTH = "--"

    def reversed(self) -> Direction:
        return {Direction.OUT: Direction.IN, Direction.IN: Direction.OUT}.get(self, self)


Props = tuple[tuple[str, Any], ...]


@dataclass(frozen=True)
class NodePattern:
    name: str | None = None
    labels: tuple[str, ...] = ()
    properties: Props = ()

    @property
    def props(self) -> dict[str, Any]:
        return dict(self.properties)

    @property
    def is_bare(self) -> bool:
        return not self.labels and not self.properties


@dataclass(frozen=True)
class RelationshipPattern:
    direction: Direction = Direction.OUT
    name: str | None = None
    rel_type: str | None = None
    properties: Props = ()
    range: tuple[int, int | None] | None = None

    def __post_init__(self):
        if self.range is not None:
            lo, hi = self.range
            if lo < 0 or (hi is not None and hi < lo):
                raise ValueError(f"invalid relationship range {self.range}")

    @property
    def is_variable_length(self) -> bool:
        return self.range is not None


@dataclass(frozen=True)
class PathPattern:
    """``node (rel node)*`` stored as parallel tuples."""

    nodes: tuple[NodePattern, ...]
    rels: tuple[RelationshipPattern, ...] = ()

    def __post_init__(self):
        if len(self.nodes) != len(self.rels) + 1:
            raise ValueError("a path alternates nodes and relationships and starts/ends with a node")

    @property
    def start(self) -> NodePattern:
        return self.nodes[0]

    @property
    def end(self) -> NodePattern:
        return self.nodes[-1]

    def node_names(self) -> list[str]:
        return [n.name for n in self.nodes if n.name]


# --- expressions ---------------------------------------------------------------


@dataclass(frozen=True)
class Ref:
    name: str


@dataclass(frozen=True)
class Prop:
    name: str
    key: str


@dataclass(frozen=True)
class LabelsOf:
    name: str


@dataclass(frozen=True)
class TypeOf:
    name: str


@dataclass(frozen=True)
class Lit:
    value: Any  # int | float | str | bool | None


@dataclass(frozen=True)
class Cmp:
    op: str  # = <> < <= > >=
    left: CExpr
    right: CExpr


@dataclass(frozen=True)
class And:
    left: CExpr
    right: CExpr


@dataclass(frozen=True)
class Or:
    left: CExpr
    right: CExpr


@dataclass(frozen=True)
class Not:
    operand: CExpr


@dataclass(frozen=True)
class IsNotNull:
    operand: CExpr


@dataclass(frozen=True)
class In:
    item: CExpr
    collection: CExpr


@dataclass(frozen=True)
class Agg:
    fn: str  # count | max | min | sum | avg
    arg: CExpr | None  # None means count(*)
    distinct: bool = False


CExpr = Union[Ref, Prop, LabelsOf, TypeOf, Lit, Cmp, And, Or, Not, IsNotNull, In, Agg]


def conjoin(*exprs: CExpr | None) -> CExpr | None:
    out = None
    for e in exprs:
        if e is None:
            continue
        out = e if out is None else And(out, e)
    return out


def expr_names(e: CExpr) -> set[str]:
    """Pattern names an expression reads."""
    if isinstance(e, (Ref, LabelsOf, TypeOf)):
        return {e.name}
    if isinstance(e, Prop):
        return {e.name}
    if isinstance(e, Lit):
        return set()
    if isinstance(e, (Not, IsNotNull)):
        return expr_names(e.operand)
    if isinstance(e, In):
        return expr_names(e.item) | expr_names(e.collection)
    if isinstance(e, Agg):
        return set() if e.arg is None else expr_names(e.arg)
    return expr_names(e.left) | expr_names(e.right)


# --- clauses -------------------------------------------------------------------


class ItemKind(enum.Enum):
    VARIABLE = "Variable"
    PROPERTY_ACCESS = "PropertyAccess"
    LABELS_FN = "LabelsFn"
    TYPE_FN = "TypeFn"
    AGGREGATE = "Aggregate"
    EXPRESSION = "Expression"


@dataclass(frozen=True)
class ReturnItem:
    expr: CExpr
    alias: str | None = None
    # SPARQL variable this column answers; not rendered
    var: str | None = field(default=None, compare=False)

    @property
    def kind(self) -> ItemKind:
        return {
            Ref: ItemKind.VARIABLE,
            Prop: ItemKind.PROPERTY_ACCESS,
            LabelsOf: ItemKind.LABELS_FN,
            TypeOf: ItemKind.TYPE_FN,
            Agg: ItemKind.AGGREGATE,
        }.get(type(self.expr), ItemKind.EXPRESSION)


@dataclass(frozen=True)
class OrderItem:
    expr: CExpr
    descending: bool = False


@dataclass(frozen=True)
class MatchClause:
    patterns: tuple[PathPattern, ...]
    optional: bool = False
    where: CExpr | None = None


@dataclass(frozen=True)
class CypherQuery:
    matches: tuple[MatchClause, ...] = ()
    where: CExpr | None = None  # applies after every MATCH / OPTIONAL MATCH
    return_items: tuple[ReturnItem, ...] = ()
    distinct: bool = False
    order: tuple[OrderItem, ...] = ()
    skip: int | None = None
    limit: int | None = None
    union_with: CypherQuery | None = None
    union_all: bool = True
    subquery: CypherQuery | None = None  # CALL { ... } feeding this query's RETURN

    @property
    def match_patterns(self) -> list[PathPattern]:
        return [p for m in self.matches if not m.optional for p in m.patterns]

    @property
    def optional_matches(self) -> list[PathPattern]:
        return [p for m in self.matches if m.optional for p in m.patterns]

    def arms(self) -> list[CypherQuery]:
        out = [self]
        while out[-1].union_with is not None:
            out.append(out[-1].union_with)
        return out

    def columns(self) -> list[str]:
        from .render import column_name

        return [column_name(item) for item in self.return_items]

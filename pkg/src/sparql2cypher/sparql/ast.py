"""Immutable AST for the supported SPARQL SELECT subset.

Constants reuse :class:`RdfTerm` (IRIs and literals); variables are
:class:`Var` with the leading ``?`` stripped.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Mapping, Union

from ..rdf_model import RDF_TYPE, RdfTerm, TermKind


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return "?" + self.name


TripleElement = Union[Var, RdfTerm]


class ElementKind(enum.Enum):
    VARIABLE = "Variable"
    IRI = "IRI"
    LITERAL = "Literal"


def element_kind(e: TripleElement) -> ElementKind:
    if isinstance(e, Var):
        return ElementKind.VARIABLE
    if e.kind is TermKind.IRI:
        return ElementKind.IRI
    return ElementKind.LITERAL


class PathKind(enum.Enum):
    PREDICATE = "PredicatePath"
    INVERSE = "InversePath"
    ZERO_OR_MORE = "ZeroOrMorePath"
    ONE_OR_MORE = "OneOrMorePath"
    ZERO_OR_ONE = "ZeroOrOnePath"
    SEQUENCE = "SequencePath"


@dataclass(frozen=True)
class PathExpr:
    kind: PathKind
    iri: str | None = None
    parts: tuple[PathExpr, PathExpr] | None = None

    def __post_init__(self):
        if self.kind is PathKind.SEQUENCE:
            if self.iri is not None or self.parts is None or len(self.parts) != 2:
                raise ValueError("a sequence path has exactly two parts and no IRI")
        elif self.iri is None or self.parts is not None:
            raise ValueError(f"{self.kind.value} carries exactly one IRI")

    def steps(self) -> list[PathExpr]:
        """Flatten nested sequences into their single-step parts, left to right."""
        if self.kind is not PathKind.SEQUENCE:
            return [self]
        return self.parts[0].steps() + self.parts[1].steps()


@dataclass(frozen=True)
class TriplePattern:
    sp: TripleElement
    pp: TripleElement | PathExpr
    op: TripleElement

    def __post_init__(self):
        if isinstance(self.pp, RdfTerm) and self.pp.kind is not TermKind.IRI:
            raise ValueError("predicate pattern must be an IRI, a variable or a path")

    @property
    def is_type(self) -> bool:
        return isinstance(self.pp, RdfTerm) and self.pp.lexical == RDF_TYPE

    def variables(self) -> list[str]:
        out = [e.name for e in (self.sp, self.pp, self.op) if isinstance(e, Var)]
        return list(dict.fromkeys(out))


# --- graph patterns ----------------------------------------------------------


@dataclass(frozen=True)
class Bgp:
    triples: tuple[TriplePattern, ...]

    def __post_init__(self):
        if not self.triples:
            raise ValueError("a basic graph pattern needs at least one triple pattern")


@dataclass(frozen=True)
class AndPattern:
    left: GraphPattern
    right: GraphPattern


@dataclass(frozen=True)
class OptPattern:
    left: GraphPattern
    right: GraphPattern


@dataclass(frozen=True)
class UnionPattern:
    left: GraphPattern
    right: GraphPattern


@dataclass(frozen=True)
class FilterPattern:
    inner: GraphPattern
    cond: Expr


GraphPattern = Union[Bgp, AndPattern, OptPattern, UnionPattern, FilterPattern]


def pattern_variables(gp: GraphPattern) -> list[str]:
    """Variables occurring in triple patterns of `gp`, first-occurrence order."""
    out: dict[str, None] = {}
    if isinstance(gp, Bgp):
        for tp in gp.triples:
            out.update(dict.fromkeys(tp.variables()))
    elif isinstance(gp, FilterPattern):
        out.update(dict.fromkeys(pattern_variables(gp.inner)))
    else:
        out.update(dict.fromkeys(pattern_variables(gp.left)))
        out.update(dict.fromkeys(pattern_variables(gp.right)))
    return list(out)


# --- filter expressions ------------------------------------------------------

COMPARISON_OPS = ("=", "!=", "<", "<=", ">", ">=")


@dataclass(frozen=True)
class Const:
    term: RdfTerm


@dataclass(frozen=True)
class Compare:
    op: str
    left: Var | Const
    right: Var | Const

    def __post_init__(self):
        if self.op not in COMPARISON_OPS:
            raise ValueError(f"unknown comparison {self.op}")


@dataclass(frozen=True)
class BoolAnd:
    left: Expr
    right: Expr


@dataclass(frozen=True)
class BoolOr:
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Not:
    operand: Expr


Expr = Union[Var, Const, Compare, BoolAnd, BoolOr, Not]


def expr_variables(e: Expr) -> list[str]:
    if isinstance(e, Var):
        return [e.name]
    if isinstance(e, Const):
        return []
    if isinstance(e, Not):
        return expr_variables(e.operand)
    return list(dict.fromkeys(expr_variables(e.left) + expr_variables(e.right)))


# --- solution modifiers ------------------------------------------------------


class AggFn(enum.Enum):
    COUNT = "COUNT"
    MAX = "MAX"
    MIN = "MIN"
    SUM = "SUM"
    AVG = "AVG"


@dataclass(frozen=True)
class Aggregate:
    fn: AggFn
    arg: str | None  # None means COUNT(*)
    alias: str
    distinct: bool = False


@dataclass(frozen=True)
class OrderKey:
    var: str
    descending: bool = False


@dataclass(frozen=True)
class SolutionModifiers:
    projection: tuple[str | Aggregate, ...] = ()
    distinct: bool = False
    order: tuple[OrderKey, ...] = ()
    limit: int | None = None
    skip: int | None = None
    group: tuple[str, ...] = ()

    def __post_init__(self):
        for n in (self.limit, self.skip):
            if n is not None and n < 0:
                raise ValueError("LIMIT/OFFSET must be non-negative")

    @property
    def aggregates(self) -> list[Aggregate]:
        return [p for p in self.projection if isinstance(p, Aggregate)]

    @property
    def output_names(self) -> list[str]:
        return [p.alias if isinstance(p, Aggregate) else p for p in self.projection]


@dataclass(frozen=True)
class SparqlQuery:
    pattern: GraphPattern
    modifiers: SolutionModifiers
    prefixes: Mapping[str, str] = field(default_factory=dict, compare=False, hash=False)

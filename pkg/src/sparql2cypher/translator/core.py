"""Assemble a complete Cypher query from a parsed SPARQL query."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Mapping

from ..catalog import SchemaCatalog, TripleKind, classify_triple
from ..cypher.ast import (
    Cmp,
    CExpr,
    CypherQuery,
    IsNotNull,
    LabelsOf,
    MatchClause,
    PathPattern,
    Prop,
    Ref,
    RelationshipPattern,
    conjoin,
)
from ..cypher.render import render
from ..errors import UnsupportedFeature, UnunifiableUnion
from ..rdf_model import PrefixMap
from ..sparql.ast import (
    Bgp,
    FilterPattern,
    GraphPattern,
    PathExpr,
    SolutionModifiers,
    SparqlQuery,
    Var,
    expr_variables,
    pattern_variables,
)
from ..sparql.parser import parse_sparql
from .expressions import map_expression
from .naming import Namer
from .normalize import Block, OptArm, normalize, union_arms
from .pmm import PatternMapper, no_labels
from .smm import smm


@dataclass(frozen=True)
class TranslateOptions:
    """Knobs that change the generated text but not its meaning on regular data.

    rel_names: ``"predicate"`` names IRI relationships after the predicate's
    local name (``rF``); ``"anonymous"`` uses ``_r``, ``_r2``, ...
    null_guards: add ``IS NOT NULL`` tests for every property binding in
    the required part, so nodes lacking a property drop out as they do in
    SPARQL.
    prefixes: extra display prefixes, merged under the query's own.
    """

    rel_names: str = "predicate"
    null_guards: bool = False
    prefixes: Mapping[str, str] = field(default_factory=dict)


def display_prefixes(q: SparqlQuery, extra: Mapping[str, str] | None = None) -> PrefixMap:
    return PrefixMap(extra or {}).merged(q.prefixes)


# --- relationship isomorphism ------------------------------------------------


def _may_share_edge(a: RelationshipPattern, b: RelationshipPattern) -> bool:
    return a.rel_type is None or b.rel_type is None or a.rel_type == b.rel_type


def split_clauses(patterns: tuple[PathPattern, ...]) -> list[tuple[PathPattern, ...]]:
    """Spread patterns over MATCH clauses so no two relationships in one clause could bind the same edge.

    Cypher forbids one relationship from matching twice within a MATCH;
    SPARQL has no such restriction, so such pairs must live in separate
    clauses (which then join on shared node names).
    """
    clauses: list[list[PathPattern]] = []
    clause_rels: list[list[RelationshipPattern]] = []
    for p in patterns:
        pieces = []
        nodes, rels = [p.nodes[0]], []
        for rel, node in zip(p.rels, p.nodes[1:]):
            if any(_may_share_edge(rel, r) for r in rels):
                pieces.append(PathPattern(tuple(nodes), tuple(rels)))
                nodes, rels = [type(nodes[-1])(nodes[-1].name)], []
            rels.append(rel)
            nodes.append(node)
        pieces.append(PathPattern(tuple(nodes), tuple(rels)))
        for piece in pieces:
            for i, existing in enumerate(clause_rels):
                if not any(_may_share_edge(a, b) for a in piece.rels for b in existing):
                    clauses[i].append(piece)
                    existing.extend(piece.rels)
                    break
            else:
                clauses.append([piece])
                clause_rels.append(list(piece.rels))
    return [tuple(c) for c in clauses]


# --- blocks ------------------------------------------------------------------


@dataclass
class _ArmResult:
    matches: tuple[MatchClause, ...]
    where: CExpr | None
    env: dict[str, CExpr]


class _BlockTranslator:
    def __init__(
        self,
        cat: SchemaCatalog,
        prefixes: PrefixMap,
        namer: Namer,
        options: TranslateOptions,
        existence_only: frozenset[str] = frozenset(),
    ):
        self.cat = cat
        self.existence_only = existence_only
        self.prefixes = prefixes
        self.namer = namer
        self.options = options
        self.env: dict[str, CExpr] = {}

    def mapper(self, guards: bool, aliases=None) -> PatternMapper:
        return PatternMapper(
            self.cat, self.prefixes, self.namer, self.env, self.options.rel_names, guards, aliases,
            self.existence_only,
        )

    def run(self, block: Block) -> _ArmResult:
        req = self.mapper(self.options.null_guards)
        for tp in block.required:
            req.add(tp)
        ps = req.ps
        filters = [map_expression(c, self.env, self.prefixes) for c in block.req_filters]
        where = conjoin(*ps.conditions, *ps.required_guards(), *filters)
        clauses = split_clauses(ps.patterns)
        matches = [MatchClause(c) for c in clauses]
        if where is not None and matches:
            last = matches[-1]
            matches[-1] = MatchClause(last.patterns, False, where)
        for arm in block.optionals:
            clause = self.optional(arm)
            if clause is not None:
                matches.append(clause)
        post = conjoin(*(map_expression(c, self.env, self.prefixes) for c in block.post_filters))
        return _ArmResult(tuple(matches), post, self.env)

    def optional(self, arm: OptArm) -> MatchClause | None:
        outer_nodes = {v for v, b in self.env.items() if isinstance(b, Ref)}
        # a lone `?x :p ?v` on a bound node is just a nullable property read
        if len(arm.triples) == 1 and not arm.filters:
            tp = arm.triples[0]
            if (
                isinstance(tp.sp, Var)
                and tp.sp.name in outer_nodes
                and isinstance(tp.op, Var)
                and tp.op.name not in self.env
                and not isinstance(tp.pp, (Var, PathExpr))
                and classify_triple(tp, self.cat) is TripleKind.PROPERTY
            ):
                node = self.env[tp.sp.name]
                self.env[tp.op.name] = Prop(node.name, self.prefixes.shorten(tp.pp.lexical))
                return None
        # outer nodes that receive value bindings here get a local stand-in,
        # so those values read as null whenever the whole group fails to match
        aliases = {}
        for tp in arm.triples:
            if isinstance(tp.sp, Var) and tp.sp.name in outer_nodes and isinstance(tp.op, Var):
                if not isinstance(tp.pp, (Var, PathExpr)) and classify_triple(tp, self.cat) in (
                    TripleKind.TYPE,
                    TripleKind.PROPERTY,
                ):
                    if tp.sp.name not in aliases:
                        aliases[tp.sp.name] = self.namer.numbered("_o")
        m = self.mapper(True, aliases)
        for tp in arm.triples:
            m.add(tp)
        ps = m.ps
        for var, alias in aliases.items():
            m.ensure_node(alias)
        clauses = split_clauses(ps.patterns)
        if len(clauses) > 1:
            raise UnsupportedFeature("OPTIONAL group whose relationships could match the same edge")
        same = [Cmp("=", Ref(alias), self.env[var]) for var, alias in aliases.items()]
        guards = list(ps.guards)
        if not self.options.null_guards:
            # the arm always needs its presence tests, even when the required part skips them
            for var in m.new_values:
                b = self.env[var]
                if isinstance(b, Prop):
                    guards.append(IsNotNull(b))
                elif isinstance(b, LabelsOf):
                    guards.append(Cmp("<>", b, no_labels()))
        filters = [map_expression(c, self.env, self.prefixes) for c in arm.filters]
        where = conjoin(*same, *ps.conditions, *_dedupe(guards), *filters)
        return MatchClause(clauses[0], True, where)


def _dedupe(items):
    return list(dict.fromkeys(items))


# --- queries -----------------------------------------------------------------


def _triples_and_filters(gp: GraphPattern, triples: list, filters: list) -> None:
    if isinstance(gp, Bgp):
        triples.extend(gp.triples)
    elif isinstance(gp, FilterPattern):
        filters.append(gp.cond)
        _triples_and_filters(gp.inner, triples, filters)
    else:
        _triples_and_filters(gp.left, triples, filters)
        _triples_and_filters(gp.right, triples, filters)


def existence_only_variables(q: SparqlQuery) -> frozenset[str]:
    """Variables that occur in a single triple pattern and nowhere else in the query."""
    triples: list = []
    filters: list = []
    _triples_and_filters(q.pattern, triples, filters)
    counts = Counter(v for tp in triples for v in tp.variables())
    m = q.modifiers
    used = {p for p in m.projection if isinstance(p, str)}
    used |= {a.arg for a in m.aggregates if a.arg is not None}
    used |= {k.var for k in m.order} | set(m.group)
    for f in filters:
        used |= set(expr_variables(f))
    return frozenset(v for v, n in counts.items() if n == 1 and v not in used)


def _all_names(q: SparqlQuery) -> list[str]:
    names = pattern_variables(q.pattern)
    names += [a.alias for a in q.modifiers.aggregates]
    return list(dict.fromkeys(names))


def map_binary(
    gp: GraphPattern,
    cat: SchemaCatalog,
    prefixes: PrefixMap | None = None,
    options: TranslateOptions | None = None,
    names: list[str] | None = None,
    existence_only: frozenset[str] = frozenset(),
) -> list[tuple[CypherQuery, dict[str, CExpr]]]:
    """Structure AND / OPT / FILTER into MATCH clauses and split UNION into separate arms.

    Returns one (query skeleton without RETURN, variable bindings) pair per UNION arm.
    """
    options = options or TranslateOptions()
    prefixes = prefixes or PrefixMap()
    names = names if names is not None else pattern_variables(gp)
    out = []
    for arm in union_arms(gp):
        block = normalize(arm)
        bt = _BlockTranslator(cat, prefixes, Namer(names), options, existence_only)
        res = bt.run(block)
        out.append((CypherQuery(matches=res.matches, where=res.where), res.env))
    return out


def _with_settings(skel: CypherQuery, settings) -> CypherQuery:
    return CypherQuery(
        matches=skel.matches,
        where=skel.where,
        return_items=settings.return_items,
        distinct=settings.distinct,
        order=settings.order,
        skip=settings.skip,
        limit=settings.limit,
        subquery=skel.subquery,
    )


def _chain(arms: list[CypherQuery], union_all: bool) -> CypherQuery:
    out = arms[-1]
    for arm in reversed(arms[:-1]):
        out = CypherQuery(
            arm.matches, arm.where, arm.return_items, arm.distinct, arm.order, arm.skip, arm.limit,
            union_with=out, union_all=union_all,
        )
    return out


def translate(q: SparqlQuery, cat: SchemaCatalog, options: TranslateOptions | None = None) -> CypherQuery:
    """Translate a parsed SELECT query into a Cypher AST."""
    options = options or TranslateOptions()
    prefixes = display_prefixes(q, options.prefixes)
    m = q.modifiers
    arms = map_binary(q.pattern, cat, prefixes, options, _all_names(q), existence_only_variables(q))
    if len(arms) == 1:
        skel, env = arms[0]
        return _with_settings(skel, smm(m, env))

    needed = [p for p in m.projection if isinstance(p, str)]
    needed += [a.arg for a in m.aggregates if a.arg is not None]
    needed += [k.var for k in m.order if k.var not in m.output_names or k.var in pattern_variables(q.pattern)]
    needed = list(dict.fromkeys(needed))
    for v in needed:
        kinds = set()
        for _, env in arms:
            if v not in env:
                raise UnunifiableUnion(f"?{v} is not bound in every UNION branch")
            kinds.add(isinstance(env[v], Ref))
        if len(kinds) > 1:
            raise UnunifiableUnion(f"?{v} is a node in one UNION branch and a value in another")

    wrapped = bool(m.order or m.limit is not None or m.skip is not None or m.aggregates or m.group)
    if not wrapped:
        built = [_with_settings(skel, smm(SolutionModifiers(m.projection), env, alias_all=True)) for skel, env in arms]
        return _chain(built, union_all=not m.distinct)

    inner_mods = SolutionModifiers(tuple(needed))
    inner = [_with_settings(skel, smm(inner_mods, env, alias_all=True)) for skel, env in arms]
    first_env = arms[0][1]
    outer_env: dict[str, CExpr] = {v: Ref(v) for v in needed}
    values = frozenset(v for v in needed if not isinstance(first_env[v], Ref))
    settings = smm(m, outer_env, value_names=values)
    return _with_settings(CypherQuery(subquery=_chain(inner, union_all=True)), settings)


def translate_text(
    text: str, cat: SchemaCatalog, options: TranslateOptions | None = None, pretty: bool = False
) -> str:
    """Parse, translate and render in one step."""
    return render(translate(parse_sparql(text), cat, options), pretty=pretty)

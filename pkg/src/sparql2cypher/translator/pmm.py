"""Pattern matching mapping: triple patterns to Cypher path patterns.

Triples are folded one at a time into a growing set of linear paths.  A
subject that is not yet in any path starts a new one; a lone node is
grown into a path; a path is extended at its end, or at its start with
the new relationship reversed.  A subject sitting in the interior of a
path starts a separate comma-joined path that shares the node name.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterable

from ..catalog import SchemaCatalog, TripleKind, classify_iri, classify_triple
from ..cypher.ast import (
    Cmp,
    CExpr,
    Direction,
    IsNotNull,
    LabelsOf,
    Lit,
    NodePattern,
    PathPattern,
    Prop,
    Ref,
    RelationshipPattern,
    TypeOf,
)
from ..errors import TranslationError, UnsupportedFeature
from ..rdf_model import RDF_TYPE, PrefixMap, RdfTerm, literal_value
from ..sparql.ast import PathExpr, PathKind, TriplePattern, Var
from .naming import Namer, local_name

URI_KEY = "uri"

_RANGES = {
    PathKind.ZERO_OR_MORE: (0, None),
    PathKind.ONE_OR_MORE: (1, None),
    PathKind.ZERO_OR_ONE: (0, 1),
}

REL_NAME_MODES = ("predicate", "anonymous")


@dataclass
class _Path:
    nodes: list[str]
    rels: list[RelationshipPattern]


def no_labels() -> CExpr:
    return Lit(())


@dataclass
class PatternSet:
    """Working state of the mapping: paths, node decorations and variable bindings."""

    paths: list[_Path] = field(default_factory=list)
    node_labels: dict[str, list[str]] = field(default_factory=dict)
    node_props: dict[str, list[tuple[str, Any]]] = field(default_factory=dict)
    env: dict[str, CExpr] = field(default_factory=dict)
    conditions: list[CExpr] = field(default_factory=list)
    guards: list[CExpr] = field(default_factory=list)
    # (node, guard) pairs dropped when the node carries a class label
    soft_guards: list[tuple[str, CExpr]] = field(default_factory=list)

    def required_guards(self) -> list[CExpr]:
        """Presence tests to emit: every hard guard, plus soft ones on unlabeled nodes."""
        return self.guards + [g for node, g in self.soft_guards if not self.node_labels.get(node)]

    def get_pattern(self, name: str) -> int | None:
        for i, p in enumerate(self.paths):
            if name in p.nodes:
                return i
        return None

    @property
    def patterns(self) -> tuple[PathPattern, ...]:
        """Paths as AST nodes; labels and properties go on a node's first occurrence."""
        linked = {n for p in self.paths if p.rels for n in p.nodes}
        seen: set[str] = set()
        out = []
        for p in self.paths:
            if not p.rels and (p.nodes[0] in linked or p.nodes[0] in seen):
                continue
            nodes = []
            for name in p.nodes:
                if name in seen:
                    nodes.append(NodePattern(name))
                else:
                    seen.add(name)
                    nodes.append(
                        NodePattern(
                            name,
                            tuple(self.node_labels.get(name, ())),
                            tuple(self.node_props.get(name, ())),
                        )
                    )
            out.append(PathPattern(tuple(nodes), tuple(p.rels)))
        return tuple(out)


class PatternMapper:
    """Folds triple patterns into a :class:`PatternSet`.

    `env` is shared with enclosing scopes (an OPTIONAL arm sees the
    bindings of the required part); `aliases` redirects outer node
    variables to local stand-in names.
    """

    def __init__(
        self,
        cat: SchemaCatalog,
        prefixes: PrefixMap,
        namer: Namer,
        env: dict[str, CExpr] | None = None,
        rel_names: str = "predicate",
        guards: bool = False,
        aliases: dict[str, str] | None = None,
        existence_only: frozenset[str] = frozenset(),
    ):
        if rel_names not in REL_NAME_MODES:
            raise ValueError(f"rel_names must be one of {REL_NAME_MODES}")
        self.cat = cat
        self.prefixes = prefixes
        self.namer = namer
        self.rel_names = rel_names
        self.want_guards = guards
        self.aliases = aliases or {}
        # values read nowhere else: their presence test is all that is left of the triple
        self.existence_only = existence_only
        self.ps = PatternSet(env=env if env is not None else {})
        self.const_nodes: dict[str, str] = {}
        self.new_values: list[str] = []

    # -- helpers

    def display(self, iri_value: str) -> str:
        return self.prefixes.shorten(iri_value)

    def node_for(self, e, role: str) -> str:
        if isinstance(e, Var):
            if e.name in self.aliases:
                return self.aliases[e.name]
            bound = self.ps.env.get(e.name)
            if bound is None:
                name = self.namer.var(e.name)
                self.ps.env[e.name] = Ref(name)
                return name
            if isinstance(bound, Ref):
                return bound.name
            raise UnsupportedFeature(
                "variable used both as a resource and as a value", f"?{e.name} as {role}"
            )
        assert isinstance(e, RdfTerm)
        if e.is_literal:
            raise TranslationError(f"literal {e} cannot be the {role} of a relationship or node pattern")
        if e.lexical not in self.const_nodes:
            name = self.namer.numbered("_n")
            self.const_nodes[e.lexical] = name
            self.ps.node_props[name] = [(URI_KEY, e.lexical)]
        return self.const_nodes[e.lexical]

    def bind_value(self, var: str, expr: CExpr, guard: CExpr | None, node: str | None = None) -> None:
        bound = self.ps.env.get(var)
        if bound is None:
            self.ps.env[var] = expr
            self.new_values.append(var)
            if guard is not None:
                if self.want_guards or var in self.existence_only or node is None:
                    self.ps.guards.append(guard)
                else:
                    self.ps.soft_guards.append((node, guard))
        elif isinstance(bound, (Ref, TypeOf)) and not isinstance(expr, TypeOf):
            raise UnsupportedFeature("variable used both as a resource and as a value", f"?{var}")
        elif bound != expr:
            self.ps.conditions.append(Cmp("=", bound, expr))

    def rel_name(self, iri_value: str | None) -> str:
        if self.rel_names == "anonymous" or iri_value is None:
            return self.namer.fresh("_r")
        return self.namer.fresh(local_name(iri_value, self.prefixes))

    def ensure_node(self, name: str) -> None:
        if self.ps.get_pattern(name) is None:
            self.ps.paths.append(_Path([name], []))

    def attach(self, start: str, segment: list[tuple[RelationshipPattern, str]]) -> None:
        """Place the chain ``start -seg-> ...`` per the three-case extension rule."""
        idx = self.ps.get_pattern(start)
        if idx is None:
            self.ps.paths.append(_Path([start] + [n for _, n in segment], [r for r, _ in segment]))
            return
        path = self.ps.paths[idx]
        if not path.rels or path.nodes[-1] == start and path.nodes[0] != start:
            path.nodes.extend(n for _, n in segment)
            path.rels.extend(r for r, _ in segment)
        elif path.nodes[0] == start:
            nodes = [start] + [n for _, n in segment]
            rels = [r for r, _ in segment]
            rev_nodes = list(reversed(nodes))[:-1]
            rev_rels = [_reverse(r) for r in reversed(rels)]
            path.nodes[:0] = rev_nodes
            path.rels[:0] = rev_rels
        else:
            self.ps.paths.append(_Path([start] + [n for _, n in segment], [r for r, _ in segment]))

    # -- main entry

    def add(self, tp: TriplePattern) -> None:
        if isinstance(tp.pp, PathExpr):
            self._add_path(tp)
            return
        kind = classify_triple(tp, self.cat)
        s = self.node_for(tp.sp, "subject")
        if kind is TripleKind.TYPE:
            self.ensure_node(s)
            if isinstance(tp.op, Var):
                self.bind_value(tp.op.name, LabelsOf(s), Cmp("<>", LabelsOf(s), no_labels()), s)
            elif tp.op.is_literal:
                raise TranslationError(f"rdf:type object must be a class IRI, not {tp.op}")
            else:
                label = self.display(tp.op.lexical)
                labels = self.ps.node_labels.setdefault(s, [])
                if label not in labels:
                    labels.append(label)
        elif kind is TripleKind.PROPERTY:
            self.ensure_node(s)
            key = self.display(tp.pp.lexical)
            if isinstance(tp.op, Var):
                self.bind_value(tp.op.name, Prop(s, key), IsNotNull(Prop(s, key)), s)
            elif tp.op.is_literal:
                value = literal_value(tp.op)
                props = self.ps.node_props.setdefault(s, [])
                if any(k == key for k, _ in props):
                    self.ps.conditions.append(Cmp("=", Prop(s, key), Lit(value)))
                else:
                    props.append((key, value))
            else:
                raise TranslationError(f"property key {key} takes literal values, not {tp.op}")
        else:
            o = self.node_for(tp.op, "object")
            if kind is TripleKind.IRI_EDGE:
                iri_value = tp.pp.lexical
                rel = RelationshipPattern(Direction.OUT, self.rel_name(iri_value), self.display(iri_value))
            else:
                rel = RelationshipPattern(Direction.OUT, self._pred_var_rel(tp.pp.name))
            self.attach(s, [(rel, o)])

    def _pred_var_rel(self, var: str) -> str:
        bound = self.ps.env.get(var)
        if bound is None:
            name = self.namer.var(var)
            self.ps.env[var] = TypeOf(name)
            return name
        if not isinstance(bound, TypeOf):
            raise UnsupportedFeature("predicate variable also used as a node or value", f"?{var}")
        name = self.namer.fresh(bound.name)
        self.ps.conditions.append(Cmp("=", TypeOf(name), bound))
        return name

    def _add_path(self, tp: TriplePattern) -> None:
        s = self.node_for(tp.sp, "subject")
        o = self.node_for(tp.op, "object")
        rels = path_relationships(tp.pp, self.cat, self.display, self.rel_name)
        segment = []
        for i, rel in enumerate(rels):
            target = o if i == len(rels) - 1 else self.namer.numbered("_n")
            segment.append((rel, target))
        self.attach(s, segment)


def _reverse(r: RelationshipPattern) -> RelationshipPattern:
    return RelationshipPattern(r.direction.reversed(), r.name, r.rel_type, r.properties, r.range)


def path_relationships(path: PathExpr, cat: SchemaCatalog, display, rel_name) -> list[RelationshipPattern]:
    """One relationship pattern per sequence step, per the six supported path shapes."""
    out = []
    for step in path.steps():
        if step.iri == RDF_TYPE:
            raise UnsupportedFeature("property path over rdf:type")
        kind = classify_iri(step.iri, cat)
        if kind is not TripleKind.IRI_EDGE:
            raise UnsupportedFeature("property path over a property key", step.iri)
        direction = Direction.IN if step.kind is PathKind.INVERSE else Direction.OUT
        out.append(
            RelationshipPattern(direction, rel_name(step.iri), display(step.iri), (), _RANGES.get(step.kind))
        )
    return out


def map_property_path(
    tp: TriplePattern,
    cat: SchemaCatalog,
    prefixes: PrefixMap | None = None,
    rel_names: str = "predicate",
) -> PathPattern:
    """Translate one path triple on its own: ``(s) rho1 (_n1) rho2 ... (o)``."""
    if not isinstance(tp.pp, PathExpr):
        raise ValueError("map_property_path needs a triple whose predicate is a path")
    mapper = PatternMapper(cat, prefixes or PrefixMap(), Namer(tp.variables()), rel_names=rel_names)
    mapper.add(tp)
    (pattern,) = mapper.ps.patterns
    return pattern


def pmm(
    bgp: Iterable[TriplePattern],
    cat: SchemaCatalog,
    prefixes: PrefixMap | None = None,
    rel_names: str = "predicate",
    null_guards: bool = False,
) -> PatternSet:
    """Map a basic graph pattern to a :class:`PatternSet`."""
    triples = list(bgp)
    names = [v for tp in triples for v in tp.variables()]
    mapper = PatternMapper(
        cat, prefixes or PrefixMap(), Namer(dict.fromkeys(names)), rel_names=rel_names, guards=null_guards
    )
    for tp in triples:
        mapper.add(tp)
    return mapper.ps

"""Reference semantics for both query languages and the checks that relate them."""

from __future__ import annotations

from .algebra import eval_algebra, eval_triple, gen_pr, xi, zeta
from .cypher_exec import DEFAULT_MAX_DEPTH, eval_expr, exec_query, expand, expand_in, expand_out, get_nodes
from .equivalence import EquivalenceReport, check_equivalence, inject_fault
from .relation import Attr, GraphRelation, cross, distinct, join, left_join, multiset, outer_union, select, slice_rows
from .sparql_eval import apply_modifiers, eval_bgp, eval_mapping, eval_pattern, mapping_multiset, match_triple

__all__ = [
    "Attr",
    "DEFAULT_MAX_DEPTH",
    "EquivalenceReport",
    "GraphRelation",
    "apply_modifiers",
    "check_equivalence",
    "cross",
    "distinct",
    "eval_algebra",
    "eval_bgp",
    "eval_expr",
    "eval_mapping",
    "eval_pattern",
    "eval_triple",
    "exec_query",
    "expand",
    "expand_in",
    "expand_out",
    "gen_pr",
    "get_nodes",
    "inject_fault",
    "join",
    "left_join",
    "mapping_multiset",
    "match_triple",
    "multiset",
    "outer_union",
    "select",
    "slice_rows",
    "xi",
    "zeta",
]

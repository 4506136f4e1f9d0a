"""FILTER expressions to Cypher WHERE expressions."""

from __future__ import annotations

from typing import Mapping

from ..cypher.ast import And, CExpr, Cmp, In, LabelsOf, Lit, Not, Or, Prop, Ref, TypeOf
from ..errors import UnboundFilterVariable, UnsupportedFeature
from ..rdf_model import XSD, PrefixMap, literal_value
from ..sparql import ast as s
from .pmm import URI_KEY

_OPS = {"=": "=", "!=": "<>", "<": "<", "<=": "<=", ">": ">", ">=": ">="}


def _operand(e, env: Mapping[str, CExpr]) -> CExpr | s.Const:
    if isinstance(e, s.Var):
        if e.name not in env:
            raise UnboundFilterVariable(e.name)
        return env[e.name]
    return e


def _const_against(c: s.Const, other: CExpr, prefixes: PrefixMap):
    """Cypher literal for a SPARQL constant compared with `other`."""
    term = c.term
    if term.is_iri:
        if isinstance(other, Ref):
            return Lit(term.lexical)
        if isinstance(other, (TypeOf, LabelsOf)):
            return Lit(prefixes.shorten(term.lexical))
        if isinstance(other, Lit):
            return Lit(term.lexical)
        raise UnsupportedFeature("comparison of a literal-valued variable with an IRI")
    if isinstance(other, (Ref, TypeOf, LabelsOf)):
        raise UnsupportedFeature("comparison of a resource with a literal")
    return Lit(literal_value(term))


def _compare(e: s.Compare, env, prefixes: PrefixMap) -> CExpr:
    op = _OPS[e.op]
    left, right = _operand(e.left, env), _operand(e.right, env)
    if isinstance(left, s.Const) and isinstance(right, s.Const):
        left = _const_against(left, Lit(None), prefixes)
        right = _const_against(right, Lit(None), prefixes)
    elif isinstance(left, s.Const):
        left = _const_against(left, right, prefixes)
    elif isinstance(right, s.Const):
        right = _const_against(right, left, prefixes)
    resource = (Ref, TypeOf, LabelsOf)
    if isinstance(left, resource) or isinstance(right, resource):
        if op not in ("=", "<>"):
            raise UnsupportedFeature("ordering comparison on a resource")
        if isinstance(left, resource) != isinstance(right, resource) and not isinstance(
            left if isinstance(right, resource) else right, Lit
        ):
            raise UnsupportedFeature("comparison of a resource with a literal-valued variable")
    # IRI constants against node variables compare on the stored uri
    if isinstance(left, Ref) and isinstance(right, Lit):
        left = Prop(left.name, URI_KEY)
    if isinstance(right, Ref) and isinstance(left, Lit):
        right = Prop(right.name, URI_KEY)
    # a label test is membership in labels(x)
    for a, b in ((left, right), (right, left)):
        if isinstance(a, LabelsOf) and isinstance(b, Lit):
            test = In(b, a)
            return test if op == "=" else Not(test)
    return Cmp(op, left, right)


def map_expression(e: s.Expr, env: Mapping[str, CExpr], prefixes: PrefixMap | None = None) -> CExpr:
    """Translate a FILTER condition using the variable bindings in `env`."""
    prefixes = prefixes or PrefixMap()
    if isinstance(e, s.Compare):
        return _compare(e, env, prefixes)
    if isinstance(e, s.BoolAnd):
        return And(map_expression(e.left, env, prefixes), map_expression(e.right, env, prefixes))
    if isinstance(e, s.BoolOr):
        return Or(map_expression(e.left, env, prefixes), map_expression(e.right, env, prefixes))
    if isinstance(e, s.Not):
        return Not(map_expression(e.operand, env, prefixes))
    if isinstance(e, s.Const) and e.term.datatype == XSD + "boolean":
        return Lit(e.term.lexical in ("true", "1"))
    if isinstance(e, s.Var):
        raise UnsupportedFeature("effective boolean value of a variable")
    raise UnsupportedFeature(f"filter expression {type(e).__name__}")

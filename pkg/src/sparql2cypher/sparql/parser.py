"""Recursive-descent parser for the supported SPARQL 1.1 SELECT subset."""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import ParseError, UnsupportedFeature
from ..rdf_model import RDF_TYPE, XSD, PrefixMap, RdfTerm, TermKind, iri, unescape
from .ast import (
    AggFn,
    Aggregate,
    AndPattern,
    Bgp,
    BoolAnd,
    BoolOr,
    Compare,
    Const,
    Expr,
    FilterPattern,
    GraphPattern,
    Not,
    OptPattern,
    OrderKey,
    PathExpr,
    PathKind,
    SolutionModifiers,
    SparqlQuery,
    TriplePattern,
    UnionPattern,
    Var,
    pattern_variables,
)

_PN_CHARS = r"[A-Za-z0-9_\u00B7\u00C0-\uFFFF\-]"
_TOKEN_SPEC = [
    ("WS", r"\s+|#[^\n]*"),
    ("IRIREF", r"<[^<>\"{}|^`\\\s]*>"),
    ("STRING", r'"""(?:[^"\\]|\\.|"(?!""))*"""|\'\'\'(?:[^\'\\]|\\.|\'(?!\'\'))*\'\'\'|"(?:[^"\\\n]|\\.)*"|\'(?:[^\'\\\n]|\\.)*\''),
    ("VAR", r"[?$][A-Za-z0-9_\u00B7\u00C0-\uFFFF]+"),
    ("DOUBLE", r"[+-]?(?:\d+\.\d*[eE][+-]?\d+|\.\d+[eE][+-]?\d+|\d+[eE][+-]?\d+)"),
    ("DECIMAL", r"[+-]?\d*\.\d+"),
    ("INTEGER", r"[+-]?\d+"),
    ("LANGTAG", r"@[A-Za-z]+(?:-[A-Za-z0-9]+)*"),
    ("PNAME", rf"(?:[A-Za-z]{_PN_CHARS}*(?:\.{_PN_CHARS}+)*)?:(?:{_PN_CHARS}+(?:\.{_PN_CHARS}+)*)?"),
    ("BNODE", r"_:[A-Za-z0-9_]+"),
    ("NAME", r"[A-Za-z_][A-Za-z0-9_]*"),
    ("OP", r"\^\^|&&|\|\||!=|<=|>=|[{}()\[\].;,*/^+?|!=<>\-]"),
]
_TOKEN_RE = re.compile("|".join(f"(?P<{name}>{pat})" for name, pat in _TOKEN_SPEC))

_UNSUPPORTED_FORMS = {"ASK", "CONSTRUCT", "DESCRIBE", "INSERT", "DELETE", "LOAD", "CLEAR", "CREATE", "DROP"}
_UNSUPPORTED_KEYWORDS = {
    "MINUS": "MINUS",
    "GRAPH": "named graphs (GRAPH)",
    "SERVICE": "federation (SERVICE)",
    "BIND": "BIND",
    "VALUES": "VALUES",
    "FROM": "dataset clause (FROM)",
    "HAVING": "HAVING",
    "REDUCED": "REDUCED",
    "EXISTS": "EXISTS",
    "NOT": "NOT EXISTS",
}


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    pos: int
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    line, line_start = 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        tok_text = m.group()
        if kind != "WS":
            tokens.append(Token(kind, tok_text, pos, line, pos - line_start + 1))
        nl = tok_text.count("\n")
        if nl:
            line += nl
            line_start = pos + tok_text.rfind("\n") + 1
        pos = m.end()
    tokens.append(Token("EOF", "", pos, line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0
        self.prefixes = PrefixMap()
        self.declared: dict[str, str] = {}
        self.base = ""

    # -- token helpers

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def advance(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, expected: str) -> ParseError:
        t = self.tok
        found = repr(t.text) if t.kind != "EOF" else "end of input"
        return ParseError(f"expected {expected}, found {found}", t.line, t.col)

    def is_kw(self, *words: str) -> bool:
        return self.tok.kind == "NAME" and self.tok.text.upper() in words

    def is_op(self, *ops: str) -> bool:
        return self.tok.kind == "OP" and self.tok.text in ops

    def expect_op(self, op: str) -> Token:
        if not self.is_op(op):
            raise self.error(repr(op))
        return self.advance()

    def expect_kw(self, word: str) -> Token:
        if not self.is_kw(word):
            raise self.error(word)
        return self.advance()

    def check_unsupported(self):
        if self.tok.kind == "NAME":
            word = self.tok.text.upper()
            if word in _UNSUPPORTED_KEYWORDS:
                raise UnsupportedFeature(_UNSUPPORTED_KEYWORDS[word])

    # -- query

    def parse(self) -> SparqlQuery:
        while self.is_kw("PREFIX", "BASE"):
            if self.advance().text.upper() == "BASE":
                if self.tok.kind != "IRIREF":
                    raise self.error("IRI")
                self.base = self.advance().text[1:-1]
                continue
            t = self.tok
            if t.kind != "PNAME" or not t.text.endswith(":"):
                raise self.error("prefix name ending in ':'")
            self.advance()
            if self.tok.kind != "IRIREF":
                raise self.error("IRI")
            ns = self.advance().text[1:-1]
            self.declared[t.text[:-1]] = ns
            self.prefixes = self.prefixes.merged({t.text[:-1]: ns})
        if self.tok.kind == "NAME" and self.tok.text.upper() in _UNSUPPORTED_FORMS:
            raise UnsupportedFeature(f"{self.tok.text.upper()} queries")
        self.expect_kw("SELECT")
        distinct = False
        if self.is_kw("DISTINCT"):
            self.advance()
            distinct = True
        self.check_unsupported()
        projection: list[str | Aggregate] = []
        select_all = False
        if self.is_op("*"):
            self.advance()
            select_all = True
        else:
            while self.tok.kind == "VAR" or self.is_op("("):
                if self.tok.kind == "VAR":
                    projection.append(self.advance().text[1:])
                else:
                    projection.append(self.parse_aggregate())
            if not projection:
                raise self.error("projection variable, aggregate or '*'")
        self.check_unsupported()
        if self.is_kw("WHERE"):
            self.advance()
        pattern = self.parse_group()
        group: list[str] = []
        if self.is_kw("GROUP"):
            self.advance()
            self.expect_kw("BY")
            while self.tok.kind == "VAR":
                group.append(self.advance().text[1:])
            if not group:
                raise self.error("GROUP BY variable")
        self.check_unsupported()
        order: list[OrderKey] = []
        if self.is_kw("ORDER"):
            self.advance()
            self.expect_kw("BY")
            while True:
                key = self.parse_order_key()
                if key is None:
                    break
                order.append(key)
            if not order:
                raise self.error("ORDER BY key")
        limit = skip = None
        while self.is_kw("LIMIT", "OFFSET"):
            word = self.advance().text.upper()
            if self.tok.kind != "INTEGER" or self.tok.text.startswith(("+", "-")):
                raise self.error("non-negative integer")
            value = int(self.advance().text)
            if word == "LIMIT":
                limit = value
            else:
                skip = value
        self.check_unsupported()
        if self.tok.kind != "EOF":
            raise self.error("end of query")

        pvars = pattern_variables(pattern)
        if select_all:
            projection = list(pvars)
        if not group and any(isinstance(p, Aggregate) for p in projection):
            group = [p for p in projection if isinstance(p, str)]
        mods = SolutionModifiers(tuple(projection), distinct, tuple(order), limit, skip, tuple(group))
        _validate(pattern, mods, pvars)
        return SparqlQuery(pattern, mods, dict(self.declared))

    def parse_aggregate(self) -> Aggregate:
        self.expect_op("(")
        if self.tok.kind != "NAME":
            raise self.error("aggregate function")
        name = self.tok.text.upper()
        if name not in AggFn.__members__:
            raise UnsupportedFeature(f"SELECT expression {self.tok.text}(...)")
        self.advance()
        self.expect_op("(")
        distinct = False
        if self.is_kw("DISTINCT"):
            self.advance()
            distinct = True
        if self.is_op("*"):
            if name != "COUNT":
                raise self.error("variable")
            self.advance()
            arg = None
        elif self.tok.kind == "VAR":
            arg = self.advance().text[1:]
        else:
            raise UnsupportedFeature("aggregate over an expression")
        self.expect_op(")")
        self.expect_kw("AS")
        if self.tok.kind != "VAR":
            raise self.error("alias variable")
        alias = self.advance().text[1:]
        self.expect_op(")")
        return Aggregate(AggFn[name], arg, alias, distinct)

    def parse_order_key(self) -> OrderKey | None:
        if self.tok.kind == "VAR":
            return OrderKey(self.advance().text[1:])
        if self.is_kw("ASC", "DESC"):
            desc = self.advance().text.upper() == "DESC"
            self.expect_op("(")
            if self.tok.kind != "VAR":
                raise UnsupportedFeature("ORDER BY over an expression")
            name = self.advance().text[1:]
            self.expect_op(")")
            return OrderKey(name, desc)
        if self.is_op("("):
            self.advance()
            if self.tok.kind != "VAR":
                raise UnsupportedFeature("ORDER BY over an expression")
            name = self.advance().text[1:]
            self.expect_op(")")
            return OrderKey(name)
        return None

    # -- graph patterns

    def parse_group(self) -> GraphPattern:
        self.expect_op("{")
        acc: GraphPattern | None = None
        pending: list[TriplePattern] = []
        filters: list[Expr] = []

        def flush():
            nonlocal acc, pending
            if pending:
                acc = _join(acc, Bgp(tuple(pending)))
                pending = []

        while not self.is_op("}"):
            self.check_unsupported()
            if self.is_kw("FILTER"):
                self.advance()
                filters.append(self.parse_filter())
            elif self.is_kw("OPTIONAL"):
                self.advance()
                flush()
                right = self.parse_group()
                if acc is None:
                    raise UnsupportedFeature("OPTIONAL without a preceding pattern")
                acc = OptPattern(acc, right)
            elif self.is_op("{"):
                flush()
                sub = self.parse_group()
                while self.is_kw("UNION"):
                    self.advance()
                    sub = UnionPattern(sub, self.parse_group())
                acc = _join(acc, sub)
            elif self.tok.kind == "EOF":
                raise self.error("'}'")
            else:
                pending.extend(self.parse_triples_same_subject())
                if self.is_op("."):
                    self.advance()
                    continue
                if not (self.is_op("}") or self.is_kw("FILTER", "OPTIONAL") or self.is_op("{")):
                    self.check_unsupported()
                    raise self.error("'.' or '}'")
                continue
            if self.is_op("."):
                self.advance()
        self.advance()
        flush()
        if acc is None:
            raise UnsupportedFeature("empty group pattern")
        for cond in filters:
            acc = FilterPattern(acc, cond)
        return acc

    def parse_triples_same_subject(self) -> list[TriplePattern]:
        subject = self.parse_term(position="subject")
        out = []
        while True:
            pred = self.parse_verb()
            while True:
                obj = self.parse_term(position="object")
                out.append(TriplePattern(subject, pred, obj))
                if self.is_op(","):
                    self.advance()
                    continue
                break
            if self.is_op(";"):
                while self.is_op(";"):
                    self.advance()
                if self.is_op(".", "}") or self.is_kw("FILTER", "OPTIONAL"):
                    break
                continue
            break
        return out

    def parse_verb(self):
        if self.tok.kind == "VAR":
            return Var(self.advance().text[1:])
        path = self.parse_path_alternative()
        if path.kind is PathKind.PREDICATE:
            return iri(path.iri)
        return path

    def parse_path_alternative(self) -> PathExpr:
        path = self.parse_path_sequence()
        if self.is_op("|"):
            raise UnsupportedFeature("alternative property path '|'")
        return path

    def parse_path_sequence(self) -> PathExpr:
        path = self.parse_path_elt_or_inverse()
        while self.is_op("/"):
            self.advance()
            path = PathExpr(PathKind.SEQUENCE, parts=(path, self.parse_path_elt_or_inverse()))
        return path

    def parse_path_elt_or_inverse(self) -> PathExpr:
        if self.is_op("^"):
            self.advance()
            inner = self.parse_path_elt()
            if inner.kind is not PathKind.PREDICATE:
                raise UnsupportedFeature("inverse of a compound property path")
            return PathExpr(PathKind.INVERSE, inner.iri)
        return self.parse_path_elt()

    def parse_path_elt(self) -> PathExpr:
        if self.is_op("!"):
            raise UnsupportedFeature("negated property set '!'")
        if self.is_op("("):
            self.advance()
            primary = self.parse_path_alternative()
            self.expect_op(")")
        elif self.is_kw("A") and self.tok.text == "a":
            self.advance()
            primary = PathExpr(PathKind.PREDICATE, RDF_TYPE)
        elif self.tok.kind in ("IRIREF", "PNAME"):
            primary = PathExpr(PathKind.PREDICATE, self.parse_iri())
        else:
            raise self.error("predicate (IRI, prefixed name, 'a' or variable)")
        mods = {"*": PathKind.ZERO_OR_MORE, "+": PathKind.ONE_OR_MORE, "?": PathKind.ZERO_OR_ONE}
        if self.is_op(*mods):
            # `?x` is tokenised as VAR, so a bare '?' here is always a modifier
            kind = mods[self.advance().text]
            if primary.kind is not PathKind.PREDICATE:
                raise UnsupportedFeature("closure over a compound property path")
            return PathExpr(kind, primary.iri)
        return primary

    def parse_iri(self) -> str:
        t = self.advance()
        if t.kind == "IRIREF":
            value = t.text[1:-1]
            if self.base and ":" not in value:
                value = self.base + value
            return value
        if t.kind == "PNAME":
            expanded = self.prefixes.expand(t.text)
            if expanded is None:
                raise ParseError(f"undeclared prefix in {t.text!r}", t.line, t.col)
            return expanded
        raise ParseError(f"expected IRI, found {t.text!r}", t.line, t.col)

    def parse_term(self, position: str):
        t = self.tok
        if t.kind == "VAR":
            self.advance()
            return Var(t.text[1:])
        if t.kind in ("IRIREF", "PNAME"):
            return iri(self.parse_iri())
        if t.kind == "BNODE" or self.is_op("["):
            raise UnsupportedFeature("blank nodes in query patterns")
        if self.is_op("("):
            raise UnsupportedFeature("RDF collections")
        if t.kind in ("STRING", "INTEGER", "DECIMAL", "DOUBLE") or self.is_kw("TRUE", "FALSE"):
            return self.parse_literal()
        raise self.error(f"{position} term")

    def parse_literal(self) -> RdfTerm:
        t = self.advance()
        if t.kind == "INTEGER":
            return RdfTerm(TermKind.LITERAL, t.text.lstrip("+"), XSD + "integer")
        if t.kind == "DECIMAL":
            return RdfTerm(TermKind.LITERAL, t.text.lstrip("+"), XSD + "decimal")
        if t.kind == "DOUBLE":
            return RdfTerm(TermKind.LITERAL, t.text.lstrip("+"), XSD + "double")
        if t.kind == "NAME":
            return RdfTerm(TermKind.LITERAL, t.text.lower(), XSD + "boolean")
        raw = t.text
        q = 3 if raw[:3] in ('"""', "'''") else 1
        try:
            lex = unescape(raw[q:-q])
        except (ValueError, IndexError) as exc:
            raise ParseError(str(exc), t.line, t.col) from None
        if self.tok.kind == "LANGTAG":
            return RdfTerm(TermKind.LITERAL, lex, None, self.advance().text[1:])
        if self.is_op("^^"):
            self.advance()
            return RdfTerm(TermKind.LITERAL, lex, self.parse_iri())
        return RdfTerm(TermKind.LITERAL, lex)

    # -- filter expressions

    def parse_filter(self) -> Expr:
        if self.tok.kind == "NAME" and not self.is_kw("TRUE", "FALSE"):
            self.check_unsupported()
            raise UnsupportedFeature(f"FILTER function {self.tok.text}()")
        self.expect_op("(")
        e = self.parse_or()
        self.expect_op(")")
        return _boolean(e)

    def parse_or(self) -> Expr:
        e = self.parse_and()
        while self.is_op("||"):
            self.advance()
            e = BoolOr(_boolean(e), _boolean(self.parse_and()))
        return e

    def parse_and(self) -> Expr:
        e = self.parse_unary()
        while self.is_op("&&"):
            self.advance()
            e = BoolAnd(_boolean(e), _boolean(self.parse_unary()))
        return e

    def parse_unary(self) -> Expr:
        if self.is_op("!"):
            self.advance()
            return Not(_boolean(self.parse_unary()))
        return self.parse_relational()

    def parse_relational(self) -> Expr:
        left = self.parse_primary()
        if self.is_op("=", "!=", "<", "<=", ">", ">="):
            op = self.advance().text
            right = self.parse_primary()
            if not isinstance(left, (Var, Const)) or not isinstance(right, (Var, Const)):
                raise UnsupportedFeature("comparison between compound expressions")
            return Compare(op, left, right)
        if self.is_op("+", "-", "*", "/"):
            raise UnsupportedFeature("arithmetic in FILTER")
        if self.is_kw("IN"):
            raise UnsupportedFeature("IN operator")
        return left

    def parse_primary(self) -> Expr:
        t = self.tok
        if self.is_op("("):
            self.advance()
            e = self.parse_or()
            self.expect_op(")")
            return e
        if t.kind == "VAR":
            self.advance()
            return Var(t.text[1:])
        if t.kind in ("IRIREF",) or (t.kind == "PNAME" and not self.peek().text == "("):
            return Const(iri(self.parse_iri()))
        if t.kind in ("STRING", "INTEGER", "DECIMAL", "DOUBLE") or self.is_kw("TRUE", "FALSE"):
            return Const(self.parse_literal())
        if t.kind in ("NAME", "PNAME"):
            self.check_unsupported()
            raise UnsupportedFeature(f"FILTER function {t.text}()")
        raise self.error("expression")


def _boolean(e: Expr) -> Expr:
    if isinstance(e, Var):
        raise UnsupportedFeature("effective boolean value of a variable")
    if isinstance(e, Const) and e.term.datatype != XSD + "boolean":
        raise UnsupportedFeature("effective boolean value of a non-boolean constant")
    return e


def _join(acc: GraphPattern | None, gp: GraphPattern) -> GraphPattern:
    return gp if acc is None else AndPattern(acc, gp)


def _validate(pattern: GraphPattern, mods: SolutionModifiers, pvars: list[str]):
    known = set(pvars)
    aliases = set()
    for item in mods.projection:
        if isinstance(item, Aggregate):
            if item.alias in known or item.alias in aliases:
                raise ParseError(f"aggregate alias ?{item.alias} clashes with another variable")
            if item.arg is not None and item.arg not in known:
                raise ParseError(f"aggregate argument ?{item.arg} does not occur in the pattern")
            aliases.add(item.alias)
        elif item not in known:
            raise ParseError(f"projected variable ?{item} does not occur in the pattern")
    plain = [p for p in mods.projection if isinstance(p, str)]
    if mods.aggregates or mods.group:
        if not set(plain) <= set(mods.group):
            raise ParseError("non-aggregated projected variables must appear in GROUP BY")
        for g in mods.group:
            if g not in known:
                raise ParseError(f"GROUP BY variable ?{g} does not occur in the pattern")
    visible = known | aliases
    for key in mods.order:
        if key.var not in visible:
            raise ParseError(f"ORDER BY variable ?{key.var} does not occur in the pattern")


def parse_sparql(text: str) -> SparqlQuery:
    """Parse a SELECT query; `a` becomes rdf:type and prefixed names are expanded."""
    return _Parser(text).parse()


# --- pretty printer -----------------------------------------------------------


def _term_text(e) -> str:
    if isinstance(e, Var):
        return "?" + e.name
    if e.kind is TermKind.IRI:
        return f"<{e.lexical}>"
    lex = e.lexical.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")
    out = f'"{lex}"'
    if e.lang:
        out += "@" + e.lang
    elif e.datatype:
        out += f"^^<{e.datatype}>"
    return out


def _path_text(p: PathExpr) -> str:
    if p.kind is PathKind.SEQUENCE:
        return f"({_path_text(p.parts[0])}/{_path_text(p.parts[1])})"
    suffix = {PathKind.ZERO_OR_MORE: "*", PathKind.ONE_OR_MORE: "+", PathKind.ZERO_OR_ONE: "?"}
    base = f"<{p.iri}>"
    if p.kind is PathKind.INVERSE:
        return "^" + base
    return base + suffix.get(p.kind, "")


def _expr_text(e: Expr) -> str:
    if isinstance(e, (Var,)):
        return "?" + e.name
    if isinstance(e, Const):
        return _term_text(e.term)
    if isinstance(e, Compare):
        return f"{_expr_text(e.left)} {e.op} {_expr_text(e.right)}"
    if isinstance(e, BoolAnd):
        return f"({_expr_text(e.left)} && {_expr_text(e.right)})"
    if isinstance(e, BoolOr):
        return f"({_expr_text(e.left)} || {_expr_text(e.right)})"
    return f"!({_expr_text(e.operand)})"


def _elements(gp: GraphPattern) -> str:
    if isinstance(gp, Bgp):
        parts = []
        for tp in gp.triples:
            pred = _path_text(tp.pp) if isinstance(tp.pp, PathExpr) else _term_text(tp.pp)
            parts.append(f"{_term_text(tp.sp)} {pred} {_term_text(tp.op)} .")
        return " ".join(parts)
    if isinstance(gp, FilterPattern):
        return f"{_elements(gp.inner)} FILTER({_expr_text(gp.cond)})"
    if isinstance(gp, UnionPattern):
        return f"{{ {_elements(gp.left)} }} UNION {{ {_elements(gp.right)} }}"
    left = _elements(gp.left)
    if isinstance(gp.left, FilterPattern):
        left = f"{{ {left} }}"
    if isinstance(gp, OptPattern):
        return f"{left} OPTIONAL {{ {_elements(gp.right)} }}"
    right = gp.right
    if isinstance(right, UnionPattern):
        return f"{left} {_elements(right)}"
    return f"{left} {{ {_elements(right)} }}"


def to_sparql(q: SparqlQuery) -> str:
    """Render a query as SPARQL text with full IRIs; re-parsing yields the same AST."""
    m = q.modifiers
    items = []
    for p in m.projection:
        if isinstance(p, Aggregate):
            arg = "*" if p.arg is None else "?" + p.arg
            dist = "DISTINCT " if p.distinct else ""
            items.append(f"({p.fn.value}({dist}{arg}) AS ?{p.alias})")
        else:
            items.append("?" + p)
    out = "SELECT " + ("DISTINCT " if m.distinct else "") + " ".join(items)
    out += f" WHERE {{ {_elements(q.pattern)} }}"
    if m.group:
        out += " GROUP BY " + " ".join("?" + g for g in m.group)
    if m.order:
        out += " ORDER BY " + " ".join(f"{'DESC' if k.descending else 'ASC'}(?{k.var})" for k in m.order)
    if m.limit is not None:
        out += f" LIMIT {m.limit}"
    if m.skip is not None:
        out += f" OFFSET {m.skip}"
    return out

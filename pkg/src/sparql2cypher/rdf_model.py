"""RDF terms, triples, graphs and an N-Triples reader."""

from __future__ import annotations

import enum
import re
from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Mapping

from .errors import ParseError

RDF = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
RDFS = "http://www.w3.org/2000/01/rdf-schema#"
XSD = "http://www.w3.org/2001/XMLSchema#"
RDF_TYPE = RDF + "type"

WELL_KNOWN_PREFIXES = {"rdf": RDF, "rdfs": RDFS, "xsd": XSD}

_INTEGER_TYPES = {
    XSD + name
    for name in (
        "integer", "int", "long", "short", "byte", "nonNegativeInteger",
        "positiveInteger", "negativeInteger", "nonPositiveInteger",
        "unsignedLong", "unsignedInt", "unsignedShort", "unsignedByte",
    )
}
_FLOAT_TYPES = {XSD + "decimal", XSD + "double", XSD + "float"}
NUMERIC_TYPES = _INTEGER_TYPES | _FLOAT_TYPES


class TermKind(enum.Enum):
    IRI = "iri"
    BNODE = "bnode"
    LITERAL = "literal"


@dataclass(frozen=True)
class RdfTerm:
    kind: TermKind
    lexical: str
    datatype: str | None = None
    lang: str | None = None

    def __post_init__(self):
        if self.kind is TermKind.IRI and not self.lexical:
            raise ValueError("IRI must be non-empty")
        if self.kind is TermKind.BNODE and not self.lexical.startswith("_:"):
            raise ValueError(f"blank node label must start with '_:': {self.lexical!r}")
        if self.kind is not TermKind.LITERAL and (self.datatype or self.lang):
            raise ValueError("only literals carry a datatype or language tag")

    @property
    def is_iri(self) -> bool:
        return self.kind is TermKind.IRI

    @property
    def is_literal(self) -> bool:
        return self.kind is TermKind.LITERAL

    @property
    def is_resource(self) -> bool:
        return self.kind is not TermKind.LITERAL

    def __str__(self) -> str:
        return to_ntriples_term(self)


def iri(value: str) -> RdfTerm:
    return RdfTerm(TermKind.IRI, value)


def bnode(label: str) -> RdfTerm:
    return RdfTerm(TermKind.BNODE, label if label.startswith("_:") else "_:" + label)


def literal(value, datatype: str | None = None, lang: str | None = None) -> RdfTerm:
    """Build a literal; Python ints/floats pick an XSD numeric datatype."""
    if isinstance(value, bool):
        return RdfTerm(TermKind.LITERAL, "true" if value else "false", XSD + "boolean")
    if isinstance(value, int) and datatype is None:
        return RdfTerm(TermKind.LITERAL, str(value), XSD + "integer")
    if isinstance(value, float) and datatype is None:
        return RdfTerm(TermKind.LITERAL, repr(value), XSD + "double")
    return RdfTerm(TermKind.LITERAL, str(value), datatype, lang)


def literal_value(term: RdfTerm):
    """Python value of a literal: int/float for XSD numerics, the lexical form otherwise."""
    if term.datatype in _INTEGER_TYPES:
        try:
            return int(term.lexical)
        except ValueError:
            return term.lexical
    if term.datatype in _FLOAT_TYPES:
        try:
            return float(term.lexical)
        except ValueError:
            return term.lexical
    return term.lexical


def is_number(value) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def canonical_number(value) -> float:
    # 12 significant digits: absorbs decimal-vs-double drift in AVG and friends
    return float(f"{float(value):.12g}")


def value_key(value) -> tuple:
    """Canonical comparison key for a plain Python value (as stored in a property graph)."""
    if value is None:
        return ("null",)
    if is_number(value):
        return ("num", canonical_number(value))
    if isinstance(value, (list, tuple)):
        return ("list", tuple(value_key(v) for v in value))
    return ("str", str(value))


def term_key(term: RdfTerm | None) -> tuple:
    """Canonical comparison key; literals compare by value, language tags are ignored."""
    if term is None:
        return ("null",)
    if term.kind is TermKind.IRI:
        return ("iri", term.lexical)
    if term.kind is TermKind.BNODE:
        return ("bnode", term.lexical)
    return value_key(literal_value(term))


@dataclass(frozen=True)
class RdfTriple:
    subject: RdfTerm
    predicate: RdfTerm
    object: RdfTerm

    def __post_init__(self):
        if self.subject.kind is TermKind.LITERAL:
            raise ValueError(f"literal subject: {self.subject}")
        if self.predicate.kind is not TermKind.IRI:
            raise ValueError(f"predicate must be an IRI: {self.predicate}")

    def __iter__(self):
        return iter((self.subject, self.predicate, self.object))


class PrefixMap(Mapping[str, str]):
    """prefix -> namespace, with expansion and shortest-display shortening."""

    def __init__(self, prefixes: Mapping[str, str] | None = None, builtins: bool = True):
        self._map: dict[str, str] = dict(WELL_KNOWN_PREFIXES) if builtins else {}
        if prefixes:
            self._map.update(prefixes)

    def __getitem__(self, key: str) -> str:
        return self._map[key]

    def __iter__(self):
        return iter(self._map)

    def __len__(self):
        return len(self._map)

    def merged(self, other: Mapping[str, str]) -> PrefixMap:
        out = PrefixMap(self._map, builtins=False)
        out._map.update(other)
        return out

    def expand(self, pname: str) -> str | None:
        """Expand `pfx:local`; None if the prefix is not declared."""
        pfx, sep, local = pname.partition(":")
        if not sep or pfx not in self._map:
            return None
        return self._map[pfx] + local

    def shorten(self, iri_value: str) -> str:
        """Display form: longest matching namespace, ties to the shortest prefix label."""
        best = None
        for pfx, ns in self._map.items():
            if ns and iri_value.startswith(ns):
                rank = (-len(ns), len(pfx), pfx)
                if best is None or rank < best[0]:
                    best = (rank, pfx, ns)
        if best is None:
            return iri_value
        return f"{best[1]}:{iri_value[len(best[2]):]}"


@dataclass(frozen=True)
class RdfGraph:
    """A set of triples (insertion order kept for determinism) plus display prefixes."""

    triples: tuple[RdfTriple, ...] = ()
    prefix_map: Mapping[str, str] = field(default_factory=dict)

    @classmethod
    def from_triples(cls, triples: Iterable[RdfTriple], prefixes: Mapping[str, str] | None = None) -> RdfGraph:
        return cls(tuple(dict.fromkeys(triples)), dict(prefixes or {}))

    def __len__(self) -> int:
        return len(self.triples)

    def __iter__(self) -> Iterator[RdfTriple]:
        return iter(self.triples)

    def __contains__(self, triple) -> bool:
        return triple in self._set

    @cached_property
    def _set(self) -> frozenset:
        return frozenset(self.triples)

    @cached_property
    def by_predicate(self) -> dict[RdfTerm, list[RdfTriple]]:
        idx = defaultdict(list)
        for t in self.triples:
            idx[t.predicate].append(t)
        return dict(idx)

    @cached_property
    def by_subject(self) -> dict[RdfTerm, list[RdfTriple]]:
        idx = defaultdict(list)
        for t in self.triples:
            idx[t.subject].append(t)
        return dict(idx)

    @cached_property
    def by_object(self) -> dict[RdfTerm, list[RdfTriple]]:
        idx = defaultdict(list)
        for t in self.triples:
            idx[t.object].append(t)
        return dict(idx)

    @cached_property
    def terms(self) -> tuple[RdfTerm, ...]:
        """Every subject and object, in first-appearance order."""
        seen = {}
        for t in self.triples:
            seen.setdefault(t.subject, None)
            seen.setdefault(t.object, None)
        return tuple(seen)

    def prefixes(self) -> PrefixMap:
        return PrefixMap(self.prefix_map)


# --- N-Triples -------------------------------------------------------------

_TOKEN = re.compile(
    r"""\s*(?:
        <(?P<iri>[^<>"{}|^`\\\s]*)>
      | (?P<bnode>_:[A-Za-z0-9_][A-Za-z0-9_.\-]*)
      | "(?P<lit>(?:[^"\\\n\r]|\\.)*)"(?:@(?P<lang>[A-Za-z]+(?:-[A-Za-z0-9]+)*)|\^\^<(?P<dt>[^<>"\s]*)>)?
      | (?P<dot>\.)
      | (?P<comment>\#.*)
    )""",
    re.VERBOSE,
)

_ESCAPES = {"t": "\t", "b": "\b", "n": "\n", "r": "\r", "f": "\f", '"': '"', "'": "'", "\\": "\\"}


def unescape(text: str) -> str:
    out = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch != "\\":
            out.append(ch)
            i += 1
            continue
        code = text[i + 1 : i + 2]
        if code in _ESCAPES:
            out.append(_ESCAPES[code])
            i += 2
        elif code == "u":
            out.append(chr(int(text[i + 2 : i + 6], 16)))
            i += 6
        elif code == "U":
            out.append(chr(int(text[i + 2 : i + 10], 16)))
            i += 10
        else:
            raise ValueError(f"bad escape \\{code}")
    return "".join(out)


def escape_literal(text: str) -> str:
    return (
        text.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n").replace("\r", "\\r")
    )


def _resolve_iri(raw: str, prefixes: PrefixMap) -> str:
    # `<bsbm:R1>` style: expand when the scheme part is a declared prefix
    pfx, sep, rest = raw.partition(":")
    if sep and pfx in prefixes and not rest.startswith("//"):
        return prefixes[pfx] + rest
    return raw


def parse_ntriples(text: str, prefixes: Mapping[str, str] | None = None) -> RdfGraph:
    """Parse line-oriented N-Triples.

    `prefixes` is only used to expand prefixed names written inside angle
    brackets (``<bsbm:R1>``); rdf/rdfs/xsd are always recognised. The
    returned graph's `prefix_map` holds exactly the supplied prefixes.
    """
    pmap = PrefixMap(prefixes)
    triples: list[RdfTriple] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        terms: list[RdfTerm] = []
        pos = 0
        done = False
        while pos < len(line):
            if line[pos:].strip() == "":
                break
            m = _TOKEN.match(line, pos)
            if not m or m.end() == pos:
                raise ParseError(f"unexpected input {line[pos:].strip()[:20]!r}", lineno, pos + 1)
            pos = m.end()
            if m.group("comment") is not None:
                break
            if done:
                raise ParseError("content after terminating '.'", lineno, m.start() + 1)
            if m.group("dot") is not None:
                done = True
            elif m.group("iri") is not None:
                value = _resolve_iri(m.group("iri"), pmap)
                if not value:
                    raise ParseError("empty IRI", lineno, m.start() + 1)
                terms.append(iri(value))
            elif m.group("bnode") is not None:
                terms.append(bnode(m.group("bnode")))
            else:
                try:
                    lex = unescape(m.group("lit"))
                except (ValueError, IndexError) as exc:
                    raise ParseError(str(exc), lineno, m.start() + 1) from None
                dt = m.group("dt")
                if dt is not None:
                    dt = _resolve_iri(dt, pmap)
                terms.append(RdfTerm(TermKind.LITERAL, lex, dt, m.group("lang")))
        if not done:
            raise ParseError("statement not terminated by '.'", lineno)
        if len(terms) != 3:
            raise ParseError(f"expected 3 terms, found {len(terms)}", lineno)
        try:
            triples.append(RdfTriple(*terms))
        except ValueError as exc:
            raise ParseError(str(exc), lineno) from None
    return RdfGraph.from_triples(triples, prefixes)


def to_ntriples_term(term: RdfTerm) -> str:
    if term.kind is TermKind.IRI:
        return f"<{term.lexical}>"
    if term.kind is TermKind.BNODE:
        return term.lexical
    out = f'"{escape_literal(term.lexical)}"'
    if term.lang:
        out += "@" + term.lang
    elif term.datatype:
        out += f"^^<{term.datatype}>"
    return out


def serialize_ntriples(graph: RdfGraph) -> str:
    return "".join(
        f"{to_ntriples_term(t.subject)} {to_ntriples_term(t.predicate)} {to_ntriples_term(t.object)} .\n"
        for t in graph
    )


def parse_prefix_file(text: str) -> dict[str, str]:
    """One `prefix iri` pair per line; the prefix may carry a trailing colon."""
    out = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError("expected `prefix iri`", lineno)
        pfx, ns = parts
        pfx = pfx[:-1] if pfx.endswith(":") else pfx
        ns = ns[1:-1] if ns.startswith("<") and ns.endswith(">") else ns
        out[pfx] = ns
    return out

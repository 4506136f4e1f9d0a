"""Cypher identifier allocation for SPARQL variables and generated pattern names."""

from __future__ import annotations

import re
from typing import Iterable

from ..rdf_model import PrefixMap

# Words that are awkward or illegal as unquoted Cypher variable names.
CYPHER_KEYWORDS = frozenset(
    w.lower()
    for w in """
    ALL AND AS ASC ASCENDING BY CALL CASE CONTAINS COUNT CREATE DELETE DESC DESCENDING
    DETACH DISTINCT ELSE END ENDS EXISTS FALSE FOREACH IN IS LIMIT MATCH MERGE NOT NULL
    ON OPTIONAL OR ORDER REMOVE RETURN SET SKIP STARTS THEN TRUE UNION UNWIND WHERE
    WITH XOR YIELD
    """.split()
)

_NON_WORD = re.compile(r"[^A-Za-z0-9_]")


def sanitize(text: str) -> str:
    out = _NON_WORD.sub("_", text)
    if not out or out[0].isdigit():
        out = "v_" + out
    return out


class Namer:
    """Hands out unique Cypher names.

    SPARQL variables keep their own spelling whenever it is a legal,
    non-keyword Cypher identifier; generated names get a numeric suffix
    on collision.
    """

    def __init__(self, variables: Iterable[str] = ()):
        self.used: set[str] = set()
        self.var_names: dict[str, str] = {}
        for v in variables:
            self.var_names[v] = self._claim(sanitize(v))

    def _claim(self, base: str) -> str:
        name = base
        n = 2
        while name in self.used or name.lower() in CYPHER_KEYWORDS:
            name = f"{base}{n}"
            n += 1
        self.used.add(name)
        return name

    def var(self, v: str) -> str:
        if v not in self.var_names:
            self.var_names[v] = self._claim(sanitize(v))
        return self.var_names[v]

    def fresh(self, base: str) -> str:
        return self._claim(base)

    def numbered(self, prefix: str) -> str:
        n = 1
        while f"{prefix}{n}" in self.used:
            n += 1
        name = f"{prefix}{n}"
        self.used.add(name)
        return name


def local_name(iri_value: str, prefixes: PrefixMap) -> str:
    """Short name of an IRI: the part after the prefix, '#' or last '/'."""
    display = prefixes.shorten(iri_value)
    if display != iri_value:
        local = display.split(":", 1)[1]
    else:
        local = re.split(r"[#/]", iri_value.rstrip("/#"))[-1]
    return sanitize(local) if local else "rel"

"""The total order shared by both evaluators for ORDER BY and MIN/MAX."""

from __future__ import annotations

from typing import Any, Callable, Sequence

from ..rdf_model import NUMERIC_TYPES, RdfTerm, TermKind, is_number, literal_value


def order_key(value: Any) -> tuple:
    """Numbers, then strings, then lists, then NULL; DESC is the exact reverse."""
    if isinstance(value, RdfTerm):
        if value.kind is TermKind.LITERAL and value.datatype in NUMERIC_TYPES:
            v = literal_value(value)
            if is_number(v):
                return (0, float(v))
        return (1, value.lexical)
    if value is None:
        return (3,)
    if isinstance(value, bool):
        return (1, "true" if value else "false")
    if is_number(value):
        return (0, float(value))
    if isinstance(value, (list, tuple)):
        return (2, tuple(order_key(v) for v in value))
    return (1, str(value))


def sort_rows(rows: Sequence, keys: Sequence[tuple[Callable[[Any], Any], bool]]) -> list:
    """Stable sort by several (extractor, descending) keys, most significant first."""
    out = list(rows)
    for extract, descending in reversed(keys):
        out.sort(key=lambda r: order_key(extract(r)), reverse=descending)
    return out

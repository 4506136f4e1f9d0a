"""SPARQL-to-Cypher translation."""

from __future__ import annotations

from .core import TranslateOptions, map_binary, split_clauses, translate, translate_text
from .expressions import map_expression
from .pmm import PatternSet, map_property_path, pmm
from .smm import smm

__all__ = [
    "PatternSet",
    "TranslateOptions",
    "map_binary",
    "map_expression",
    "map_property_path",
    "pmm",
    "smm",
    "split_clauses",
    "translate",
    "translate_text",
]

"""Exception hierarchy shared by every stage of the pipeline."""

from __future__ import annotations


class S2CError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(S2CError):
    """Malformed N-Triples, SPARQL, prefix or catalog input."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)


class UnsupportedFeature(S2CError):
    """The input uses a construct outside the supported SPARQL subset."""

    def __init__(self, construct: str, detail: str = ""):
        self.construct = construct
        msg = f"unsupported feature: {construct}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class CatalogError(S2CError):
    pass


class MixedPredicate(CatalogError):
    def __init__(self, predicates):
        self.predicates = sorted(predicates)
        super().__init__(
            "predicate(s) used with both literal and resource objects: "
            + ", ".join(self.predicates)
        )


class UnknownPredicate(CatalogError):
    def __init__(self, iri: str):
        self.iri = iri
        super().__init__(f"predicate {iri} is neither a relationship type nor a property key")


class TranslationError(S2CError):
    pass


class UnboundFilterVariable(TranslationError):
    def __init__(self, var: str):
        self.var = var
        super().__init__(f"FILTER references unbound variable ?{var}")


class UnunifiableUnion(TranslationError):
    pass


class GraphError(S2CError):
    """Data that cannot be represented in (or read back from) a property graph."""


class AmbiguousRelationship(GraphError):
    def __init__(self, src: str, rel_type: str, dst: str):
        super().__init__(
            f"more than one relationship of type {rel_type} from {src} to {dst}; "
            "relationship identity cannot be recovered from its type"
        )


class EvaluationError(S2CError):
    """A query referenced a name the evaluator cannot resolve."""

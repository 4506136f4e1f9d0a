"""Graph relations: bags of rows over an ordered attribute schema."""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Sequence

from ..rdf_model import RdfTerm, term_key, value_key


@dataclass(frozen=True)
class Attr:
    """A column.  `var` names the SPARQL variable it answers, if any."""

    name: str
    var: str | None = None

    @property
    def key(self) -> str:
        return self.var if self.var is not None else self.name


@dataclass(frozen=True)
class GraphRelation:
    schema: tuple[Attr, ...] = ()
    rows: tuple[tuple, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "schema", tuple(self.schema))
        object.__setattr__(self, "rows", tuple(tuple(r) for r in self.rows))
        width = len(self.schema)
        for r in self.rows:
            if len(r) != width:
                raise ValueError(f"row {r!r} does not match schema width {width}")

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def names(self) -> list[str]:
        return [a.name for a in self.schema]

    @property
    def keys(self) -> list[str]:
        return [a.key for a in self.schema]

    def index(self, name: str) -> int:
        for i, a in enumerate(self.schema):
            if a.name == name:
                return i
        raise KeyError(name)

    def column(self, name: str) -> list:
        i = self.index(name)
        return [r[i] for r in self.rows]

    def as_dicts(self) -> list[dict[str, Any]]:
        names = self.names
        return [dict(zip(names, r)) for r in self.rows]

    def table(self) -> str:
        """Plain-text rendering for reports and debugging."""
        header = " | ".join(self.names)
        lines = [header, "-" * len(header)]
        for r in self.rows:
            lines.append(" | ".join("NULL" if v is None else str(v) for v in r))
        return "\n".join(lines)


def hashable(value) -> tuple:
    """Canonical, hashable key for any cell value."""
    if isinstance(value, RdfTerm):
        return term_key(value)
    if isinstance(value, (list, tuple)):
        return ("list", tuple(hashable(v) for v in value))
    if isinstance(value, bool):
        return ("bool", value)
    kind = type(value).__name__
    if kind in ("NodeId", "RelId"):
        return (kind, str(value))
    return value_key(value)


def row_key(row: Sequence) -> tuple:
    return tuple(hashable(v) for v in row)


def multiset(rel: GraphRelation) -> Counter:
    return Counter(row_key(r) for r in rel.rows)


# --- unary operators ------------------------------------------------------------


def select(rel: GraphRelation, pred: Callable[[dict], bool]) -> GraphRelation:
    """Keep rows for which `pred` (given a name -> value dict) is true."""
    names = rel.names
    return GraphRelation(rel.schema, [r for r in rel.rows if pred(dict(zip(names, r)))])


def project(rel: GraphRelation, columns: Iterable[tuple[str, Attr]]) -> GraphRelation:
    """Keep and rename columns: `columns` lists (source name, new attribute)."""
    columns = list(columns)
    idx = [rel.index(src) for src, _ in columns]
    return GraphRelation(tuple(a for _, a in columns), [tuple(r[i] for i in idx) for r in rel.rows])


def distinct(rel: GraphRelation) -> GraphRelation:
    seen = set()
    out = []
    for r in rel.rows:
        k = row_key(r)
        if k not in seen:
            seen.add(k)
            out.append(r)
    return GraphRelation(rel.schema, out)


def slice_rows(rel: GraphRelation, skip: int | None = None, limit: int | None = None) -> GraphRelation:
    start = skip or 0
    stop = None if limit is None else start + limit
    return GraphRelation(rel.schema, rel.rows[start:stop])


# --- binary operators -------------------------------------------------------------


def _common(r1: GraphRelation, r2: GraphRelation) -> list[tuple[int, int]]:
    k2 = {k: j for j, k in enumerate(r2.keys)}
    return [(i, k2[k]) for i, k in enumerate(r1.keys) if k in k2]


def _merge_schema(r1: GraphRelation, r2: GraphRelation, common) -> tuple[tuple[Attr, ...], list[int]]:
    shared = {j for _, j in common}
    extra = [j for j in range(len(r2.schema)) if j not in shared]
    return r1.schema + tuple(r2.schema[j] for j in extra), extra


def _compatible(a: tuple, b: tuple, common, null_tolerant: bool) -> bool:
    for i, j in common:
        x, y = a[i], b[j]
        if x is None or y is None:
            if null_tolerant:
                continue
            return False
        if hashable(x) != hashable(y):
            return False
    return True


def _merge(a: tuple, b: tuple, common, extra) -> tuple:
    row = list(a)
    for i, j in common:
        if row[i] is None:
            row[i] = b[j]
    return tuple(row) + tuple(b[j] for j in extra)


def _pairs(r1: GraphRelation, r2: GraphRelation, common, null_tolerant: bool):
    """Yield (left index, right row) pairs that satisfy the join condition."""
    has_null = any(
        r[i] is None for r in r1.rows for i, _ in common
    ) or any(r[j] is None for r in r2.rows for _, j in common)
    if common and not has_null:
        index = defaultdict(list)
        for b in r2.rows:
            index[tuple(hashable(b[j]) for _, j in common)].append(b)
        for n, a in enumerate(r1.rows):
            for b in index.get(tuple(hashable(a[i]) for i, _ in common), ()):
                yield n, b
    else:
        for n, a in enumerate(r1.rows):
            for b in r2.rows:
                if _compatible(a, b, common, null_tolerant):
                    yield n, b


def join(r1: GraphRelation, r2: GraphRelation, null_tolerant: bool = True) -> GraphRelation:
    """Inner join on shared attribute keys; shared columns are merged.

    With `null_tolerant` a NULL on either side matches anything and the
    merged column keeps the non-NULL value.
    """
    common = _common(r1, r2)
    schema, extra = _merge_schema(r1, r2, common)
    rows = [_merge(r1.rows[n], b, common, extra) for n, b in _pairs(r1, r2, common, null_tolerant)]
    return GraphRelation(schema, rows)


def left_join(
    r1: GraphRelation,
    r2: GraphRelation,
    cond: Callable[[dict], bool] | None = None,
    null_tolerant: bool = True,
) -> GraphRelation:
    """Left outer join; unmatched left rows are NULL-padded.

    `cond` is an extra predicate on the merged row (the condition of an
    OPTIONAL group's FILTER).
    """
    common = _common(r1, r2)
    schema, extra = _merge_schema(r1, r2, common)
    names = [a.name for a in schema]
    matched: dict[int, list[tuple]] = defaultdict(list)
    for n, b in _pairs(r1, r2, common, null_tolerant):
        row = _merge(r1.rows[n], b, common, extra)
        if cond is None or cond(dict(zip(names, row))):
            matched[n].append(row)
    rows = []
    for n, a in enumerate(r1.rows):
        rows.extend(matched.get(n) or [tuple(a) + (None,) * len(extra)])
    return GraphRelation(schema, rows)


def outer_union(r1: GraphRelation, r2: GraphRelation) -> GraphRelation:
    """Union over the merged schema, padding missing attributes with NULL."""
    schema = list(r1.schema)
    keys = [a.key for a in schema]
    for a in r2.schema:
        if a.key not in keys:
            schema.append(a)
            keys.append(a.key)

    def widen(rel: GraphRelation):
        pos = {k: i for i, k in enumerate(rel.keys)}
        return [tuple(r[pos[k]] if k in pos else None for k in keys) for r in rel.rows]

    return GraphRelation(tuple(schema), widen(r1) + widen(r2))


def cross(r1: GraphRelation, r2: GraphRelation) -> GraphRelation:
    return GraphRelation(r1.schema + r2.schema, [a + b for a in r1.rows for b in r2.rows])

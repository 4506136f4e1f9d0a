from __future__ import annotations

from collections import Counter

from hypothesis import given, settings
from hypothesis import strategies as st

from sparql2cypher.oracle import Attr, GraphRelation, multiset, outer_union
from sparql2cypher.oracle.ordering import order_key, sort_rows
from sparql2cypher.oracle.relation import distinct, hashable, join, left_join, row_key, select, slice_rows

cells = st.one_of(st.none(), st.integers(-3, 3), st.sampled_from(["a", "b", "c"]))


def relations(names: tuple[str, ...], nulls: bool = True):
    cell = cells if nulls else st.integers(-3, 3)
    row = st.tuples(*[cell] * len(names))
    return st.lists(row, max_size=8).map(lambda rows: GraphRelation(tuple(Attr(n, n) for n in names), rows))


LAWS = settings(max_examples=150, deadline=None)


@LAWS
@given(relations(("x", "y")), relations(("z",)))
def test_disjoint_join_is_cartesian(r1, r2):
    out = join(r1, r2)
    assert len(out) == len(r1) * len(r2)
    assert out.names == ["x", "y", "z"]


@LAWS
@given(relations(("x", "y"), nulls=False), relations(("y", "z"), nulls=False))
def test_join_matches_nested_loop(r1, r2):
    expected = Counter(row_key((a[0], a[1], b[1])) for a in r1.rows for b in r2.rows if a[1] == b[0])
    assert multiset(join(r1, r2)) == expected


@LAWS
@given(relations(("x", "y")), relations(("x",)))
def test_join_is_commutative_up_to_columns(r1, r2):
    left = join(r1, r2)
    right = join(r2, r1)
    reorder = [right.names.index(n) for n in left.names]
    assert multiset(left) == Counter(row_key(tuple(r[i] for i in reorder)) for r in right.rows)


@LAWS
@given(relations(("x", "y")), relations(("x", "z")))
def test_outer_union_is_additive(r1, r2):
    u = outer_union(r1, r2)
    assert len(u) == len(r1) + len(r2)
    assert u.keys == ["x", "y", "z"]
    assert all(r[2] is None for r in u.rows[: len(r1)])
    assert all(r[1] is None for r in u.rows[len(r1) :])


@LAWS
@given(relations(("x", "y")), relations(("x", "z")))
def test_left_join_keeps_every_left_row(r1, r2):
    out = left_join(r1, r2)
    assert len(out) >= len(r1)
    for a in r1.rows:
        # the left row survives, with any NULL in a shared column possibly filled from the right
        assert any(
            all(v is None or hashable(v) == hashable(w) for v, w in zip(a, r[:2])) for r in out.rows
        )
    assert left_join(r1, GraphRelation(r2.schema)).rows == tuple(a + (None,) for a in r1.rows)


@LAWS
@given(relations(("x", "y")), st.integers(-3, 3))
def test_filter_selects_a_sub_bag(rel, bound):
    kept = select(rel, lambda d: isinstance(d["x"], int) and d["x"] > bound)
    assert not multiset(kept) - multiset(rel)
    assert all(isinstance(r[0], int) and r[0] > bound for r in kept.rows)


@LAWS
@given(relations(("x", "y")))
def test_distinct_has_no_duplicates(rel):
    d = distinct(rel)
    assert set(multiset(d)) == set(multiset(rel))
    assert all(n == 1 for n in multiset(d).values())


@LAWS
@given(relations(("x",)), st.integers(0, 10), st.integers(0, 10))
def test_limit_and_skip_bounds(rel, skip, limit):
    assert len(slice_rows(rel, limit=limit)) == min(limit, len(rel))
    assert len(slice_rows(rel, skip=skip)) == len(rel) - min(skip, len(rel))
    both = slice_rows(rel, skip, limit)
    assert len(both) <= limit and both.rows == rel.rows[skip : skip + limit]


values = st.one_of(
    st.none(),
    st.integers(-5, 5),
    st.floats(-5, 5, allow_nan=False),
    st.text("ab", max_size=2),
    st.lists(st.integers(0, 2), max_size=2),
)


@LAWS
@given(st.lists(values, max_size=12))
def test_shared_order_is_total_and_groups_kinds(vals):
    ordered = sorted(vals, key=order_key)
    rank = [0 if isinstance(v, (int, float)) else 1 if isinstance(v, str) else 2 if isinstance(v, list) else 3 for v in ordered]
    assert rank == sorted(rank)
    assert [order_key(v) for v in sorted(reversed(vals), key=order_key)] == [order_key(v) for v in ordered]


@LAWS
@given(st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3)), max_size=10))
def test_sort_rows_is_stable_lexicographic(rows):
    out = sort_rows(rows, [(lambda r: r[0], False), (lambda r: r[1], True)])
    assert out == sorted(rows, key=lambda r: (r[0], -r[1]))

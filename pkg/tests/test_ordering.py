import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import orderings_possible, orderings_satisfiable, orderings_satisfiable_pruned
from pomp.ordering import OrderingStore, converse, relset

RELS = ["<", ">", "=", "!=", "<=", ">="]

constraint_sets = st.integers(2, 5).flatmap(lambda n: st.tuples(
    st.just(n),
    st.lists(st.tuples(st.integers(0, n - 1), st.sampled_from(RELS), st.integers(0, n - 1))
             .filter(lambda c: c[0] != c[2]), max_size=8)))


def build(n, constraints):
    store = OrderingStore()
    for i in range(n):
        store.add_step(i)
    ok = True
    for a, r, b in constraints:
        ok = store.add(a, b, r) and ok
        if not ok:
            break
    return store, ok


def test_basic_chain():
    s = OrderingStore("I", "F")
    for x in "abc":
        s.add_step(x)
    assert s.add("a", "b", "<") and s.add("b", "c", "<")
    assert s.necessarily("a", "c", "<")
    assert not s.add("c", "a", "<=")


def test_initial_and_final_bracket_every_step():
    s = OrderingStore(0, -1)
    s.add_step(1)
    assert s.necessarily(0, 1, "<") and s.necessarily(1, -1, "<")


def test_equality_merges_relations():
    s = OrderingStore()
    for x in "abc":
        s.add_step(x)
    assert s.add("a", "b", "=") and s.add("b", "c", "<")
    assert s.necessarily("a", "c", "<")
    assert [sorted(c) for c in s.clusters()] == [["a", "b"]]
    assert sorted(s.cluster_of("a")) == ["a", "b"]


def test_not_equal_then_both_weak_orders_forces_strict():
    s = OrderingStore()
    for x in "ab":
        s.add_step(x)
    assert s.add("a", "b", "!=") and s.add("a", "b", "<=")
    assert s.relation("a", "b") == relset("<")


def test_undo_restores_state():
    s = OrderingStore()
    for x in "abc":
        s.add_step(x)
    s.add("a", "b", "<")
    m = s.mark()
    s.add("b", "c", "<")
    assert s.necessarily("a", "c", "<")
    s.undo(m)
    assert s.possibly("c", "a", "<")


def test_converse():
    assert converse(relset("<=")) == relset(">=")


def test_unknown_relation():
    with pytest.raises(ValueError):
        relset("<>")


@settings(max_examples=300, deadline=None)
@given(constraint_sets)
def test_consistency_matches_brute_force(case):
    n, cons = case
    _, ok = build(n, cons)
    assert ok == orderings_satisfiable(n, cons)


@settings(max_examples=150, deadline=None)
@given(constraint_sets, st.sampled_from(RELS), st.data())
def test_possibly_matches_brute_force(case, rel, data):
    n, cons = case
    store, ok = build(n, cons)
    if not ok:
        return
    a = data.draw(st.integers(0, n - 1))
    b = data.draw(st.integers(0, n - 1).filter(lambda x: x != a))
    assert store.possibly(a, b, rel) == orderings_possible(n, cons, a, b, rel)


@settings(max_examples=300, deadline=None)
@given(constraint_sets)
def test_pruned_oracle_matches_plain_oracle(case):
    n, cons = case
    assert orderings_satisfiable_pruned(n, cons) == orderings_satisfiable(n, cons)

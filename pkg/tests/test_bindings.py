from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import bindings_models
from pomp.bindings import BindingStore, mgu_literals
from pomp.model import Literal

VARS = ["?x", "?y", "?z", "?w"]
OBJS = ["A", "B", "C"]
terms = st.sampled_from(VARS + OBJS)
ops = st.lists(st.tuples(st.sampled_from(["=", "!="]), terms, terms), max_size=7)


def apply(store, ops_):
    for op, x, y in ops_:
        ok = store.unify(x, y) if op == "=" else store.separate(x, y)
        if not ok:
            return False
    return True


def test_unify_then_separate_fails():
    b = BindingStore(OBJS)
    assert b.unify("?x", "?y")
    assert not b.separate("?x", "?y")
    assert b.codesignated("?x", "?y")


def test_constant_clash():
    b = BindingStore(OBJS)
    assert b.unify("?x", "A")
    assert not b.unify("?x", "B")
    assert b.value("?x") == "A"


def test_domain_restriction_pigeonhole():
    b = BindingStore()
    for v in ("?x", "?y", "?z"):
        assert b.restrict(v, ["A", "B"])
    assert b.separate("?x", "?y") and b.separate("?y", "?z")
    assert b.satisfiable()
    assert b.separate("?x", "?z")
    assert not b.satisfiable()


def test_undo():
    b = BindingStore(OBJS)
    m = b.mark()
    b.unify("?x", "A")
    b.separate("?y", "?x")
    b.undo(m)
    assert b.possibly_equal("?x", "?y")
    assert b.value("?x") is None


def test_mgu_literals_is_atomic_on_failure():
    b = BindingStore(OBJS)
    b.unify("?y", "B")
    assert not mgu_literals(Literal("on", ("?x", "A")), Literal("on", ("C", "?y")), b)
    assert b.value("?x") is None


def test_unbounded_universe_always_has_fresh_objects():
    b = BindingStore()
    for v in VARS:
        for w in VARS:
            if v < w:
                b.separate(v, w)
    assert b.satisfiable()


@settings(max_examples=300, deadline=None)
@given(ops)
def test_satisfiable_matches_brute_force(ops_):
    b = BindingStore(OBJS)
    ok = apply(b, ops_) and b.satisfiable()
    eqs = [(x, y) for op, x, y in ops_ if op == "="]
    neqs = [(x, y) for op, x, y in ops_ if op == "!="]
    assert ok == bool(bindings_models(VARS, OBJS, eqs, neqs))


@settings(max_examples=200, deadline=None)
@given(ops)
def test_groundings_match_brute_force(ops_):
    b = BindingStore(OBJS)
    if not apply(b, ops_):
        return
    eqs = [(x, y) for op, x, y in ops_ if op == "="]
    neqs = [(x, y) for op, x, y in ops_ if op == "!="]
    expected = {tuple(m[v] for v in VARS) for m in bindings_models(VARS, OBJS, eqs, neqs)}
    got = {tuple(g[v] for v in VARS) for g in b.groundings(VARS)}
    assert got == expected


@settings(max_examples=200, deadline=None)
@given(ops, terms, terms)
def test_possibly_equal_is_exact_for_satisfiable_stores(ops_, x, y):
    b = BindingStore(OBJS)
    if not apply(b, ops_) or not b.satisfiable():
        return
    eqs = [(p, q) for op, p, q in ops_ if op == "="]
    neqs = [(p, q) for op, p, q in ops_ if op == "!="]
    if b.codesignated(x, y):
        assert all(m.get(x, x) == m.get(y, y) for m in bindings_models(VARS, OBJS, eqs, neqs))
    if b.distinct(x, y):
        assert all(m.get(x, x) != m.get(y, y) for m in bindings_models(VARS, OBJS, eqs, neqs))

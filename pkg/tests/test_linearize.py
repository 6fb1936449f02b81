import itertools

from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import REL_TEST
from pomp.bindings import BindingStore
from pomp.linearize import enumerate_linearizations, shortest_linearization
from pomp.model import Step
from pomp.ordering import OrderingStore
from pomp.plans import FINAL, INITIAL, ConcurrentPlan

FIG5_FIRST = [{"Agent1": 1}, {"Agent1": 5, "Agent2": 2}, {"Agent2": 3}, {"Agent3": 4}, {"Agent2": 6}]
FIG5_SECOND = [{"Agent1": 1, "Agent2": 3}, {"Agent1": 5, "Agent2": 2, "Agent3": 4}, {"Agent2": 6}]


def make_plan(agents_of, constraints, agents):
    steps = {INITIAL: Step(INITIAL, None, (), "initial"), FINAL: Step(FINAL, None, (), "final")}
    o = OrderingStore(INITIAL, FINAL)
    for i, ag in enumerate(agents_of, start=1):
        steps[i] = Step(i, None, (ag,), "action", f"s{i}")
        o.add_step(i)
    for a, r, b in constraints:
        if not o.add(a, b, r):
            return None
    return ConcurrentPlan(steps, o, BindingStore(), agents=tuple(agents))


def brute_linearizations(agents_of, constraints, bound):
    """Every assignment of steps to ticks meeting conditions 1-4."""
    n = len(agents_of)
    out = set()
    for length in range(1, bound + 1):
        for pos in itertools.product(range(length), repeat=n):
            if any(not REL_TEST[r](pos[a - 1], pos[b - 1]) for a, r, b in constraints):
                continue
            if any(pos[i] == pos[j] and agents_of[i] == agents_of[j]
                   for i in range(n) for j in range(i + 1, n)):
                continue
            ticks = [frozenset((agents_of[i], i + 1) for i in range(n) if pos[i] == t)
                     for t in range(length)]
            out.add(tuple(ticks))
    return out


def as_key(lin):
    return tuple(frozenset(t.items()) for t in lin)


def test_fig5_shortest(fig5_plan):
    lin = shortest_linearization(fig5_plan)
    assert len(lin) == 3
    assert lin == FIG5_SECOND


def test_fig5_enumeration_contains_both(fig5_plan):
    five = list(enumerate_linearizations(fig5_plan, 5))
    assert FIG5_FIRST in five and FIG5_SECOND in five
    assert FIG5_SECOND in list(enumerate_linearizations(fig5_plan, 3))


def test_fig5_enumeration_is_exact(fig5_plan):
    cons = [(5, "=", 2), (3, "!=", 4), (1, "<", 5), (4, "<", 6)]
    agents_of = ["Agent1", "Agent2", "Agent2", "Agent3", "Agent1", "Agent2"]
    got = {as_key(l) for l in enumerate_linearizations(fig5_plan, 4)}
    assert got == brute_linearizations(agents_of, cons, 4)


def test_single_step():
    p = make_plan(["A"], [], ["A"])
    assert list(enumerate_linearizations(p, 1)) == [[{"A": 1}]]


def test_chain_needs_one_tick_per_step():
    p = make_plan(["A", "A", "A"], [(1, "<", 2), (2, "<", 3)], ["A"])
    assert len(shortest_linearization(p)) == 3


def test_unordered_steps_run_together():
    p = make_plan(["A", "B", "C"], [], ["A", "B", "C"])
    assert len(shortest_linearization(p)) == 1


def test_enumerate_zero_is_empty(fig5_plan):
    assert list(enumerate_linearizations(fig5_plan, 0)) == []


RELS = ["<", ">", "=", "!=", "<=", ">="]
plans = st.integers(1, 4).flatmap(lambda n: st.tuples(
    st.lists(st.sampled_from(["A", "B"]), min_size=n, max_size=n),
    st.lists(st.tuples(st.integers(1, n), st.sampled_from(RELS), st.integers(1, n))
             .filter(lambda c: c[0] != c[2]), max_size=4)))


@settings(max_examples=150, deadline=None)
@given(plans)
def test_enumeration_matches_brute_force(case):
    agents_of, cons = case
    p = make_plan(agents_of, cons, ["A", "B"])
    if p is None:
        return
    got = {as_key(l) for l in enumerate_linearizations(p, 3)}
    assert got == brute_linearizations(agents_of, cons, 3)


@settings(max_examples=150, deadline=None)
@given(plans)
def test_shortest_is_minimal(case):
    agents_of, cons = case
    p = make_plan(agents_of, cons, ["A", "B"])
    if p is None:
        return
    lin = shortest_linearization(p)
    bound = len(agents_of)
    brute = brute_linearizations(agents_of, cons, bound)
    if not brute:
        assert lin is None
        return
    assert lin is not None
    assert as_key(lin) in brute
    assert len(lin) == min(len(x) for x in brute)

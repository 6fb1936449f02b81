import random

import pytest

from pomp.esa import EsaLimit, _name, _step, esa_compile, esa_solve, joint_sets
from pomp.execution import apply_joint, goal_satisfied
from pomp.generate import family_problem
from pomp.model import Literal
from pomp.syntax import parse_domain, print_domain


def names(prepared):
    return {_name(g) for g in joint_sets(prepared)}


def replay(prepared, op_names):
    groups = {_name(g): g for g in joint_sets(prepared)}
    state = frozenset(prepared.problem.init)
    for n in op_names:
        state = apply_joint(groups[n], state)
    return goal_satisfied(prepared.problem.goal, state)


def test_swap_joint_sets(swap):
    assert names(swap) == {"a_Agent1", "a_Agent2", "b_Agent1", "b_Agent2",
                           "a_Agent1+b_Agent2", "b_Agent1+a_Agent2"}


def test_swap_plan_is_one_joint_operator(swap):
    d = esa_compile(swap)
    assert esa_solve(d, swap.problem) == ["a_Agent1+b_Agent2"]


def test_tables_sets(tables):
    got = names(tables)
    # movetable only ever occurs in pairs; pickup never needs a partner
    assert not any(n.startswith("movetable") and "+" not in n for n in got)
    assert "movetable_Agent1_Room2+movetable_Agent2_Room2" in got
    assert not any("pickup" in n and "+" in n for n in got)


# joint sets are minimal, so lone actions cannot share a tick: one more than
# the 7-tick native optimum
TABLES_ESA_LENGTH = 8


def test_tables_esa_plan_replays(tables):
    plan = esa_solve(esa_compile(tables), tables.problem)
    assert plan is not None and len(plan) == TABLES_ESA_LENGTH
    assert "lift_Agent1_LeftSide+lift_Agent2_RightSide" in plan
    assert replay(tables, plan)


def test_existential_inequality_survives_compilation(tables):
    ops = {o.name: o for o in esa_compile(tables).schemata}
    lift = ops["lift_Agent2_RightSide"]
    only_right = frozenset({Literal("atside", ("Agent2", "RightSide")), Literal("down", ("RightSide",))})
    assert _step(lift, only_right) is None
    assert _step(lift, only_right | {Literal("down", ("LeftSide",))}) is not None


def test_compiled_domain_round_trips(tables):
    d = esa_compile(tables)
    assert all(not s.params and not s.concurrency for s in d.schemata)
    assert parse_domain(print_domain(d)) == d


def test_set_cap(tables):
    with pytest.raises(EsaLimit):
        joint_sets(tables, max_sets=3)


def test_solvability_matches_oracle():
    rng = random.Random(41)
    for _ in range(60):
        fam = family_problem(rng)
        plan = esa_solve(esa_compile(fam.prepared), fam.prepared.problem)
        assert (plan is not None) == (fam.shortest is not None)
        if plan is not None:
            assert replay(fam.prepared, plan)

import random
import time

import pytest

from conftest import prepared_from, read_corpus
from pomp.generate import family_problem
from pomp.planner import EXHAUSTED, SOLVED, UNSOLVABLE, PlannerConfig, effects_of, solve
from pomp.plans import INITIAL
from pomp.syntax import print_plan
from pomp.validate import validate

# node count of the default LIFO run on the tables problem; a regression guard
TABLES_NODES = 12_420


def steps_named(plan, name):
    return [s.id for s in plan.actions() if s.schema.name == name]


def test_tables_is_solved_quickly(tables):
    t0 = time.perf_counter()
    r = solve(tables, PlannerConfig())
    assert time.perf_counter() - t0 < 10
    assert r.status == SOLVED
    assert r.nodes <= TABLES_NODES


def test_tables_structure(tables_result):
    plan = tables_result.plan
    lifts = steps_named(plan, "lift")
    moves = steps_named(plan, "movetable")
    lowers = steps_named(plan, "lower")
    assert len(lifts) == len(moves) == len(lowers) == 2
    assert plan.relation(*lifts) == {"="}
    assert plan.relation(*moves) == {"="}
    assert len(plan.relation(*lowers)) == 1 and "=" not in plan.relation(*lowers)
    for m in moves:
        for lo in lowers:
            assert plan.relation(m, lo) == {"<"}


def test_links_are_supported(tables, tables_result):
    plan = tables_result.plan
    for link in plan.links:
        assert plan.relation(link.producer, link.consumer) == {"<"}
        if link.producer == INITIAL:
            continue
        step = plan.steps[link.producer]
        made = {(e.predicate, e.positive) for e, _ in effects_of(step.schema)}
        assert (link.condition.predicate, link.condition.positive) in made


def test_swap_is_concurrent(swap):
    r = solve(swap, PlannerConfig())
    assert r.status == SOLVED
    a, b = r.plan.actions()
    assert r.plan.relation(a.id, b.id) == {"="}
    assert validate(r.plan, swap).ok


def test_swap_without_concurrent_clobbering(swap):
    r = solve(swap, PlannerConfig(no_concurrent_clobber=True))
    assert r.status == UNSOLVABLE


def test_goal_already_true():
    prepared = prepared_from(read_corpus("swap.pomp"),
                             "(define (problem e) (:agents Agent1) (:init (p)) (:goal (p)))")
    r = solve(prepared, PlannerConfig())
    assert r.status == SOLVED and r.plan.actions() == []


def test_unreachable_goal_is_unsolvable():
    prepared = prepared_from(read_corpus("swap.pomp"),
                             "(define (problem e) (:agents Agent1) (:init) (:goal (q)))")
    r = solve(prepared, PlannerConfig())
    assert r.status == UNSOLVABLE and "unreachable" in r.message


def test_step_budget_exhausts(tables):
    assert solve(tables, PlannerConfig(max_steps=0)).status == EXHAUSTED
    assert solve(tables, PlannerConfig(max_nodes=50)).status == EXHAUSTED


def test_output_is_deterministic(swap, tables):
    for prepared in (swap, tables):
        a = solve(prepared, PlannerConfig(seed=3))
        b = solve(prepared, PlannerConfig(seed=3))
        assert print_plan(a.plan) == print_plan(b.plan) and a.nodes == b.nodes


def test_bad_strategy():
    with pytest.raises(ValueError):
        PlannerConfig(strategy="dfs")


@pytest.mark.parametrize("seed", [5, 23])
def test_strategy_does_not_change_solvability(seed):
    rng = random.Random(seed)
    for _ in range(40):
        fam = family_problem(rng)
        lifo = solve(fam.prepared, PlannerConfig(max_steps=8))
        fifo = solve(fam.prepared, PlannerConfig(strategy="fifo", max_steps=8))
        if EXHAUSTED in (lifo.status, fifo.status):
            continue
        assert lifo.status == fifo.status == (SOLVED if fam.shortest is not None else UNSOLVABLE)
        for r in (lifo, fifo):
            if r.plan is not None:
                assert validate(r.plan, fam.prepared).ok

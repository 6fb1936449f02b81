import itertools

import pytest

from conftest import prepared_from, read_corpus
from pomp.bindings import BindingStore
from pomp.execution import Action, apply_joint
from pomp.model import (Literal, SpecificationError, Step, ground_foralls, instantiate, matches)
from pomp.syntax import parse_domain

L = Literal


@pytest.fixture(scope="module")
def tables_domain():
    return parse_domain(read_corpus("tables.pomp"))


def test_instantiate_renames_everything(tables_domain):
    pickup = tables_domain.schema("pickup")
    s = instantiate(pickup, 7)
    assert s.args == ("?a1#7", "?x#7")
    assert all("#7" in v for v in s.schema.variables())


def test_instantiations_share_no_variables(tables_domain):
    for schema in tables_domain.schemata:
        a, b = instantiate(schema, 1), instantiate(schema, 2)
        assert not (a.schema.variables() & b.schema.variables())


def test_item_locals_are_split_per_item(tables_domain):
    lower = instantiate(tables_domain.schema("lower"), 3)
    items = list(lower.schema.concurrency) + [i for f in lower.schema.foralls for w in f.whens
                                              for i in w.concurrency]
    locals_ = [set(i.local) for i in items]
    for x, y in itertools.combinations(locals_, 2):
        assert not (x & y)


def test_lift_keeps_its_when_clause(tables_domain):
    lift = tables_domain.schema("lift")
    s = instantiate(lift, 4)
    assert len(s.schema.foralls) == 1 and len(s.schema.foralls[0].whens) == 1


def test_ground_forall_single_block(tables_domain):
    objs = {"B": "block", "LeftSide": "side", "RightSide": "side"}
    g = ground_foralls(tables_domain.schema("lower"), objs)
    assert not g.foralls
    # one clause per (block, side) pair
    assert len(g.whens) == 2
    assert all(L("ontable", ("B",)) in w.pre for w in g.whens)


def test_ground_forall_vacuous(tables_domain):
    g = ground_foralls(tables_domain.schema("lower"), {"LeftSide": "side"})
    assert g.whens == ()


def test_ground_forall_is_idempotent(tables_domain):
    objs = {"B": "block", "LeftSide": "side", "RightSide": "side"}
    g = ground_foralls(tables_domain.schema("lift"), objs)
    assert ground_foralls(g, objs) == g


def test_untyped_forall_needs_a_type():
    d = parse_domain(read_corpus("fig4.pomp"))
    with pytest.raises(SpecificationError):
        ground_foralls(d.schemata[0], {"B": "block"})


FALL = """
(define (domain fall))
(define (operator lower)
  :parameters (?a - agent ?s - side)
  :precondition (up ?s)
  :effect (and (not (up ?s))
               (forall (?x - block) (when ((ontable ?x) ()) (and (onfloor ?x) (not (ontable ?x)))))))
"""


def test_two_blocks_match_hand_grounding():
    prob = """(define (problem f) (:objects B1 B2 - block S - side A - agent)
               (:agents A) (:init (up S)) (:goal ()))"""
    prepared = prepared_from(FALL, prob)
    lower = Action(prepared.schema("lower"), ("A", "S"))
    blocks = ["B1", "B2"]
    for on in itertools.product([False, True], repeat=2):
        state = frozenset({L("up", ("S",))} | {L("ontable", (b,)) for b, o in zip(blocks, on) if o})
        expected = frozenset({L("onfloor", (b,)) for b, o in zip(blocks, on) if o})
        assert apply_joint((lower,), state) == expected


def test_matches_fig3_examples():
    d = parse_domain(read_corpus("fig3.pomp"))
    host = instantiate(d.schemata[0], 1)
    (item,) = host.schema.concurrency
    b = BindingStore()
    b.unify(host.args[0], "Agent1")
    b.unify(host.args[1], "B")
    b.unify(host.args[2], "C")
    assert matches(Step(2, d.schemata[0], ("Agent2", "B", "C")), item, b)
    assert not matches(Step(3, d.schemata[0], ("Agent1", "B", "C")), item, b)
    assert not matches(Step(4, d.schemata[0], ("Agent2", "D", "C")), item, b)


def test_matches_fig4_lower(tables_domain):
    lower = instantiate(tables_domain.schema("lower"), 1)
    (item,) = lower.schema.concurrency
    b = BindingStore()
    b.unify(lower.args[0], "Agent1")
    b.unify(lower.args[1], "LeftSide")
    assert item.schema == "lift" and item.forbidden
    other = Step(2, tables_domain.schema("lift"), ("Agent2", "RightSide"))
    assert matches(other, item, b)
    same = Step(3, tables_domain.schema("lift"), ("Agent2", "LeftSide"))
    assert not matches(same, item, b)


def test_matches_leaves_store_untouched(tables_domain):
    lower = instantiate(tables_domain.schema("lower"), 1)
    (item,) = lower.schema.concurrency
    b = BindingStore()
    mark = b.mark()
    matches(Step(2, tables_domain.schema("lift"), ("?p", "?q")), item, b)
    assert b.mark() == mark

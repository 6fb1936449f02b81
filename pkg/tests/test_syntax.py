import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import read_corpus
from pomp.generate import random_domain_text
from pomp.model import Constraint, Literal, SpecificationError
from pomp.sexpr import ParseError, read, read_all
from pomp.syntax import (parse_domain, parse_plan, parse_problem, print_domain, print_plan,
                         print_problem)

CORPUS_DOMAINS = ["fig1", "fig2", "fig3", "fig4", "fig7", "swap", "tables"]


def test_sexpr_spans():
    e = read("(a\n  (b c))")
    assert (e[1].line, e[1].col) == (2, 3)


def test_unbalanced():
    with pytest.raises(ParseError):
        read_all("(a (b)")
    with pytest.raises(ParseError):
        read_all("a)")


def test_comments_are_skipped():
    assert len(read_all("; nothing\n(a) ; tail\n(b)")) == 2


def test_fig3_pickup():
    d = parse_domain(read_corpus("fig3.pomp"))
    (s,) = d.schemata
    assert s.name == "pickup" and len(s.params) == 3
    (item,) = s.concurrency
    assert item.forbidden and item.schema == "pickup"
    assert Constraint("?a1", "?a2", False) in item.constraints
    assert Constraint("?x", "?y", False) in s.constraints


def test_fig4_lower():
    d = parse_domain(read_corpus("fig4.pomp"))
    (s,) = d.schemata
    assert s.name == "lower"
    (f,) = s.foralls
    (w,) = f.whens
    assert w.pre == (Literal("ontable", ("?x",)),)
    (item,) = w.concurrency
    assert item.forbidden and item.schema == "lower"
    assert Literal("onfloor", ("?x",)) in w.effect


def test_equality_is_a_constraint_not_an_atom():
    d = parse_domain(read_corpus("fig2.pomp"))
    s = d.schemata[0]
    assert all(l.predicate != "=" for l in s.pre)
    assert s.constraints == (Constraint("?x", "?y", False),)


def test_missing_effect_is_reported():
    with pytest.raises(ParseError, match=":effect"):
        parse_domain("(define (operator x) :parameters (?a))")


def test_unknown_keyword():
    with pytest.raises(ParseError, match="unknown keyword"):
        parse_domain("(define (operator x) :parameters (?a) :effect (p) :bogus ())")


def test_arity_mismatch_has_span():
    with pytest.raises(ParseError) as info:
        parse_domain("(define (operator x)\n :parameters (?a)\n :effect (and (p ?a) (p)))")
    assert info.value.line == 1


def test_unbound_effect_variable():
    with pytest.raises(ParseError, match="unbound"):
        parse_domain("(define (operator x) :parameters (?a) :effect (p ?b))")


@pytest.mark.parametrize("name", CORPUS_DOMAINS)
def test_corpus_round_trip(name):
    d = parse_domain(read_corpus(name + ".pomp"))
    assert parse_domain(print_domain(d)) == d


def test_printing_is_a_fixpoint():
    d = parse_domain(read_corpus("tables.pomp"))
    text = print_domain(d)
    assert print_domain(parse_domain(text)) == text


def test_tables_problem():
    d = parse_domain(read_corpus("tables.pomp"))
    p = parse_problem(read_corpus("tables.prob"), d)
    assert len(p.init) == 7
    assert Literal("down", ("LeftSide",)) in p.init and Literal("down", ("RightSide",)) in p.init
    assert len(p.goal) == 4
    assert p.agents == ("Agent1", "Agent2")
    assert parse_problem(print_problem(p), d) == p


def test_swap_problem():
    d = parse_domain(read_corpus("swap.pomp"))
    p = parse_problem(read_corpus("swap.prob"), d)
    assert p.init == frozenset({Literal("p")})
    assert set(p.goal) == {Literal("p", (), False), Literal("q")}


def test_empty_goal():
    d = parse_domain(read_corpus("swap.pomp"))
    p = parse_problem("(define (problem e) (:agents A1) (:init (p)) (:goal ()))", d)
    assert p.goal == ()


def test_problem_errors():
    d = parse_domain(read_corpus("swap.pomp"))
    with pytest.raises(ParseError, match="predicate"):
        parse_problem("(define (problem e) (:agents A1) (:init (zz)) (:goal ()))", d)
    with pytest.raises(ParseError):
        parse_problem("(define (problem e) (:agents A1) (:init (p ?x)) (:goal ()))", d)


def test_plan_round_trip(fig5_plan):
    text = print_plan(fig5_plan)
    again = parse_plan(text)
    assert print_plan(again) == text
    assert "(= A2 A5)" in text or "(= A5 A2)" in text


def test_plan_with_contradictory_orderings():
    from pomp.syntax import InconsistentPlan
    text = "(define (plan p) (:agents A) (:steps (A1 (a A)) (A2 (b A))) (:orderings (< A1 A2) (< A2 A1)))"
    with pytest.raises(InconsistentPlan):
        parse_plan(text)


def test_random_domains_round_trip():
    rng = random.Random(7)
    for _ in range(200):
        d = parse_domain(random_domain_text(rng))
        assert parse_domain(print_domain(d)) == d


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10_000), st.integers(0, 400))
def test_errors_point_inside_the_text(seed, cut):
    text = random_domain_text(random.Random(seed))
    broken = text[:cut] + text[cut + 1:]
    try:
        parse_domain(broken)
    except ParseError as exc:
        lines = broken.split("\n")
        assert 1 <= exc.line <= len(lines)
        assert 1 <= exc.col <= len(lines[exc.line - 1]) + 1
    except SpecificationError:
        pytest.fail("specification error without a source span")

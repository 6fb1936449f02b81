import pytest

from conftest import read_corpus
from pomp.lint import fix_nonconcurrent, lint_domain, unify
from pomp.syntax import parse_domain, print_domain

CLEAN = ["fig1", "fig2", "fig3", "fig4", "swap", "tables"]

TOGGLE = """
(define (operator set) :parameters (?a) :precondition () :effect (q))
(define (operator clear) :parameters (?a) :precondition () :effect (not (q)))
"""

OWN_HANDS = """
(define (operator grab) :parameters (?a ?x) :precondition () :effect (held ?a ?x))
(define (operator drop) :parameters (?a ?x) :precondition () :effect (not (held ?a ?x)))
"""

FLIP = """
(define (operator flip) :parameters (?a ?x ?y) :precondition ()
  :effect (and (on ?x) (not (on ?y))))
"""

INCONGRUOUS = """
(define (operator a) :parameters (?a1) :precondition ()
  :concurrent (and (b ?a2) (not (= ?a1 ?a2))) :effect (p))
(define (operator b) :parameters (?a1) :precondition ()
  :concurrent (not (a ?a2)) :effect (r))
"""

OVERLAP = """
(define (operator o) :parameters (?a) :precondition ()
  :effect (and (when ((p) ()) (q)) (when ((r) ()) (s))))
"""

DISJOINT = """
(define (operator o) :parameters (?a) :precondition ()
  :effect (and (when ((p) ()) (q)) (when ((not (p)) ()) (s))))
"""


def kinds(text):
    return sorted(d.kind for d in lint_domain(parse_domain(text)))


@pytest.mark.parametrize("name", CLEAN)
def test_corpus_is_clean(name):
    assert lint_domain(parse_domain(read_corpus(name + ".pomp"))) == []


def test_fig7_typo_is_reported():
    (d,) = lint_domain(parse_domain(read_corpus("fig7.pomp")))
    assert d.kind == "unknown-schema" and "tortable" in d.message


def test_unify():
    assert unify(("?x", "B"), ("A", "?y")) == {"?x": "A", "?y": "B"}
    assert unify(("?x", "?x"), ("A", "B")) is None


def test_opposite_effects_conflict():
    (d,) = lint_domain(parse_domain(TOGGLE))
    assert d.kind == "conflict" and set(d.schemas) == {"set", "clear"}


def test_same_agent_is_not_a_conflict():
    assert kinds(OWN_HANDS) == []


def test_self_conflict_and_fix():
    d = parse_domain(FLIP)
    assert kinds(FLIP) == ["conflict"]
    fixed = fix_nonconcurrent(d)
    assert lint_domain(fixed) == []
    (item,) = fixed.schema("flip").concurrency
    assert item.forbidden and len(item.constraints) == 1
    assert parse_domain(print_domain(fixed)) == fixed


def test_fix_toggle_round_trips():
    fixed = fix_nonconcurrent(parse_domain(TOGGLE))
    assert lint_domain(fixed) == []
    assert parse_domain(print_domain(fixed)) == fixed


def test_incongruity():
    assert kinds(INCONGRUOUS) == ["incongruous"]


def test_overlap():
    assert kinds(OVERLAP) == ["overlap"]
    assert kinds(DISJOINT) == []

import random

from pomp.generate import family_problem, family_texts, random_domain_text
from pomp.oracle import oracle_solve
from pomp.syntax import parse_domain


def test_family_is_reproducible():
    a = [family_texts(random.Random(9)) for _ in range(2)]
    assert a[0] == a[1]


def test_family_bounds():
    rng = random.Random(2)
    for _ in range(100):
        fam = family_problem(rng)
        p = fam.prepared
        assert len(p.problem.agents) <= 2
        assert 1 <= len(p.domain.schemata) <= 5
        assert all(len(s.params) == 1 for s in p.domain.schemata)
        assert fam.shortest is None or fam.shortest <= 4


def test_filter_makes_horizon_irrelevant():
    rng = random.Random(4)
    for _ in range(100):
        fam = family_problem(rng)
        assert oracle_solve(fam.prepared, horizon=4).solved == (fam.shortest is not None)


def test_family_has_both_outcomes():
    rng = random.Random(6)
    shortest = [family_problem(rng).shortest for _ in range(100)]
    assert None in shortest and any(s is not None for s in shortest)


def test_rich_domains_parse():
    rng = random.Random(0)
    for _ in range(200):
        parse_domain(random_domain_text(rng))

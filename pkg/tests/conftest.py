import pytest

from pomp import corpus_path
from pomp.prep import prepare
from pomp.syntax import parse_domain, parse_plan, parse_problem


def read_corpus(name: str) -> str:
    with open(corpus_path(name)) as fh:
        return fh.read()


def load(name: str):
    d = parse_domain(read_corpus(name + ".pomp"))
    p = parse_problem(read_corpus(name + ".prob"), d)
    return prepare(d, p)


def prepared_from(domain_text: str, problem_text: str):
    d = parse_domain(domain_text)
    return prepare(d, parse_problem(problem_text, d))


@pytest.fixture(scope="session")
def tables():
    return load("tables")


@pytest.fixture(scope="session")
def swap():
    return load("swap")


@pytest.fixture
def fig5_plan():
    return parse_plan(read_corpus("fig5.plan"))


@pytest.fixture(scope="session")
def tables_result(tables):
    from pomp.planner import PlannerConfig, solve
    return solve(tables, PlannerConfig())


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)

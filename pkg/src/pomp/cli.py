"""Command-line interface.

Exit codes: 0 success, 1 unsolvable or FAIL, 2 resource limit, 3 input error.
"""
from __future__ import annotations

import argparse
import os
import sys

from .esa import EsaLimit, esa_compile
from .linearize import enumerate_linearizations, format_linearization, shortest_linearization
from .lint import fix_nonconcurrent, lint_domain
from .model import SpecificationError
from .oracle import format_joint, oracle_solve
from .planner import EXHAUSTED, SOLVED, PlannerConfig, solve
from .prep import prepare
from .report import gantt, schedule_tsv
from .syntax import InconsistentPlan, parse_domain, parse_plan, parse_problem, print_domain, print_plan
from .validate import validate

OK, FAIL, LIMIT, INPUT = 0, 1, 2, 3


class InputError(Exception):
    pass


def _read(path: str) -> str:
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}") from None


def _load(args, fix: bool = False):
    try:
        domain = parse_domain(_read(args.domain))
        if fix:
            domain = fix_nonconcurrent(domain)
        problem = parse_problem(_read(args.problem), domain)
        return prepare(domain, problem)
    except SpecificationError as exc:
        raise InputError(str(exc)) from None


def _write(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    try:
        with open(path, "w") as fh:
            fh.write(text)
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}") from None


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("POMP_SEED")
    if env:
        try:
            return int(env)
        except ValueError:
            raise InputError(f"POMP_SEED must be an integer, got {env!r}") from None
    return 0


def cmd_plan(args) -> int:
    prepared = _load(args, fix=args.fix_nonconcurrent)
    config = PlannerConfig(strategy=args.strategy, max_steps=args.max_steps,
                           max_nodes=args.max_nodes, seed=_seed(args),
                           no_concurrent_clobber=args.no_concurrent_clobber)
    result = solve(prepared, config)
    if result.status != SOLVED:
        print(f"{result.status}: {result.message}", file=sys.stderr)
        return LIMIT if result.status == EXHAUSTED else FAIL
    plan = result.plan
    text = print_plan(plan)
    lin = shortest_linearization(plan) or []
    if args.output == "machine":
        sys.stdout.write(text)
    else:
        sys.stdout.write(text)
        print(f"; shortest linearization: {len(lin)} tick(s)")
        for line in format_linearization(lin, plan):
            print("; " + line)
        print(f"; {result.nodes} nodes, {len(plan.actions())} steps")
    if args.out:
        _write(args.out, text)
    if args.tsv:
        _write(args.tsv, schedule_tsv(plan, lin))
    if args.figure:
        gantt(plan, args.figure, lin, title=prepared.problem.name)
    return OK


def cmd_validate(args) -> int:
    prepared = _load(args)
    try:
        plan = parse_plan(_read(args.plan), prepared.schemata,
                          universe=prepared.problem.objects)
    except SpecificationError as exc:
        raise InputError(str(exc)) from None
    if not plan.agents:
        plan.agents = prepared.problem.agents
    mode = "sampled" if args.sampled else "exhaustive"
    verdict = validate(plan, prepared, mode=mode, samples=args.sampled or 0, seed=_seed(args))
    print("\n".join(verdict.report()))
    return OK if verdict.ok else FAIL


def cmd_linearize(args) -> int:
    try:
        plan = parse_plan(_read(args.plan))
    except InconsistentPlan as exc:
        print(f"inconsistent plan: {exc}", file=sys.stderr)
        return FAIL
    except SpecificationError as exc:
        raise InputError(str(exc)) from None
    if args.enumerate is not None:
        for k, lin in enumerate(enumerate_linearizations(plan, args.enumerate), start=1):
            print(f"# linearization {k}: {len(lin)} tick(s)")
            print("\n".join(format_linearization(lin, plan)))
        return OK
    lin = shortest_linearization(plan)
    if lin is None:
        print("the plan admits no linearization", file=sys.stderr)
        return FAIL
    print(f"# shortest: {len(lin)} tick(s)")
    print("\n".join(format_linearization(lin, plan)))
    return OK


def cmd_oracle(args) -> int:
    prepared = _load(args)
    result = oracle_solve(prepared, horizon=args.horizon, max_states=args.max_states)
    if result.status == "limit":
        print(f"limit: {result.message}", file=sys.stderr)
        return LIMIT
    if not result.solved:
        print("none (horizon)" if result.cut else "none")
        return FAIL
    agents = prepared.problem.agents
    for k, joint in enumerate(result.plan, start=1):
        print(f"{k}: {format_joint(joint, agents)}")
    return OK


def cmd_esa(args) -> int:
    prepared = _load(args)
    try:
        domain = esa_compile(prepared, max_sets=args.max_sets)
    except EsaLimit as exc:
        print(f"limit: {exc}", file=sys.stderr)
        return LIMIT
    _write(args.out, print_domain(domain))
    return OK


def cmd_lint(args) -> int:
    try:
        domain = parse_domain(_read(args.domain))
    except SpecificationError as exc:
        raise InputError(str(exc)) from None
    diags = lint_domain(domain)
    for d in diags:
        print(d, file=sys.stderr if args.fix_nonconcurrent else sys.stdout)
    if args.fix_nonconcurrent:
        _write(args.out, print_domain(fix_nonconcurrent(domain)))
        return OK
    return FAIL if diags else OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pomp", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def problem_args(p):
        p.add_argument("domain", help="domain file")
        p.add_argument("problem", help="problem file")

    p = sub.add_parser("plan", help="search for a concurrent plan")
    problem_args(p)
    p.add_argument("--strategy", choices=["lifo", "fifo"], default="lifo")
    p.add_argument("--max-steps", type=int, default=16, help="action count bound (default 16)")
    p.add_argument("--max-nodes", type=int, default=200_000, help="search node bound")
    p.add_argument("--seed", type=int, default=None, help="tie-break seed (else POMP_SEED, else 0)")
    p.add_argument("--no-concurrent-clobber", action="store_true",
                   help="never let a step clobber a condition its consumer needs in the same tick")
    p.add_argument("--fix-nonconcurrent", action="store_true",
                   help="add nonconcurrency items for conflicting effects before planning")
    p.add_argument("--output", choices=["text", "machine"], default="text")
    p.add_argument("--out", help="also write the plan file here")
    p.add_argument("--tsv", help="write the shortest schedule as TSV")
    p.add_argument("--figure", help="write a Gantt chart of the shortest schedule")
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("validate", help="check a plan against every linearization")
    problem_args(p)
    p.add_argument("plan", help="plan file")
    p.add_argument("--sampled", type=int, metavar="K", help="check K random linearizations")
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("linearize", help="list linearizations of a plan")
    p.add_argument("plan", help="plan file")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--shortest", action="store_true", help="a shortest linearization (default)")
    g.add_argument("--enumerate", type=int, metavar="BOUND", help="all linearizations of ≤ BOUND ticks")
    p.set_defaults(func=cmd_linearize)

    p = sub.add_parser("oracle", help="breadth-first search over joint actions")
    problem_args(p)
    p.add_argument("--horizon", type=int, default=None, help="tick bound (default: none)")
    p.add_argument("--max-states", type=int, default=200_000)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("esa", help="compile to an equivalent single-agent domain")
    problem_args(p)
    p.add_argument("--out", help="output file (default stdout)")
    p.add_argument("--max-sets", type=int, default=50_000, help="joint-action enumeration cap")
    p.set_defaults(func=cmd_esa)

    p = sub.add_parser("lint", help="check a domain for conflicts and incongruities")
    p.add_argument("domain", help="domain file")
    p.add_argument("--fix-nonconcurrent", action="store_true", help="print a repaired domain")
    p.add_argument("--out", help="where to write the repaired domain")
    p.set_defaults(func=cmd_lint)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INPUT


if __name__ == "__main__":
    sys.exit(main())

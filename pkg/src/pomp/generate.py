"""Random problem and domain generators used by the property tests.

``family_problem`` draws from a small bounded family: at most two agents,
at most five schemata whose only parameter is the acting agent, and at most
six ground atoms.  ``random_domain_text`` draws syntactically rich domains
(typed parameters, concurrency items, when-clauses, quantified effects) for
round-trip checks.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

from .oracle import oracle_solve
from .prep import prepare
from .syntax import parse_domain, parse_problem


@dataclass
class FamilyProblem:
    domain_text: str
    problem_text: str
    prepared: object
    shortest: int | None  # oracle length, None when unsolvable


def _lit(atom: str, positive: bool) -> str:
    return atom if positive else f"(not {atom})"


def _conj(parts: list[str]) -> str:
    if not parts:
        return "()"
    if len(parts) == 1:
        return parts[0]
    return "(and " + " ".join(parts) + ")"


def family_texts(rng: random.Random) -> tuple[str, str]:
    """One unfiltered member of the bounded family, as (domain, problem) text."""
    n_agents = rng.choice([1, 2, 2])
    agents = [f"Agent{k + 1}" for k in range(n_agents)]
    n_props = rng.randint(2, 4)
    props = [f"(p{k})" for k in range(n_props)]
    unary = rng.random() < 0.5 and n_props + n_agents <= 6
    names = [f"s{k}" for k in range(rng.randint(1, 5))]

    def atom(var: str | None) -> str:
        if unary and var and rng.random() < 0.3:
            return f"(r {var})"
        return rng.choice(props)

    schemata = []
    for name in names:
        pre: dict[str, bool] = {}
        for _ in range(rng.randint(0, 2)):
            pre.setdefault(atom("?a"), rng.random() < 0.6)
        eff: dict[str, bool] = {}
        for _ in range(rng.randint(1, 2)):
            eff.setdefault(atom("?a"), rng.random() < 0.6)
        conc = []
        if n_agents > 1 and rng.random() < 0.35:
            other = rng.choice(names)
            if rng.random() < 0.5:
                conc.append(f"({other} ?b)")
            else:
                conc += [f"(not ({other} ?b))", "(not (= ?a ?b))"]
        text = (f"(define (operator {name})\n"
                f"  :parameters    (?a - agent)\n"
                f"  :precondition  {_conj([_lit(a, v) for a, v in pre.items()])}\n")
        if conc:
            text += f"  :concurrent    {_conj(conc)}\n"
        text += f"  :effect        {_conj([_lit(a, v) for a, v in eff.items()])})\n"
        schemata.append(text)
    domain = "(define (domain fam))\n\n" + "\n".join(schemata)

    ground = [a for a in props if a in domain]
    if "(r ?a)" in domain:
        ground += [f"(r {g})" for g in agents]
    init = [a for a in ground if rng.random() < 0.4]
    goal: dict[str, bool] = {}
    for _ in range(rng.randint(1, 2)):
        goal.setdefault(rng.choice(ground), rng.random() < 0.7)
    problem = (f"(define (problem fam)\n  (:domain fam)\n"
               f"  (:agents {' '.join(agents)})\n"
               f"  (:init {' '.join(init)})\n"
               f"  (:goal {_conj([_lit(a, v) for a, v in goal.items()])}))\n")
    return domain, problem


def family_problem(rng: random.Random, horizon: int = 4) -> FamilyProblem:
    """A family member that is unsolvable or solvable within ``horizon`` ticks.

    Filtering on the exact shortest plan makes horizon-bounded and unbounded
    solvability coincide, so a planner without a tick bound can be compared
    against a horizon-bounded oracle.
    """
    while True:
        dtext, ptext = family_texts(rng)
        d = parse_domain(dtext)
        p = parse_problem(ptext, d)
        prepared = prepare(d, p)
        r = oracle_solve(prepared)
        if r.status == "none":
            return FamilyProblem(dtext, ptext, prepared, None)
        if r.solved and len(r.plan) <= horizon:
            return FamilyProblem(dtext, ptext, prepared, len(r.plan))


# -- syntactically rich domains --------------------------------------------------

_TYPES = ["agent", "block", "side", "room"]


def random_domain_text(rng: random.Random) -> str:
    preds = {f"q{k}": rng.randint(0, 2) for k in range(rng.randint(1, 5))}
    consts = ["Table", "Floor", "B"]
    names = [f"act{k}" for k in range(rng.randint(1, 4))]
    arity = {n: rng.randint(1, 3) for n in names}
    out = [f"(define (domain rnd{rng.randint(0, 999)}))"]

    def literal(vars_: list[str], positive: bool | None = None) -> str:
        p = rng.choice(list(preds))
        args = [rng.choice(vars_ + consts) if vars_ and rng.random() < 0.8 else rng.choice(consts)
                for _ in range(preds[p])]
        a = f"({p}{''.join(' ' + x for x in args)})"
        pos = rng.random() < 0.7 if positive is None else positive
        return _lit(a, pos)

    def item(vars_: list[str], fresh: str) -> list[str]:
        target = rng.choice(names)
        body = f"({target} {fresh}" + "".join(f" {rng.choice(vars_)}" for _ in range(arity[target] - 1)) + ")"
        parts = [body if rng.random() < 0.5 else f"(not {body})"]
        if rng.random() < 0.6:
            parts.append(f"(not (= {fresh} {vars_[0]}))")
        return parts

    for k, name in enumerate(names):
        nparams = arity[name]
        params = [f"?v{j}" for j in range(nparams)]
        typed = rng.random() < 0.7
        ptxt = " ".join(f"{v} - {rng.choice(_TYPES)}" if typed else v for v in params)
        pre = [literal(params) for _ in range(rng.randint(0, 3))]
        if nparams > 1 and rng.random() < 0.3:
            pre.append(f"(not (= {params[0]} {params[1]}))")
        conc = item(params, f"?c{k}") if rng.random() < 0.5 else []
        eff = [literal(params) for _ in range(rng.randint(1, 3))]
        if rng.random() < 0.4:
            wpre = [literal(params) for _ in range(rng.randint(0, 2))]
            wconc = item(params, "?w0") if rng.random() < 0.5 else []
            weff = [literal(params) for _ in range(rng.randint(1, 2))]
            eff.append(f"(when ({_conj(wpre)} {_conj(wconc)}) {_conj(weff)})")
        if rng.random() < 0.3:
            qv = params + ["?f0"]
            body = _conj([literal(qv, True)])
            if rng.random() < 0.5:
                body = f"(when ({_conj([literal(qv)])} ()) {body})"
            eff.append(f"(forall (?f0 - {rng.choice(_TYPES)}) {body})")
        keyword = "operator" if rng.random() < 0.8 else "action"
        text = f"(define ({keyword} {name})\n  :parameters ({ptxt})\n  :precondition {_conj(pre)}\n"
        if conc:
            text += f"  :concurrent {_conj(conc)}\n"
        text += f"  :effect {_conj(eff)})"
        out.append(text)
    return "\n\n".join(out) + "\n"

"""Per-problem preparation of a domain: agent parameters, variable domains and
forall grounding.

Untyped variables get a domain inferred from predicate argument positions.
Position sets start from the ground atoms of the initial state and goal and
grow with every constant or variable domain an effect can write there, until
a fixpoint; this over-approximates every value a position can ever hold.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable

from .model import ActionSchema, Domain, Literal, Problem, SpecificationError, ground_foralls, is_var

AGENT_VAR = "?agent"


@dataclass
class Prepared:
    domain: Domain
    problem: Problem
    schemata: dict[str, ActionSchema]
    var_domains: dict[str, dict[str, frozenset[str] | None]] = field(default_factory=dict)

    def schema(self, name: str) -> ActionSchema:
        try:
            return self.schemata[name]
        except KeyError:
            raise SpecificationError(f"unknown action schema {name!r}") from None

    def domains_for(self, schema_name: str) -> dict[str, frozenset[str] | None]:
        return self.var_domains.get(schema_name, {})


def with_agent_param(schema: ActionSchema) -> ActionSchema:
    """Zero-parameter schemata get an implicit agent parameter."""
    if schema.params:
        return schema
    return replace(schema, params=(AGENT_VAR,), types=(None,))


def _literals(schema: ActionSchema) -> list[Literal]:
    """Positive precondition literals: the only sound source of domain facts."""
    lits = list(schema.pre)
    for w in schema.all_whens:
        lits += list(w.pre)
    return [l for l in lits if l.positive]


def _effects(schema: ActionSchema) -> list[Literal]:
    lits = list(schema.effect)
    for w in schema.all_whens:
        lits += list(w.effect)
    for f in schema.foralls:
        lits += list(f.effect)
    return [l for l in lits if l.positive]


def _declared(problem: Problem, type_name: str) -> frozenset[str]:
    objs = frozenset(problem.objects_of(type_name))
    if not objs:
        raise SpecificationError(f"no objects of declared type {type_name!r}")
    return objs


def _infer(var: str, lits: Iterable[Literal], pos: dict[tuple[str, int], set[str]]):
    dom: frozenset[str] | None = None
    for l in lits:
        for i, a in enumerate(l.args):
            if a == var:
                s = pos.get((l.predicate, i))
                if s:
                    dom = frozenset(s) if dom is None else dom & s
    return dom


def _schema_domains(schema, problem, pos):
    agents = frozenset(problem.agents)
    lits = _literals(schema)
    out: dict[str, frozenset[str] | None] = {}
    for k, (p, t) in enumerate(zip(schema.params, schema.types)):
        if k == 0:
            out[p] = agents if t is None else agents & _declared(problem, t)
        elif t is not None:
            out[p] = _declared(problem, t)
        else:
            out[p] = _infer(p, lits, pos)
    for v in sorted(schema.existentials):
        out[v] = _infer(v, lits, pos)
    for f in schema.foralls:
        for v, t in f.variables:
            out[v] = _declared(problem, t) if t is not None else _infer(v, lits, pos)
    return out


def prepare(domain: Domain, problem: Problem) -> Prepared:
    """Bind ``domain`` to ``problem``: infer domains and ground foralls."""
    schemata = [with_agent_param(s) for s in domain.schemata]
    pos: dict[tuple[str, int], set[str]] = {}
    for l in list(problem.init) + list(problem.goal):
        for i, a in enumerate(l.args):
            pos.setdefault((l.predicate, i), set()).add(a)
    all_objects = set(problem.objects)
    while True:
        changed = False
        for s in schemata:
            doms = _schema_domains(s, problem, pos)
            for l in _effects(s):
                for i, a in enumerate(l.args):
                    if is_var(a):
                        d = doms.get(a)
                        vals = all_objects if d is None else d
                    else:
                        vals = {a}
                    cur = pos.setdefault((l.predicate, i), set())
                    if not vals <= cur:
                        cur |= vals
                        changed = True
        if not changed:
            break
    prepared: dict[str, ActionSchema] = {}
    var_domains: dict[str, dict[str, frozenset[str] | None]] = {}
    for s in schemata:
        doms = _schema_domains(s, problem, pos)
        forall_types = {}
        for f in s.foralls:
            for v, t in f.variables:
                d = doms[v]
                forall_types[v] = d if d is not None else frozenset(all_objects)
        g = ground_foralls(s, problem.objects, forall_types)
        prepared[s.name] = g
        var_domains[s.name] = {v: d for v, d in doms.items()
                               if v in g.params or v in g.existentials}
    return Prepared(domain, problem, prepared, var_domains)

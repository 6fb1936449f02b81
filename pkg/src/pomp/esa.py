"""Compilation of a multiagent problem into an equivalent single-agent one.

Each compiled action stands for one joint action over ground individual
actions:

* a set that is consistent and minimal among consistent sets containing one
  of its members (lone actions, and actions together with the partners their
  required concurrency demands);
* a minimal self-clobbering set: consistent, every member negates a
  precondition of another member, and no member can be dropped while keeping
  that property.

Executing the compiled problem never touches the multiagent executor, so a
single-agent search over it is an independent check on joint semantics.
"""
from __future__ import annotations

import itertools
from collections import deque

from .execution import Action, concurrency_satisfied, ground_actions, whenless_consistent
from .model import ActionSchema, Constraint, Domain, Literal, SpecificationError, WhenClause, is_var


class EsaLimit(SpecificationError):
    """The joint-action enumeration exceeded its cap."""


def _bind(pattern: Literal, atom: Literal) -> dict | None:
    if pattern.predicate != atom.predicate or len(pattern.args) != len(atom.args):
        return None
    b: dict = {}
    for p, a in zip(pattern.args, atom.args):
        if is_var(p):
            if b.setdefault(p, a) != a:
                return None
        elif p != a:
            return None
    return b


def _clobbers(x: Action, y: Action) -> bool:
    """Can some effect of ``x`` falsify a precondition of ``y``?

    A positive precondition with existential variables counts as clobbered
    when the effect deletes an atom that could serve as its witness.
    """
    effs = [l.substitute(x.mapping) for l in x.schema.effect]
    pres = [l.substitute(y.mapping) for l in y.schema.pre]
    cons = [c.substitute(y.mapping) for c in y.schema.constraints]
    for e in effs:
        for p in pres:
            if e.predicate != p.predicate or e.positive == p.positive:
                continue
            b = _bind(p.atom, e.atom)
            if b is not None and (not p.positive or _cons_ok(cons, b)):
                return True
    return False


def _self_clobbering(group: tuple[Action, ...]) -> bool:
    return len(group) >= 2 and all(any(_clobbers(x, y) for y in group if y is not x) for x in group)


def _consistent(group: tuple[Action, ...], state_free: bool) -> bool:
    if state_free:
        return whenless_consistent(group)
    # with when-clauses, only the state-independent parts can be checked here
    agents = [a.agent for a in group]
    if len(set(agents)) != len(agents):
        return False
    return all(concurrency_satisfied(a.schema.concurrency, k, group, a.mapping)
               for k, a in enumerate(group))


def joint_sets(prepared, max_sets: int = 50_000) -> list[tuple[Action, ...]]:
    """The joint actions of the compiled problem, smallest first."""
    acts = ground_actions(prepared)
    agents = prepared.problem.agents
    state_free = not any(a.schema.whens for a in acts)
    by_agent = {g: [a for a in acts if a.agent == g] for g in agents}
    consistent: dict[tuple, bool] = {}
    out: list[tuple[Action, ...]] = []
    examined = 0
    for size in range(1, len(agents) + 1):
        for chosen in itertools.combinations(agents, size):
            for group in itertools.product(*(by_agent[g] for g in chosen)):
                examined += 1
                if examined > max_sets:
                    raise EsaLimit(f"more than {max_sets} candidate joint actions")
                ok = _consistent(group, state_free)
                consistent[_key(group)] = ok
                if not ok:
                    continue
                if _minimal_for_member(group, consistent) or _minimal_clobbering(group):
                    out.append(group)
    return out


def _key(group) -> tuple:
    return tuple(sorted((a.agent, a.name, a.args) for a in group))


def _minimal_for_member(group, consistent) -> bool:
    """Is ``group`` a smallest consistent set around one of its members?"""
    if len(group) == 1:
        return True
    for member in group:
        others = [a for a in group if a is not member]
        smaller = any(consistent.get(_key((member,) + sub), False)
                      for k in range(0, len(others))
                      for sub in itertools.combinations(others, k))
        if not smaller:
            return True
    return False


def _minimal_clobbering(group) -> bool:
    if not _self_clobbering(group):
        return False
    return not any(_self_clobbering(tuple(a for a in group if a is not x)) for x in group)


def _name(group) -> str:
    return "+".join("_".join((a.name,) + a.args) for a in sorted(group, key=lambda a: a.agent))


def _residual(cons, m) -> tuple[list[Constraint], bool]:
    """Substituted constraints that still mention a variable, and whether
    every ground one holds."""
    out: list[Constraint] = []
    for c in cons:
        c = c.substitute(m)
        if c.variables():
            out.append(c)
        elif (c.left == c.right) != c.equal:
            return out, False
    return out, True


def _compile_group(group) -> ActionSchema:
    pre: list[Literal] = []
    cons: list[Constraint] = []
    eff: list[Literal] = []
    whens: list[WhenClause] = []
    for k, a in enumerate(group):
        m = dict(a.mapping)
        for v in sorted(a.schema.variables() | set(a.schema.wildcards)):
            if v not in m:
                m[v] = f"{v}_{k + 1}"
        for l in a.schema.pre:
            l = l.substitute(m)
            if l not in pre:
                pre.append(l)
        rest, ok = _residual(a.schema.constraints, m)
        if not ok:
            raise SpecificationError(f"{a}: parameter constraints fail")
        cons += rest
        for l in a.schema.effect:
            l = l.substitute(m)
            if l not in eff:
                eff.append(l)
        for w in a.schema.whens:
            if not concurrency_satisfied(w.concurrency, k, group, a.mapping):
                continue
            rest, ok = _residual(w.constraints, m)
            if not ok:
                continue
            whens.append(WhenClause(pre=tuple(l.substitute(m) for l in w.pre),
                                    constraints=tuple(rest),
                                    effect=tuple(l.substitute(m) for l in w.effect)))
    return ActionSchema(_name(group), (), (), tuple(pre), tuple(cons), (), tuple(eff), tuple(whens))


def esa_compile(prepared, max_sets: int = 50_000) -> Domain:
    """The equivalent single-agent domain (parameterless ground operators)."""
    groups = joint_sets(prepared, max_sets)
    return Domain(f"{prepared.domain.name}-esa", tuple(_compile_group(g) for g in groups))


# -- single-agent execution over compiled operators ------------------------------


def _matches(pos: list[Literal], state: tuple, binding: dict):
    """Bindings of the variables of ``pos`` in ``state``, in sorted order."""
    if not pos:
        yield binding
        return
    head = pos[0].substitute(binding)
    for atom in state:
        if atom.predicate != head.predicate or len(atom.args) != len(head.args):
            continue
        b = dict(binding)
        if all(b.setdefault(p, a) == a if is_var(p) else p == a for p, a in zip(head.args, atom.args)):
            yield from _matches(pos[1:], state, b)


def _holds_neg(l: Literal, state: tuple) -> bool:
    if l.is_ground():
        return l.atom not in state
    return next(_matches([l.atom], state, {}), None) is None


def _cons_ok(cons, b: dict) -> bool:
    for c in cons:
        c = c.substitute(b)
        if not c.variables() and (c.left == c.right) != c.equal:
            return False
    return True


def _satisfy(lits, state: tuple, cons=()) -> dict | None:
    """First witness for the positives under which negatives and constraints hold."""
    negs = [l for l in lits if not l.positive]
    for b in _matches([l for l in lits if l.positive], state, {}):
        if _cons_ok(cons, b) and all(_holds_neg(l.substitute(b), state) for l in negs):
            return b
    return None


def _clash(lits) -> bool:
    ground = {(l.atom, l.positive) for l in lits if l.is_ground()}
    return any((a, not p) in ground for a, p in ground)


def _step(op: ActionSchema, state: frozenset) -> frozenset | None:
    """Apply a compiled operator; None if it is not applicable or not consistent."""
    ordered = tuple(sorted(state))
    b = _satisfy(op.pre, ordered, op.constraints)
    if b is None:
        return None
    pres = [l.substitute(b) for l in op.pre]
    effs = [l.substitute(b) for l in op.effect]
    for w in op.whens:
        wb = _satisfy([l.substitute(b) for l in w.pre], ordered,
                      [c.substitute(b) for c in w.constraints])
        if wb is not None:
            full = {**b, **wb}
            pres += [l.substitute(full) for l in w.pre]
            effs += [l.substitute(full) for l in w.effect]
    if _clash(pres) or _clash(effs):
        return None
    dels = {l.atom for l in effs if not l.positive}
    adds = {l for l in effs if l.positive}
    if any(not l.is_ground() for l in adds):
        raise SpecificationError(f"{op.name}: unbound variable in an effect")
    return frozenset((state - dels) | adds)


def _goal_holds(goal, state: frozenset) -> bool:
    return _satisfy(goal, tuple(sorted(state))) is not None


def esa_solve(domain: Domain, problem, horizon: int | None = None,
              max_states: int = 200_000) -> list[str] | None:
    """Shortest sequence of compiled operator names reaching the goal."""
    init = frozenset(problem.init)
    goal = problem.goal
    if _goal_holds(goal, init):
        return []
    parent: dict[frozenset, tuple[frozenset, str] | None] = {init: None}
    frontier = deque([(init, 0)])
    while frontier:
        state, depth = frontier.popleft()
        if horizon is not None and depth >= horizon:
            continue
        for op in domain.schemata:
            nxt = _step(op, state)
            if nxt is None or nxt in parent:
                continue
            parent[nxt] = (state, op.name)
            if _goal_holds(goal, nxt):
                out = []
                s = nxt
                while parent[s] is not None:
                    s, name = parent[s]
                    out.append(name)
                return out[::-1]
            if len(parent) >= max_states:
                raise EsaLimit(f"state limit {max_states} reached")
            frontier.append((nxt, depth + 1))
    return None

"""Executable joint-action semantics.

A joint action is a tuple of :class:`Action` values with pairwise distinct
agents; agents not listed do a no-op. States are frozensets of positive
ground :class:`~pomp.model.Literal` atoms (closed world).

Existential precondition variables are resolved per state by the first
witness in sorted order; that witness also instantiates any concurrency
pattern or when-clause mentioning them.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .model import (
    ActionSchema,
    ConcurrencyItem,
    Constraint,
    Literal,
    SpecificationError,
    WhenClause,
    is_var,
)


class ExecutionError(Exception):
    """Base class for joint actions that cannot be executed."""


class Inapplicable(ExecutionError):
    """Some element's preconditions do not hold."""


class Inconsistent(ExecutionError):
    """The joint action violates the consistency conditions."""


@dataclass(frozen=True)
class Action:
    """A schema with its parameters bound to constants."""

    schema: ActionSchema
    args: tuple[str, ...]

    @property
    def name(self) -> str:
        return self.schema.name

    @property
    def agent(self) -> str:
        return self.args[0]

    @property
    def mapping(self) -> dict[str, str]:
        return dict(zip(self.schema.params, self.args))

    def __str__(self) -> str:
        return f"({' '.join((self.name,) + self.args)})"


Joint = tuple[Action, ...]


def ground_action(schema: ActionSchema, args: Sequence[str]) -> Action:
    if len(args) != len(schema.params):
        raise SpecificationError(f"{schema.name} takes {len(schema.params)} arguments")
    return Action(schema, tuple(args))


# -- literals ------------------------------------------------------------------


def holds(lit: Literal, state: frozenset) -> bool:
    """Truth of a literal; variables in a negative literal are wildcards."""
    if lit.positive:
        return lit in state
    if lit.is_ground():
        return lit.atom not in state
    return not any(_pattern_match(lit.atom, a) for a in state)


def _pattern_match(pattern: Literal, atom: Literal) -> bool:
    if pattern.predicate != atom.predicate or len(pattern.args) != len(atom.args):
        return False
    seen: dict[str, str] = {}
    for p, a in zip(pattern.args, atom.args):
        if is_var(p):
            if seen.setdefault(p, a) != a:
                return False
        elif p != a:
            return False
    return True


def _constraints_hold(cons: Iterable[Constraint], m: Mapping[str, str]) -> bool:
    for c in cons:
        l, r = m.get(c.left, c.left), m.get(c.right, c.right)
        if is_var(l) or is_var(r):
            continue  # unconstrained local: some value satisfies it
        if (l == r) != c.equal:
            return False
    return True


def witness(action: Action, state: frozenset) -> dict[str, str] | None:
    """Bindings for parameters and existentials under which the precondition holds."""
    m = action.mapping
    pre = [l.substitute(m) for l in action.schema.pre]
    cons = [c.substitute(m) for c in action.schema.constraints]
    ex = sorted(action.schema.existentials)
    if not ex:
        if all(holds(l, state) for l in pre) and _constraints_hold(cons, {}):
            return m
        return None
    pos = [l for l in pre if l.positive]
    neg = [l for l in pre if not l.positive]
    for sol in _match_all(pos, state, {}):
        if all(v in sol for v in ex):
            full = {**m, **sol}
            if all(holds(l.substitute(sol), state) for l in neg) and _constraints_hold(cons, sol):
                return full
    return None


def _match_all(lits: list[Literal], state: frozenset, sol: dict[str, str]):
    """Assignments making every positive literal true, in sorted order."""
    if not lits:
        yield dict(sol)
        return
    first = lits[0].substitute(sol)
    cands = sorted(a for a in state if a.predicate == first.predicate
                   and len(a.args) == len(first.args))
    for atom in cands:
        ext = dict(sol)
        ok = True
        for p, a in zip(first.args, atom.args):
            if is_var(p):
                if ext.setdefault(p, a) != a:
                    ok = False
                    break
            elif p != a:
                ok = False
                break
        if ok:
            yield from _match_all(lits[1:], state, ext)


def applicable(action: Action, state: frozenset) -> bool:
    return witness(action, state) is not None


# -- concurrency ---------------------------------------------------------------


def item_matches(other: Action, item: ConcurrencyItem, m: Mapping[str, str]) -> bool:
    """Is ``other`` an instance of ``item`` (with host bindings ``m``)?"""
    if other.name != item.schema or len(other.args) != len(item.args):
        return False
    local: dict[str, str] = {}
    for p, a in zip(item.args, other.args):
        p = m.get(p, p) if p not in item.local else p
        if is_var(p):
            if local.setdefault(p, a) != a:
                return False
        elif p != a:
            return False
    full = {**m, **local}
    return _constraints_hold(item.constraints, {k: v for k, v in full.items()})


def item_satisfied(item: ConcurrencyItem, host: int, joint: Joint, m: Mapping[str, str]) -> bool:
    """Required items need a match among the other elements; forbidden items
    must match no element, the host included."""
    if item.forbidden:
        return not any(item_matches(o, item, m) for o in joint)
    return any(item_matches(o, item, m) for k, o in enumerate(joint) if k != host)


def concurrency_satisfied(items: Iterable[ConcurrencyItem], host: int, joint: Joint,
                          m: Mapping[str, str]) -> bool:
    return all(item_satisfied(i, host, joint, m) for i in items)


def _bindings(action: Action, state: frozenset | None) -> dict[str, str]:
    if state is None:
        return action.mapping
    return witness(action, state) or action.mapping


def active_when(action: Action, joint: Joint, state: frozenset) -> tuple[WhenClause, ...]:
    """The active clauses of ``action``; an empty tuple means the null clause.

    Grounding a quantified clause yields one copy per object, several of which
    may fire together; clauses from distinct written templates must not.
    """
    host = _index(action, joint)
    m = _bindings(action, state)
    active = []
    for w in action.schema.whens:
        pre = [l.substitute(m) for l in w.pre]
        if not all(holds(l, state) for l in pre):
            continue
        if not _constraints_hold(w.constraints, m):
            continue
        if not concurrency_satisfied(w.concurrency, host, joint, m):
            continue
        active.append(w)
    origins = {w.origin for w in active}
    if len(origins) > 1:
        raise SpecificationError(
            f"{action}: when-clauses with overlapping antecedents are active together")
    return tuple(active)


def _index(action: Action, joint: Joint) -> int:
    for k, a in enumerate(joint):
        if a is action:
            return k
    for k, a in enumerate(joint):
        if a == action:
            return k
    raise ValueError(f"{action} is not part of the joint action")


def _complementary(lits: Iterable[Literal]) -> bool:
    pos, neg = [], []
    for l in lits:
        (pos if l.positive else neg).append(l)
    posset = set(pos)
    for n in neg:
        a = n.atom
        if a.is_ground():
            if a in posset:
                return True
        elif any(_pattern_match(a, p) for p in pos if p.is_ground()):
            return True
    return False


def _distinct_agents(joint: Joint) -> bool:
    agents = [a.agent for a in joint]
    return len(agents) == len(set(agents))


def joint_consistent(joint: Joint, state: frozenset) -> bool:
    """State-relative consistency of a joint action."""
    if not _distinct_agents(joint):
        return False
    pres: list[Literal] = []
    effs: list[Literal] = []
    for k, a in enumerate(joint):
        m = _bindings(a, state)
        if not concurrency_satisfied(a.schema.concurrency, k, joint, m):
            return False
        actives = active_when(a, joint, state)
        pres += [l.substitute(m) for l in a.schema.pre]
        effs += [l.substitute(m) for l in a.schema.effect]
        for w in actives:
            pres += [l.substitute(m) for l in w.pre]
            effs += [l.substitute(m) for l in w.effect]
    return not _complementary(pres) and not _complementary(effs)


def whenless_consistent(joint: Joint) -> bool:
    """Consistency for elements without when-clauses (no state needed)."""
    if any(a.schema.whens or a.schema.foralls for a in joint):
        raise ValueError("whenless_consistent needs when-free actions")
    if not _distinct_agents(joint):
        return False
    pres, effs = [], []
    for k, a in enumerate(joint):
        m = a.mapping
        if not concurrency_satisfied(a.schema.concurrency, k, joint, m):
            return False
        pres += [l.substitute(m) for l in a.schema.pre]
        effs += [l.substitute(m) for l in a.schema.effect]
    return not _complementary(pres) and not _complementary(effs)


def joint_effects(joint: Joint, state: frozenset) -> list[Literal]:
    effs: list[Literal] = []
    for a in joint:
        m = _bindings(a, state)
        effs += [l.substitute(m) for l in a.schema.effect]
        for w in active_when(a, joint, state):
            effs += [l.substitute(m) for l in w.effect]
    return effs


def apply_joint(joint: Joint, state: frozenset) -> frozenset:
    """Successor state; raises :class:`Inapplicable` or :class:`Inconsistent`."""
    for a in joint:
        if not applicable(a, state):
            raise Inapplicable(f"{a} is not applicable")
    if not joint_consistent(joint, state):
        raise Inconsistent("joint action is inconsistent: " + " ".join(str(a) for a in joint))
    effs = joint_effects(joint, state)
    dels = {l.atom for l in effs if not l.positive}
    adds = {l for l in effs if l.positive}
    return frozenset((state - dels) | adds)


def goal_satisfied(goal: Iterable[Literal], state: frozenset) -> bool:
    return all(holds(l, state) for l in goal)


# -- ground action universe ----------------------------------------------------


def ground_actions(prepared) -> list[Action]:
    """Every ground action of a prepared domain, in a fixed order."""
    out = []
    objects = sorted(prepared.problem.objects)
    for name in sorted(prepared.schemata):
        s = prepared.schemata[name]
        doms = prepared.domains_for(name)
        choices = []
        for p in s.params:
            d = doms.get(p)
            choices.append(sorted(d) if d is not None else objects)
        for args in itertools.product(*choices):
            if _constraints_hold([c for c in s.constraints
                                  if c.variables() <= set(s.params)], dict(zip(s.params, args))):
                out.append(Action(s, args))
    return out

"""Relaxed reachability: a sound test that a goal can never be reached.

Deletes, negative preconditions and concurrency requirements are ignored, so
the reachable atom set over-approximates every state the problem can visit.
"""
from __future__ import annotations

from .execution import _match_all, ground_actions
from .model import Literal


def _breaks(effects, protected) -> bool:
    return any(not l.positive == g.positive and _unifies(l.atom, g.atom)
               for l in effects for g in protected)


def _relaxed(prepared, protected=()) -> tuple[frozenset[Literal], list[Literal]]:
    """Reachable positive atoms and reachable delete patterns.

    A ground negative precondition counts as reachable once its atom is false
    initially or some reachable action deletes it; non-ground negative
    preconditions are assumed reachable.  Actions (or when-clauses) whose
    effects contradict a ``protected`` literal are left out.
    """
    atoms = set(prepared.problem.init)
    init = prepared.problem.init
    dels: list[Literal] = []
    actions = ground_actions(prepared)

    def neg_ok(lits, binding) -> bool:
        for l in lits:
            if l.positive:
                continue
            a = l.atom.substitute(binding)
            if a.is_ground() and a in init and not any(_unifies(d, a) for d in dels):
                return False
        return True

    while True:
        grew = False
        state = frozenset(atoms)
        enabled = []
        for a in actions:
            m = a.mapping
            pos = [l.substitute(m) for l in a.schema.pre if l.positive]
            for sol in _match_all(pos, state, {}):
                full = {**m, **sol}
                if neg_ok(a.schema.pre, full):
                    enabled.append((a, full))
        for a, full in enabled:
            if protected and _breaks([l.substitute(full) for l in a.schema.effect], protected):
                continue
            if not all(_has_partner(i, a, full, enabled) for i in a.schema.concurrency if not i.forbidden):
                continue
            new = [l.substitute(full) for l in a.schema.effect]
            for w in a.schema.whens:
                wpos = [l.substitute(full) for l in w.pre if l.positive]
                for wsol in _match_all(wpos, state, {}):
                    wfull = {**full, **wsol}
                    weff = [l.substitute(wfull) for l in w.effect]
                    if neg_ok(w.pre, wfull) and not (protected and _breaks(weff, protected)):
                        new += weff
            for l in new:
                if l.positive:
                    if l.is_ground() and l not in atoms:
                        atoms.add(l)
                        grew = True
                elif l.atom not in dels:
                    dels.append(l.atom)
                    grew = True
        if not grew:
            return frozenset(atoms), dels


def _has_partner(item, action, binding, enabled) -> bool:
    """Some other enabled action could satisfy a required concurrency item."""
    want = Literal(item.schema, tuple(binding.get(t, t) for t in item.args))
    return any(b is not action and b.agent != action.agent
               and _unifies(want, Literal(b.name, b.args)) for b, _ in enabled)


def reachable_atoms(prepared) -> frozenset[Literal]:
    return _relaxed(prepared)[0]


def _persistent_goals(prepared) -> list[Literal]:
    """Goal literals true initially that no action can re-establish.

    Such a literal must hold throughout every successful execution.
    """
    effects = []
    for a in ground_actions(prepared):
        m = a.mapping
        effects += [l.substitute(m) for l in a.schema.effect]
        for w in a.schema.whens:
            effects += [l.substitute(m) for l in w.effect]
    init = prepared.problem.init
    out = []
    for g in prepared.problem.goal:
        if not g.is_ground() or (g.atom in init) != g.positive:
            continue
        if not any(l.positive == g.positive and _unifies(l.atom, g.atom) for l in effects):
            out.append(g)
    return out


def relaxed_unreachable(prepared) -> list[Literal]:
    """Goal literals that no execution can ever make true."""
    reach, dels = _relaxed(prepared, _persistent_goals(prepared))
    init = prepared.problem.init
    missing = []
    for g in prepared.problem.goal:
        if g.positive:
            if g.is_ground() and g not in reach:
                missing.append(g)
        elif g.is_ground() and g.atom in init and not any(_unifies(d, g.atom) for d in dels):
            missing.append(g)
    return missing


def _unifies(pattern: Literal, atom: Literal) -> bool:
    if pattern.predicate != atom.predicate or len(pattern.args) != len(atom.args):
        return False
    seen: dict[str, str] = {}
    for p, a in zip(pattern.args, atom.args):
        if p.startswith("?"):
            if seen.setdefault(p, a) != a:
                return False
        elif p != a:
            return False
    return True

"""Partial-order planning for several agents with interacting actions.

The search state is one mutable partial plan with undo marks; every
nondeterministic choice is a branch that is applied, searched below, and
rolled back. Flaws are handled in a fixed priority:

1. required concurrency items still lacking a partner step,
2. definite threats: the unifier needs no new binding and no unselected
   conditional effect is involved,
3. open goals on the agenda (LIFO or FIFO, with goals the initial state
   could supply deferred),
4. every remaining threat, separable or conditional.

Threats come in three kinds: a step that may delete a causal link's condition
inside its protected window (link), a step that may run together with an
anchor whose nonconcurrency pattern it matches (nc), and two steps with
complementary effects that may run together (clash).
"""
from __future__ import annotations

import itertools
import random
import sys
from dataclasses import dataclass, replace
from typing import Callable, Iterator

from .bindings import BindingStore, mgu_literals
from .model import (
    ActionSchema,
    ConcurrencyItem,
    Constraint,
    Literal,
    Step,
    WhenClause,
    bind_item,
    instantiate,
    is_var,
)
from .ordering import OrderingStore
from .plans import FINAL, INITIAL, CausalLink, ConcurrentPlan, Nonconcurrency
from .prep import Prepared
from .reach import relaxed_unreachable

SOLVED, UNSOLVABLE, EXHAUSTED = "solved", "unsolvable", "resource-exhausted"


@dataclass
class PlannerConfig:
    strategy: str = "lifo"
    max_steps: int = 16
    max_nodes: int = 200_000
    seed: int = 0
    no_concurrent_clobber: bool = False
    deepening: bool = True

    def __post_init__(self) -> None:
        if self.strategy not in ("lifo", "fifo"):
            raise ValueError(f"unknown strategy {self.strategy!r}")


@dataclass
class PlanResult:
    status: str
    plan: ConcurrentPlan | None = None
    nodes: int = 0
    bound: int = 0
    message: str = ""


@dataclass(frozen=True)
class Goal:
    """An agenda entry: ``literal`` must hold when ``consumer`` starts."""

    literal: Literal
    consumer: int
    wild: frozenset[str] = frozenset()
    when: WhenClause | None = None


@dataclass(frozen=True)
class Threat:
    kind: str  # link | nc | clash
    threatener: int
    effect: Literal | None
    when: WhenClause | None
    definite: bool
    link: CausalLink | None = None
    nc: Nonconcurrency | None = None
    other: int | None = None
    other_effect: Literal | None = None
    other_when: WhenClause | None = None


class _Exhausted(Exception):
    pass


def effects_of(schema: ActionSchema) -> list[tuple[Literal, WhenClause | None]]:
    out = [(l, None) for l in schema.effect]
    for w in schema.whens:
        out += [(l, w) for l in w.effect]
    return out


class Planner:
    def __init__(self, prepared: Prepared, config: PlannerConfig | None = None):
        self.prepared = prepared
        self.config = config or PlannerConfig()
        self.problem = prepared.problem
        self.agents = tuple(self.problem.agents)
        self.rng = random.Random(self.config.seed)
        names = sorted(prepared.schemata)
        if self.config.seed:
            self.rng.shuffle(names)
        self.schema_order = names
        self.init_atoms = sorted(self.problem.init)
        self.nodes = 0
        self._achievers: dict[tuple[str, bool], frozenset[str]] = {}
        self._instances: dict[tuple[str, int], tuple] = {}
        self.init_by_pred: dict[str, list[Literal]] = {}
        for a in self.init_atoms:
            self.init_by_pred.setdefault(a.predicate, []).append(a)

    # -- state ---------------------------------------------------------------

    def _reset(self, bound: int) -> None:
        self.bound = bound
        self.cut = False
        self.B = BindingStore(self.problem.objects)
        self.O = OrderingStore(INITIAL, FINAL)
        self.steps: dict[int, Step] = {
            INITIAL: Step(INITIAL, None, (), "initial"),
            FINAL: Step(FINAL, None, (), "final"),
        }
        self.effects: dict[int, list[tuple[Literal, WhenClause | None]]] = {
            INITIAL: [(l, None) for l in self.init_atoms], FINAL: []}
        self.wild: dict[int, frozenset[str]] = {INITIAL: frozenset(), FINAL: frozenset()}
        self.index: dict[int, dict[tuple[str, bool], list]] = {INITIAL: {}, FINAL: {}}
        self.links: list[CausalLink] = []
        self.nc: list[Nonconcurrency] = []
        goals = tuple(Goal(l, FINAL) for l in self.problem.goal)
        self.agenda: tuple[Goal, ...] = goals
        self.pending: tuple[tuple[int, ConcurrencyItem], ...] = ()
        self.selected: tuple[tuple[int, WhenClause], ...] = ()
        self.confronted: tuple[tuple[int, WhenClause], ...] = ()
        self.cands: tuple = ()
        self.seen = (0, 0, 1)
        self.next_id = 1

    def _mark(self):
        return (self.B.mark(), self.O.mark(), len(self.links), len(self.nc),
                self.agenda, self.pending, self.selected, self.confronted,
                self.cands, self.seen, self.next_id)

    def _undo(self, m) -> None:
        (b, o, nl, nn, self.agenda, self.pending, self.selected, self.confronted,
         self.cands, self.seen, nid) = m
        self.B.undo(b)
        self.O.undo(o)
        del self.links[nl:]
        del self.nc[nn:]
        for k in range(nid, self.next_id):
            self.steps.pop(k, None)
            self.effects.pop(k, None)
            self.wild.pop(k, None)
            self.index.pop(k, None)
        self.next_id = nid

    def _action_count(self) -> int:
        return self.next_id - 1

    # -- entry point ---------------------------------------------------------

    def plan(self) -> PlanResult:
        missing = relaxed_unreachable(self.prepared)
        if missing:
            return PlanResult(UNSOLVABLE, message="unreachable goal: " + " ".join(map(str, missing)))
        old = sys.getrecursionlimit()
        sys.setrecursionlimit(max(old, 20_000))
        try:
            start = 0 if self.config.deepening else self.config.max_steps
            for bound in range(start, self.config.max_steps + 1):
                self._reset(bound)
                try:
                    if self._search():
                        return PlanResult(SOLVED, self._extract(), self.nodes, bound)
                except _Exhausted:
                    return PlanResult(EXHAUSTED, nodes=self.nodes, bound=bound,
                                      message=f"node limit {self.config.max_nodes} reached")
                if not self.cut:
                    return PlanResult(UNSOLVABLE, nodes=self.nodes, bound=bound,
                                      message="search space exhausted")
            return PlanResult(EXHAUSTED, nodes=self.nodes, bound=self.config.max_steps,
                              message=f"step limit {self.config.max_steps} reached")
        finally:
            sys.setrecursionlimit(old)

    def _extract(self) -> ConcurrentPlan:
        return ConcurrentPlan(dict(self.steps), self.O.copy(), self.B.copy(), list(self.links),
                              list(self.nc), self.agents, self.problem.name)

    # -- search --------------------------------------------------------------

    def _search(self) -> bool:
        self.nodes += 1
        if self.nodes > self.config.max_nodes:
            raise _Exhausted()
        prune = self._prune()
        if prune is None:
            return False
        if prune:
            self.cut = True
            return False
        branches = self._next_flaw_branches()
        if branches is None:
            return self.B.satisfiable()
        for branch in branches:
            m = self._mark()
            if branch() and self._search():
                return True
            self._undo(m)
        return False

    def _next_flaw_branches(self) -> Iterator[Callable[[], bool]] | None:
        if self.pending:
            sid, item = self.pending[-1]
            self.pending = self.pending[:-1]
            return self._concurrency_branches(sid, item)
        live = self._refresh_threats()
        for _, th in live:
            if self._strong(th):
                return self._threat_branches(th)
        if self.agenda:
            k = self._pick_goal()
            g = self.agenda[k]
            self.agenda = self.agenda[:k] + self.agenda[k + 1:]
            return self._goal_branches(g)
        if live:
            return self._threat_branches(live[0][1])
        return None

    # -- primitive updates ---------------------------------------------------

    def _post(self, c: Constraint) -> bool:
        return self.B.unify(c.left, c.right) if c.equal else self.B.separate(c.left, c.right)

    def _add_step(self, name: str) -> int | None:
        if self._action_count() >= self.bound:
            self.cut = True
            return None
        sid = self.next_id
        self.next_id += 1
        step, effects, wild, index = self._instance(name, sid)
        s = step.schema
        self.steps[sid] = step
        self.effects[sid] = effects
        self.wild[sid] = wild
        self.index[sid] = index
        self.O.add_step(sid)
        doms = self.prepared.domains_for(name)
        for v in list(s.params) + sorted(s.existentials):
            d = doms.get(v.split("#", 1)[0])
            if d is not None and not self.B.restrict(v, d):
                return None
        if not all(self._post(c) for c in s.constraints):
            return None
        self.agenda += tuple(Goal(l, sid, frozenset(l.variables() & wild)) for l in s.pre)
        for item in s.concurrency:
            if item.forbidden:
                self.nc.append(Nonconcurrency(item, sid))
            else:
                self.pending += ((sid, item),)
        return sid

    def _instance(self, name: str, sid: int):
        """A renamed copy of schema ``name`` for step ``sid``; ids recur after
        backtracking, so copies are cached."""
        key = (name, sid)
        hit = self._instances.get(key)
        if hit is None:
            step = instantiate(self.prepared.schema(name), sid)
            effects = effects_of(step.schema)
            index: dict[tuple[str, bool], list] = {}
            for e, w in effects:
                index.setdefault((e.predicate, e.positive), []).append((e, w))
            hit = (step, effects, step.schema.wildcards, index)
            self._instances[key] = hit
        return hit

    def _select(self, sid: int, w: WhenClause) -> bool:
        """Commit to ``w`` firing at ``sid``: its antecedent becomes required."""
        if (sid, w) in self.selected:
            return True
        if (sid, w) in self.confronted:
            return False
        self.selected += ((sid, w),)
        if not all(self._post(c) for c in w.constraints):
            return False
        self.agenda += tuple(Goal(l, sid, when=w) for l in w.pre)
        for item in w.concurrency:
            if item.forbidden:
                self.nc.append(Nonconcurrency(item, sid))
            else:
                self.pending += ((sid, item),)
        return True

    def _is_selected(self, sid: int, w: WhenClause | None) -> bool:
        return w is None or (sid, w) in self.selected

    def _dormant(self, sid: int, w: WhenClause | None) -> bool:
        """Is ``w`` known never to fire at ``sid``?"""
        if w is None or (sid, w) in self.selected:
            return False
        return (sid, w) in self.confronted or self._when_impossible(w)

    def _add_goal(self, g: Goal) -> bool:
        same = lambda l: (l.predicate == g.literal.predicate and l.positive == g.literal.positive
                          and all(self.B.codesignated(x, y) for x, y in zip(l.args, g.literal.args)))
        if any(o.consumer == g.consumer and same(o.literal) for o in self.agenda):
            return True
        if any(k.consumer == g.consumer and same(k.condition) for k in self.links):
            return True
        self.agenda += (g,)
        return True

    def _agent(self, sid: int) -> str:
        return self.steps[sid].agent

    def _can_join(self, t: int, c: int) -> bool:
        """Could ``t`` share a tick with ``c`` as far as agents go?"""
        group = set(self.O.cluster_of(c)) | {c}
        other = set(self.O.cluster_of(t)) | {t}
        if len(group | other) > len(self.agents):
            return False
        return not any(self.B.codesignated(self._agent(x), self._agent(y))
                       for x in group for y in other if x != y)

    def _enforce_clusters(self) -> bool:
        """Steps forced into one tick need distinct agents."""
        changed = False
        for cl in self.O.clusters():
            if len(cl) > len(self.agents):
                return False
            for x, y in itertools.combinations(cl, 2):
                ax, ay = self._agent(x), self._agent(y)
                if self.B.codesignated(ax, ay):
                    return False
                if not self.B.distinct(ax, ay):
                    self.B.separate(ax, ay)
                    changed = True
        return self.B.satisfiable() if changed else True

    def _order(self, a: int, b: int, rel: str) -> bool:
        if not self.O.add(a, b, rel):
            return False
        return rel in ("<", ">", "!=") or self._enforce_clusters()

    # -- unification probes --------------------------------------------------

    def _probe(self, xs, ys, wild=frozenset()) -> bool | None:
        """None if ``xs`` and ``ys`` cannot unify; else whether they already do."""
        B = self.B
        open_pairs = []
        definite = True
        for x, y in zip(xs, ys):
            if x == y:
                continue
            rx, ry = B.resolve(x), B.resolve(y)
            if rx == ry:
                continue
            if not is_var(rx) and not is_var(ry):
                return None
            open_pairs.append((x, y))
            if x not in wild:
                definite = False
        if not open_pairs:
            return True
        if len(open_pairs) == 1:
            x, y = open_pairs[0]
            return None if B.distinct(x, y) else definite
        m = self.B.mark()
        try:
            if not all(self.B.unify(x, y) for x, y in zip(xs, ys)):
                return None
        finally:
            self.B.undo(m)
        return definite

    def _separable(self, xs, ys, wild=frozenset()) -> list[tuple[str, str]]:
        return [(x, y) for x, y in zip(xs, ys)
                if x not in wild and not self.B.codesignated(x, y)]

    def _item_probe(self, sid: int, item: ConcurrencyItem) -> bool | None:
        args = self.steps[sid].args
        if len(args) != len(item.args):
            return None
        m = self.B.mark()
        try:
            if not bind_item(args, item, self.B):
                return None
        finally:
            self.B.undo(m)
        return not self._item_separations(sid, item)

    def _item_separations(self, sid: int, item: ConcurrencyItem) -> list[Constraint]:
        """Constraints each of which stops ``sid`` matching ``item``."""
        args = self.steps[sid].args
        local: dict[str, str] = {}
        out = []
        for a, p in zip(args, item.args):
            if p in item.local:
                if p in local:
                    if not self.B.codesignated(local[p], a):
                        out.append(Constraint(local[p], a, False))
                else:
                    local[p] = a
            elif not self.B.codesignated(a, p):
                out.append(Constraint(a, p, False))
        for c in item.constraints:
            c = c.substitute(local)
            if c.equal and not self.B.distinct(c.left, c.right):
                if not self.B.codesignated(c.left, c.right):
                    out.append(c.negate())
            elif not c.equal and not self.B.codesignated(c.left, c.right):
                if not self.B.distinct(c.left, c.right):
                    out.append(c.negate())
        return out

    def _when_impossible(self, w: WhenClause) -> bool:
        for c in w.constraints:
            if c.equal and self.B.distinct(c.left, c.right):
                return True
            if not c.equal and self.B.codesignated(c.left, c.right):
                return True
        return False

    # -- step lower bound ----------------------------------------------------

    def _achieving_schemata(self, lit: Literal) -> frozenset[str]:
        key = (lit.predicate, lit.positive)
        if key not in self._achievers:
            self._achievers[key] = frozenset(
                n for n in self.schema_order
                if any(self._supports(e, lit) for e, _ in effects_of(self.prepared.schemata[n])))
        return self._achievers[key]

    def _init_support(self, g: Goal) -> bool:
        q = g.literal
        if q.positive:
            return any(self._probe(q.args, a.args) is not None
                       for a in self.init_by_pred.get(q.predicate, ()))
        atom = q.atom
        return all(self._separable(atom.args, a.args, g.wild)
                   for a in self.init_by_pred.get(atom.predicate, ())
                   if self._probe(atom.args, a.args) is not None)

    def _existing_support(self, g: Goal) -> bool:
        q, c = g.literal, g.consumer
        if self._init_support(g):
            return True
        if g.wild:
            return False
        key = (q.predicate, q.positive)
        for sid in self.steps:
            if sid <= 0 or sid == c:
                continue
            for e, _ in self.index[sid].get(key, ()):
                if self._probe(q.args, e.args) is not None and self.O.possibly(sid, c, "<"):
                    return True
        return False

    def _existing_partner(self, sid: int, item: ConcurrencyItem) -> bool:
        for t in self.steps:
            if t > 0 and t != sid and self.steps[t].schema.name == item.schema:
                if self.O.possibly(sid, t, "=") and self._item_probe(t, item) is not None:
                    return True
        return False

    def _prune(self) -> bool | None:
        """True if any completion needs more new steps than the bound allows;
        None if some open goal can never be supported.

        Needs whose achieving schemata are pairwise disjoint must be met by
        distinct new steps, which gives an admissible count. Evaluation stops
        once the outcome is settled.
        """
        slack = self.bound - self._action_count()
        if len(self.agenda) + len(self.pending) <= slack:
            return False
        count, used = 0, set()
        remaining = len(self.agenda) + len(self.pending)
        for sid, item in self.pending:
            remaining -= 1
            if item.schema not in used and not self._existing_partner(sid, item):
                count += 1
                used.add(item.schema)
                if count > slack:
                    return True
            if count + remaining <= slack:
                return False
        for g in reversed(self.agenda):
            remaining -= 1
            if not self._existing_support(g):
                names = frozenset() if g.wild else self._achieving_schemata(g.literal)
                if not names:
                    return None
                if not (names & used):
                    count += 1
                    used |= names
                    if count > slack:
                        return True
            if count + remaining <= slack:
                return False
        return False

    # -- open goals ----------------------------------------------------------

    def _pick_goal(self) -> int:
        """Agenda discipline (LIFO or FIFO), deferring goals that the initial
        state could still supply."""
        n = len(self.agenda)
        order = range(n) if self.config.strategy == "fifo" else range(n - 1, -1, -1)
        for k in order:
            if not self._init_support(self.agenda[k]):
                return k
        return order[0]

    def _goal_branches(self, g: Goal) -> Iterator[Callable[[], bool]]:
        q, c = g.literal, g.consumer
        if self.O.possibly(INITIAL, c, "<"):
            if q.positive:
                for atom in self.init_by_pred.get(q.predicate, ()):
                    if self._probe(q.args, atom.args) is not None:
                        yield lambda atom=atom: self._link_init(g, atom)
            else:
                yield from self._closed_world_branches(g)
        if not g.wild:
            for sid in sorted(k for k in self.steps if k > 0):
                if sid == c or not self.O.possibly(sid, c, "<"):
                    continue
                for e, w in self.effects[sid]:
                    if self._supports(e, q) and self._probe(q.args, e.args) is not None:
                        yield lambda sid=sid, e=e, w=w: self._link(sid, e, w, g)
            for name in self.schema_order:
                for k, (e, _) in enumerate(effects_of(self.prepared.schemata[name])):
                    if self._supports(e, q):
                        yield lambda name=name, k=k: self._link_new(name, k, g)

    @staticmethod
    def _supports(e: Literal, q: Literal) -> bool:
        return e.predicate == q.predicate and e.positive == q.positive and len(e.args) == len(q.args)

    def _link_init(self, g: Goal, atom: Literal) -> bool:
        if not mgu_literals(g.literal, atom, self.B):
            return False
        self.links.append(CausalLink(INITIAL, g.literal, g.consumer))
        return True

    def _closed_world_branches(self, g: Goal) -> Iterator[Callable[[], bool]]:
        """The initial state supports ``not q`` once every initial atom
        that could match ``q`` is kept apart from it."""
        q = g.literal.atom
        conflicts = [a for a in self.init_by_pred.get(q.predicate, ())
                     if len(a.args) == len(q.args) and self._probe(q.args, a.args) is not None]
        options = [self._separable(q.args, a.args, g.wild) for a in conflicts]
        if any(not o for o in options):
            return

        def apply(choice) -> bool:
            if not all(self.B.separate(x, y) for x, y in choice):
                return False
            self.links.append(CausalLink(INITIAL, g.literal, g.consumer))
            return True

        for choice in itertools.product(*options):
            yield lambda choice=choice: apply(choice)

    def _link(self, sid: int, e: Literal, w: WhenClause | None, g: Goal) -> bool:
        if not mgu_literals(g.literal, e, self.B):
            return False
        if not self.O.add(sid, g.consumer, "<"):
            return False
        if w is not None and not self._select(sid, w):
            return False
        self.links.append(CausalLink(sid, g.literal, g.consumer))
        return True

    def _link_new(self, name: str, k: int, g: Goal) -> bool:
        sid = self._add_step(name)
        if sid is None:
            return False
        e, w = self.effects[sid][k]
        return self._link(sid, e, w, g)

    # -- required concurrency ------------------------------------------------

    def _concurrency_branches(self, sid: int, item: ConcurrencyItem) -> Iterator[Callable[[], bool]]:
        for t in sorted(k for k in self.steps if k > 0):
            step = self.steps[t]
            if t == sid or step.schema.name != item.schema:
                continue
            if not self.O.possibly(sid, t, "=") or self._item_probe(t, item) is None:
                continue
            yield lambda t=t: self._partner(sid, item, t)
        yield lambda: self._partner_new(sid, item)

    def _partner(self, sid: int, item: ConcurrencyItem, t: int) -> bool:
        if not bind_item(self.steps[t].args, item, self.B):
            return False
        return self._order(sid, t, "=")

    def _partner_new(self, sid: int, item: ConcurrencyItem) -> bool:
        t = self._add_step(item.schema)
        return t is not None and self._partner(sid, item, t)

    # -- threats -------------------------------------------------------------

    def _wild(self, sid: int) -> frozenset[str]:
        return self.wild[sid]

    # Candidates are kept between nodes. Constraints only grow along a branch
    # and dormant clauses stay dormant, so a child's threats are among its
    # parent's candidates plus pairs touching links, steps or nonconcurrency
    # entries added since.

    def _link_status(self, li: int, t: int, e: Literal, w: WhenClause | None):
        link = self.links[li]
        q, p, c = link.condition, link.producer, link.consumer
        if self._dormant(t, w):
            return None
        # p < c holds, so no cycle can use both new edges and the two probes
        # are independent
        if not (self.O.possibly(t, p, ">=")
                and self.O.possibly(t, c, "<=" if self.config.no_concurrent_clobber else "<")):
            return None
        st = self._probe(q.args, e.args, self.wild[c] & q.variables())
        if st is None:
            return None
        return Threat("link", t, e, w, st, link=link)

    def _nc_status(self, ni: int, t: int):
        nc = self.nc[ni]
        a = nc.anchor
        if t != a:
            if not self.O.possibly(t, a, "="):
                return None
            if self.B.codesignated(self._agent(t), self._agent(a)):
                return None
        st = self._item_probe(t, nc.item)
        if st is None:
            return None
        return Threat("nc", t, None, None, st, nc=nc)

    def _clash_status(self, s: int, es, ws, t: int, et, wt):
        if self._dormant(s, ws) or self._dormant(t, wt):
            return None
        if self.B.codesignated(self._agent(s), self._agent(t)):
            return None
        if not self.O.possibly(s, t, "="):
            return None
        st = self._probe(es.args, et.args)
        if st is None:
            return None
        return Threat("clash", t, et, wt, st, other=s, other_effect=es, other_when=ws)

    def _status(self, cand):
        kind = cand[0]
        if kind == "link":
            return self._link_status(*cand[1:])
        if kind == "nc":
            return self._nc_status(*cand[1:])
        return self._clash_status(*cand[1:])

    def _link_cands(self, li: int, t: int) -> list:
        link = self.links[li]
        if t == link.producer or t == link.consumer:
            return []
        q = link.condition
        return [("link", li, t, e, w) for e, w in self.index[t].get((q.predicate, not q.positive), ())]

    def _nc_cands(self, ni: int, t: int) -> list:
        if self.steps[t].schema.name != self.nc[ni].item.schema:
            return []
        return [("nc", ni, t)]

    def _clash_cands(self, s: int, t: int) -> list:
        out = []
        for es, ws in self.effects[s]:
            for et, wt in self.index[t].get((es.predicate, not es.positive), ()):
                out.append(("clash", s, es, ws, t, et, wt))
        return out

    def _refresh_threats(self) -> list[tuple[tuple, Threat]]:
        nl, nn, nid = self.seen
        fresh = list(self.cands)
        actions = sorted(k for k in self.steps if k > 0)
        new_steps = [t for t in actions if t >= nid]
        for li in range(len(self.links)):
            for t in (actions if li >= nl else new_steps):
                fresh += self._link_cands(li, t)
        for ni in range(len(self.nc)):
            for t in (actions if ni >= nn else new_steps):
                fresh += self._nc_cands(ni, t)
        for t in new_steps:
            for s in actions:
                if s < t:
                    fresh += self._clash_cands(s, t)
        live = []
        for cand in fresh:
            th = self._status(cand)
            if th is not None:
                live.append((cand, th))
        self.cands = tuple(c for c, _ in live)
        self.seen = (len(self.links), len(self.nc), self.next_id)
        return live

    def _strong(self, th: Threat) -> bool:
        """Definite and free of unselected conditional effects."""
        if not th.definite or not self._is_selected(th.threatener, th.when):
            return False
        return th.kind != "clash" or self._is_selected(th.other, th.other_when)

    def _threat_branches(self, th: Threat) -> Iterator[Callable[[], bool]]:
        t = th.threatener
        if th.kind == "link":
            link = th.link
            p, c = link.producer, link.consumer
            if p != INITIAL:
                yield lambda: self._order(t, p, "<")
            if c != FINAL:
                if self.config.no_concurrent_clobber or not self._can_join(t, c):
                    yield lambda: self._order(t, c, ">")
                else:
                    yield lambda: self._order(t, c, ">=")
            wild = self._wild(c) & link.condition.variables()
            for x, y in self._separable(link.condition.args, th.effect.args, wild):
                yield lambda x=x, y=y: self.B.separate(x, y)
            if not self._is_selected(t, th.when) and th.when is not None:
                yield from self._confront(t, th.when)
        elif th.kind == "nc":
            a = th.nc.anchor
            if t != a:
                yield lambda: self._order(t, a, "<")
                yield lambda: self._order(t, a, ">")
            for con in self._item_separations(t, th.nc.item):
                yield lambda con=con: self._post(con)
        else:
            s = th.other
            yield lambda: self._order(s, t, "!=")
            for x, y in self._separable(th.other_effect.args, th.effect.args):
                yield lambda x=x, y=y: self.B.separate(x, y)
            if not self._is_selected(s, th.other_when):
                yield from self._confront(s, th.other_when)
            if not self._is_selected(t, th.when):
                yield from self._confront(t, th.when)

    def _confront(self, sid: int, w: WhenClause) -> Iterator[Callable[[], bool]]:
        """Branches that keep the antecedent of ``w`` false at ``sid``."""

        def confront(apply) -> bool:
            self.confronted += ((sid, w),)
            return apply()

        for l in w.pre:
            yield lambda l=l: confront(lambda: self._add_goal(Goal(l.negate(), sid)))
        for c in w.constraints:
            yield lambda c=c: confront(lambda: self._post(c.negate()))
        for item in w.concurrency:
            if item.forbidden:
                flipped = replace(item, forbidden=False)
                yield lambda i=flipped: confront(lambda: self._push_pending(sid, i))
            else:
                flipped = replace(item, forbidden=True)
                yield lambda i=flipped: confront(lambda: self._push_nc(sid, i))

    def _push_pending(self, sid: int, item: ConcurrencyItem) -> bool:
        self.pending += ((sid, item),)
        return True

    def _push_nc(self, sid: int, item: ConcurrencyItem) -> bool:
        self.nc.append(Nonconcurrency(item, sid))
        return True


def solve(prepared: Prepared, config: PlannerConfig | None = None) -> PlanResult:
    return Planner(prepared, config).plan()

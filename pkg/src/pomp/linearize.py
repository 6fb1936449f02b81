"""n-linearizations of concurrent nonlinear plans.

A linearization is a list of ticks. Each tick maps agents to step ids (agents
missing from the map do a no-op). Ordering constraints are checked pairwise
against the explicitly recorded relations, which is exact for a concrete
assignment of steps to ticks.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import Iterator, Mapping

from .ordering import EQ, GT, LT
from .plans import ConcurrentPlan

Tick = tuple[int, ...]  # step ids executed together


@dataclass
class Schedule:
    """The scheduling view of a plan under one grounding of its agents."""

    ids: tuple[int, ...]
    agent: dict[int, str]
    rel: dict[tuple[int, int], frozenset[str]]
    agents: tuple[str, ...]

    @classmethod
    def of(cls, plan: ConcurrentPlan, grounding: Mapping[str, str] | None = None) -> "Schedule":
        grounding = grounding or {}
        ids = tuple(s.id for s in plan.actions())
        agent = {}
        for s in plan.actions():
            a = plan.resolve(s.agent) if s.agent is not None else None
            agent[s.id] = grounding.get(a, a)
        rel = {}
        for i in ids:
            for j in ids:
                if i != j:
                    r = plan.orderings.stored(i, j)
                    if r != frozenset((LT, EQ, GT)):
                        rel[(i, j)] = r
        return cls(ids, agent, rel, tuple(plan.agents))

    def _ok(self, i: int, j: int, r: str) -> bool:
        return r in self.rel.get((i, j), (LT, EQ, GT))

    def ready(self, done: frozenset[int]) -> list[int]:
        """Steps whose every forced predecessor is done."""
        out = []
        for i in self.ids:
            if i in done:
                continue
            if all(self._ok(i, j, LT) or self._ok(i, j, EQ)
                   for j in self.ids if j not in done and j != i):
                out.append(i)
        return out

    def legal(self, tick: tuple[int, ...], done: frozenset[int]) -> bool:
        """Can ``tick`` run next after ``done``?"""
        ts = set(tick)
        seen_agents = set()
        for i in tick:
            a = self.agent[i]
            if a is None or a in seen_agents or (self.agents and a not in self.agents):
                return False
            seen_agents.add(a)
        for i in tick:
            for j in self.ids:
                if j == i:
                    continue
                if j in done:
                    need = GT
                elif j in ts:
                    need = EQ
                else:
                    need = LT
                if not self._ok(i, j, need):
                    return False
        return True

    def next_ticks(self, done: frozenset[int]) -> Iterator[tuple[int, ...]]:
        """Every legal nonempty next tick, smallest first."""
        ready = self.ready(done)
        cap = len(self.agents) if self.agents else len(ready)
        for k in range(1, min(cap, len(ready)) + 1):
            for tick in itertools.combinations(ready, k):
                if self.legal(tick, done):
                    yield tick


def shortest(schedule: Schedule) -> list[Tick] | None:
    """A linearization with the fewest ticks (exact breadth-first search)."""
    start = frozenset()
    goal = frozenset(schedule.ids)
    parent: dict[frozenset, tuple[frozenset, Tick] | None] = {start: None}
    queue = deque([start])
    while queue:
        done = queue.popleft()
        if done == goal:
            out = []
            while parent[done] is not None:
                prev, tick = parent[done]
                out.append(tick)
                done = prev
            return out[::-1]
        for tick in schedule.next_ticks(done):
            nxt = done | frozenset(tick)
            if nxt not in parent:
                parent[nxt] = (done, tick)
                queue.append(nxt)
    return None


def enumerate_schedule(schedule: Schedule, bound: int) -> Iterator[list[Tick]]:
    """All linearizations of at most ``bound`` ticks, idle ticks included."""
    goal = frozenset(schedule.ids)
    if bound < 0:
        return

    def rec(done: frozenset, prefix: list[Tick]) -> Iterator[list[Tick]]:
        if done == goal:
            yield list(prefix)
        if len(prefix) == bound:
            return
        prefix.append(())
        yield from rec(done, prefix)
        prefix.pop()
        for tick in schedule.next_ticks(done):
            prefix.append(tick)
            yield from rec(done | frozenset(tick), prefix)
            prefix.pop()

    yield from rec(frozenset(), [])


def agent_groundings(plan: ConcurrentPlan) -> Iterator[dict[str, str]]:
    """Assignments of agents to unbound agent variables consistent with B."""
    vars_ = sorted({plan.resolve(s.agent) for s in plan.actions()
                    if s.agent is not None and plan.resolve(s.agent).startswith("?")})
    if not vars_:
        yield {}
        return
    b = plan.bindings.copy()
    for v in vars_:
        b.restrict(v, plan.agents)
    for g in b.groundings(vars_):
        yield {plan.resolve(v): c for v, c in g.items()}


def shortest_linearization(plan: ConcurrentPlan) -> list[dict[str, int]] | None:
    best = None
    for g in agent_groundings(plan):
        sch = Schedule.of(plan, g)
        lin = shortest(sch)
        if lin is not None and (best is None or len(lin) < len(best[0])):
            best = (lin, sch)
    if best is None:
        return None
    return [as_joint(t, best[1]) for t in best[0]]


def enumerate_linearizations(plan: ConcurrentPlan, bound: int) -> Iterator[list[dict[str, int]]]:
    for g in agent_groundings(plan):
        sch = Schedule.of(plan, g)
        for lin in enumerate_schedule(sch, bound):
            yield [as_joint(t, sch) for t in lin]


def as_joint(tick: Tick, schedule: Schedule) -> dict[str, int]:
    return {schedule.agent[i]: i for i in tick}


def format_linearization(lin, plan: ConcurrentPlan, sep: str = " ") -> list[str]:
    """One line per tick, one column per agent, ``N`` for a no-op."""
    out = []
    for k, tick in enumerate(lin, start=1):
        cells = []
        for a in plan.agents:
            sid = tick.get(a)
            cells.append("N" if sid is None else str(plan.ground(plan.steps[sid])))
        out.append(f"{k}:{sep}" + sep.join(cells))
    return out

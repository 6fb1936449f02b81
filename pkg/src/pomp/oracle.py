"""Breadth-first search over joint actions: the brute-force reference planner."""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field

from .execution import Action, ExecutionError, applicable, apply_joint, goal_satisfied, ground_actions

Joint = tuple[Action, ...]


@dataclass
class OracleResult:
    status: str  # solved | none | limit
    plan: list[Joint] | None = None
    states: int = 0
    message: str = ""
    cut: bool = False  # some state was left unexpanded by the horizon

    @property
    def solved(self) -> bool:
        return self.status == "solved"


def joint_successors(state: frozenset, by_agent: dict[str, list[Action]]):
    """Every executable joint action in ``state`` with its successor."""
    options = []
    for agent in sorted(by_agent):
        options.append([None] + [a for a in by_agent[agent] if applicable(a, state)])
    for combo in itertools.product(*options):
        joint = tuple(a for a in combo if a is not None)
        if not joint:
            continue
        try:
            yield joint, apply_joint(joint, state)
        except ExecutionError:
            continue


def actions_by_agent(prepared) -> dict[str, list[Action]]:
    out: dict[str, list[Action]] = {a: [] for a in prepared.problem.agents}
    for act in ground_actions(prepared):
        if act.agent in out:
            out[act.agent].append(act)
    return out


def oracle_solve(prepared, horizon: int | None = None, max_states: int = 200_000) -> OracleResult:
    """A shortest goal-reaching joint-action sequence within ``horizon`` ticks.

    ``horizon=None`` searches the whole reachable state space.
    """
    problem = prepared.problem
    init = frozenset(problem.init)
    if goal_satisfied(problem.goal, init):
        return OracleResult("solved", [], 1)
    by_agent = actions_by_agent(prepared)
    parent: dict[frozenset, tuple[frozenset, Joint] | None] = {init: None}
    frontier = deque([(init, 0)])
    cut = False
    while frontier:
        state, depth = frontier.popleft()
        if horizon is not None and depth >= horizon:
            cut = True
            continue
        for joint, nxt in joint_successors(state, by_agent):
            if nxt in parent:
                continue
            parent[nxt] = (state, joint)
            if goal_satisfied(problem.goal, nxt):
                return OracleResult("solved", _path(parent, nxt), len(parent))
            if len(parent) >= max_states:
                return OracleResult("limit", states=len(parent),
                                    message=f"state limit {max_states} reached")
            frontier.append((nxt, depth + 1))
    return OracleResult("none", states=len(parent), cut=cut)


def _path(parent, state) -> list[Joint]:
    out = []
    while parent[state] is not None:
        prev, joint = parent[state]
        out.append(joint)
        state = prev
    return out[::-1]


def format_joint(joint: Joint, agents) -> str:
    by_agent = {a.agent: str(a) for a in joint}
    return " ".join(by_agent.get(a, "N") for a in agents)

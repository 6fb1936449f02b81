"""Plan validation over every n-linearization and every grounding."""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from .bindings import BindingStore
from .execution import Action, Inapplicable, Inconsistent, apply_joint, goal_satisfied
from .linearize import Schedule
from .model import SpecificationError, is_var
from .plans import ConcurrentPlan


@dataclass
class Verdict:
    ok: bool
    kind: str = "pass"  # pass | inapplicable | inconsistent | goal | no-linearization | ungroundable | specification
    message: str = ""
    ticks: list[list[str]] = field(default_factory=list)
    tick: int | None = None
    grounding: dict[str, str] = field(default_factory=dict)
    groundings: int = 0

    def report(self) -> list[str]:
        if self.ok:
            return [f"PASS ({self.groundings} grounding(s) checked)"]
        lines = [f"FAIL [{self.kind}]" + (f" at tick {self.tick}" if self.tick else "")
                 + (f": {self.message}" if self.message else "")]
        if self.grounding:
            lines.append("grounding: " + " ".join(f"{k}={v}" for k, v in sorted(self.grounding.items())))
        for k, t in enumerate(self.ticks, start=1):
            lines.append(f"  {k}: " + " ".join(t))
        return lines


def _base_name(var: str) -> str:
    return var.split("#", 1)[0]


def restrict_domains(plan: ConcurrentPlan, prepared, store: BindingStore) -> bool:
    """Post each step parameter's type domain into ``store``."""
    for s in plan.actions():
        if s.schema is None:
            continue
        doms = prepared.domains_for(s.schema.name)
        for p in s.schema.params:
            d = doms.get(_base_name(p))
            if d is not None and not store.restrict(p, d):
                return False
    return True


def groundings(plan: ConcurrentPlan, prepared):
    """Every B-consistent assignment of objects to the plan's free variables."""
    store = plan.bindings.copy()
    store.universe = frozenset(prepared.problem.objects)
    if not restrict_domains(plan, prepared, store):
        return
    vars_ = plan.variables()
    if not vars_:
        if store.satisfiable():
            yield {}
        return
    for g in store.groundings(vars_):
        yield g


def _joint_text(tick, actions, agents) -> list[str]:
    by_agent = {actions[i].agent: str(actions[i]) for i in tick}
    return [by_agent.get(a, "N") for a in agents]


def validate(plan: ConcurrentPlan, prepared, mode: str = "exhaustive",
             samples: int = 100, seed: int = 0, max_groundings: int = 10_000) -> Verdict:
    """PASS iff every examined linearization of every grounding reaches the goal."""
    problem = prepared.problem
    agents = plan.agents or problem.agents
    count = 0
    try:
        gens = groundings(plan, prepared)
        for g in gens:
            count += 1
            if count > max_groundings:
                break
            v = _validate_grounding(plan, problem, agents, g, mode, samples, seed)
            if v is not None:
                v.grounding = {k: val for k, val in g.items()}
                v.groundings = count
                return v
    except SpecificationError as exc:
        return Verdict(False, "specification", str(exc), groundings=count)
    except ValueError as exc:
        return Verdict(False, "ungroundable", str(exc), groundings=count)
    if count == 0:
        return Verdict(False, "ungroundable", "no consistent grounding of the plan variables")
    return Verdict(True, groundings=count)


def _validate_grounding(plan, problem, agents, g, mode, samples, seed) -> Verdict | None:
    actions: dict[int, Action] = {}
    for s in plan.actions():
        args = tuple(g.get(plan.resolve(a), plan.resolve(a)) for a in s.args)
        if any(is_var(a) for a in args):
            return Verdict(False, "ungroundable", f"step {s} has an unbound argument")
        actions[s.id] = Action(s.schema, args)
    sch = Schedule.of(plan, g)
    sch.agents = tuple(agents)
    init = frozenset(problem.init)
    goal = problem.goal
    everything = frozenset(sch.ids)

    def step(done, state, tick, path):
        joint = tuple(actions[i] for i in tick)
        try:
            return apply_joint(joint, state), None
        except (Inapplicable, Inconsistent) as exc:
            kind = "inapplicable" if isinstance(exc, Inapplicable) else "inconsistent"
            ticks = [_joint_text(t, actions, agents) for t in path + [tick]]
            return None, Verdict(False, kind, str(exc), ticks, len(path) + 1)

    if mode == "sampled":
        rng = random.Random(seed)
        any_complete = False
        for _ in range(samples):
            done, state, path = frozenset(), init, []
            while done != everything:
                options = list(sch.next_ticks(done))
                if not options:
                    break
                tick = rng.choice(options)
                state, bad = step(done, state, tick, path)
                if bad:
                    return bad
                path.append(tick)
                done = done | frozenset(tick)
            if done == everything:
                any_complete = True
                if not goal_satisfied(goal, state):
                    ticks = [_joint_text(t, actions, agents) for t in path]
                    return Verdict(False, "goal", "goal not reached", ticks, len(path))
        if not any_complete:
            return Verdict(False, "no-linearization", "no linearization found")
        return None

    seen: set = set()
    complete = [False]

    def explore(done, state, path):
        key = (done, state)
        if key in seen:
            return None
        seen.add(key)
        if done == everything:
            complete[0] = True
            if goal_satisfied(goal, state):
                return None
            ticks = [_joint_text(t, actions, agents) for t in path]
            missing = [str(l) for l in goal if not goal_satisfied([l], state)]
            return Verdict(False, "goal", "goal not reached: " + " ".join(missing), ticks, len(path))
        for tick in sch.next_ticks(done):
            nxt, bad = step(done, state, tick, path)
            if bad:
                return bad
            r = explore(done | frozenset(tick), nxt, path + [tick])
            if r is not None:
                return r
        return None

    r = explore(frozenset(), init, [])
    if r is not None:
        return r
    if not complete[0]:
        return Verdict(False, "no-linearization", "the plan admits no linearization")
    return None

"""Static checks on domain specifications."""
from __future__ import annotations

from dataclasses import dataclass, replace

from .model import ActionSchema, ConcurrencyItem, Constraint, Domain, Literal, WhenClause, is_var


@dataclass(frozen=True)
class Diagnostic:
    kind: str  # conflict | incongruous | overlap | unknown-schema
    schemas: tuple[str, ...]
    message: str

    def __str__(self) -> str:
        return f"{self.kind}: {self.message}"


def unify(xs, ys, theta: dict | None = None) -> dict | None:
    """Most general unifier of two term sequences, or None."""
    theta = dict(theta or {})
    if len(xs) != len(ys):
        return None
    for x, y in zip(xs, ys):
        x, y = _walk(theta, x), _walk(theta, y)
        if x == y:
            continue
        if is_var(x):
            theta[x] = y
        elif is_var(y):
            theta[y] = x
        else:
            return None
    return theta


def _apart(schema: ActionSchema, tag: str) -> ActionSchema:
    return schema.rename({v: f"{v}'{tag}" for v in schema.variables()})


def conflicting_effects(s1: ActionSchema, s2: ActionSchema) -> list[tuple[Literal, Literal, dict]]:
    """Unifiable, opposite-sign unconditional effect pairs of two instances."""
    b = _apart(s2, "2")
    out = []
    for e1 in s1.effect:
        for e2 in b.effect:
            if e1.predicate != e2.predicate or e1.positive == e2.positive:
                continue
            theta = unify(e1.args, e2.args)
            if theta is None:
                continue
            # members of one joint action have different agents
            if s1.params and b.params and _walk(theta, s1.params[0]) == _walk(theta, b.params[0]):
                continue
            out.append((e1, e2, theta))
    return out


def _walk(theta, t):
    while t in theta:
        t = theta[t]
    return t


def _forbids(s: ActionSchema, other: str) -> bool:
    return any(i.forbidden and i.schema == other for i in s.concurrency)


def _disjoint(w1: WhenClause, w2: WhenClause) -> bool:
    """Can the two antecedents never hold together, whatever the bindings?"""
    for l in w1.pre:
        if l.negate() in w2.pre:
            return True
    for c in w1.constraints:
        if Constraint(c.left, c.right, not c.equal) in w2.constraints or \
                Constraint(c.right, c.left, not c.equal) in w2.constraints:
            return True
    for i in w1.concurrency:
        if replace(i, forbidden=not i.forbidden) in w2.concurrency:
            return True
    return False


def lint_domain(domain: Domain) -> list[Diagnostic]:
    out: list[Diagnostic] = []
    names = {s.name for s in domain.schemata}
    schemata = list(domain.schemata)
    for s in schemata:
        items = list(s.concurrency) + [i for w in s.all_whens for i in w.concurrency]
        for i in items:
            if i.schema not in names:
                out.append(Diagnostic("unknown-schema", (s.name,),
                                      f"{s.name} names unknown action schema {i.schema}"))
    for k, s1 in enumerate(schemata):
        for s2 in schemata[k:]:
            hits = conflicting_effects(s1, s2)
            if not hits or _forbids(s1, s2.name) or _forbids(s2, s1.name):
                continue
            e1, e2, _ = hits[0]
            out.append(Diagnostic("conflict", (s1.name, s2.name),
                                  f"{s1.name} {e1} and {s2.name} {e2} may clash; "
                                  f"no nonconcurrency constraint between them"))
    for s in schemata:
        reqs = [i for i in s.concurrency if not i.forbidden]
        reqs += [i for w in s.all_whens for i in w.concurrency if not i.forbidden]
        for i in reqs:
            if i.schema in names and _forbids(domain.schema(i.schema), s.name):
                out.append(Diagnostic("incongruous", (s.name, i.schema),
                                      f"{s.name} requires a concurrent {i.schema}, "
                                      f"which forbids a concurrent {s.name}"))
    for s in schemata:
        groups = [list(s.whens)] + [list(f.whens) for f in s.foralls]
        for ws in groups:
            for a in range(len(ws)):
                for b in range(a + 1, len(ws)):
                    if not _disjoint(ws[a], ws[b]):
                        out.append(Diagnostic("overlap", (s.name,),
                                              f"{s.name}: when-clauses {a + 1} and {b + 1} "
                                              f"are not provably disjoint"))
    return out


def fix_nonconcurrent(domain: Domain) -> Domain:
    """Add a forbidden concurrency item for every reported effect conflict."""
    by_name = {s.name: s for s in domain.schemata}
    extra: dict[str, list[ConcurrencyItem]] = {}
    for d in lint_domain(domain):
        if d.kind != "conflict":
            continue
        host, other = d.schemas
        target = by_name[other]
        fresh = tuple(f"?nc{len(extra.get(host, []))}_{j}" for j in range(len(target.params)))
        cons: tuple[Constraint, ...] = ()
        if host == other and fresh:
            cons = (Constraint(fresh[0], by_name[host].params[0], False),)
        item = ConcurrencyItem(other, fresh, True, cons, frozenset(fresh))
        extra.setdefault(host, []).append(item)
    schemata = tuple(replace(s, concurrency=s.concurrency + tuple(extra.get(s.name, ())))
                     for s in domain.schemata)
    return replace(domain, schemata=schemata)

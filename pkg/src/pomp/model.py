"""Domain types: terms, literals, action schemata, problems and plan steps.

Terms are plain strings. A term whose name starts with ``?`` is a variable,
anything else is a constant. Every value type here is a frozen dataclass, so
schemata and problems can be shared freely between searches.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping

Term = str


class SpecificationError(Exception):
    """A domain or problem description is malformed or ill-typed."""


def is_var(term: Term) -> bool:
    return term[:1] == "?"


def subst(term: Term, mapping: Mapping[Term, Term]) -> Term:
    return mapping.get(term, term)


@dataclass(frozen=True, order=True)
class Literal:
    predicate: str
    args: tuple[Term, ...] = ()
    positive: bool = True

    def negate(self) -> "Literal":
        return Literal(self.predicate, self.args, not self.positive)

    @property
    def atom(self) -> "Literal":
        return self if self.positive else self.negate()

    def substitute(self, mapping: Mapping[Term, Term]) -> "Literal":
        return Literal(self.predicate, tuple(subst(a, mapping) for a in self.args), self.positive)

    def variables(self) -> set[Term]:
        return {a for a in self.args if is_var(a)}

    def is_ground(self) -> bool:
        return not any(is_var(a) for a in self.args)

    def __str__(self) -> str:
        body = f"({' '.join((self.predicate,) + self.args)})"
        return body if self.positive else f"(not {body})"


@dataclass(frozen=True)
class Constraint:
    """Codesignation (``equal``) or non-codesignation between two terms."""

    left: Term
    right: Term
    equal: bool

    def substitute(self, mapping: Mapping[Term, Term]) -> "Constraint":
        return Constraint(subst(self.left, mapping), subst(self.right, mapping), self.equal)

    def variables(self) -> set[Term]:
        return {t for t in (self.left, self.right) if is_var(t)}

    def negate(self) -> "Constraint":
        return Constraint(self.left, self.right, not self.equal)

    def holds(self) -> bool:
        """Truth value of a ground constraint."""
        return (self.left == self.right) == self.equal

    def __str__(self) -> str:
        body = f"(= {self.left} {self.right})"
        return body if self.equal else f"(not {body})"


@dataclass(frozen=True)
class ConcurrencyItem:
    """An action pattern that must (or must not) run in the same joint action.

    ``local`` holds the pattern's own variables: existential for a required
    item, universal for a forbidden one. All other variables are shared with
    the host action.
    """

    schema: str
    args: tuple[Term, ...]
    forbidden: bool
    constraints: tuple[Constraint, ...] = ()
    local: frozenset[Term] = frozenset()

    def substitute(self, mapping: Mapping[Term, Term]) -> "ConcurrencyItem":
        m = {k: v for k, v in mapping.items() if k not in self.local}
        return replace(
            self,
            args=tuple(subst(a, m) for a in self.args),
            constraints=tuple(c.substitute(m) for c in self.constraints),
        )

    def rename(self, mapping: Mapping[Term, Term]) -> "ConcurrencyItem":
        return ConcurrencyItem(
            self.schema,
            tuple(subst(a, mapping) for a in self.args),
            self.forbidden,
            tuple(c.substitute(mapping) for c in self.constraints),
            frozenset(subst(v, mapping) for v in self.local),
        )

    def variables(self) -> set[Term]:
        out = {a for a in self.args if is_var(a)}
        for c in self.constraints:
            out |= c.variables()
        return out


@dataclass(frozen=True)
class WhenClause:
    """Conditional effect with a two-part antecedent.

    ``origin`` identifies the written clause a grounded copy came from and
    ``binding`` records the quantifier values used to produce it.
    """

    pre: tuple[Literal, ...] = ()
    constraints: tuple[Constraint, ...] = ()
    concurrency: tuple[ConcurrencyItem, ...] = ()
    effect: tuple[Literal, ...] = ()
    origin: int = 0
    binding: tuple[tuple[Term, Term], ...] = ()

    def substitute(self, mapping: Mapping[Term, Term]) -> "WhenClause":
        return replace(
            self,
            pre=tuple(l.substitute(mapping) for l in self.pre),
            constraints=tuple(c.substitute(mapping) for c in self.constraints),
            concurrency=tuple(i.substitute(mapping) for i in self.concurrency),
            effect=tuple(l.substitute(mapping) for l in self.effect),
        )

    def rename(self, mapping: Mapping[Term, Term]) -> "WhenClause":
        return replace(
            self,
            pre=tuple(l.substitute(mapping) for l in self.pre),
            constraints=tuple(c.substitute(mapping) for c in self.constraints),
            concurrency=tuple(i.rename(mapping) for i in self.concurrency),
            effect=tuple(l.substitute(mapping) for l in self.effect),
            binding=tuple((subst(k, mapping), v) for k, v in self.binding),
        )

    def variables(self) -> set[Term]:
        out: set[Term] = set()
        for l in self.pre + self.effect:
            out |= l.variables()
        for c in self.constraints:
            out |= c.variables()
        for i in self.concurrency:
            out |= i.variables() - i.local
        return out


@dataclass(frozen=True)
class Forall:
    """Universally quantified block of effects and when-clauses."""

    variables: tuple[tuple[Term, str | None], ...]
    effect: tuple[Literal, ...] = ()
    whens: tuple[WhenClause, ...] = ()
    implicit: bool = False

    def rename(self, mapping: Mapping[Term, Term]) -> "Forall":
        return Forall(
            tuple((subst(v, mapping), t) for v, t in self.variables),
            tuple(l.substitute(mapping) for l in self.effect),
            tuple(w.rename(mapping) for w in self.whens),
            self.implicit,
        )


@dataclass(frozen=True)
class ActionSchema:
    name: str
    params: tuple[Term, ...] = ()
    types: tuple[str | None, ...] = ()
    pre: tuple[Literal, ...] = ()
    constraints: tuple[Constraint, ...] = ()
    concurrency: tuple[ConcurrencyItem, ...] = ()
    effect: tuple[Literal, ...] = ()
    whens: tuple[WhenClause, ...] = ()
    foralls: tuple[Forall, ...] = ()
    keyword: str = "operator"

    def __post_init__(self):
        if not self.types:
            object.__setattr__(self, "types", (None,) * len(self.params))

    @property
    def agent(self) -> Term | None:
        """The agent variable: by convention the first parameter."""
        return self.params[0] if self.params else None

    @property
    def wildcards(self) -> frozenset[Term]:
        """Variables that occur only in negative preconditions.

        ``(not (atside ?a2 ?s1))`` with ``?a2`` nowhere else reads as "no
        ``atside`` atom for side ``?s1`` holds".
        """
        return frozenset(self._wildcards())

    def _wildcards(self) -> set[Term]:
        neg: set[Term] = set()
        other: set[Term] = set(self.params)
        for l in self.pre:
            (other if l.positive else neg).update(l.variables())
        for c in self.constraints:
            other |= c.variables()
        return neg - other

    @property
    def existentials(self) -> frozenset[Term]:
        """Precondition variables that are not parameters (e.g. a location)."""
        out: set[Term] = set()
        for l in self.pre:
            out |= l.variables()
        for c in self.constraints:
            out |= c.variables()
        return frozenset(out - set(self.params) - self._wildcards())

    @property
    def all_whens(self) -> tuple[WhenClause, ...]:
        return self.whens + tuple(w for f in self.foralls for w in f.whens)

    def variables(self) -> set[Term]:
        out = set(self.params) | set(self.existentials)
        for l in self.effect:
            out |= l.variables()
        for w in self.whens:
            out |= w.variables()
        return out

    def rename(self, mapping: Mapping[Term, Term]) -> "ActionSchema":
        return replace(
            self,
            params=tuple(subst(p, mapping) for p in self.params),
            pre=tuple(l.substitute(mapping) for l in self.pre),
            constraints=tuple(c.substitute(mapping) for c in self.constraints),
            concurrency=tuple(i.rename(mapping) for i in self.concurrency),
            effect=tuple(l.substitute(mapping) for l in self.effect),
            whens=tuple(w.rename(mapping) for w in self.whens),
            foralls=tuple(f.rename(mapping) for f in self.foralls),
        )

    def all_terms(self) -> set[Term]:
        """Every variable mentioned anywhere, item-locals included."""
        out: set[Term] = set(self.params)
        lits = list(self.pre) + list(self.effect)
        cons = list(self.constraints)
        items = list(self.concurrency)
        for w in self.all_whens:
            lits += list(w.pre) + list(w.effect)
            cons += list(w.constraints)
            items += list(w.concurrency)
        for f in self.foralls:
            out |= {v for v, _ in f.variables}
            lits += list(f.effect)
        for l in lits:
            out |= l.variables()
        for c in cons:
            out |= c.variables()
        for i in items:
            out |= {a for a in i.args if is_var(a)} | set(i.local)
            for c in i.constraints:
                out |= c.variables()
        return {t for t in out if is_var(t)}


@dataclass(frozen=True)
class Problem:
    name: str
    objects: Mapping[Term, str] = field(default_factory=dict)
    agents: tuple[Term, ...] = ()
    init: frozenset[Literal] = frozenset()
    goal: tuple[Literal, ...] = ()
    domain: str | None = None

    @property
    def n(self) -> int:
        return len(self.agents)

    def objects_of(self, type_name: str | None) -> tuple[Term, ...]:
        if type_name is None:
            return tuple(self.objects)
        return tuple(o for o, t in self.objects.items() if t == type_name)

    def __hash__(self) -> int:
        return hash((self.name, self.agents, self.init, self.goal))


State = frozenset  # of positive ground Literals


@dataclass(frozen=True)
class Step:
    """A plan step: a schema instance with freshly renamed variables."""

    id: int
    schema: ActionSchema | None
    args: tuple[Term, ...] = ()
    kind: str = "action"  # action | initial | final
    name: str = ""

    @property
    def label(self) -> str:
        if self.kind == "initial":
            return "A0"
        if self.kind == "final":
            return "Ainf"
        return f"A{self.id}"

    @property
    def agent(self) -> Term | None:
        return self.args[0] if self.args else None

    @property
    def action_name(self) -> str:
        return self.schema.name if self.schema is not None else self.name

    def __str__(self) -> str:
        return f"({' '.join((self.action_name,) + self.args)})"


def fresh_mapping(schema: ActionSchema, fresh_id: int | str) -> dict[Term, Term]:
    return {v: f"{v}#{fresh_id}" for v in sorted(schema.all_terms())}


def _split_locals(schema: ActionSchema) -> ActionSchema:
    """Give each concurrency item its own copy of its local variables."""
    counter = itertools.count(1)

    def item(i: ConcurrencyItem) -> ConcurrencyItem:
        k = next(counter)
        return i.rename({v: f"{v}.{k}" for v in i.local}) if i.local else i

    def when(w: WhenClause) -> WhenClause:
        return replace(w, concurrency=tuple(item(i) for i in w.concurrency))

    return replace(
        schema,
        concurrency=tuple(item(i) for i in schema.concurrency),
        whens=tuple(when(w) for w in schema.whens),
        foralls=tuple(replace(f, whens=tuple(when(w) for w in f.whens)) for f in schema.foralls),
    )


def instantiate(schema: ActionSchema, fresh_id: int) -> Step:
    """Return a step for ``schema`` whose variables are all renamed apart.

    Item-local variables are further split per item, so an existential
    partner in one item never aliases a variable elsewhere in the schema.
    """
    renamed = _split_locals(schema.rename(fresh_mapping(schema, fresh_id)))
    return Step(fresh_id, renamed, renamed.params, "action")


def _ground_forall(f: Forall, index: int, objects: Mapping[Term, str],
                   var_types: Mapping[Term, str | None] | None) -> tuple[list[Literal], list[WhenClause]]:
    domains = []
    for v, t in f.variables:
        if t is None and var_types is not None:
            t = var_types.get(v)
        if t is None:
            raise SpecificationError(f"cannot determine the type of quantified variable {v}")
        if isinstance(t, frozenset):
            domains.append(sorted(t))
        else:
            domains.append([o for o, ot in objects.items() if ot == t])
    effects: list[Literal] = []
    whens: list[WhenClause] = []
    names = [v for v, _ in f.variables]
    for values in itertools.product(*domains):
        m = dict(zip(names, values))
        effects.extend(l.substitute(m) for l in f.effect)
        for k, w in enumerate(f.whens):
            g = w.substitute(m)
            whens.append(replace(g, origin=index * 1000 + k + 1, binding=tuple(m.items())))
    return effects, whens


def ground_foralls(schema: ActionSchema, objects: Mapping[Term, str],
                   var_types: Mapping[Term, str | None] | None = None) -> ActionSchema:
    """Expand every forall block over the finite typed object universe.

    Untyped quantified variables take their type from ``var_types``; a value
    there may also be a frozenset of admissible objects.
    """
    effects = list(schema.effect)
    whens = [w if w.origin else replace(w, origin=k + 1) for k, w in enumerate(schema.whens)]
    for i, f in enumerate(schema.foralls, start=1):
        e, w = _ground_forall(f, i, objects, var_types)
        effects.extend(l for l in e if l not in effects)
        whens.extend(w)
    return replace(schema, effect=tuple(effects), whens=tuple(whens), foralls=())


def matches(instance: Step, item: ConcurrencyItem, bindings) -> bool:
    """True iff ``instance`` can be an instance of ``item`` under ``bindings``.

    Schema names must agree, the arguments must unify and the side
    constraints must stay satisfiable. The binding store is left unchanged.
    """
    if instance.action_name != item.schema or len(instance.args) != len(item.args):
        return False
    mark = bindings.mark()
    try:
        return bind_item(instance.args, item, bindings)
    finally:
        bindings.undo(mark)


def bind_item(args: Iterable[Term], item: ConcurrencyItem, bindings) -> bool:
    """Unify ``args`` with the item pattern and post its side constraints."""
    for a, p in zip(args, item.args):
        if not bindings.unify(a, p):
            return False
    for c in item.constraints:
        ok = bindings.unify(c.left, c.right) if c.equal else bindings.separate(c.left, c.right)
        if not ok:
            return False
    return True


@dataclass(frozen=True)
class Domain:
    name: str
    schemata: tuple[ActionSchema, ...] = ()

    def schema(self, name: str) -> ActionSchema:
        for s in self.schemata:
            if s.name == name:
                return s
        raise SpecificationError(f"unknown action schema {name!r}")

    def has_schema(self, name: str) -> bool:
        return any(s.name == name for s in self.schemata)

    def predicates(self) -> dict[str, int]:
        """Predicate arities over every literal in the domain."""
        out: dict[str, int] = {}
        for s in self.schemata:
            lits = list(s.pre) + list(s.effect)
            for w in s.all_whens:
                lits += list(w.pre) + list(w.effect)
            for f in s.foralls:
                lits += list(f.effect)
            for l in lits:
                out.setdefault(l.predicate, len(l.args))
        return out

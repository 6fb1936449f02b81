"""Reading and writing domain (``.pomp``), problem (``.prob``) and plan files.

Grammar notes:

* ``- type`` annotates the single variable right before it.
* ``(= x y)`` and ``(not (= x y))`` are binding constraints, never atoms.
* ``:concurrent`` holds one item or an ``(and ...)`` of items and loose
  constraints. An item is ``(S args)`` / ``(and (S args) C...)`` (required) or
  ``(not (S args))`` / ``(not (and (S args) C...))`` (forbidden). A loose
  constraint joins every item sharing one of its local variables, otherwise
  the enclosing precondition.
* ``(when (PRE CONC) EFFECT)``; a top-level when-clause with variables bound
  nowhere else is read as universally quantified over them.
"""
from __future__ import annotations

from typing import Iterable

from .model import (
    ActionSchema,
    ConcurrencyItem,
    Constraint,
    Domain,
    Forall,
    Literal,
    Problem,
    SpecificationError,
    WhenClause,
    is_var,
)
from .sexpr import ParseError, SExpr, read_all

SCHEMA_KEYS = (":parameters", ":precondition", ":concurrent", ":effect")


# -- shared helpers ----------------------------------------------------------


def _conjuncts(e: SExpr) -> list[SExpr]:
    """Flatten ``(and ...)``; ``()`` is the empty conjunction."""
    if e.is_atom:
        raise e.error(f"expected a formula, found {e.value!r}")
    if not e.items:
        return []
    if e.head() == "and":
        return e.items[1:]
    return [e]


def _literal(e: SExpr) -> Literal | Constraint:
    if e.is_atom or not e.items:
        raise e.error("expected a literal")
    head = e.head()
    if head == "not":
        if len(e) != 2:
            raise e.error("'not' takes exactly one argument")
        inner = _literal(e[1])
        return inner.negate()
    if head is None:
        raise e.error("a literal must start with a predicate name")
    args = []
    for a in e.items[1:]:
        if not a.is_atom:
            raise a.error("literal arguments must be symbols")
        args.append(a.value)
    if head == "=":
        if len(args) != 2:
            raise e.error("'=' takes exactly two arguments")
        return Constraint(args[0], args[1], True)
    if head in ("and", "when", "forall"):
        raise e.error(f"'{head}' is not allowed here")
    return Literal(e[0].value, tuple(args))


def _formula(e: SExpr) -> tuple[list[Literal], list[Constraint]]:
    lits, cons = [], []
    for c in _conjuncts(e):
        x = _literal(c)
        (cons if isinstance(x, Constraint) else lits).append(x)
    return lits, cons


def _vars_of(lits: Iterable[Literal], cons: Iterable[Constraint] = ()) -> list[str]:
    out: list[str] = []
    for l in lits:
        for a in l.args:
            if is_var(a) and a not in out:
                out.append(a)
    for c in cons:
        for a in (c.left, c.right):
            if is_var(a) and a not in out:
                out.append(a)
    return out


def _typed_vars(e: SExpr, what: str) -> list[tuple[str, str | None]]:
    if e.is_atom:
        if not is_var(e.value):
            raise e.error(f"{what}: expected a variable, found {e.value!r}")
        return [(e.value, None)]
    out: list[tuple[str, str | None]] = []
    items = e.items
    i = 0
    while i < len(items):
        tok = items[i]
        if not tok.is_atom or not is_var(tok.value):
            raise tok.error(f"{what}: expected a variable")
        t = None
        if i + 1 < len(items) and items[i + 1].is_atom and items[i + 1].value == "-":
            if i + 2 >= len(items) or not items[i + 2].is_atom:
                raise items[i + 1].error(f"{what}: '-' must be followed by a type name")
            t = items[i + 2].value
            i += 2
        if any(v == tok.value for v, _ in out):
            raise tok.error(f"{what}: duplicate variable {tok.value}")
        out.append((tok.value, t))
        i += 1
    return out


# -- concurrency lists -------------------------------------------------------


def _item_pattern(e: SExpr) -> tuple[str, tuple[str, ...]]:
    if e.is_atom or not e.items or not e[0].is_atom:
        raise e.error("expected an action pattern")
    if e.head() in ("and", "not", "=", "when", "forall"):
        raise e.error("expected an action pattern")
    args = []
    for a in e.items[1:]:
        if not a.is_atom:
            raise a.error("action pattern arguments must be symbols")
        args.append(a.value)
    return e[0].value, tuple(args)


def _item_body(e: SExpr, forbidden: bool) -> tuple[str, tuple[str, ...], list[Constraint]]:
    if e.head() == "and":
        parts = e.items[1:]
        if not parts:
            raise e.error("empty action pattern")
        name, args = _item_pattern(parts[0])
        cons = []
        for p in parts[1:]:
            c = _literal(p)
            if not isinstance(c, Constraint):
                raise p.error("only (in)equality constraints may follow an action pattern")
            cons.append(c)
        return name, args, cons
    name, args = _item_pattern(e)
    return name, args, []


def _concurrency(e: SExpr | None) -> tuple[list[tuple], list[Constraint]]:
    """Raw items ``(name, args, forbidden, constraints)`` plus loose constraints."""
    if e is None:
        return [], []
    if e.is_atom:
        raise e.error("expected a concurrency list")
    elems = _conjuncts(e) if e.head() == "and" or not e.items else [e]
    items, loose = [], []
    for el in elems:
        if el.is_atom or not el.items:
            raise el.error("expected a concurrency item")
        head = el.head()
        if head == "=":
            loose.append(_literal(el))
        elif head == "not":
            if len(el) != 2:
                raise el.error("'not' takes exactly one argument")
            inner = el[1]
            if inner.head() == "=":
                loose.append(_literal(el))
            else:
                name, args, cons = _item_body(inner, True)
                items.append((name, args, True, cons))
        else:
            name, args, cons = _item_body(el, False)
            items.append((name, args, False, cons))
    return items, loose


def _build_items(raw: list[tuple], loose: list[Constraint], scope: set[str]):
    """Attach loose constraints and compute locals; returns (items, leftovers)."""
    locals_ = []
    for name, args, forbidden, cons in raw:
        vs = {a for a in args if is_var(a)}
        for c in cons:
            vs |= c.variables()
        locals_.append(vs - scope)
    extra: list[list[Constraint]] = [[] for _ in raw]
    leftovers = []
    for c in loose:
        hit = False
        for k, loc in enumerate(locals_):
            if c.variables() & loc:
                extra[k].append(c)
                hit = True
        if not hit:
            leftovers.append(c)
    items = []
    for (name, args, forbidden, cons), loc, more in zip(raw, locals_, extra):
        allcons = tuple(cons) + tuple(more)
        loc = set(loc)
        for c in more:
            loc |= c.variables() - scope
        items.append(ConcurrencyItem(name, args, forbidden, allcons, frozenset(loc)))
    return items, leftovers


# -- effects -----------------------------------------------------------------


def _effect_literals(e: SExpr) -> list[Literal]:
    out = []
    for c in _conjuncts(e):
        x = _literal(c)
        if isinstance(x, Constraint):
            raise c.error("equality is not allowed in an effect")
        out.append(x)
    return out


def _when(e: SExpr, scope: set[str]) -> tuple[WhenClause, list[str]]:
    """Parse a when-clause; also returns its free (unscoped) variables."""
    if len(e) != 3:
        raise e.error("expected (when (PRECONDITIONS CONCURRENCY) EFFECT)")
    ante = e[1]
    if ante.is_atom or len(ante.items) != 2:
        raise ante.error("a when antecedent must be a two-element list (PRECONDITIONS CONCURRENCY)")
    lits, cons = _formula(ante[0])
    effect = _effect_literals(e[2])
    raw, loose = _concurrency(ante[1])
    own = set(_vars_of(lits, cons)) | set(_vars_of(effect))
    items, leftovers = _build_items(raw, loose, scope | own)
    cons = cons + [c for c in leftovers if c not in cons]
    w = WhenClause(tuple(lits), tuple(cons), tuple(items), tuple(effect))
    free = [v for v in _vars_of(lits + effect, cons) if v not in scope]
    return w, free


def _effect(e: SExpr, scope: set[str]):
    lits: list[Literal] = []
    whens: list[WhenClause] = []
    foralls: list[Forall] = []
    for c in _conjuncts(e):
        head = c.head()
        if head == "when":
            w, free = _when(c, scope)
            if free:
                foralls.append(Forall(tuple((v, None) for v in free), (), (w,), implicit=True))
            else:
                whens.append(w)
        elif head == "forall":
            if len(c) != 3:
                raise c.error("expected (forall VARIABLES EFFECT)")
            binders = _typed_vars(c[1], "forall")
            inner = scope | {v for v, _ in binders}
            flits, fwhens = [], []
            for part in _conjuncts(c[2]):
                if part.head() == "when":
                    w, free = _when(part, inner)
                    if free:
                        raise part.error(f"unbound variable {free[0]} in when-clause")
                    fwhens.append(w)
                elif part.head() == "forall":
                    raise part.error("nested forall is not supported")
                else:
                    l = _literal(part)
                    if isinstance(l, Constraint):
                        raise part.error("equality is not allowed in an effect")
                    _check_bound([l], inner, part)
                    flits.append(l)
            foralls.append(Forall(tuple(binders), tuple(flits), tuple(fwhens)))
        else:
            l = _literal(c)
            if isinstance(l, Constraint):
                raise c.error("equality is not allowed in an effect")
            _check_bound([l], scope, c)
            lits.append(l)
    return lits, whens, foralls


def _check_bound(lits: list[Literal], scope: set[str], where: SExpr) -> None:
    for v in _vars_of(lits):
        if v not in scope:
            raise where.error(f"unbound variable {v} in effect")


# -- domains -----------------------------------------------------------------


def _keyword_map(form: SExpr, start: int, allowed: tuple[str, ...]) -> dict[str, SExpr]:
    out: dict[str, SExpr] = {}
    items = form.items[start:]
    i = 0
    while i < len(items):
        k = items[i]
        if not k.is_atom or not k.value.startswith(":"):
            raise k.error(f"expected a keyword, found {k}")
        key = k.value.lower()
        if key not in allowed:
            raise k.error(f"unknown keyword {k.value}")
        if key in out:
            raise k.error(f"duplicate keyword {k.value}")
        if i + 1 >= len(items):
            raise k.error(f"keyword {k.value} has no value")
        out[key] = items[i + 1]
        i += 2
    return out


def _schema(form: SExpr, keyword: str, name: str) -> ActionSchema:
    kw = _keyword_map(form, 2, SCHEMA_KEYS)
    if ":effect" not in kw:
        raise form.error(f"operator {name}: missing :effect clause")
    params: list[tuple[str, str | None]] = []
    if ":parameters" in kw:
        p = kw[":parameters"]
        if p.is_atom:
            raise p.error(":parameters must be a list")
        params = _typed_vars(p, ":parameters")
    pnames = [v for v, _ in params]
    pre, cons = _formula(kw[":precondition"]) if ":precondition" in kw else ([], [])
    pos_vars = set(pnames) | set(_vars_of([l for l in pre if l.positive], cons))
    neg_vars = set(_vars_of([l for l in pre if not l.positive]))
    scope = pos_vars | neg_vars
    raw, loose = _concurrency(kw.get(":concurrent"))
    items, leftovers = _build_items(raw, loose, pos_vars)
    cons = cons + [c for c in leftovers if c not in cons]
    effect, whens, foralls = _effect(kw[":effect"], scope)
    return ActionSchema(
        name=name,
        params=tuple(pnames),
        types=tuple(t for _, t in params),
        pre=tuple(pre),
        constraints=tuple(cons),
        concurrency=tuple(items),
        effect=tuple(effect),
        whens=tuple(whens),
        foralls=tuple(foralls),
        keyword=keyword,
    )


def _define_header(form: SExpr) -> tuple[str, str, SExpr]:
    if form.is_atom or form.head() != "define" or len(form) < 2:
        raise form.error("expected (define (KIND NAME) ...)")
    h = form[1]
    if h.is_atom or len(h) != 2 or not h[0].is_atom or not h[1].is_atom:
        raise h.error("expected (KIND NAME)")
    return h[0].value.lower(), h[1].value, h


def parse_domain(text: str, name: str = "domain") -> Domain:
    """Parse a sequence of ``(define (operator NAME) ...)`` forms.

    An optional ``(define (domain NAME))`` form names the domain.
    """
    schemata: list[ActionSchema] = []
    spans: dict[str, SExpr] = {}
    for form in read_all(text):
        kind, sname, h = _define_header(form)
        if kind == "domain":
            if len(form) != 2:
                raise form[2].error("a domain header takes no body")
            name = sname
            continue
        if kind not in ("operator", "action"):
            raise h.error(f"unknown definition kind {h[0].value!r}")
        if any(s.name == sname for s in schemata):
            raise h.error(f"duplicate schema {sname}")
        schemata.append(_schema(form, kind, sname))
        spans[sname] = h
    domain = Domain(name, tuple(schemata))
    try:
        _check_arities(domain)
    except _ArityError as exc:
        raise spans[exc.schema].error(str(exc)) from None
    return domain


class _ArityError(SpecificationError):
    def __init__(self, schema: str, message: str):
        self.schema = schema
        super().__init__(message)


def _check_arities(domain: Domain) -> None:
    seen: dict[str, int] = {}
    for s in domain.schemata:
        lits = list(s.pre) + list(s.effect)
        for w in s.all_whens:
            lits += list(w.pre) + list(w.effect)
        for f in s.foralls:
            lits += list(f.effect)
        for l in lits:
            k = seen.setdefault(l.predicate, len(l.args))
            if k != len(l.args):
                raise _ArityError(s.name,
                    f"operator {s.name}: predicate {l.predicate} used with arity "
                    f"{len(l.args)} and {k}")
    arity = {s.name: len(s.params) for s in domain.schemata}
    for s in domain.schemata:
        items = list(s.concurrency) + [i for w in s.all_whens for i in w.concurrency]
        for i in items:
            if i.schema in arity and arity[i.schema] != len(i.args):
                raise _ArityError(s.name,
                    f"operator {s.name}: concurrency item {i.schema} has {len(i.args)} "
                    f"arguments, schema takes {arity[i.schema]}")


# -- printing ----------------------------------------------------------------


def _fmt_conj(parts: list[str]) -> str:
    return "(and " + " ".join(parts) + ")" if parts else "()"


def _fmt_item(i: ConcurrencyItem) -> str:
    body = f"({' '.join((i.schema,) + i.args)})"
    if i.constraints:
        body = "(and " + " ".join([body] + [str(c) for c in i.constraints]) + ")"
    return f"(not {body})" if i.forbidden else body


def _fmt_conc(items: Iterable[ConcurrencyItem]) -> str:
    items = list(items)
    if len(items) == 1 and not items[0].constraints:
        return _fmt_item(items[0])
    return _fmt_conj([_fmt_item(i) for i in items])


def _fmt_when(w: WhenClause) -> str:
    pre = _fmt_conj([str(l) for l in w.pre] + [str(c) for c in w.constraints])
    conc = _fmt_conc(w.concurrency) if w.concurrency else "()"
    eff = _fmt_conj([str(l) for l in w.effect])
    return f"(when ({pre} {conc}) {eff})"


def _fmt_vars(vs) -> str:
    return "(" + " ".join(v if t is None else f"{v} - {t}" for v, t in vs) + ")"


def format_schema(s: ActionSchema) -> str:
    lines = [f"(define ({s.keyword} {s.name})"]
    lines.append(f"  :parameters    {_fmt_vars(zip(s.params, s.types))}")
    pre = [str(l) for l in s.pre] + [str(c) for c in s.constraints]
    if pre:
        lines.append(f"  :precondition  {_fmt_conj(pre)}")
    if s.concurrency:
        lines.append(f"  :concurrent    {_fmt_conc(s.concurrency)}")
    eff = [str(l) for l in s.effect] + [_fmt_when(w) for w in s.whens]
    for f in s.foralls:
        if f.implicit:
            eff.extend(_fmt_when(w) for w in f.whens)
        else:
            body = _fmt_conj([str(l) for l in f.effect] + [_fmt_when(w) for w in f.whens])
            eff.append(f"(forall {_fmt_vars(f.variables)} {body})")
    if len(eff) > 1:
        body = "(and " + ("\n" + " " * 21).join(eff) + ")"
    else:
        body = _fmt_conj(eff)
    lines.append(f"  :effect        {body})")
    return "\n".join(lines)


def print_domain(domain: Domain) -> str:
    parts = [f"(define (domain {domain.name}))"]
    parts += [format_schema(s) for s in domain.schemata]
    return "\n\n".join(parts) + "\n"


# -- problems ----------------------------------------------------------------

PROBLEM_KEYS = (":domain", ":objects", ":agents", ":init", ":goal")


def _section_map(form: SExpr, start: int) -> dict[str, SExpr]:
    out: dict[str, SExpr] = {}
    for sec in form.items[start:]:
        key = sec.head()
        if key is None or not key.startswith(":"):
            raise sec.error("expected a (:SECTION ...) form")
        if key not in PROBLEM_KEYS:
            raise sec.error(f"unknown section {sec[0].value}")
        if key in out:
            raise sec.error(f"duplicate section {sec[0].value}")
        out[key] = sec
    return out


def parse_problem(text: str, domain: Domain | None = None) -> Problem:
    forms = read_all(text)
    if len(forms) != 1:
        raise ParseError(f"expected one problem definition, found {len(forms)}", 1, 1)
    form = forms[0]
    kind, name, h = _define_header(form)
    if kind != "problem":
        raise h.error("expected (define (problem NAME) ...)")
    sec = _section_map(form, 2)
    dname = None
    if ":domain" in sec:
        d = sec[":domain"]
        if len(d) != 2 or not d[1].is_atom:
            raise d.error("expected (:domain NAME)")
        dname = d[1].value
    objects: dict[str, str | None] = {}
    if ":objects" in sec:
        for v, t in _typed_objects(sec[":objects"]):
            objects[v] = t
    agents: list[str] = []
    if ":agents" in sec:
        for a in sec[":agents"].items[1:]:
            agents.append(a.atom)
            if a.value not in objects:
                objects[a.value] = "agent"
    else:
        agents = [o for o, t in objects.items() if t == "agent"]
    if not agents:
        raise form.error("problem declares no agents")
    preds = domain.predicates() if domain is not None else None
    init: list[Literal] = []
    if ":init" in sec:
        for e in sec[":init"].items[1:]:
            l = _literal(e)
            if isinstance(l, Constraint) or not l.positive:
                raise e.error("initial state entries must be positive atoms")
            _check_ground(l, objects, preds, e)
            if l not in init:
                init.append(l)
    goal: list[Literal] = []
    if ":goal" in sec:
        g = sec[":goal"]
        if len(g) > 2:
            raise g.error("expected (:goal FORMULA)")
        if len(g) == 2:
            for e in _conjuncts(g[1]):
                l = _literal(e)
                if isinstance(l, Constraint):
                    raise e.error("equality is not allowed in a goal")
                _check_ground(l, objects, preds, e)
                goal.append(l)
    return Problem(name, objects, tuple(agents), frozenset(init), tuple(goal), dname)


def _typed_objects(sec: SExpr) -> list[tuple[str, str | None]]:
    """PDDL-style object lists: ``a b - t`` types both ``a`` and ``b``."""
    out: list[tuple[str, str | None]] = []
    pending: list[str] = []
    items = sec.items[1:]
    i = 0
    while i < len(items):
        tok = items[i]
        if not tok.is_atom:
            raise tok.error("object names must be symbols")
        if tok.value == "-":
            if i + 1 >= len(items) or not items[i + 1].is_atom or not pending:
                raise tok.error("'-' must follow object names and precede a type")
            out.extend((o, items[i + 1].value) for o in pending)
            pending = []
            i += 2
            continue
        if is_var(tok.value):
            raise tok.error("objects cannot be variables")
        if tok.value in pending or any(o == tok.value for o, _ in out):
            raise tok.error(f"duplicate object {tok.value}")
        pending.append(tok.value)
        i += 1
    out.extend((o, None) for o in pending)
    return out


def _check_ground(l: Literal, objects, preds, where: SExpr) -> None:
    for a in l.args:
        if is_var(a):
            raise where.error(f"non-ground atom {l}")
        if objects and a not in objects:
            raise where.error(f"undeclared object {a}")
    if preds is not None:
        if l.predicate not in preds:
            raise where.error(f"undeclared predicate {l.predicate}")
        if preds[l.predicate] != len(l.args):
            raise where.error(f"predicate {l.predicate} takes {preds[l.predicate]} arguments")


def print_problem(problem: Problem) -> str:
    lines = [f"(define (problem {problem.name})"]
    if problem.domain:
        lines.append(f"  (:domain {problem.domain})")
    objs = " ".join(o if t is None else f"{o} - {t}" for o, t in problem.objects.items())
    lines.append(f"  (:objects {objs})")
    lines.append(f"  (:agents {' '.join(problem.agents)})")
    init = " ".join(str(l) for l in sorted(problem.init))
    lines.append(f"  (:init {init})")
    lines.append(f"  (:goal {_fmt_conj([str(l) for l in problem.goal])}))")
    return "\n".join(lines) + "\n"


# -- plans -------------------------------------------------------------------

class InconsistentPlan(ParseError):
    """A well-formed plan file whose orderings or bindings contradict each other."""


PLAN_KEYS = (":agents", ":steps", ":orderings", ":bindings", ":links", ":nonconcurrent")


def print_plan(plan) -> str:
    """Canonical text of a :class:`~pomp.plans.ConcurrentPlan`."""
    from .plans import FINAL, INITIAL, label

    acts = plan.actions()
    lines = [f"; pomp plan: {len(acts)} steps", f"(define (plan {plan.name})"]
    lines.append(f"  (:agents {' '.join(plan.agents)})")
    shown: list[str] = []
    steps = []
    for s in acts:
        g = plan.ground(s)
        shown += [a for a in g.args if is_var(a) and a not in shown]
        steps.append(f"({label(s.id)} {g})")
    lines.append("  (:steps" + "".join(f"\n    {x}" for x in steps) + ")")
    ords = []
    for a, rel, b in plan.orderings.constraints():
        if a in (INITIAL, FINAL) or b in (INITIAL, FINAL):
            continue
        ords.append(f"({rel} {label(a)} {label(b)})")
    lines.append("  (:orderings" + "".join(" " + o for o in ords) + ")")
    _, neqs = plan.bindings.constraints()
    keep = set(shown)
    binds = [f"(!= {x} {y})" for x, y in neqs
             if (x in keep or not is_var(x)) and (y in keep or not is_var(y))
             and (is_var(x) or is_var(y))]
    lines.append("  (:bindings" + "".join(" " + b for b in binds) + ")")
    links = []
    for l in plan.links:
        cond = l.condition.substitute({v: plan.resolve(v) for v in l.condition.variables()})
        links.append(f"({label(l.producer)} {cond} {label(l.consumer)})")
    lines.append("  (:links" + "".join(f"\n    {x}" for x in links) + ")")
    ncs = [f"({label(c.anchor)} {_fmt_item(c.item)})" for c in plan.nonconc]
    lines.append("  (:nonconcurrent" + "".join(f"\n    {x}" for x in ncs) + "))")
    return "\n".join(lines) + "\n"


def parse_plan(text: str, schemata=None, universe: Iterable[str] = ()):
    """Read a plan file.

    ``schemata`` maps names to (prepared) action schemata; without it steps
    carry only their action names, which suffices for linearization. Each
    step's schema is instantiated afresh and its parameters are bound to the
    listed arguments.
    """
    from .bindings import BindingStore
    from .model import Step, fresh_mapping, instantiate
    from .ordering import OrderingStore, relset
    from .plans import FINAL, INITIAL, CausalLink, ConcurrentPlan, Nonconcurrency, parse_label

    forms = read_all(text)
    if len(forms) != 1:
        raise ParseError(f"expected one plan definition, found {len(forms)}", 1, 1)
    form = forms[0]
    kind, name, h = _define_header(form)
    if kind != "plan":
        raise h.error("expected (define (plan NAME) ...)")
    sec: dict[str, SExpr] = {}
    for s in form.items[2:]:
        key = s.head()
        if key not in PLAN_KEYS:
            raise s.error(f"unknown plan section {s[0] if s.items else s}")
        if key in sec:
            raise s.error(f"duplicate section {key}")
        sec[key] = s

    def step_id(e: SExpr) -> int:
        try:
            return parse_label(e.atom)
        except ValueError as exc:
            raise e.error(str(exc)) from None

    agents = tuple(a.atom for a in sec[":agents"].items[1:]) if ":agents" in sec else ()
    bindings = BindingStore(universe)
    orderings = OrderingStore(INITIAL, FINAL)
    steps: dict[int, Step] = {INITIAL: Step(INITIAL, None, (), "initial"),
                              FINAL: Step(FINAL, None, (), "final")}
    for e in (sec[":steps"].items[1:] if ":steps" in sec else []):
        if e.is_atom or len(e) != 2:
            raise e.error("expected (LABEL (ACTION ARGS...))")
        sid = step_id(e[0])
        if sid in steps:
            raise e[0].error(f"duplicate step {e[0].value}")
        aname, args = _item_pattern(e[1])
        if schemata is None:
            st = Step(sid, None, args, "action", aname)
        else:
            if aname not in schemata:
                raise e[1].error(f"unknown action schema {aname!r}")
            sch = schemata[aname]
            if len(sch.params) != len(args):
                raise e[1].error(f"{aname} takes {len(sch.params)} arguments, got {len(args)}")
            inst = instantiate(sch, sid)
            for p, a in zip(inst.args, args):
                if not bindings.unify(p, a):
                    raise e[1].error(f"inconsistent argument {a} for {aname}")
            st = inst
        steps[sid] = st
        orderings.add_step(sid)
    for e in (sec[":orderings"].items[1:] if ":orderings" in sec else []):
        if e.is_atom or len(e) != 3:
            raise e.error("expected (REL STEP STEP)")
        try:
            rel = relset(e[0].atom)
        except ValueError as exc:
            raise e[0].error(str(exc)) from None
        a, b = step_id(e[1]), step_id(e[2])
        for x, src in ((a, e[1]), (b, e[2])):
            if x not in steps:
                raise src.error(f"unknown step {src.value}")
        if not orderings.add(a, b, rel):
            raise InconsistentPlan(f"inconsistent ordering {e}", e.line, e.col)
    for e in (sec[":bindings"].items[1:] if ":bindings" in sec else []):
        if e.is_atom or len(e) != 3 or e.head() not in ("=", "!="):
            raise e.error("expected (= X Y) or (!= X Y)")
        x, y = e[1].atom, e[2].atom
        ok = bindings.unify(x, y) if e.head() == "=" else bindings.separate(x, y)
        if not ok:
            raise InconsistentPlan(f"inconsistent binding {e}", e.line, e.col)
    links = []
    for e in (sec[":links"].items[1:] if ":links" in sec else []):
        if e.is_atom or len(e) != 3:
            raise e.error("expected (PRODUCER LITERAL CONSUMER)")
        lit = _literal(e[1])
        if isinstance(lit, Constraint):
            raise e[1].error("a link condition must be a literal")
        links.append(CausalLink(step_id(e[0]), lit, step_id(e[2])))
    nonconc = []
    for e in (sec[":nonconcurrent"].items[1:] if ":nonconcurrent" in sec else []):
        if e.is_atom or len(e) != 2:
            raise e.error("expected (ANCHOR ITEM)")
        raw, loose = _concurrency(e[1])
        if len(raw) != 1 or loose or not raw[0][2]:
            raise e[1].error("expected one forbidden concurrency item")
        nm, args, _, cons = raw[0]
        local = {a for a in args if is_var(a)} | {v for c in cons for v in c.variables()}
        local -= set(bindings._parent)
        nonconc.append(Nonconcurrency(ConcurrencyItem(nm, args, True, tuple(cons), frozenset(local)),
                                      step_id(e[0])))
    return ConcurrentPlan(steps, orderings, bindings, links, nonconc, agents, name)

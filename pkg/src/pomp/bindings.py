"""Codesignation and non-codesignation constraints over flat terms.

The store is a union-find without path compression plus a trail, so every
change made after :meth:`BindingStore.mark` can be rolled back exactly with
:meth:`BindingStore.undo`. Failed operations leave the store untouched.
"""
from __future__ import annotations

from typing import Iterable, Iterator


def _is_var(t: str) -> bool:
    return t[:1] == "?"


class BindingStore:
    """Equivalence classes of terms with distinctness and type domains.

    ``universe`` is the finite object set used when a variable carries no
    domain of its own. With an empty universe such variables are taken to
    range over an unbounded set of objects.
    """

    def __init__(self, universe: Iterable[str] = ()):
        self.universe = frozenset(universe)
        self._parent: dict[str, str] = {}
        self._size: dict[str, int] = {}
        self._const: dict[str, str | None] = {}
        self._domain: dict[str, frozenset[str] | None] = {}
        self._neq: dict[str, frozenset[str]] = {}
        self._trail: list[tuple] = []

    # -- trail -------------------------------------------------------------

    def mark(self) -> int:
        return len(self._trail)

    def undo(self, mark: int) -> None:
        trail = self._trail
        while len(trail) > mark:
            rec = trail.pop()
            kind = rec[0]
            if kind == "add":
                t = rec[1]
                del self._parent[t], self._size[t], self._const[t], self._domain[t], self._neq[t]
            elif kind == "union":
                _, child, root, size, const, domain, neq = rec
                self._parent[child] = child
                self._size[root] = size
                self._const[root] = const
                self._domain[root] = domain
                self._neq[root] = neq
            elif kind == "domain":
                self._domain[rec[1]] = rec[2]
            elif kind == "neq":
                self._neq[rec[1]] = rec[2]

    def copy(self) -> "BindingStore":
        other = BindingStore(self.universe)
        other._parent = dict(self._parent)
        other._size = dict(self._size)
        other._const = dict(self._const)
        other._domain = dict(self._domain)
        other._neq = dict(self._neq)
        return other

    # -- queries -----------------------------------------------------------

    def _node(self, t: str) -> str:
        if t not in self._parent:
            self._parent[t] = t
            self._size[t] = 1
            self._const[t] = None if _is_var(t) else t
            self._domain[t] = None
            self._neq[t] = frozenset()
            self._trail.append(("add", t))
        return t

    def find(self, t: str) -> str:
        parent = self._parent
        if t not in parent:
            return t
        while parent[t] != t:
            t = parent[t]
        return t

    def value(self, t: str) -> str | None:
        """The constant ``t`` is bound to, if any."""
        if not _is_var(t):
            return t
        r = self.find(t)
        return self._const.get(r)

    def resolve(self, t: str) -> str:
        """A canonical representative: the bound constant or the class root."""
        if not _is_var(t):
            return t
        r = self.find(t)
        return self._const.get(r) or r

    def domain(self, t: str) -> frozenset[str] | None:
        if not _is_var(t):
            return frozenset((t,))
        r = self.find(t)
        c = self._const.get(r)
        if c is not None:
            return frozenset((c,))
        return self._domain.get(r)

    def codesignated(self, x: str, y: str) -> bool:
        return x == y or self.find(x) == self.find(y)

    def _roots_distinct(self, rx: str, ry: str) -> bool:
        cx, cy = self._const.get(rx, rx if not _is_var(rx) else None), self._const.get(ry, ry if not _is_var(ry) else None)
        if cx is not None and cy is not None:
            return cx != cy
        for t in self._neq.get(rx, ()):
            if self.find(t) == ry:
                return True
        dx = self._domain.get(rx) if cx is None else frozenset((cx,))
        dy = self._domain.get(ry) if cy is None else frozenset((cy,))
        if dx is not None and dy is not None and not (dx & dy):
            return True
        return False

    def distinct(self, x: str, y: str) -> bool:
        """True iff ``x`` and ``y`` can no longer denote the same object."""
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        return self._roots_distinct(rx, ry)

    def possibly_equal(self, x: str, y: str) -> bool:
        return not self.distinct(x, y)

    # -- updates -----------------------------------------------------------

    def unify(self, x: str, y: str) -> bool:
        """Add ``x = y``. Returns False (store unchanged) on inconsistency."""
        if x == y:
            return True
        if not _is_var(x) and not _is_var(y):
            return False
        rx, ry = self.find(self._node(x)), self.find(self._node(y))
        if rx == ry:
            return True
        if self._roots_distinct(rx, ry):
            return False
        cx, cy = self._const[rx], self._const[ry]
        dx, dy = self._domain[rx], self._domain[ry]
        if dx is None:
            dom = dy
        elif dy is None:
            dom = dx
        else:
            dom = dx & dy
        const = cx or cy
        if dom is not None:
            if not dom or (const is not None and const not in dom):
                return False
        if self._size[rx] < self._size[ry]:
            rx, ry = ry, rx
        self._trail.append(("union", ry, rx, self._size[rx], self._const[rx],
                            self._domain[rx], self._neq[rx]))
        self._parent[ry] = rx
        self._size[rx] += self._size[ry]
        self._const[rx] = const
        self._domain[rx] = dom
        self._neq[rx] = self._neq[rx] | self._neq[ry]
        return True

    def separate(self, x: str, y: str) -> bool:
        """Add ``x != y``. Returns False iff they already codesignate."""
        if x == y:
            return False
        rx, ry = self.find(self._node(x)), self.find(self._node(y))
        if rx == ry:
            return False
        if self._roots_distinct(rx, ry):
            return True
        self._trail.append(("neq", rx, self._neq[rx]))
        self._neq[rx] = self._neq[rx] | {ry}
        self._trail.append(("neq", ry, self._neq[ry]))
        self._neq[ry] = self._neq[ry] | {rx}
        return True

    def restrict(self, x: str, allowed: Iterable[str]) -> bool:
        """Intersect the domain of ``x`` with ``allowed``."""
        allowed = frozenset(allowed)
        if not _is_var(x):
            return x in allowed
        r = self.find(self._node(x))
        c = self._const[r]
        if c is not None:
            return c in allowed
        old = self._domain[r]
        new = allowed if old is None else old & allowed
        if not new:
            return False
        if new != old:
            self._trail.append(("domain", r, old))
            self._domain[r] = new
        return True

    # -- satisfiability ------------------------------------------------------

    def _csp(self, roots: list[str]) -> tuple[list[str], dict[str, list[str]], dict[str, set[str]]]:
        domains: dict[str, list[str]] = {}
        for r in roots:
            c = self._const.get(r)
            if c is not None:
                domains[r] = [c]
            else:
                d = self._domain.get(r)
                if d is None:
                    d = self.universe
                domains[r] = sorted(d)
        neighbours: dict[str, set[str]] = {r: set() for r in roots}
        for r in roots:
            for t in self._neq.get(r, ()):
                s = self.find(t)
                if s in neighbours and s != r:
                    neighbours[r].add(s)
                    neighbours[s].add(r)
        return roots, domains, neighbours

    def _solve(self, roots, domains, neighbours, unbounded) -> Iterator[dict[str, str]]:
        order = sorted(roots, key=lambda r: (len(domains[r]), r))
        assignment: dict[str, str] = {}

        def rec(i: int) -> Iterator[dict[str, str]]:
            if i == len(order):
                yield dict(assignment)
                return
            r = order[i]
            if r in unbounded:
                assignment[r] = f"#fresh{i}"
                yield from rec(i + 1)
                del assignment[r]
                return
            for v in domains[r]:
                if any(assignment.get(n) == v for n in neighbours[r]):
                    continue
                assignment[r] = v
                yield from rec(i + 1)
                del assignment[r]

        yield from rec(0)

    def roots(self) -> list[str]:
        return sorted({self.find(t) for t in self._parent})

    def satisfiable(self) -> bool:
        """Exact check: some assignment of objects meets every constraint."""
        roots = [r for r in self.roots()]
        roots, domains, neighbours = self._csp(roots)
        unbounded = {r for r in roots if self._const.get(r) is None
                     and self._domain.get(r) is None and not self.universe}
        for _ in self._solve(roots, domains, neighbours, unbounded):
            return True
        return False

    def groundings(self, terms: Iterable[str]) -> Iterator[dict[str, str]]:
        """Every consistent assignment of objects to the variables in ``terms``.

        The rest of the store is only required to stay satisfiable.
        """
        terms = sorted({t for t in terms if _is_var(t)})
        wanted = sorted({self.find(t) for t in terms})
        all_roots = self.roots()
        roots, domains, neighbours = self._csp(sorted(set(all_roots) | set(wanted)))
        unbounded = {r for r in roots if self._const.get(r) is None
                     and self._domain.get(r) is None and not self.universe}
        for r in wanted:
            if r in unbounded:
                raise ValueError(f"variable class {r} has no finite domain")
        wanted_set = set(wanted)
        seen = set()
        for sol in self._solve(roots, domains, neighbours, unbounded):
            key = tuple(sol[r] for r in wanted)
            if key in seen:
                continue
            # the remaining classes only need one witness
            seen.add(key)
            yield {t: sol[self.find(t)] for t in terms}

    def constraints(self) -> tuple[list[tuple[str, str]], list[tuple[str, str]]]:
        """Canonical (equalities, distinctions) describing the store."""
        classes: dict[str, list[str]] = {}
        for t in self._parent:
            classes.setdefault(self.find(t), []).append(t)
        eqs: list[tuple[str, str]] = []
        for r, members in classes.items():
            members = sorted(members, key=lambda m: (_is_var(m), m))
            head = members[0]
            for m in members[1:]:
                eqs.append((m, head) if _is_var(m) else (head, m))
        neqs: set[tuple[str, str]] = set()
        for r in classes:
            for t in self._neq[r]:
                a, b = self.resolve(r), self.resolve(t)
                a = self._rep(a)
                b = self._rep(b)
                if a != b:
                    neqs.add(tuple(sorted((a, b))))
        return sorted(eqs), sorted(neqs)

    def _rep(self, t: str) -> str:
        if not _is_var(t):
            return t
        r = self.find(t)
        c = self._const.get(r)
        if c is not None:
            return c
        members = [m for m in self._parent if self.find(m) == r]
        return min(members) if members else t


def mgu_literals(q, r, store: BindingStore) -> bool:
    """Unify two literals under ``store``; on failure the store is unchanged."""
    if q.predicate != r.predicate or len(q.args) != len(r.args) or q.positive != r.positive:
        return False
    mark = store.mark()
    for a, b in zip(q.args, r.args):
        if not store.unify(a, b):
            store.undo(mark)
            return False
    return True


def unify_terms(x: str, y: str, store: BindingStore) -> bool:
    return store.unify(x, y)


def separate_terms(x: str, y: str, store: BindingStore) -> bool:
    return store.separate(x, y)

"""Point-algebra ordering constraints over plan steps.

Each pair of steps carries a nonempty subset of ``{"<", "=", ">"}``; ``!=``,
``<=`` and ``>=`` are the two-element subsets. Consistency is decided exactly:
a network is satisfiable iff, in the graph of ``<``/``<=`` edges, no strongly
connected component contains a strict edge or a ``!=`` pair.
"""
from __future__ import annotations

from typing import Hashable, Iterable

Step = Hashable

LT, EQ, GT = "<", "=", ">"
FULL = frozenset((LT, EQ, GT))

RELATIONS = {
    "<": frozenset((LT,)),
    "=": frozenset((EQ,)),
    ">": frozenset((GT,)),
    "!=": frozenset((LT, GT)),
    "<=": frozenset((LT, EQ)),
    ">=": frozenset((GT, EQ)),
    "?": FULL,
}
_CONVERSE = {LT: GT, GT: LT, EQ: EQ}
_NAMES = {v: k for k, v in RELATIONS.items()}


def relset(rel) -> frozenset[str]:
    if isinstance(rel, str):
        try:
            return RELATIONS[rel]
        except KeyError:
            raise ValueError(f"unknown ordering relation {rel!r}") from None
    return frozenset(rel)


def converse(rel: Iterable[str]) -> frozenset[str]:
    return frozenset(_CONVERSE[r] for r in rel)


def relation_name(rel: frozenset[str]) -> str:
    return _NAMES[frozenset(rel)]


class InconsistentOrdering(Exception):
    pass


class OrderingStore:
    """Mutable ordering network with an undo trail.

    ``initial`` precedes and ``final`` follows every other registered step.
    """

    def __init__(self, initial: Step | None = None, final: Step | None = None):
        self._nodes: list[Step] = []
        self._idx: dict[Step, int] = {}
        self._rel: dict[tuple[int, int], frozenset[str]] = {}
        self._trail: list[tuple] = []
        self._cache = None
        self.initial = initial
        self.final = final
        for s in (initial, final):
            if s is not None:
                self.add_step(s)

    # -- bookkeeping -------------------------------------------------------

    @property
    def steps(self) -> list[Step]:
        return list(self._nodes)

    def __contains__(self, s: Step) -> bool:
        return s in self._idx

    def mark(self) -> int:
        return len(self._trail)

    def undo(self, mark: int) -> None:
        while len(self._trail) > mark:
            rec = self._trail.pop()
            if rec[0] == "step":
                s = self._nodes.pop()
                del self._idx[s]
            else:
                _, key, old = rec
                if old is None:
                    del self._rel[key]
                else:
                    self._rel[key] = old
            self._cache = None

    def copy(self) -> "OrderingStore":
        other = OrderingStore.__new__(OrderingStore)
        other._nodes = list(self._nodes)
        other._idx = dict(self._idx)
        other._rel = dict(self._rel)
        other._trail = []
        other._cache = self._cache
        other.initial = self.initial
        other.final = self.final
        return other

    def add_step(self, s: Step) -> None:
        if s in self._idx:
            return
        self._idx[s] = len(self._nodes)
        self._nodes.append(s)
        self._trail.append(("step", s))
        self._cache = None

    def stored(self, a: Step, b: Step) -> frozenset[str]:
        """The relation recorded directly between ``a`` and ``b``."""
        i, j = self._idx[a], self._idx[b]
        if i == j:
            return frozenset((EQ,))
        if i < j:
            return self._rel.get((i, j), FULL)
        return converse(self._rel.get((j, i), FULL))

    def constraints(self) -> list[tuple[Step, str, Step]]:
        """Explicit constraints, each oriented so its name avoids ``>``."""
        out = []
        for (i, j), r in sorted(self._rel.items()):
            if r == FULL:
                continue
            a, b = self._nodes[i], self._nodes[j]
            if GT in r and LT not in r:
                a, b, r = b, a, converse(r)
            out.append((a, relation_name(r), b))
        return out

    # -- closure -----------------------------------------------------------

    def _closure(self):
        if self._cache is not None:
            return self._cache
        n = len(self._nodes)
        adj = [0] * n
        strict: list[tuple[int, int]] = []
        neq: list[tuple[int, int]] = []
        ini = self._idx.get(self.initial) if self.initial is not None else None
        fin = self._idx.get(self.final) if self.final is not None else None
        for k in range(n):
            if ini is not None and k != ini:
                adj[ini] |= 1 << k
                strict.append((ini, k))
            if fin is not None and k != fin and k != ini:
                adj[k] |= 1 << fin
                strict.append((k, fin))
        for (i, j), r in self._rel.items():
            if r == FULL:
                continue
            if r == RELATIONS["!="]:
                neq.append((i, j))
                continue
            if LT in r and GT in r:
                continue
            if LT in r or r == RELATIONS["="]:
                adj[i] |= 1 << j
                if r == RELATIONS["<"]:
                    strict.append((i, j))
            if GT in r or r == RELATIONS["="]:
                adj[j] |= 1 << i
                if r == RELATIONS[">"]:
                    strict.append((j, i))
        reach = [0] * n
        for s in range(n):
            seen = 1 << s
            frontier = adj[s]
            while frontier & ~seen:
                new = frontier & ~seen
                seen |= new
                nxt = 0
                while new:
                    low = new & -new
                    nxt |= adj[low.bit_length() - 1]
                    new ^= low
                frontier = nxt
            reach[s] = seen
        ok = True
        for i, j in strict:
            if reach[j] >> i & 1:
                ok = False
                break
        if ok:
            for i, j in neq:
                if reach[i] >> j & 1 and reach[j] >> i & 1:
                    ok = False
                    break
        self._cache = (ok, reach, strict, neq)
        return self._cache

    def consistent(self) -> bool:
        return self._closure()[0]

    # -- updates -----------------------------------------------------------

    def add(self, a: Step, b: Step, rel) -> bool:
        """Intersect the relation between ``a`` and ``b`` with ``rel``.

        Returns False, leaving the store unchanged, if the result is
        inconsistent.
        """
        r = relset(rel)
        i, j = self._idx[a], self._idx[b]
        if i == j:
            return EQ in r
        if i > j:
            i, j, r = j, i, converse(r)
        old = self._rel.get((i, j))
        new = (FULL if old is None else old) & r
        if not new:
            return False
        if new == old or (old is None and new == FULL):
            return self.consistent()
        self._trail.append(("rel", (i, j), old))
        self._rel[(i, j)] = new
        self._cache = None
        if not self.consistent():
            self.undo(len(self._trail) - 1)
            return False
        return True

    # -- queries -----------------------------------------------------------

    def _single(self, i: int, j: int, r: str) -> bool:
        ok, reach, strict, neq = self._closure()
        if not ok:
            return False
        if i == j:
            return r == EQ
        if r == LT:
            return not reach[j] >> i & 1
        if r == GT:
            return not reach[i] >> j & 1
        # merging i and j: the new component is everything reachable from
        # {i, j} that can also reach {i, j}
        src = reach[i] | reach[j]
        comp = 0
        for k in range(len(reach)):
            if src >> k & 1 and (reach[k] >> i & 1 or reach[k] >> j & 1):
                comp |= 1 << k
        for x, y in strict:
            if comp >> x & 1 and comp >> y & 1:
                return False
        for x, y in neq:
            if comp >> x & 1 and comp >> y & 1:
                return False
        return True

    def relation(self, a: Step, b: Step) -> frozenset[str]:
        """The minimal label: every basic relation some solution realises."""
        i, j = self._idx[a], self._idx[b]
        return frozenset(r for r in (LT, EQ, GT) if self._single(i, j, r))

    def possibly(self, a: Step, b: Step, rel) -> bool:
        """Would ``add(a, b, rel)`` succeed? Never changes the store."""
        r = relset(rel)
        i, j = self._idx[a], self._idx[b]
        return any(self._single(i, j, x) for x in r)

    def necessarily(self, a: Step, b: Step, rel) -> bool:
        return self.relation(a, b) <= relset(rel)

    def possibly_all(self, constraints: Iterable[tuple[Step, Step, str]]) -> bool:
        """Joint probe for several constraints at once."""
        m = self.mark()
        try:
            return all(self.add(a, b, r) for a, b, r in constraints)
        finally:
            self.undo(m)

    def clusters(self) -> list[list[Step]]:
        """Groups of steps forced to be simultaneous (size > 1 only)."""
        ok, reach, _, _ = self._closure()
        n = len(self._nodes)
        seen = 0
        out = []
        for i in range(n):
            if seen >> i & 1:
                continue
            members = [k for k in range(n) if reach[i] >> k & 1 and reach[k] >> i & 1]
            for k in members:
                seen |= 1 << k
            if len(members) > 1:
                out.append([self._nodes[k] for k in members])
        return out

    def cluster_of(self, s: Step) -> list[Step]:
        ok, reach, _, _ = self._closure()
        i = self._idx[s]
        return [self._nodes[k] for k in range(len(self._nodes))
                if reach[i] >> k & 1 and reach[k] >> i & 1]

    def predecessors(self, s: Step) -> list[Step]:
        """Steps forced strictly before ``s``."""
        return [t for t in self._nodes if t != s and self.relation(t, s) == {LT}]


def add_ordering(a: Step, b: Step, rel, store: OrderingStore) -> bool:
    return store.add(a, b, rel)


def possibly(a: Step, b: Step, rel, store: OrderingStore) -> bool:
    return store.possibly(a, b, rel)


def consistent(store: OrderingStore) -> bool:
    return store.consistent()

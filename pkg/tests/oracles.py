"""Independent brute-force reference implementations for property tests."""
import itertools

REL_TEST = {
    "<": lambda x, y: x < y,
    ">": lambda x, y: x > y,
    "=": lambda x, y: x == y,
    "!=": lambda x, y: x != y,
    "<=": lambda x, y: x <= y,
    ">=": lambda x, y: x >= y,
}


def orderings_satisfiable(n: int, constraints) -> bool:
    """Is there an assignment of time points 0..n-1 meeting every (a, rel, b)?"""
    for pos in itertools.product(range(n), repeat=n):
        if all(REL_TEST[r](pos[a], pos[b]) for a, r, b in constraints):
            return True
    return False


def orderings_possible(n: int, constraints, a: int, b: int, rel: str) -> bool:
    return orderings_satisfiable(n, list(constraints) + [(a, rel, b)])


def bindings_models(variables, objects, eqs, neqs, domains=None):
    """All assignments of objects to variables meeting the constraints."""
    domains = domains or {}
    out = []
    for vals in itertools.product(objects, repeat=len(variables)):
        m = dict(zip(variables, vals))
        val = lambda t: m.get(t, t)
        if any(val(v) not in domains[v] for v in domains if v in m):
            continue
        if all(val(x) == val(y) for x, y in eqs) and all(val(x) != val(y) for x, y in neqs):
            out.append(m)
    return out


def orderings_satisfiable_pruned(n: int, constraints) -> bool:
    """Same answer as :func:`orderings_satisfiable`, assigning positions one
    step at a time and pruning the positions left to constrained neighbours."""
    nbrs = [[] for _ in range(n)]
    for a, r, b in constraints:
        test = REL_TEST[r]
        nbrs[a].append((b, lambda x, y, t=test: t(x, y)))
        nbrs[b].append((a, lambda x, y, t=test: t(y, x)))

    def extend(domains: list) -> bool:
        free = [i for i in range(n) if i not in fixed]
        if not free:
            return True
        i = min(free, key=lambda k: len(domains[k]))
        for p in sorted(domains[i]):
            nxt = list(domains)
            nxt[i] = {p}
            ok = True
            for j, test in nbrs[i]:
                nxt[j] = {q for q in nxt[j] if test(p, q)}
                if not nxt[j]:
                    ok = False
                    break
            if ok:
                fixed.add(i)
                if extend(nxt):
                    return True
                fixed.discard(i)
        return False

    fixed: set[int] = set()
    return extend([set(range(n)) for _ in range(n)])

"""Reference implementations that share no code with palkit's evaluators.

Models here are plain Python sets of worlds and sets of pairs; nothing is
memoized and announcements rebuild the model from scratch.
"""
import functools
import itertools

from palkit import formula as F


class NaiveModel:
    def __init__(self, worlds, rel, val):
        self.worlds = frozenset(worlds)
        self.rel = {a: frozenset(p) for a, p in rel.items()}
        self.val = {p: frozenset(s) for p, s in val.items()}

    @classmethod
    def of(cls, m):
        """Convert a KripkeModel into pair sets over world indices."""
        rel = {a: {(i, j) for i in range(m.n) for j in range(m.n) if m.relation(a)[i] >> j & 1}
               for a in m.agents}
        val = {p: {i for i in range(m.n) if m.prop(p) >> i & 1} for p in m.props}
        return cls(range(m.n), rel, val)

    def restrict(self, keep):
        keep = frozenset(keep)
        return NaiveModel(keep, {a: {(u, v) for u, v in r if u in keep and v in keep}
                                 for a, r in self.rel.items()},
                          {p: s & keep for p, s in self.val.items()})

    def succ(self, pairs, w):
        return {v for u, v in pairs if u == w}


def naive_truth(m, f, w):
    if isinstance(f, F.Atom):
        return w in m.val.get(f.prop, ())
    if isinstance(f, F.Top):
        return True
    if isinstance(f, F.Neg):
        return not naive_truth(m, f.sub, w)
    if isinstance(f, F.And):
        return naive_truth(m, f.left, w) and naive_truth(m, f.right, w)
    if isinstance(f, F.Or):
        return naive_truth(m, f.left, w) or naive_truth(m, f.right, w)
    if isinstance(f, F.Imp):
        return not naive_truth(m, f.left, w) or naive_truth(m, f.right, w)
    if isinstance(f, F.Iff):
        return naive_truth(m, f.left, w) == naive_truth(m, f.right, w)
    if isinstance(f, F.Know):
        return all(naive_truth(m, f.sub, v) for v in m.succ(m.rel[f.agent], w))
    if isinstance(f, F.EvKnow):
        return all(naive_truth(m, f.sub, v) for a in f.group for v in m.succ(m.rel[a], w))
    if isinstance(f, F.DistKnow):
        common = set.intersection(*(m.succ(m.rel[a], w) for a in f.group))
        return all(naive_truth(m, f.sub, v) for v in common)
    if isinstance(f, (F.CommonKnow, F.Rck)):
        ante = F.Top() if isinstance(f, F.CommonKnow) else f.antecedent
        cons = f.sub if isinstance(f, F.CommonKnow) else f.consequent
        # every world at the end of a non-empty path whose steps land in ante-worlds
        edges = {(u, v) for a in f.group for u, v in m.rel[a] if naive_truth(m, ante, v)}
        seen, todo = set(), [w]
        while todo:
            u = todo.pop()
            for x, v in edges:
                if x == u and v not in seen:
                    seen.add(v)
                    todo.append(v)
        return all(naive_truth(m, cons, v) for v in seen)
    if isinstance(f, F.Announce):
        if not naive_truth(m, f.announced, w):
            return True
        keep = {v for v in m.worlds if naive_truth(m, f.announced, v)}
        return naive_truth(m.restrict(keep), f.body, w)
    raise TypeError(f)


@functools.lru_cache(maxsize=None)
def transitive_relations(n):
    """Every transitive relation on ``n`` worlds, as frozensets of pairs."""
    allp = [(i, j) for i in range(n) for j in range(n)]
    out = []
    for bits in range(1 << len(allp)):
        q = {allp[k] for k in range(len(allp)) if bits >> k & 1}
        if all((x, z) in q for x, y in q for y2, z in q if y == y2):
            out.append(frozenset(q))
    return tuple(out)


def brute_tc(n, pairs):
    """Intersection of every transitive superset of ``pairs`` on ``n`` worlds."""
    result = {(i, j) for i in range(n) for j in range(n)}
    for q in transitive_relations(n):
        if pairs <= q:
            result &= q
    return result


def brute_partitions(n):
    """Set partitions via all block-label functions, deduplicated."""
    seen = set()
    for labels in itertools.product(range(n), repeat=n):
        blocks = {}
        for w, l in enumerate(labels):
            blocks.setdefault(l, set()).add(w)
        seen.add(frozenset(frozenset(b) for b in blocks.values()))
    return seen


def wise_men_oracle(n):
    """Repeated public 'I do not know my spot' updates on spot tuples."""
    alive = [s for s in itertools.product((False, True), repeat=n) if any(s)]
    counts = [len(alive)]
    for i in range(n - 1):
        def knows(s, cur=tuple(alive), i=i):
            # i cannot tell apart worlds that agree on every other spot
            return all(t[i] for t in cur if all(t[j] == s[j] for j in range(n) if j != i))
        alive = [s for s in alive if not knows(s)]
        counts.append(len(alive))
    last = n - 1
    final = all(all(t[last] for t in alive if all(t[j] == s[j] for j in range(n) if j != last))
                for s in alive)
    return counts, alive, final

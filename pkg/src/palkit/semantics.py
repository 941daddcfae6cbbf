"""Evaluators for PAL with relativized common knowledge.

Two independent routes compute truth:

* the *direct* semantics recurses over the formula and, for an announcement
  ``[!a]b``, physically builds the updated model with
  :func:`palkit.kripke.restrict` before evaluating ``b``;
* the *domain-passing* semantics never changes the model. Every clause
  receives the current evaluation domain ``d`` (a set of worlds); atoms and
  the knowledge clauses check membership in ``d``, and only the
  announcement clause shrinks it to ``d & ext(a, d)``.

Both routes work on whole world sets at once: ``extension`` style helpers
return the bitmask of worlds where a formula holds. Schematic variables are
understood only by the domain-passing route, where they denote an arbitrary
:class:`Denotation`.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Mapping

from . import formula as F
from .errors import PalError, UnboundSchematic
from .kripke import (KripkeModel, expand, members, rel_intersection, rel_union,
                     restrict, restrict_targets, transitive_closure)

__all__ = [
    "Denotation", "eval_direct", "extension", "valid_in_model", "direct_failure",
    "eval_sse", "sse_extension", "sse_table", "vld_p", "vld_t",
    "pvalid_failure", "tvalid_failure",
]


@dataclass(frozen=True)
class Denotation:
    """Arbitrary predicate over (domain, world) pairs of an ``n``-world model.

    ``table[d]`` is the world set where the predicate holds when evaluated
    in domain ``d`` (a bitmask), so the full table has ``2**n`` entries.
    """

    n: int
    table: tuple

    def __post_init__(self):
        if len(self.table) != 1 << self.n:
            raise ValueError(f"denotation over {self.n} worlds needs {1 << self.n} domain entries")

    def __call__(self, d: int, w: int) -> bool:
        return bool(self.table[d] >> w & 1)

    @classmethod
    def from_function(cls, n, fn):
        """Build from a callable ``fn(d, w) -> bool``."""
        return cls(n, tuple(sum(1 << w for w in range(n) if fn(d, w)) for d in range(1 << n)))

    @classmethod
    def from_index(cls, n, k):
        """The ``k``-th table in the canonical enumeration order: bit
        ``d * n + w`` of ``k`` is the value at ``(d, w)``."""
        full = (1 << n) - 1
        return cls(n, tuple((k >> (d * n)) & full for d in range(1 << n)))

    @property
    def index(self) -> int:
        return sum(s << (d * self.n) for d, s in enumerate(self.table))

    def entries(self) -> Iterator[tuple]:
        for d in range(1 << self.n):
            for w in range(self.n):
                yield d, w, bool(self.table[d] >> w & 1)

    def listing(self, labels) -> list:
        """One line per (domain, world) pair, domains from full to empty
        counting down with the first world as the most significant digit."""
        lines = []
        n = self.n
        for k in reversed(range(1 << n)):
            d = sum(1 << i for i in range(n) if k >> (n - 1 - i) & 1)
            dom = ", ".join(f"{labels[i]} := {bool(d >> i & 1)}" for i in range(self.n))
            for w in range(self.n):
                lines.append(f"((λx. _)({dom}), {labels[w]}) := {bool(self.table[d] >> w & 1)}")
        return lines


def _world_index(m, w):
    if isinstance(w, str):
        return m.world(w)
    if not 0 <= w < m.n:
        raise IndexError(f"world index {w} out of range for {m.n} worlds")
    return w


def _knows(rel, good, full):
    """Worlds all of whose ``rel``-successors lie in ``good``."""
    out = 0
    bad = full & ~good
    for i, row in enumerate(rel):
        if not row & bad:
            out |= 1 << i
    return out


class _Direct:
    """Direct semantics on one fixed model, memoized per subformula."""

    def __init__(self, m: KripkeModel):
        self.m = m
        self.memo = {}
        self.groups = {}
        self.updates = {}

    def group_rel(self, kind, group):
        key = (kind, group)
        r = self.groups.get(key)
        if r is None:
            rels = [self.m.relation(a) for a in group]
            r = rel_union(rels) if kind == "u" else rel_intersection(rels)
            self.groups[key] = r
        return r

    def ext(self, f) -> int:
        key = id(f)
        hit = self.memo.get(key)
        if hit is not None:
            return hit[1]
        v = self._ext(f)
        self.memo[key] = (f, v)
        return v

    def _ext(self, f) -> int:
        m, full = self.m, self.m.full
        if isinstance(f, F.Atom):
            return m.prop(f.prop)
        if isinstance(f, F.Top):
            return full
        if isinstance(f, F.Neg):
            return full & ~self.ext(f.sub)
        if isinstance(f, F.And):
            return self.ext(f.left) & self.ext(f.right)
        if isinstance(f, F.Or):
            return self.ext(f.left) | self.ext(f.right)
        if isinstance(f, F.Imp):
            return full & (~self.ext(f.left) | self.ext(f.right))
        if isinstance(f, F.Iff):
            return full & ~(self.ext(f.left) ^ self.ext(f.right))
        if isinstance(f, F.Know):
            return _knows(m.relation(f.agent), self.ext(f.sub), full)
        if isinstance(f, F.EvKnow):
            return _knows(self.group_rel("u", f.group), self.ext(f.sub), full)
        if isinstance(f, F.DistKnow):
            return _knows(self.group_rel("i", f.group), self.ext(f.sub), full)
        if isinstance(f, (F.CommonKnow, F.Rck)):
            if isinstance(f, F.CommonKnow):
                targets, cons = full, f.sub
            else:
                targets, cons = self.ext(f.antecedent), f.consequent
            reach = transitive_closure(restrict_targets(self.group_rel("u", f.group), targets))
            return _knows(reach, self.ext(cons), full)
        if isinstance(f, F.Announce):
            a = self.ext(f.announced)
            if a == 0:
                # the announcement fails everywhere, so the clause is vacuous
                return full
            if a == full:
                return self.ext(f.body)
            sub = self.updates.get(a)
            if sub is None:
                sub = self.updates[a] = _Direct(restrict(m, a))
            return (full & ~a) | expand(sub.ext(f.body), a)
        if isinstance(f, F.Schematic):
            raise PalError(f"schematic variable ?{f.name} needs the domain-passing evaluator")
        raise TypeError(f"not a formula: {f!r}")


def extension(m: KripkeModel, f) -> int:
    """World set where ``f`` holds in ``m`` (direct semantics)."""
    return _Direct(m).ext(f)


def eval_direct(m: KripkeModel, f, w) -> bool:
    """Truth of ``f`` at world ``w`` (index or label) of ``m``."""
    w = _world_index(m, w)
    return bool(extension(m, f) >> w & 1)


def valid_in_model(m: KripkeModel, f) -> bool:
    return extension(m, f) == m.full


def direct_failure(m: KripkeModel, f, _ev=None):
    """First world where ``f`` fails, or ``None``."""
    e = (_ev or _Direct(m)).ext(f)
    bad = m.full & ~e
    if not bad:
        return None
    return (bad & -bad).bit_length() - 1


class _Sse:
    """Domain-passing semantics on one model, memoized per (subformula, domain)."""

    def __init__(self, m: KripkeModel, env: Mapping[str, Denotation] | None = None):
        self.m = m
        self.env = env or {}
        self.memo = {}
        self.groups = {}

    def group_rel(self, kind, group):
        key = (kind, group)
        r = self.groups.get(key)
        if r is None:
            rels = [self.m.relation(a) for a in group]
            r = rel_union(rels) if kind == "u" else rel_intersection(rels)
            self.groups[key] = r
        return r

    def ext(self, f, d) -> int:
        key = (id(f), d)
        hit = self.memo.get(key)
        if hit is not None:
            return hit[1]
        v = self._ext(f, d)
        self.memo[key] = (f, v)
        return v

    def _ext(self, f, d) -> int:
        m, full = self.m, self.m.full
        if isinstance(f, F.Atom):
            return d & m.prop(f.prop)
        if isinstance(f, F.Schematic):
            den = self.env.get(f.name)
            if den is None:
                raise UnboundSchematic(f.name)
            if den.n != m.n:
                raise ValueError(f"denotation for ?{f.name} is over {den.n} worlds, model has {m.n}")
            return den.table[d]
        if isinstance(f, F.Top):
            return full
        if isinstance(f, F.Neg):
            return full & ~self.ext(f.sub, d)
        if isinstance(f, F.And):
            return self.ext(f.left, d) & self.ext(f.right, d)
        if isinstance(f, F.Or):
            return self.ext(f.left, d) | self.ext(f.right, d)
        if isinstance(f, F.Imp):
            return full & (~self.ext(f.left, d) | self.ext(f.right, d))
        if isinstance(f, F.Iff):
            return full & ~(self.ext(f.left, d) ^ self.ext(f.right, d))
        if isinstance(f, (F.Know, F.EvKnow, F.DistKnow)):
            if isinstance(f, F.Know):
                rel = m.relation(f.agent)
            else:
                rel = self.group_rel("u" if isinstance(f, F.EvKnow) else "i", f.group)
            # forall Y. (d Y & R X Y) -> A d Y
            return _knows(rel, full & ~(d & ~self.ext(f.sub, d)), full)
        if isinstance(f, (F.CommonKnow, F.Rck)):
            if isinstance(f, F.CommonKnow):
                targets, cons = d, f.sub
            else:
                targets, cons = d & self.ext(f.antecedent, d), f.consequent
            # tc of (EVR G) intersected with (lambda U V. d V & A d V)
            reach = transitive_closure(restrict_targets(self.group_rel("u", f.group), targets))
            return _knows(reach, self.ext(cons, d), full)
        if isinstance(f, F.Announce):
            a = self.ext(f.announced, d)
            return full & (~a | self.ext(f.body, d & a))
        raise TypeError(f"not a formula: {f!r}")


def sse_extension(m: KripkeModel, f, d: int, env=None) -> int:
    """World set where ``f`` holds when evaluated in domain ``d``. Worlds
    outside ``d`` are included in the result whenever the clauses make them
    true (e.g. ``~p`` at a world outside the domain)."""
    return _Sse(m, env).ext(f, d & m.full)


def eval_sse(m: KripkeModel, f, d: int, w, env=None) -> bool:
    w = _world_index(m, w)
    return bool(sse_extension(m, f, d, env) >> w & 1)


def sse_table(m: KripkeModel, f, env=None) -> Denotation:
    """The full (domain, world) meaning of ``f`` as a :class:`Denotation`."""
    ev = _Sse(m, env)
    return Denotation(m.n, tuple(ev.ext(f, d) for d in range(1 << m.n)))


def pvalid_failure(m: KripkeModel, f, env=None, _ev=None):
    """First ``(domain, world)`` with the world inside the domain where
    ``f`` fails, scanning domains in increasing bitmask order."""
    ev = _ev or _Sse(m, env)
    for d in range(1, 1 << m.n):
        bad = d & ~ev.ext(f, d)
        if bad:
            return d, (bad & -bad).bit_length() - 1
    return None


def tvalid_failure(m: KripkeModel, f, env=None, _ev=None):
    """First world where ``f`` fails in the full domain."""
    ev = _ev or _Sse(m, env)
    bad = m.full & ~ev.ext(f, m.full)
    if not bad:
        return None
    return (bad & -bad).bit_length() - 1


def vld_p(m: KripkeModel, f, env=None) -> bool:
    """Valid for every domain and every world inside it. The empty domain
    has no member worlds and contributes nothing."""
    return pvalid_failure(m, f, env) is None


def vld_t(m: KripkeModel, f, env=None) -> bool:
    """Valid at every world of the full domain only."""
    return tvalid_failure(m, f, env) is None

"""Finite epistemic models.

Worlds are dense 0-based indices carrying string labels. A *world set* is an
``int`` bitmask (bit ``i`` set iff world ``i`` is a member) and a *relation*
is a tuple of successor bitmasks, one per world: ``r[i] >> j & 1`` iff
``i R j``. Bitmasks keep the relation algebra cheap at the model counts the
bounded checker enumerates.
"""
from __future__ import annotations

import enum
import json
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from .errors import EmptyDomain, ModelError, UnknownAgent, UnknownWorld

WorldSet = int
Relation = tuple


class FrameClass(enum.Enum):
    K = "k"
    S5 = "s5"


# ------------------------------------------------------------- world sets

def full_set(n: int) -> WorldSet:
    return (1 << n) - 1


def members(mask: WorldSet) -> Iterator[int]:
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


def from_indices(indices: Iterable[int]) -> WorldSet:
    out = 0
    for i in indices:
        out |= 1 << i
    return out


def compress(mask: WorldSet, domain: WorldSet) -> WorldSet:
    """Pack the bits of ``mask`` that lie in ``domain`` into consecutive
    positions, following the reindexing used by :func:`restrict`."""
    out = 0
    k = 0
    for i in members(domain):
        if mask >> i & 1:
            out |= 1 << k
        k += 1
    return out


def expand(mask: WorldSet, domain: WorldSet) -> WorldSet:
    """Inverse of :func:`compress`."""
    out = 0
    k = 0
    for i in members(domain):
        if mask >> k & 1:
            out |= 1 << i
        k += 1
    return out


def image(w: int, domain: WorldSet) -> int:
    """Index of world ``w`` after restricting to ``domain``."""
    if not domain >> w & 1:
        raise ValueError(f"world {w} is not in the domain")
    return bin(domain & ((1 << w) - 1)).count("1")


# -------------------------------------------------------------- relations

def empty_relation(n: int) -> Relation:
    return (0,) * n


def identity(n: int) -> Relation:
    return tuple(1 << i for i in range(n))


def total_relation(n: int) -> Relation:
    return (full_set(n),) * n


def relation_from_pairs(n: int, pairs: Iterable[tuple]) -> Relation:
    rows = [0] * n
    for i, j in pairs:
        if not (0 <= i < n and 0 <= j < n):
            raise ValueError(f"pair ({i}, {j}) out of range for {n} worlds")
        rows[i] |= 1 << j
    return tuple(rows)


def relation_from_partition(n: int, blocks: Iterable[Iterable[int]]) -> Relation:
    """Equivalence relation induced by ``blocks``; the blocks must cover
    ``range(n)`` exactly once."""
    rows = [0] * n
    seen = 0
    for block in blocks:
        mask = from_indices(block)
        if mask & seen:
            raise ValueError("partition blocks overlap")
        seen |= mask
        for i in members(mask):
            rows[i] = mask
    if seen != full_set(n):
        raise ValueError("partition does not cover every world")
    return tuple(rows)


def relation_pairs(r: Relation) -> list:
    return [(i, j) for i, row in enumerate(r) for j in members(row)]


def partition_of(r: Relation) -> list:
    """Blocks of an equivalence relation, ordered by smallest member."""
    if not is_equivalence(r):
        raise ValueError("relation is not an equivalence relation")
    blocks, seen = [], 0
    for i, row in enumerate(r):
        if not seen >> i & 1:
            blocks.append(list(members(row)))
            seen |= row
    return blocks


def as_matrix(r: Relation) -> np.ndarray:
    n = len(r)
    out = np.zeros((n, n), dtype=bool)
    for i, j in relation_pairs(r):
        out[i, j] = True
    return out


def from_matrix(a) -> Relation:
    a = np.asarray(a, dtype=bool)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("relation matrix must be square")
    return relation_from_pairs(a.shape[0], zip(*np.nonzero(a)))


def is_subrelation(r: Relation, s: Relation) -> bool:
    return all(x & ~y == 0 for x, y in zip(r, s))


def is_reflexive(r: Relation) -> bool:
    return all(row >> i & 1 for i, row in enumerate(r))


def is_symmetric(r: Relation) -> bool:
    return all(r[j] >> i & 1 for i, row in enumerate(r) for j in members(row))


def is_transitive(r: Relation) -> bool:
    return all(r[j] & ~row == 0 for row in r for j in members(row))


def is_euclidean(r: Relation) -> bool:
    return all(row & ~r[j] == 0 for row in r for j in members(row))


def is_equivalence(r: Relation) -> bool:
    return is_reflexive(r) and is_transitive(r) and is_euclidean(r)


def rel_union(rels: Sequence[Relation]) -> Relation:
    out = list(rels[0])
    for r in rels[1:]:
        for i, row in enumerate(r):
            out[i] |= row
    return tuple(out)


def rel_intersection(rels: Sequence[Relation]) -> Relation:
    out = list(rels[0])
    for r in rels[1:]:
        for i, row in enumerate(r):
            out[i] &= row
    return tuple(out)


def restrict_targets(r: Relation, targets: WorldSet) -> Relation:
    """``r`` intersected with ``W x targets``."""
    return tuple(row & targets for row in r)


def transitive_closure(r: Relation) -> Relation:
    """Least transitive superset of ``r`` (Warshall over bit rows)."""
    rows = list(r)
    n = len(rows)
    for k in range(n):
        bit = 1 << k
        rk = rows[k]
        if not rk:
            continue
        for i in range(n):
            if rows[i] & bit:
                rows[i] |= rk
    return tuple(rows)


# ------------------------------------------------------------------ model

class KripkeModel:
    """Immutable epistemic model ``<W, {R_i}, V>``.

    ``relations`` maps agent names to relations and ``valuation`` maps
    proposition names to world sets. Propositions that are declared but
    missing from ``valuation``, and undeclared ones, denote the empty set.
    """

    __slots__ = ("labels", "relations", "valuation", "props", "n", "full", "_index")

    def __init__(self, labels: Sequence[str], relations: Mapping[str, Relation],
                 valuation: Mapping[str, WorldSet] | None = None,
                 props: Sequence[str] | None = None, *, check: bool = True):
        labels = tuple(labels)
        valuation = dict(valuation or {})
        props = tuple(props) if props is not None else tuple(valuation)
        n = len(labels)
        if check:
            if n == 0:
                raise EmptyDomain("a model needs at least one world")
            if len(set(labels)) != n:
                raise ModelError("duplicate world labels", "worlds")
            if len(set(props)) != len(props):
                raise ModelError("duplicate proposition names", "props")
            full = (1 << n) - 1
            for a, r in relations.items():
                if len(r) != n or any(row & ~full for row in r):
                    raise ModelError(f"relation dimension does not match {n} worlds", f"agents.{a}")
            for p, s in valuation.items():
                if p not in props:
                    raise ModelError(f"proposition {p!r} is not declared", f"valuation.{p}")
                if s & ~full or s < 0:
                    raise ModelError(f"world set exceeds {n} worlds", f"valuation.{p}")
        for p in props:
            valuation.setdefault(p, 0)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "relations", MappingProxyType({a: tuple(r) for a, r in relations.items()}))
        object.__setattr__(self, "valuation", MappingProxyType(valuation))
        object.__setattr__(self, "props", props)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "full", (1 << n) - 1)
        object.__setattr__(self, "_index", None)

    def __setattr__(self, name, value):
        raise AttributeError("KripkeModel is immutable")

    def __reduce__(self):
        return (_rebuild, (self.labels, dict(self.relations), dict(self.valuation), self.props))

    @property
    def agents(self) -> tuple:
        return tuple(self.relations)

    def relation(self, agent: str) -> Relation:
        try:
            return self.relations[agent]
        except KeyError:
            raise UnknownAgent(agent) from None

    def prop(self, name: str) -> WorldSet:
        return self.valuation.get(name, 0)

    def world(self, label: str) -> int:
        if self._index is None:
            object.__setattr__(self, "_index", {l: i for i, l in enumerate(self.labels)})
        try:
            return self._index[label]
        except KeyError:
            raise UnknownWorld(label) from None

    def world_set(self, labels: Iterable[str]) -> WorldSet:
        return from_indices(self.world(l) for l in labels)

    def labels_of(self, mask: WorldSet) -> list:
        return [self.labels[i] for i in members(mask)]

    def true_props(self, w: int) -> list:
        return [p for p in self.props if self.valuation[p] >> w & 1]

    def _key(self):
        return (self.labels, tuple(sorted(self.relations.items())),
                tuple(sorted(self.valuation.items())), tuple(sorted(self.props)))

    def __eq__(self, other):
        return isinstance(other, KripkeModel) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"KripkeModel(worlds={list(self.labels)}, agents={list(self.agents)}, props={list(self.props)})"


def _rebuild(labels, relations, valuation, props):
    return KripkeModel(labels, relations, valuation, props, check=False)


def satisfies_frame(m: KripkeModel, fc: FrameClass) -> bool:
    if fc is FrameClass.K:
        return True
    return all(is_equivalence(r) for r in m.relations.values())


def _group_relations(m, group):
    if not group:
        raise ValueError("agent group must be non-empty")
    return [m.relation(a) for a in group]


def union_rel(m: KripkeModel, group: Sequence[str]) -> Relation:
    return rel_union(_group_relations(m, group))


def intersect_rel(m: KripkeModel, group: Sequence[str]) -> Relation:
    return rel_intersection(_group_relations(m, group))


def restrict(m: KripkeModel, d: WorldSet) -> KripkeModel:
    """Submodel on the worlds of ``d``, reindexed in increasing order with
    labels preserved."""
    d &= m.full
    if d == 0:
        raise EmptyDomain("cannot restrict a model to the empty domain")
    if d == m.full:
        return m
    kept = list(members(d))
    labels = tuple(m.labels[i] for i in kept)
    rels = {a: tuple(compress(r[i], d) for i in kept) for a, r in m.relations.items()}
    val = {p: compress(s, d) for p, s in m.valuation.items()}
    return KripkeModel(labels, rels, val, m.props, check=False)


# ---------------------------------------------------------- serialization

def model_from_doc(doc) -> KripkeModel:
    if not isinstance(doc, dict):
        raise ModelError("model document must be an object")
    unknown = set(doc) - {"worlds", "props", "agents", "valuation"}
    if unknown:
        raise ModelError(f"unknown keys {sorted(unknown)}")
    worlds = doc.get("worlds")
    if not isinstance(worlds, list) or not all(isinstance(w, str) for w in worlds):
        raise ModelError("must be a list of strings", "worlds")
    if not worlds:
        raise ModelError("at least one world is required", "worlds")
    if len(set(worlds)) != len(worlds):
        raise ModelError("duplicate world labels", "worlds")
    index = {w: i for i, w in enumerate(worlds)}
    n = len(worlds)

    def lookup(label, path):
        if not isinstance(label, str):
            raise ModelError("world label must be a string", path)
        try:
            return index[label]
        except KeyError:
            raise ModelError(f"unknown world {label!r}", path) from None

    props = doc.get("props", [])
    if not isinstance(props, list) or not all(isinstance(p, str) for p in props):
        raise ModelError("must be a list of strings", "props")
    agents = doc.get("agents")
    if not isinstance(agents, dict) or not agents:
        raise ModelError("must be a non-empty object", "agents")
    rels = {}
    for a, spec in agents.items():
        path = f"agents.{a}"
        if not isinstance(spec, dict) or len(spec) != 1 or next(iter(spec)) not in ("partition", "pairs"):
            raise ModelError('exactly one of "partition" or "pairs" is required', path)
        (kind, body), = spec.items()
        if not isinstance(body, list):
            raise ModelError("must be a list", f"{path}.{kind}")
        if kind == "partition":
            blocks = []
            for k, block in enumerate(body):
                if not isinstance(block, list):
                    raise ModelError("block must be a list", f"{path}.partition[{k}]")
                blocks.append([lookup(w, f"{path}.partition[{k}]") for w in block])
            try:
                rels[a] = relation_from_partition(n, blocks)
            except ValueError as e:
                raise ModelError(str(e), f"{path}.partition") from None
        else:
            pairs = []
            for k, pair in enumerate(body):
                if not isinstance(pair, list) or len(pair) != 2:
                    raise ModelError("pair must be a two-element list", f"{path}.pairs[{k}]")
                pairs.append((lookup(pair[0], f"{path}.pairs[{k}]"), lookup(pair[1], f"{path}.pairs[{k}]")))
            rels[a] = relation_from_pairs(n, pairs)
    valuation = doc.get("valuation", {})
    if not isinstance(valuation, dict):
        raise ModelError("must be an object", "valuation")
    val = {}
    for p, ws in valuation.items():
        if p not in props:
            raise ModelError(f"proposition {p!r} is not declared in props", f"valuation.{p}")
        if not isinstance(ws, list):
            raise ModelError("must be a list of world labels", f"valuation.{p}")
        val[p] = from_indices(lookup(w, f"valuation.{p}") for w in ws)
    return KripkeModel(worlds, rels, val, props)


def model_to_doc(m: KripkeModel) -> dict:
    agents = {}
    for a, r in m.relations.items():
        if is_equivalence(r):
            agents[a] = {"partition": [[m.labels[i] for i in b] for b in partition_of(r)]}
        else:
            agents[a] = {"pairs": [[m.labels[i], m.labels[j]] for i, j in relation_pairs(r)]}
    return {
        "worlds": list(m.labels),
        "props": list(m.props),
        "agents": agents,
        "valuation": {p: m.labels_of(m.valuation[p]) for p in m.props},
    }


def load_model(text: str) -> KripkeModel:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ModelError(f"not a valid document: {e}") from None
    return model_from_doc(doc)


def save_model(m: KripkeModel) -> str:
    return json.dumps(model_to_doc(m), indent=2) + "\n"


def _dot_escape(s):
    return s.replace("\\", "\\\\").replace('"', '\\"')


def to_dot(m: KripkeModel) -> str:
    """Graphviz digraph: nodes show the world label and its true props,
    edges are labelled with the agent name and grouped per agent."""
    lines = ["digraph model {"]
    for i, label in enumerate(m.labels):
        text = _dot_escape(label)
        props = m.true_props(i)
        if props:
            text += "\\n" + _dot_escape(",".join(props))
        lines.append(f'  w{i} [label="{text}"];')
    for a, r in m.relations.items():
        lines.append(f"  // agent {a}")
        for i, j in relation_pairs(r):
            lines.append(f'  w{i} -> w{j} [label="{_dot_escape(a)}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"

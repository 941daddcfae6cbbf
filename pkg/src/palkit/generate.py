"""Random formulas and models for differential testing."""
from __future__ import annotations

import random

from . import formula as F
from .kripke import FrameClass, KripkeModel, relation_from_partition

_LEAVES = ("atom", "atom", "atom", "top", "schematic")
_NODES = ("neg", "and", "or", "imp", "iff", "K", "E", "D", "C", "Cr", "ann", "ann")


def random_formula(rng: random.Random, depth: int, atoms=("p", "q"), agents=("a", "b"),
                   schematics=()):
    """Formula with at most ``depth`` nested operators above its leaves (so
    ``formula.depth`` is at most ``depth + 1``), drawing from every
    constructor. Groups are non-empty subsets of ``agents`` in order."""
    if depth <= 0 or rng.random() < 0.2:
        kind = rng.choice(_LEAVES)
        if schematics and (kind == "schematic" or not atoms):
            return F.Schematic(rng.choice(schematics))
        if kind == "top" or not atoms:
            return F.Top()
        return F.Atom(rng.choice(atoms))
    kind = rng.choice(_NODES)
    sub = lambda: random_formula(rng, depth - 1, atoms, agents, schematics)  # noqa: E731
    if kind == "neg":
        return F.Neg(sub())
    if kind in ("and", "or", "imp", "iff"):
        cls = {"and": F.And, "or": F.Or, "imp": F.Imp, "iff": F.Iff}[kind]
        return cls(sub(), sub())
    if kind == "K":
        return F.Know(rng.choice(agents), sub())
    if kind == "ann":
        return F.Announce(sub(), sub())
    group = tuple(a for a in agents if rng.random() < 0.6) or (rng.choice(agents),)
    if kind == "E":
        return F.EvKnow(group, sub())
    if kind == "D":
        return F.DistKnow(group, sub())
    if kind == "C":
        return F.CommonKnow(group, sub())
    return F.Rck(group, sub(), sub())


def random_partition(rng: random.Random, n: int) -> list:
    blocks = []
    for w in range(n):
        k = rng.randrange(len(blocks) + 1)
        if k == len(blocks):
            blocks.append([w])
        else:
            blocks[k].append(w)
    return blocks


def random_relation(rng: random.Random, n: int, density: float = 0.4) -> tuple:
    return tuple(sum(1 << j for j in range(n) if rng.random() < density) for _ in range(n))


def random_model(rng: random.Random, n: int, agents=("a", "b"), props=("p", "q"),
                 frame: FrameClass = FrameClass.S5) -> KripkeModel:
    rels = {}
    for a in agents:
        if frame is FrameClass.S5:
            rels[a] = relation_from_partition(n, random_partition(rng, n))
        else:
            rels[a] = random_relation(rng, n)
    val = {p: rng.getrandbits(n) for p in props}
    return KripkeModel([f"w{i + 1}" for i in range(n)], rels, val, props)

from hypothesis import strategies as st

from palkit import formula as F
from palkit.kripke import KripkeModel, relation_from_partition

ATOMS = ("p", "q")
AGENTS = ("a", "b")


def groups(agents=AGENTS):
    return st.lists(st.sampled_from(agents), min_size=1, max_size=len(agents), unique=True).map(
        lambda g: tuple(a for a in agents if a in g))


def formulas(depth=4, atoms=ATOMS, agents=AGENTS, schematics=()):
    leaves = [st.sampled_from(atoms).map(F.Atom), st.just(F.Top())]
    if schematics:
        leaves.append(st.sampled_from(schematics).map(F.Schematic))
    leaf = st.one_of(*leaves)
    if depth <= 0:
        return leaf
    sub = formulas(depth - 1, atoms, agents, schematics)
    return st.one_of(
        leaf,
        sub.map(F.Neg),
        st.builds(F.And, sub, sub),
        st.builds(F.Or, sub, sub),
        st.builds(F.Imp, sub, sub),
        st.builds(F.Iff, sub, sub),
        st.builds(F.Know, st.sampled_from(agents), sub),
        st.builds(F.EvKnow, groups(agents), sub),
        st.builds(F.DistKnow, groups(agents), sub),
        st.builds(F.CommonKnow, groups(agents), sub),
        st.builds(F.Rck, groups(agents), sub, sub),
        st.builds(F.Announce, sub, sub),
    )


@st.composite
def partitions(draw, n):
    blocks = []
    for w in range(n):
        k = draw(st.integers(0, len(blocks)))
        if k == len(blocks):
            blocks.append([w])
        else:
            blocks[k].append(w)
    return blocks


@st.composite
def models(draw, max_worlds=4, agents=AGENTS, props=ATOMS, s5=None):
    n = draw(st.integers(1, max_worlds))
    equiv = draw(st.booleans()) if s5 is None else s5
    rels = {}
    for a in agents:
        if equiv:
            rels[a] = relation_from_partition(n, draw(partitions(n)))
        else:
            rels[a] = tuple(draw(st.lists(st.integers(0, (1 << n) - 1), min_size=n, max_size=n)))
    val = {p: draw(st.integers(0, (1 << n) - 1)) for p in props}
    return KripkeModel([f"w{i + 1}" for i in range(n)], rels, val, props)

"""Built-in case studies: a small concrete model, the wise men puzzle, the
standard PAL axiom/rule suite and the uniform-substitution failures."""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Sequence

from . import formula as F
from .checker import (Countermodel, Mode, SearchBounds, ValidUpTo,
                      bounded_consequence, bounded_valid_lazy)
from .formula import (Announce, Atom, CommonKnow, Imp, Know, Neg, Or, disj,
                      parse, to_text)
from .kripke import FrameClass, KripkeModel, load_model, restrict
from .semantics import eval_direct, extension, valid_in_model

AGENT_NAMES = ("a", "b", "c", "d")

CONCRETE_MODEL_DOC = """{
  "worlds": ["w1", "w2", "w3"],
  "props": ["p"],
  "agents": {
    "a": {"partition": [["w1", "w2"], ["w3"]]},
    "b": {"partition": [["w1"], ["w2", "w3"]]}
  },
  "valuation": {"p": ["w1", "w2"]}
}
"""

CONCRETE_FORMULA = "p & K{a} p & K{b} p & ~K{a} K{b} p"


def concrete_model() -> KripkeModel:
    return load_model(CONCRETE_MODEL_DOC)


def concrete_model_demo() -> bool:
    """``p & K{a} p & K{b} p & ~K{a} K{b} p`` at ``w1`` of the concrete model."""
    return eval_direct(concrete_model(), parse(CONCRETE_FORMULA), "w1")


# -------------------------------------------------------------- wise men

def _ws(agent):
    return Atom(f"ws_{agent}")


def wise_men_model(n: int = 4) -> KripkeModel:
    """Canonical wise men model for ``n`` agents.

    Worlds are the spot assignments with at least one white spot, labelled
    ``W``/``B`` per agent in agent order and ordered by the bitmask of white
    spots (bit ``i`` for agent ``i``). Each agent sees every spot but their
    own, so two worlds are indistinguishable for agent ``i`` iff they differ
    at most in ``i``'s spot.
    """
    if n not in (3, 4):
        raise ValueError("wise men scenarios are defined for 3 or 4 agents")
    agents = AGENT_NAMES[:n]
    spots = list(range(1, 1 << n))
    labels = ["".join("W" if s >> i & 1 else "B" for i in range(n)) for s in spots]
    pos = {s: k for k, s in enumerate(spots)}
    rels = {}
    for i, a in enumerate(agents):
        rows = []
        for s in spots:
            row = 1 << pos[s]
            flip = s ^ (1 << i)
            if flip in pos:
                row |= 1 << pos[flip]
            rows.append(row)
        rels[a] = tuple(rows)
    val = {f"ws_{a}": sum(1 << pos[s] for s in spots if s >> i & 1) for i, a in enumerate(agents)}
    return KripkeModel(labels, rels, val, [f"ws_{a}" for a in agents])


def _doesnt_know(agent, disjunctive):
    k = Know(agent, _ws(agent))
    if disjunctive:
        return Neg(Or(k, Know(agent, Neg(_ws(agent)))))
    return Neg(k)


def wise_men_announcements(n: int, disjunctive: bool = False) -> list:
    return [_doesnt_know(a, disjunctive) for a in AGENT_NAMES[:n - 1]]


def wise_men_theorem(n: int = 4, disjunctive: bool = False):
    """``[!~K{a} ws_a] ... K{last} ws_last`` with ``n - 1`` announcements."""
    last = AGENT_NAMES[n - 1]
    f = Know(last, _ws(last))
    for ann in reversed(wise_men_announcements(n, disjunctive)):
        f = Announce(ann, f)
    return f


@dataclass
class WiseMenRun:
    holds: bool
    trace: list
    survivors: list
    formula: object

    def __bool__(self):
        return self.holds


def run_wise_men(n: int = 4, disjunctive: bool = False) -> WiseMenRun:
    """Check the nested announcement theorem in the canonical model and
    record the world count after each successive announcement."""
    m = wise_men_model(n)
    f = wise_men_theorem(n, disjunctive)
    trace = [m.n]
    cur = m
    for ann in wise_men_announcements(n, disjunctive):
        cur = restrict(cur, extension(cur, ann))
        trace.append(cur.n)
    return WiseMenRun(valid_in_model(m, f), trace, list(cur.labels), f)


def wm1(agents: Sequence[str]):
    """Common knowledge that some agent has a white spot."""
    return CommonKnow(tuple(agents), disj(*(_ws(a) for a in agents)))


def wm2(x: str, y: str, agents: Sequence[str]):
    """Common knowledge that if ``x`` has no white spot, ``y`` knows it."""
    return CommonKnow(tuple(agents), Imp(Neg(_ws(x)), Know(y, Neg(_ws(x)))))


def wm2_positive(x: str, y: str, agents: Sequence[str]):
    return CommonKnow(tuple(agents), Imp(_ws(x), Know(y, _ws(x))))


def wise_men_premises(agents: Sequence[str], include_wm1: bool = True) -> list:
    out = [wm1(agents)] if include_wm1 else []
    out += [wm2(x, y, agents) for x in agents for y in agents if x != y]
    return out


def _wise_bounds(bounds, n):
    agents = AGENT_NAMES[:n]
    bounds = bounds or SearchBounds()
    return SearchBounds(bounds.max_worlds, FrameClass.S5, agents,
                        tuple(f"ws_{a}" for a in agents), bounds.model_cap, bounds.time_cap)


def wise_men_axiomatic(n: int = 3, bounds: SearchBounds | None = None,
                       include_wm1: bool = True, mode: Mode = Mode.DIRECT, jobs: int = 1):
    """Bounded consequence from the puzzle axioms to the announcement
    theorem over all S5 models within ``bounds.max_worlds``."""
    b = _wise_bounds(bounds, n)
    return bounded_consequence(wise_men_premises(b.agents, include_wm1),
                               wise_men_theorem(n), b, mode, jobs)


def wm2_positive_lemma(bounds: SearchBounds | None = None, mode: Mode = Mode.DIRECT):
    """The positive counterpart of WM2ab follows from WM2ab under S5."""
    b = _wise_bounds(bounds, 3)
    return bounded_consequence([wm2("a", "b", b.agents)], wm2_positive("a", "b", b.agents), b, mode)


# ----------------------------------------------------------------- suites

@dataclass
class SuiteEntry:
    name: str
    formula: str
    mode: Mode
    frame: FrameClass
    verdict: object
    elapsed: float
    expected: str = "valid_up_to"
    premises: list = field(default_factory=list)
    note: str = ""

    @property
    def ok(self):
        return self.verdict.status == self.expected

    def to_doc(self):
        return {
            "name": self.name,
            "formula": self.formula,
            "premises": self.premises,
            "mode": self.mode.value,
            "frame": self.frame.value,
            "expected": self.expected,
            "ok": self.ok,
            "elapsed": round(self.elapsed, 6),
            "verdict": self.verdict.to_doc(),
            "note": self.note,
        }


@dataclass
class SuiteReport:
    title: str
    entries: list = field(default_factory=list)

    @property
    def ok(self):
        return all(e.ok for e in self.entries)

    def to_doc(self):
        return {"suite": self.title, "ok": self.ok, "entries": [e.to_doc() for e in self.entries]}

    def table(self) -> str:
        rows = [("row", "frame", "mode", "verdict", "models", "sec", "ok")]
        for e in self.entries:
            v = e.verdict
            if isinstance(v, ValidUpTo):
                desc = f"valid up to {v.worlds_checked}"
            elif isinstance(v, Countermodel):
                desc = f"countermodel ({v.model.n} world{'' if v.model.n == 1 else 's'})"
            else:
                desc = v.status
            rows.append((e.name, e.frame.value, e.mode.value, desc, str(v.models_checked),
                         f"{e.elapsed:.2f}", "yes" if e.ok else "NO"))
        widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
        lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows]
        lines.insert(1, "  ".join("-" * w for w in widths))
        lines.append(f"{self.title}: {'all rows as expected' if self.ok else 'DEVIATIONS FOUND'}")
        return "\n".join(lines)


_FREE_PROPS = ("p", "q", "r", "s", "t")


def atomic_instance(f, premises=()):
    """Replace schematic variables by fresh atoms (first unused of p, q, r, ...)."""
    used = set()
    names = []
    for g in list(premises) + [f]:
        used.update(F.atoms_of(g))
        names += [v for v in F.schematics_of(g) if v not in names]
    free = [p for p in _FREE_PROPS if p not in used]
    mapping = {"?" + v: Atom(free[i]) for i, v in enumerate(names)}
    return F.substitute(f, mapping), [F.substitute(p, mapping) for p in premises]


def _row_bounds(bounds, frame, agents, props, max_worlds=None):
    return SearchBounds(max_worlds or bounds.max_worlds, frame, tuple(agents), tuple(props),
                        bounds.model_cap, bounds.time_cap, bounds.max_denotation_worlds)


def _run_row(report, name, f, premises, mode, frame, agents, bounds, expected="valid_up_to",
             max_worlds=None, jobs=1):
    props = []
    for g in list(premises) + [f]:
        props += [p for p in F.atoms_of(g) if p not in props]
    b = _row_bounds(bounds, frame, agents, props, max_worlds)
    t0 = time.perf_counter()
    verdict = bounded_consequence(premises, f, b, mode, jobs)
    report.entries.append(SuiteEntry(name, to_text(f), mode, frame, verdict,
                                     time.perf_counter() - t0, expected,
                                     [to_text(p) for p in premises]))


K_, S5_ = FrameClass.K, FrameClass.S5

# (name, premises, conclusion, frame, agents); schematic templates
AXIOM_ROWS = [
    ("Axiom K", [], "K{a}(?phi -> ?psi) -> K{a} ?phi -> K{a} ?psi", K_, ("a",)),
    ("Modus ponens", ["?phi", "?phi -> ?psi"], "?psi", K_, ("a",)),
    ("Necessitation", ["?phi"], "K{a} ?phi", K_, ("a",)),
    ("Axiom T", [], "K{a} ?phi -> ?phi", S5_, ("a",)),
    ("Axiom 4", [], "K{a} ?phi -> K{a} K{a} ?phi", S5_, ("a",)),
    ("Axiom 5", [], "~K{a} ?phi -> K{a} ~K{a} ?phi", S5_, ("a",)),
    ("Atomic Permanence", [], "[!?phi] p <-> (?phi -> p)", K_, ("a",)),
    ("Conjunction", [], "[!?phi](?psi & ?chi) <-> [!?phi] ?psi & [!?phi] ?chi", K_, ("a",)),
    ("Partial Functionality", [], "[!?phi] ~?psi <-> (?phi -> ~[!?phi] ?psi)", K_, ("a",)),
    ("Action-Knowledge", [], "[!?phi] K{a} ?psi <-> (?phi -> K{a}(?phi -> [!?phi] ?psi))", K_, ("a",)),
    ("Announcement-RCK", [],
     "[!?phi] Cr{a}(?chi | ?psi) <-> (?phi -> Cr{a}(?phi & [!?phi] ?chi | [!?phi] ?psi))", K_, ("a",)),
    ("C-normality", [], "Cr{a,b}(?chi | ?phi -> ?psi) -> Cr{a,b}(?chi | ?phi) -> Cr{a,b}(?chi | ?psi)",
     S5_, ("a", "b")),
    ("Mix axiom", [], "Cr{a,b}(?psi | ?phi) <-> E{a,b}(?psi -> ?phi & Cr{a,b}(?psi | ?phi))",
     S5_, ("a", "b")),
    ("Induction axiom", [],
     "E{a,b}(?psi -> ?phi) & Cr{a,b}(?psi | ?phi -> E{a,b}(?psi -> ?phi)) -> Cr{a,b}(?psi | ?phi)",
     S5_, ("a", "b")),
    ("Announcement Nec.", ["?phi"], "[!?psi] ?phi", S5_, ("a",)),
    ("RCK Necessitation", ["?phi"], "Cr{a,b}(?psi | ?phi)", S5_, ("a", "b")),
]


def axiom_suite(bounds: SearchBounds | None = None, schematic: bool = False,
                rows: Sequence[str] | None = None, jobs: int = 1) -> SuiteReport:
    """Check every axiom and rule row; all are expected to be valid up to
    the bound.

    By default each schema is checked on its atomic instance (fresh props
    for the schematic variables) with the direct semantics. With
    ``schematic=True`` the variables range over every denotation and
    validity is domain-passing; keep ``bounds.max_worlds`` at 1 or 2 then.
    """
    bounds = bounds or SearchBounds()
    report = SuiteReport("axioms (schematic)" if schematic else "axioms")
    for name, prem, concl, frame, agents in AXIOM_ROWS:
        if rows is not None and name not in rows:
            continue
        f, ps = parse(concl), [parse(p) for p in prem]
        if schematic:
            mode = Mode.PVALID
        else:
            f, ps = atomic_instance(f, ps)
            mode = Mode.DIRECT
        _run_row(report, name, f, ps, mode, frame, agents, bounds, jobs=jobs)
    return report


SUBSTITUTION_PRINCIPLES = [
    ("(1)", "?phi -> ~[!?phi] ~?phi"),
    ("(2)", "?phi -> ~[!?phi] ~K{a} ?phi"),
    ("(3)", "?phi -> ~[!?phi](?phi & ~K{a} ?phi)"),
    ("(4)", "?phi & ~K{a} ?phi -> ~[!?phi & ~K{a} ?phi](?phi & ~K{a} ?phi)"),
    ("(5)", "K{a} ?phi -> ~[!?phi] ~K{a} ?phi"),
    ("(6)", "K{a} ?phi -> ~[!?phi](?phi & ~K{a} ?phi)"),
]

MOORE = "p & ~K{a} p"


def substitution_suite(bounds: SearchBounds | None = None, schematic_worlds: int = 2) -> SuiteReport:
    """Each principle with an atom (expected valid) and with a schematic
    variable (expected to have a countermodel), plus the Moore-sentence
    instance of (1) under the direct semantics.

    Schematic rows are searched exhaustively up to ``schematic_worlds``.
    Rows (3), (4) and (6) cannot fail with two worlds: refuting them needs
    two distinct worlds inside the updated domain ``d & phi(d)``, and with two
    worlds that forces ``phi`` true everywhere. Those rows fall back to the
    lazy search up to ``bounds.max_worlds``.
    """
    bounds = bounds or SearchBounds()
    report = SuiteReport("substitution")
    for name, text in SUBSTITUTION_PRINCIPLES:
        schema = parse(text)
        p = F.substitute(schema, {"?phi": Atom("p")})
        _run_row(report, f"{name} atomic", p, [], Mode.PVALID, S5_, ("a",), bounds)
        _run_row(report, f"{name} schematic", schema, [], Mode.PVALID, S5_, ("a",), bounds,
                 expected="countermodel", max_worlds=schematic_worlds)
        row = report.entries[-1]
        if isinstance(row.verdict, ValidUpTo) and bounds.max_worlds > schematic_worlds:
            # exhaustive tables stop being feasible here; read only what is used
            b = _row_bounds(bounds, S5_, ("a",), ())
            t0 = time.perf_counter()
            row.verdict = bounded_valid_lazy(schema, b, Mode.PVALID)
            row.elapsed += time.perf_counter() - t0
            row.note = (f"no countermodel within {schematic_worlds} worlds; "
                        f"lazy search up to {bounds.max_worlds}")
    moore = F.substitute(parse(SUBSTITUTION_PRINCIPLES[0][1]), {"?phi": parse(MOORE)})
    _run_row(report, "(1) Moore instance", moore, [], Mode.DIRECT, S5_, ("a",), bounds,
             expected="countermodel")
    return report


def necessitation_pitfall(max_worlds: int = 2) -> dict:
    """Announcement necessitation with schematic variables under full-domain
    validity and under all-domain validity."""
    prem, concl = [parse("?phi")], parse("[!?psi] ?phi")
    b = SearchBounds(max_worlds, S5_, ("a",), ())
    return {mode: bounded_consequence(prem, concl, b, mode) for mode in (Mode.TVALID, Mode.PVALID)}


def wise_men_axiomatic_report(bounds: SearchBounds | None = None, jobs: int = 1) -> SuiteReport:
    """The axiomatic wise men checks as one report: the theorem from the
    full axiom set, the positive lemma, and the failure without WM1."""
    report = SuiteReport("wise men (axiomatic)")
    b = _wise_bounds(bounds, 3)
    checks = [
        ("theorem from WM1 + WM2", wise_men_premises(b.agents), wise_men_theorem(3), "valid_up_to"),
        ("WM2ab positive lemma", [wm2("a", "b", b.agents)], wm2_positive("a", "b", b.agents), "valid_up_to"),
        ("theorem without WM1", wise_men_premises(b.agents, False), wise_men_theorem(3), "countermodel"),
    ]
    for name, prem, concl, expected in checks:
        t0 = time.perf_counter()
        v = bounded_consequence(prem, concl, b, Mode.DIRECT, jobs)
        report.entries.append(SuiteEntry(name, to_text(concl), Mode.DIRECT, S5_, v,
                                         time.perf_counter() - t0, expected,
                                         [to_text(p) for p in prem]))
    return report

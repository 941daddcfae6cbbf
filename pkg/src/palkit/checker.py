"""Bounded validity and consequence by exhaustive model enumeration.

A ``ValidUpTo`` verdict only says that no countermodel exists among the
enumerated models; it is not a proof of validity. A ``Countermodel`` is
always re-checked against a fresh evaluator before it is returned.

Search order is deterministic: world counts ascending, then frames (agents
in bound order, each agent's relations in enumeration order), then
valuations (props in bound order), then schematic assignments (variables by
name, denotations by table index). The first failure in this order wins,
also when the search is split across worker processes.
"""
from __future__ import annotations

import enum
import itertools
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from . import formula as F
from .errors import CapExceeded, PalError, UnknownAgent
from .kripke import (FrameClass, KripkeModel, full_set, members, model_to_doc,
                     relation_from_partition)
from .semantics import (Denotation, _Direct, _Sse, direct_failure, eval_direct,
                        eval_sse, pvalid_failure, tvalid_failure)

__all__ = [
    "Mode", "SearchBounds", "ValidUpTo", "Countermodel", "Inconclusive",
    "set_partitions", "bell", "enumerate_models", "count_models",
    "enumerate_denotations", "bounded_valid", "bounded_consequence", "bounded_valid_lazy",
]

DEFAULT_MODEL_CAP = 10 ** 7


class Mode(enum.Enum):
    DIRECT = "direct"
    PVALID = "pvalid"
    TVALID = "tvalid"


@dataclass(frozen=True)
class SearchBounds:
    max_worlds: int = 3
    frame_class: FrameClass = FrameClass.S5
    agents: tuple = ("a",)
    props: tuple = ()
    model_cap: int | None = DEFAULT_MODEL_CAP
    time_cap: float | None = None
    max_denotation_worlds: int = 3

    def __post_init__(self):
        object.__setattr__(self, "agents", tuple(self.agents))
        object.__setattr__(self, "props", tuple(self.props))
        if self.max_worlds < 1:
            raise ValueError("max_worlds must be at least 1")
        if not self.agents:
            raise ValueError("at least one agent is required")
        if len(set(self.agents)) != len(self.agents) or len(set(self.props)) != len(self.props):
            raise ValueError("agents and props must be distinct")

    def to_doc(self):
        return {
            "max_worlds": self.max_worlds,
            "frame": self.frame_class.value,
            "agents": list(self.agents),
            "props": list(self.props),
            "model_cap": self.model_cap,
            "time_cap": self.time_cap,
        }


@dataclass
class ValidUpTo:
    worlds_checked: int
    models_checked: int
    elapsed: float = 0.0
    status = "valid_up_to"

    def to_doc(self, bounds=None):
        doc = {"status": self.status, "worlds_checked": self.worlds_checked,
               "models_checked": self.models_checked, "elapsed": round(self.elapsed, 6)}
        if bounds is not None:
            doc["bounds"] = bounds.to_doc()
        return doc


@dataclass
class Countermodel:
    """``formula`` fails at ``world`` of ``model``; ``domain`` is the
    evaluation domain for the domain-passing modes and ``env`` the schematic
    assignment. ``premises`` all hold in the model."""

    model: KripkeModel
    world: int
    formula: object
    mode: Mode
    domain: int | None = None
    env: dict = field(default_factory=dict)
    premises: tuple = ()
    models_checked: int = 0
    elapsed: float = 0.0
    status = "countermodel"

    def recheck(self) -> bool:
        """True iff the reported data really refutes the formula."""
        return _confirms(self.model, self.premises, self.formula, self.mode,
                         self.world, self.domain, self.env)

    def to_doc(self, bounds=None):
        m = self.model
        doc = {
            "status": self.status,
            "models_checked": self.models_checked,
            "elapsed": round(self.elapsed, 6),
            "mode": self.mode.value,
            "formula": F.to_text(self.formula),
            "premises": [F.to_text(p) for p in self.premises],
            "model": model_to_doc(m),
            "world": m.labels[self.world],
            "worlds": m.n,
        }
        if self.domain is not None:
            doc["domain"] = m.labels_of(self.domain)
        if self.env:
            doc["denotations"] = {name: den.listing(m.labels) for name, den in sorted(self.env.items())}
        if bounds is not None:
            doc["bounds"] = bounds.to_doc()
        return doc


@dataclass
class Inconclusive:
    reason: str
    models_checked: int = 0
    elapsed: float = 0.0
    status = "inconclusive"

    def to_doc(self, bounds=None):
        doc = {"status": self.status, "reason": self.reason,
               "models_checked": self.models_checked, "elapsed": round(self.elapsed, 6)}
        if bounds is not None:
            doc["bounds"] = bounds.to_doc()
        return doc


# ------------------------------------------------------------ enumeration

def set_partitions(n: int) -> list:
    """All partitions of ``range(n)`` as lists of blocks, generated from
    restricted growth strings in lexicographic order."""
    out = []

    def grow(i, labels, top):
        if i == n:
            blocks = [[] for _ in range(top)]
            for w, b in enumerate(labels):
                blocks[b].append(w)
            out.append(blocks)
            return
        for b in range(top + 1):
            labels.append(b)
            grow(i + 1, labels, max(top, b + 1))
            labels.pop()

    if n == 0:
        return [[]]
    grow(0, [], 0)
    return out


def bell(n: int) -> int:
    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
    return row[0]


_REL_CACHE = {}


def _agent_relations(fc: FrameClass, n: int) -> list:
    key = (fc, n)
    rels = _REL_CACHE.get(key)
    if rels is None:
        if fc is FrameClass.S5:
            rels = [relation_from_partition(n, p) for p in set_partitions(n)]
        else:
            full = full_set(n)
            rels = [tuple((k >> (i * n)) & full for i in range(n)) for k in range(1 << (n * n))]
        _REL_CACHE[key] = rels
    return rels


def count_models(b: SearchBounds, n: int) -> int:
    per_agent = bell(n) if b.frame_class is FrameClass.S5 else 1 << (n * n)
    return per_agent ** len(b.agents) * (1 << n) ** len(b.props)


def _labels(n):
    return tuple(f"w{i + 1}" for i in range(n))


def enumerate_models(b: SearchBounds, n: int) -> Iterator[KripkeModel]:
    """Every model with exactly ``n`` worlds admitted by ``b``, in a fixed
    order; no isomorphism reduction."""
    if not 1 <= n <= b.max_worlds:
        raise ValueError(f"world count {n} outside 1..{b.max_worlds}")
    if b.model_cap is not None and count_models(b, n) > b.model_cap:
        raise CapExceeded(count_models(b, n), b.model_cap)
    return _models(b, n)


def _models(b, n, start=0, stop=None):
    labels = _labels(n)
    rels = _agent_relations(b.frame_class, n)
    frames = itertools.product(rels, repeat=len(b.agents))
    vals = range(1 << n)
    stream = itertools.product(frames, itertools.product(vals, repeat=len(b.props)))
    if start or stop is not None:
        stream = itertools.islice(stream, start, stop)
    agents, props = b.agents, b.props
    for frame, val in stream:
        yield KripkeModel(labels, dict(zip(agents, frame)), dict(zip(props, val)), props, check=False)


def enumerate_denotations(m: KripkeModel, max_worlds: int = 3) -> Iterator[Denotation]:
    """All ``2**(n * 2**n)`` (domain, world) tables over ``m``'s worlds."""
    n = m.n if isinstance(m, KripkeModel) else int(m)
    if n > max_worlds:
        raise CapExceeded(_denotation_count(n), f"{max_worlds} worlds", "denotations")
    return (Denotation.from_index(n, k) for k in range(_denotation_count(n)))


def _denotation_count(n):
    return 1 << (n << n)


# ------------------------------------------------------------------ search

def _failure(m, f, mode, env, ev):
    """``None`` if ``f`` holds in ``m`` under ``mode``, else ``(world, domain)``."""
    if mode is Mode.DIRECT:
        w = direct_failure(m, f, ev)
        return None if w is None else (w, None)
    if mode is Mode.PVALID:
        hit = pvalid_failure(m, f, env, ev)
        return None if hit is None else (hit[1], hit[0])
    w = tvalid_failure(m, f, env, ev)
    return None if w is None else (w, m.full)


def _confirms(m, premises, f, mode, world, domain, env):
    for p in premises:
        if _failure(m, p, mode, env, _evaluator(m, mode, env)) is not None:
            return False
    if mode is Mode.DIRECT:
        return not eval_direct(m, f, world)
    return not eval_sse(m, f, domain, world, env)


def _evaluator(m, mode, env):
    return _Direct(m) if mode is Mode.DIRECT else _Sse(m, env)


class _Timeout(Exception):
    pass


class _Search:
    """Sequential search state shared by the single- and multi-process paths."""

    def __init__(self, premises, conclusion, mode, max_den_worlds, deadline):
        self.premises = tuple(premises)
        self.conclusion = conclusion
        self.mode = mode
        self.max_den_worlds = max_den_worlds
        self.deadline = deadline
        names = set()
        for g in self.premises + (conclusion,):
            names.update(F.schematics_of(g))
        self.vars = sorted(names)
        # premises become checkable once all their variables are assigned
        self.stages = [[] for _ in range(len(self.vars) + 1)]
        for p in self.premises:
            used = set(F.schematics_of(p))
            k = max((self.vars.index(v) + 1 for v in used), default=0)
            self.stages[k].append(p)
        self.ticks = 0

    def check_time(self):
        if self.deadline is not None and time.perf_counter() > self.deadline:
            raise _Timeout

    def model(self, m):
        """Countermodel data ``(world, domain, env)`` for ``m``, or ``None``."""
        if not self.vars:
            ev = _evaluator(m, self.mode, None)
            for p in self.premises:
                if _failure(m, p, self.mode, None, ev) is not None:
                    return None
            hit = _failure(m, self.conclusion, self.mode, None, ev)
            return None if hit is None else (hit[0], hit[1], {})
        if m.n > self.max_den_worlds:
            raise CapExceeded(_denotation_count(m.n), f"{self.max_den_worlds} worlds", "denotations")
        return self._assign(m, 0, {})

    def _assign(self, m, k, env):
        for p in self.stages[k]:
            if _failure(m, p, self.mode, env, _Sse(m, env)) is not None:
                return None
        if k == len(self.vars):
            self.ticks += 1
            if not self.ticks & 0xFFF:
                self.check_time()
            hit = _failure(m, self.conclusion, self.mode, env, _Sse(m, env))
            return None if hit is None else (hit[0], hit[1], dict(env))
        name = self.vars[k]
        for den in enumerate_denotations(m, self.max_den_worlds):
            env[name] = den
            hit = self._assign(m, k + 1, env)
            if hit is not None:
                return hit
        del env[name]
        return None

    def run(self, models):
        """Scan ``models``; returns ``(checked, model, hit)`` where ``hit``
        is ``None`` when no countermodel was found."""
        checked = 0
        for m in models:
            checked += 1
            self.check_time()
            hit = self.model(m)
            if hit is not None:
                return checked, m, hit
        return checked, None, None


def _prepare(premises, conclusion, b, mode):
    for g in list(premises) + [conclusion]:
        missing = [a for a in F.agents_of(g) if a not in b.agents]
        if missing:
            raise UnknownAgent(missing[0])
        extra = [p for p in F.atoms_of(g) if p not in b.props]
        if extra:
            raise PalError(f"proposition {extra[0]!r} is not in the search bounds")
        if mode is Mode.DIRECT and F.schematics_of(g):
            raise PalError("schematic variables need pvalid or tvalid mode")
    nvars = len({v for g in list(premises) + [conclusion] for v in F.schematics_of(g)})
    if b.model_cap is not None:
        projected = 0
        for n in range(1, b.max_worlds + 1):
            per_model = _denotation_count(n) ** nvars if nvars else 1
            projected += count_models(b, n) * per_model
        if projected > b.model_cap:
            raise CapExceeded(projected, b.model_cap)


def _jobs(jobs):
    env = os.environ.get("PALKIT_JOBS")
    if env:
        jobs = int(env)
    return max(1, jobs or 1)


def bounded_consequence(premises: Sequence, conclusion, b: SearchBounds,
                        mode: Mode = Mode.DIRECT, jobs: int = 1):
    """Global consequence up to ``b.max_worlds`` worlds: in every enumerated
    model where all premises are valid, the conclusion must be valid too.

    Validity inside one model follows ``mode``: truth at every world
    (``DIRECT``), domain-passing truth for every domain and member world
    (``PVALID``), or for the full domain only (``TVALID``). Schematic
    variables range over every denotation of the model.
    """
    premises = tuple(premises)
    _prepare(premises, conclusion, b, mode)
    start = time.perf_counter()
    deadline = start + b.time_cap if b.time_cap is not None else None
    jobs = _jobs(jobs)
    if jobs > 1:
        return _parallel(premises, conclusion, b, mode, jobs, start, deadline)
    search = _Search(premises, conclusion, mode, b.max_denotation_worlds, deadline)
    total = 0
    try:
        for n in range(1, b.max_worlds + 1):
            checked, m, hit = search.run(_models(b, n))
            total += checked
            if hit is not None:
                return _countermodel(m, hit, conclusion, premises, mode, total, start)
    except _Timeout:
        return Inconclusive("time cap reached", total, time.perf_counter() - start)
    return ValidUpTo(b.max_worlds, total, time.perf_counter() - start)


def bounded_valid(f, b: SearchBounds, mode: Mode = Mode.DIRECT, jobs: int = 1):
    return bounded_consequence((), f, b, mode, jobs)


def _countermodel(m, hit, conclusion, premises, mode, total, start):
    world, domain, env = hit
    cm = Countermodel(m, world, conclusion, mode, domain, env, premises, total,
                      time.perf_counter() - start)
    if not cm.recheck():
        raise AssertionError("countermodel does not re-check; evaluator inconsistency")
    return cm


def _chunk_worker(args):
    premises, conclusion, b, mode, n, lo, hi, deadline = args
    search = _Search(premises, conclusion, mode, b.max_denotation_worlds, deadline)
    try:
        checked, m, hit = search.run(_models(b, n, lo, hi))
    except _Timeout:
        return ("timeout", n, lo, None, None)
    if hit is None:
        return ("ok", n, lo, checked, None)
    return ("cm", n, lo, checked, (m, hit))


def _parallel(premises, conclusion, b, mode, jobs, start, deadline):
    tasks = []
    offsets = {}
    base = 0
    for n in range(1, b.max_worlds + 1):
        count = count_models(b, n)
        offsets[n] = base
        base += count
        step = max(1, -(-count // (jobs * 4)))
        for lo in range(0, count, step):
            tasks.append((premises, conclusion, b, mode, n, lo, min(count, lo + step), deadline))
    best = None
    checked = 0
    timed_out = False
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        for kind, n, lo, cnt, payload in pool.map(_chunk_worker, tasks):
            if kind == "timeout":
                timed_out = True
            elif kind == "ok":
                checked += cnt
            else:
                pos = offsets[n] + lo + cnt
                if best is None or pos < best[0]:
                    best = (pos, payload)
    if best is not None:
        pos, (m, hit) = best
        return _countermodel(m, hit, conclusion, premises, mode, pos, start)
    if timed_out:
        return Inconclusive("time cap reached", checked, time.perf_counter() - start)
    return ValidUpTo(b.max_worlds, checked, time.perf_counter() - start)


# ------------------------------------------------------ lazy schematic search

class _Need(Exception):
    def __init__(self, name, d):
        self.name, self.d = name, d


class _Rows(dict):
    def __init__(self, name, rows):
        super().__init__(rows)
        self.name = name

    def __missing__(self, d):
        raise _Need(self.name, d)


class _LazyDen:
    """Denotation stand-in whose rows are chosen on first use."""

    def __init__(self, n, name, rows):
        self.n = n
        self.table = _Rows(name, rows)


def _lazy_target(m, f, mode, d, rows, names, search):
    """Depth-first over the denotation rows that evaluating ``f`` in domain
    ``d`` actually reads. Returns ``(world, rows)`` for the first failure."""
    search.check_time()
    env = {v: _LazyDen(m.n, v, rows[v]) for v in names}
    try:
        bad = d & ~_Sse(m, env).ext(f, d)
    except _Need as need:
        for s in range(1 << m.n):
            rows[need.name][need.d] = s
            hit = _lazy_target(m, f, mode, d, rows, names, search)
            if hit is not None:
                return hit
        del rows[need.name][need.d]
        return None
    if not bad:
        return None
    return (bad & -bad).bit_length() - 1, {v: dict(r) for v, r in rows.items()}


def bounded_valid_lazy(f, b: SearchBounds, mode: Mode = Mode.PVALID):
    """Schematic validity search that only branches on denotation entries
    the evaluation consults.

    Exhaustive tables are out of reach beyond two worlds (``2**24`` per
    variable at three), but refuting ``f`` at one domain usually reads just a
    few rows. Unread rows of a reported denotation are all-false. The result
    agrees with :func:`bounded_valid` on validity; the reported countermodel
    may differ from the lexicographically first one.
    """
    if mode is Mode.DIRECT:
        raise PalError("lazy search is for the pvalid and tvalid modes")
    _prepare((), f, SearchBounds(1, b.frame_class, b.agents, b.props, None), mode)
    start = time.perf_counter()
    deadline = start + b.time_cap if b.time_cap is not None else None
    search = _Search((), f, mode, 0, deadline)
    names = search.vars
    total = 0
    try:
        for n in range(1, b.max_worlds + 1):
            for m in _models(b, n):
                total += 1
                domains = range(1, 1 << n) if mode is Mode.PVALID else (m.full,)
                for d in domains:
                    hit = _lazy_target(m, f, mode, d, {v: {} for v in names}, names, search)
                    if hit is None:
                        continue
                    world, rows = hit
                    env = {v: Denotation(n, tuple(rows[v].get(k, 0) for k in range(1 << n)))
                           for v in names}
                    return _countermodel(m, (world, d, env), f, (), mode, total, start)
    except _Timeout:
        return Inconclusive("time cap reached", total, time.perf_counter() - start)
    return ValidUpTo(b.max_worlds, total, time.perf_counter() - start)

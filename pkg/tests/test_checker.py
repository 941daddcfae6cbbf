import json
import random

import pytest

from palkit import formula as F
from palkit.checker import (Countermodel, Inconclusive, Mode, SearchBounds, ValidUpTo, bell,
                            bounded_consequence, bounded_valid, bounded_valid_lazy, count_models,
                            enumerate_denotations, enumerate_models, set_partitions)
from palkit.errors import CapExceeded, PalError, UnknownAgent
from palkit.formula import parse
from palkit.generate import random_formula, random_model
from palkit.kripke import FrameClass, is_equivalence, partition_of, satisfies_frame
from palkit.semantics import Denotation, sse_table

from oracles import brute_partitions

S5, KC = FrameClass.S5, FrameClass.K


def B(n, frame=S5, agents=("a",), props=(), **kw):
    return SearchBounds(n, frame, agents, props, **kw)


@pytest.mark.parametrize("n, expected", [(1, 1), (2, 2), (3, 5), (4, 15)])
def test_bell_numbers(n, expected):
    parts = set_partitions(n)
    assert len(parts) == bell(n) == expected
    assert {frozenset(frozenset(b) for b in p) for p in parts} == brute_partitions(n)


def test_model_counts():
    assert len(list(enumerate_models(B(3), 3))) == 5
    assert len(list(enumerate_models(B(2, KC), 2))) == 16
    b = B(3, agents=("a", "b", "c"), props=("p", "q", "r"))
    assert count_models(b, 3) == 64000
    assert sum(1 for _ in enumerate_models(b, 3)) == 64000


def test_enumerated_models_are_distinct_and_in_class():
    b = B(3, agents=("a", "b"), props=("p",))
    seen = set()
    for m in enumerate_models(b, 3):
        assert satisfies_frame(m, S5)
        seen.add(m)
    assert len(seen) == 5 * 5 * 8
    kmods = list(enumerate_models(B(2, KC, props=("p",)), 2))
    assert len(set(kmods)) == len(kmods) == 64


def test_enumeration_order_is_stable():
    b = B(2, agents=("a", "b"), props=("p",))
    first = list(enumerate_models(b, 2))
    assert first == list(enumerate_models(b, 2))
    # frames outer, valuations inner
    assert [m.prop("p") for m in first[:4]] == [0, 1, 2, 3]
    assert all(partition_of(m.relation("a")) == [[0, 1]] for m in first[:8])
    assert partition_of(first[8].relation("a")) == [[0], [1]]


def test_model_cap_guard():
    b = B(3, KC, agents=("a", "b", "c"), props=("p",), model_cap=1000)
    with pytest.raises(CapExceeded):
        list(enumerate_models(b, 3))
    with pytest.raises(CapExceeded):
        bounded_valid(parse("p"), b)


def test_denotation_enumeration():
    m1 = next(enumerate_models(B(1), 1))
    m2 = next(enumerate_models(B(2), 2))
    assert len(list(enumerate_denotations(m1))) == 4
    dens = list(enumerate_denotations(m2))
    assert len(dens) == 256 and len(set(dens)) == 256
    with pytest.raises(CapExceeded):
        enumerate_denotations(4)


def test_every_meaning_is_a_denotation():
    rng = random.Random(2)
    for _ in range(100):
        m = random_model(rng, 2, agents=("a",), props=("p",))
        t = sse_table(m, random_formula(rng, 3, atoms=("p",), agents=("a",)))
        assert Denotation.from_index(2, t.index) == t
        assert 0 <= t.index < 256


def test_axiom_k_and_t():
    b = B(3, KC, props=("p", "q"))
    assert isinstance(bounded_valid(parse("K{a}(p -> q) -> K{a} p -> K{a} q"), b), ValidUpTo)
    cm = bounded_valid(parse("K{a} p -> p"), B(2, KC, props=("p",)))
    assert isinstance(cm, Countermodel) and cm.recheck()
    w = cm.world
    assert not cm.model.relation("a")[w] >> w & 1
    v = bounded_valid(parse("K{a} p -> p"), B(3, props=("p",)))
    assert isinstance(v, ValidUpTo) and v.worlds_checked == 3 and v.models_checked == 8 * 5 + 4 * 2 + 2


def test_axiom_5_needs_euclidean_frames():
    f = parse("~K{a} p -> K{a} ~K{a} p")
    cm = bounded_valid(f, B(3, KC, props=("p",)))
    assert isinstance(cm, Countermodel) and cm.model.n == 2
    assert isinstance(bounded_valid(f, B(3, props=("p",))), ValidUpTo)


def test_schematic_moore_countermodel():
    cm = bounded_valid(parse("?phi -> ~[!?phi](~?phi)"), B(2), Mode.PVALID)
    assert isinstance(cm, Countermodel) and cm.model.n == 2
    assert set(cm.env) == {"phi"} and cm.recheck()
    phi = cm.env["phi"]
    # true exactly at the first world of the full domain
    assert phi.table == (0, 0, 0, 1)
    assert cm.world == 0 and cm.domain == 0b11


def test_announcement_necessitation_pitfall():
    prem, concl = [parse("?phi")], parse("[!?psi] ?phi")
    cm = bounded_consequence(prem, concl, B(2), Mode.TVALID)
    assert isinstance(cm, Countermodel) and cm.model.n == 2 and cm.recheck()
    assert isinstance(bounded_consequence(prem, concl, B(2), Mode.PVALID), ValidUpTo)


def test_consequence_trivial_failure():
    cm = bounded_consequence([], parse("p"), B(2, props=("p",)))
    assert isinstance(cm, Countermodel) and cm.models_checked == 1


def test_premises_must_hold_in_countermodels():
    cm = bounded_consequence([parse("p -> q")], parse("q"), B(2, props=("p", "q")))
    assert isinstance(cm, Countermodel)
    m = cm.model
    assert m.prop("p") & ~m.prop("q") & m.full == 0
    assert cm.recheck()


def test_bounds_are_checked():
    with pytest.raises(UnknownAgent):
        bounded_valid(parse("K{b} p"), B(2, props=("p",)))
    with pytest.raises(PalError):
        bounded_valid(parse("q"), B(2, props=("p",)))
    with pytest.raises(PalError):
        bounded_valid(parse("?x"), B(2))
    with pytest.raises(ValueError):
        SearchBounds(0)
    with pytest.raises(ValueError):
        SearchBounds(2, agents=())


def test_time_cap_gives_inconclusive():
    b = B(3, agents=("a", "b", "c"), props=("p", "q", "r"), time_cap=0.0)
    v = bounded_valid(parse("p | ~p"), b)
    assert isinstance(v, Inconclusive)


def test_schematic_search_cap():
    with pytest.raises(CapExceeded):
        bounded_valid(parse("?x"), B(3), Mode.PVALID)


def test_direct_and_pvalid_agree_without_schematics():
    rng = random.Random(9)
    b = B(2, agents=("a", "b"), props=("p",))
    for _ in range(60):
        f = random_formula(rng, 3, atoms=("p",), agents=("a", "b"))
        d = bounded_valid(f, b, Mode.DIRECT)
        pv = bounded_valid(f, b, Mode.PVALID)
        assert d.status == pv.status
        tv = bounded_valid(f, b, Mode.TVALID)
        if pv.status == "valid_up_to":
            assert tv.status == "valid_up_to"


def test_tvalid_is_weaker_on_schematic_formulas():
    rng = random.Random(4)
    b = B(1)
    for _ in range(60):
        f = random_formula(rng, 3, atoms=("p",), agents=("a",), schematics=("x",))
        atoms = F.atoms_of(f)
        bb = B(2, props=tuple(atoms)) if atoms else b
        if bounded_valid(f, bb, Mode.PVALID).status == "valid_up_to":
            assert bounded_valid(f, bb, Mode.TVALID).status == "valid_up_to"


def test_lazy_search_agrees_with_exhaustive():
    rng = random.Random(12)
    for _ in range(40):
        f = random_formula(rng, 3, atoms=(), agents=("a",), schematics=("x", "y"))
        if not F.schematics_of(f) or len(F.schematics_of(f)) > 1:
            continue
        for mode in (Mode.PVALID, Mode.TVALID):
            ex = bounded_valid(f, B(2), mode)
            lz = bounded_valid_lazy(f, B(2), mode)
            assert ex.status == lz.status
            if isinstance(lz, Countermodel):
                assert lz.recheck()


def test_lazy_search_reaches_three_worlds():
    f = parse("?phi -> ~[!?phi](?phi & ~K{a} ?phi)")
    assert isinstance(bounded_valid(f, B(2), Mode.PVALID), ValidUpTo)
    cm = bounded_valid_lazy(f, B(3), Mode.PVALID)
    assert isinstance(cm, Countermodel) and cm.model.n == 3 and cm.recheck()
    with pytest.raises(PalError):
        bounded_valid_lazy(f, B(3), Mode.DIRECT)


def test_parallel_search_reports_first_countermodel():
    f = parse("K{a} p -> K{b} p")
    b = B(3, agents=("a", "b"), props=("p",))
    seq = bounded_valid(f, b)
    par = bounded_valid(f, b, jobs=2)
    assert isinstance(seq, Countermodel)
    assert par.model == seq.model and par.world == seq.world
    assert par.models_checked == seq.models_checked
    ok = bounded_valid(parse("K{a} p -> p"), b, jobs=2)
    assert isinstance(ok, ValidUpTo) and ok.models_checked == bounded_valid(parse("K{a} p -> p"), b).models_checked


def test_jobs_from_environment(monkeypatch):
    monkeypatch.setenv("PALKIT_JOBS", "2")
    b = B(2, agents=("a", "b"), props=("p",))
    v = bounded_valid(parse("K{a} p -> K{b} p"), b, jobs=1)
    assert isinstance(v, Countermodel)


def test_verdict_documents():
    cm = bounded_valid(parse("?phi -> ~[!?phi](~?phi)"), B(2), Mode.PVALID)
    b = B(2)
    doc = json.loads(json.dumps(cm.to_doc(b)))
    assert doc["status"] == "countermodel" and doc["world"] == "w1"
    assert doc["domain"] == ["w1", "w2"] and len(doc["denotations"]["phi"]) == 8
    assert doc["bounds"]["max_worlds"] == 2
    v = bounded_valid(parse("p | ~p"), B(2, props=("p",)))
    doc = json.loads(json.dumps(v.to_doc()))
    assert doc == {"status": "valid_up_to", "worlds_checked": 2, "models_checked": 10,
                   "elapsed": doc["elapsed"]}


def test_s5_relations_from_partitions():
    for m in enumerate_models(B(4), 4):
        assert is_equivalence(m.relation("a"))

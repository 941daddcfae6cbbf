import pytest

from palkit import formula as F
from palkit import scenarios as S
from palkit.checker import Countermodel, Mode, SearchBounds, ValidUpTo
from palkit.kripke import FrameClass, partition_of, restrict, satisfies_frame
from palkit.semantics import extension, valid_in_model

from oracles import wise_men_oracle


def test_concrete_demo():
    assert S.concrete_model_demo() is True


@pytest.mark.parametrize("n, worlds", [(3, 7), (4, 15)])
def test_wise_men_model_shape(n, worlds):
    m = S.wise_men_model(n)
    assert m.n == worlds
    assert satisfies_frame(m, FrameClass.S5)
    assert m.props == tuple(f"ws_{a}" for a in "abcd"[:n])
    for a in m.agents:
        assert all(len(block) <= 2 for block in partition_of(m.relation(a)))


def test_wise_men_model_rejects_other_sizes():
    with pytest.raises(ValueError):
        S.wise_men_model(5)


@pytest.mark.parametrize("n", [3, 4])
def test_wise_men_axioms_hold_in_canonical_model(n):
    m = S.wise_men_model(n)
    for f in S.wise_men_premises(m.agents):
        assert valid_in_model(m, f)


@pytest.mark.parametrize("n", [3, 4])
def test_wise_men_trace_matches_oracle(n):
    run = S.run_wise_men(n)
    counts, alive, final = wise_men_oracle(n)
    assert run.holds and final
    assert run.trace == counts
    labels = ["".join("W" if x else "B" for x in s) for s in alive]
    assert sorted(run.survivors) == sorted(labels)


def test_wise_men_golden_counts():
    run = S.run_wise_men(4)
    assert bool(run) and run.trace == [15, 14, 12, 8]
    assert all(label[3] == "W" for label in run.survivors)
    assert S.run_wise_men(3).trace == [7, 6, 4]


@pytest.mark.parametrize("n", [3, 4])
def test_wise_men_disjunctive_variant(n):
    assert S.run_wise_men(n, disjunctive=True).holds


def test_first_announcement_leaves_fourteen_worlds():
    m = S.wise_men_model(4)
    assert restrict(m, extension(m, F.Neg(F.Know("a", F.Atom("ws_a"))))).n == 14


def test_c_does_not_yet_know_after_two_announcements():
    cur = S.wise_men_model(4)
    for ann in S.wise_men_announcements(4)[:2]:
        cur = restrict(cur, extension(cur, ann))
    assert not valid_in_model(cur, F.Know("c", F.Atom("ws_c")))


def test_wise_men_axiomatic():
    v = S.wise_men_axiomatic()
    assert isinstance(v, ValidUpTo) and v.models_checked == 64520


def test_wise_men_needs_some_white_spot():
    cm = S.wise_men_axiomatic(include_wm1=False)
    assert isinstance(cm, Countermodel) and cm.recheck()
    m = cm.model
    w = cm.world
    assert not any(m.prop(p) >> w & 1 for p in m.props)


def test_wm2_positive_lemma():
    assert isinstance(S.wm2_positive_lemma(), ValidUpTo)


def test_wise_men_axiomatic_report():
    report = S.wise_men_axiomatic_report(SearchBounds(2))
    assert report.ok and len(report.entries) == 3


def test_axiom_suite_rows():
    names = [row[0] for row in S.AXIOM_ROWS]
    assert len(names) == len(set(names)) == 16
    report = S.axiom_suite(SearchBounds(2))
    assert report.ok
    assert [e.name for e in report.entries] == names
    assert all(isinstance(e.verdict, ValidUpTo) and e.verdict.worlds_checked == 2 for e in report.entries)


def test_axiom_suite_schematic_small():
    report = S.axiom_suite(SearchBounds(1), schematic=True)
    assert report.ok and len(report.entries) == 16


@pytest.mark.parametrize("row", ["Axiom 5", "Axiom 4", "Mix axiom", "Induction axiom", "RCK Necessitation"])
def test_axiom_suite_schematic_two_worlds(row):
    report = S.axiom_suite(SearchBounds(2), schematic=True, rows=[row])
    assert report.ok and report.entries[0].verdict.worlds_checked == 2


def test_atomic_instance_uses_fresh_atoms():
    f, ps = S.atomic_instance(F.parse("[!?phi] p <-> (?phi -> p)"))
    assert f == F.parse("[!q] p <-> (q -> p)") and ps == []
    f, ps = S.atomic_instance(F.parse("?psi"), [F.parse("?phi -> ?psi")])
    assert ps == [F.parse("p -> q")] and f == F.parse("q")


def test_substitution_suite():
    report = S.substitution_suite()
    assert report.ok and len(report.entries) == 13
    for e in report.entries:
        if e.name.endswith("atomic"):
            assert isinstance(e.verdict, ValidUpTo) and e.verdict.worlds_checked == 3
        else:
            assert isinstance(e.verdict, Countermodel) and e.verdict.recheck()
    sizes = {e.name: e.verdict.model.n for e in report.entries if isinstance(e.verdict, Countermodel)}
    assert sizes["(1) schematic"] == 2 and sizes["(1) Moore instance"] == 2


def test_report_rendering():
    report = S.substitution_suite()
    table = report.table()
    assert "(1) schematic" in table and table.splitlines()[-1].endswith("all rows as expected")
    doc = report.to_doc()
    assert doc["ok"] and len(doc["entries"]) == 13


def test_necessitation_pitfall():
    res = S.necessitation_pitfall()
    assert isinstance(res[Mode.TVALID], Countermodel) and res[Mode.TVALID].model.n == 2
    assert isinstance(res[Mode.PVALID], ValidUpTo)

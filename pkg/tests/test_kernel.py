import pytest
from hypothesis import given, strategies as st

from specworld.kernel import (
    BOTTOM,
    EMPTY,
    F,
    M,
    T,
    Action,
    Evidence,
    RejectedEmptyString,
    SemanticalFramework,
    Specification,
    PossibleWorld,
    bisimilar,
    check_framework_laws,
    check_str,
    make_truth_assignment,
    program_simulates,
    AlphabetError,
)


def test_empty_assignment_is_constantly_meaningless():
    u = make_truth_assignment({})
    assert u("enabled(out!1)") is M
    assert u(EMPTY) is M


def test_single_entry_with_default():
    u = make_truth_assignment({"enabled(out!1)": T})
    assert u("enabled(out!1)") is T
    assert u("zzz") is M


@pytest.mark.parametrize("value", [T, F])
def test_empty_string_cannot_be_true_or_false(value):
    with pytest.raises(RejectedEmptyString):
        make_truth_assignment({EMPTY: value})


def test_empty_string_may_be_listed_as_meaningless():
    assert make_truth_assignment({EMPTY: M})(EMPTY) is M


def test_oracle_cannot_override_empty_string():
    from specworld.kernel import TruthAssignment

    u = TruthAssignment({}, lambda s: T)
    assert u(EMPTY) is M
    assert u("x") is T


@given(st.dictionaries(st.text(min_size=1), st.sampled_from([T, F, M])), st.text())
def test_assignment_total_with_meaningless_default(entries, probe):
    u = make_truth_assignment(entries)
    assert u(probe) is entries.get(probe, M) or probe == EMPTY
    assert u(EMPTY) is M


def test_alphabet_membership():
    assert check_str("ab", "ab") == "ab"
    assert check_str("", "ab") == ""
    with pytest.raises(AlphabetError):
        check_str("abc", "ab")


def _never(x, y):
    return False


def test_constantly_false_sim_breaks_reflexivity_with_witness():
    fw = SemanticalFramework("never", lambda p: BOTTOM if p == EMPTY else ("obj", p), BOTTOM, _never)
    report = check_framework_laws(fw, ["p"])
    by_law = {r.law: r for r in report.results}
    assert not by_law["reflexivity"].passed
    assert by_law["reflexivity"].witness == ("p",)
    assert not report.passed


def test_empty_sample_checks_only_bottom_rules(toy):
    report = check_framework_laws(toy, [])
    by_law = {r.law: r for r in report.results}
    assert by_law["empty-is-bottom"].passed and by_law["empty-is-bottom"].checked == 1
    assert by_law["bottom-minimum"].checked == 1
    assert by_law["reflexivity"].checked == 0
    assert by_law["transitivity"].checked == 0
    assert report.passed


def test_framework_mapping_empty_elsewhere_fails_empty_rule():
    fw = SemanticalFramework("bad", lambda p: ("obj", p), BOTTOM, lambda x, y: x is BOTTOM or x == y)
    report = check_framework_laws(fw, ["p"])
    assert {r.law: r.passed for r in report.results}["empty-is-bottom"] is False


def test_program_simulates_basic_laws(toy):
    assert program_simulates(toy, "output 1", "output 1")
    assert program_simulates(toy, EMPTY, "output 3")
    assert bisimilar(toy, "output 1", "output 1")
    assert not bisimilar(toy, "output 1", "output 1\noutput 2")


def test_tagged_records_round_trip_and_differ_by_kind():
    e = Evidence.of("must-out1", formula="enabled(out!1)")
    assert Evidence.from_dict(e.to_dict()) == e
    assert e.get("formula") == "enabled(out!1)"
    assert Action("ok") != Evidence("ok")


def test_specification_rejects_duplicates_and_empty():
    w = PossibleWorld("w", lambda *a: None)
    with pytest.raises(ValueError):
        Specification(())
    with pytest.raises(ValueError):
        Specification((w, PossibleWorld("w", lambda *a: None)))

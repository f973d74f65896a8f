import json

import pytest
from hypothesis import given, strategies as st

from specworld.interaction import (
    Context,
    LimitVerdict,
    ReplayMismatch,
    check_propositions,
    entails_global,
    entails_local,
    failing_clause,
    global_valid_programs_at,
    holds_in_limit,
    is_complete,
    is_correct,
    is_mature,
    is_valid,
    language_at,
    local_programs_at,
    replay_lines,
    run,
    run_spec,
    theory_at,
    trace_lines,
    verdict_of,
)
from specworld.kernel import EMPTY, OK, T, GeneratorOutput, PossibleWorld, ProgramGenerator, WorldResponse, make_truth_assignment
from specworld.worlds import REFUTED

from .helpers import checker, contexts, fixed, scenario

P1, P2 = "output 1", "output 1\noutput 2"
CONJ = "enabled(out!1) and enabled(out!2)"


def test_gate_enum_converges_to_p2(gate):
    traces = run_spec(gate.spec, gate.generator("enum"), 5)
    w1, w2 = traces["w1"], traces["w2"]
    assert [r.program for r in w2.steps] == [P1, P2, P2, P2, P2]
    assert [r.evidence.tag for r in w2.steps] == ["must-out2", "ok", "ok", "ok", "ok"]
    assert w1.steps[0].evidence.tag == REFUTED
    assert [r.program for r in w1.steps[1:]] == [P2] * 4
    assert all(r.hypothesis == CONJ for r in w1.steps)


def test_gate_contexts_mature_from_step_one(gate):
    ctx = contexts(gate, "enum", 4)
    assert failing_clause(ctx[("w2", 0)]) == "correct"
    assert failing_clause(ctx[("w1", 0)]) == "correct"
    for wid in ("w1", "w2"):
        for n in (1, 2, 3):
            assert is_mature(ctx[(wid, n)])


def test_run_requires_positive_steps(gate):
    with pytest.raises(ValueError):
        run(gate.spec.world("w1"), gate.generator("enum"), 0)


def test_run_detects_non_deterministic_generator(toy):
    calls = []

    def flaky(history):
        calls.append(1)
        return GeneratorOutput(P1 if len(calls) == 1 else P2, "")

    const = WorldResponse(toy, make_truth_assignment({}), OK)
    w = PossibleWorld("w", lambda p, h, a, n: const)
    with pytest.raises(ReplayMismatch):
        run(w, ProgramGenerator("flaky", flaky), 2)


def test_language_and_truth_in_gate(gate):
    ctx = contexts(gate, "enum", 2)
    c = ctx[("w2", 0)]
    assert c.program == P1
    assert language_at(c) == set(gate.universes.hypotheses)
    assert c.true_set == {"enabled(out!1)"}


def test_empty_program_never_valid():
    b = scenario([checker("w1", {"m": "enabled(out!1)"})], {"eps": fixed(EMPTY, "enabled(out!1)")})
    c = contexts(b, "eps", 1)[("w1", 0)]
    assert not is_valid(c)
    assert failing_clause(c) == "valid"
    assert EMPTY in local_programs_at(c)
    assert EMPTY not in global_valid_programs_at(c)


def test_local_programs_include_current_even_if_invalid():
    b = scenario([checker("w1")], {"g": fixed("garbage((", "enabled(out!1)")})
    c = contexts(b, "g", 1)[("w1", 0)]
    assert c.local_programs == {EMPTY, "garbage((", P1, P2}
    assert c.valid_programs == {P1, P2}


def test_global_validity_needs_every_world():
    b = scenario(
        [checker("big"), checker("small", state_limit=3)],
        {"g": fixed("input a", "enabled(in?0)")},
        programs=["input a", P1],
    )
    c = contexts(b, "g", 1)[("big", 0)]
    assert "input a" in c.local_programs
    assert "input a" not in c.valid_programs
    assert c.valid_programs <= c.local_programs


def test_local_and_global_entailment():
    b = scenario(
        [checker("w1"), checker("w2", vocab=["out!1"])],
        {"g": fixed(P2, "enabled(out!1)")},
    )
    c = contexts(b, "g", 1)[("w1", 0)]
    assert entails_local(c, "enabled(out!1)", "enabled(out!2)")
    assert not entails_global(c, "enabled(out!1)", "enabled(out!2)")
    assert entails_global(c, CONJ, "enabled(out!1)")
    # vacuous: a false premise entails anything
    assert entails_local(c, "enabled(out!3)", "enabled(out!2)")


def test_correct_but_incomplete():
    b = scenario(
        [checker("w1"), checker("w2", vocab=["out!1"])],
        {"g": fixed(P2, "enabled(out!1)")},
    )
    c = contexts(b, "g", 1)[("w1", 0)]
    assert is_correct(c) and is_valid(c)
    assert not is_complete(c)
    assert theory_at(c) == {"enabled(out!1)"}
    assert c.true_set == {"enabled(out!1)", "enabled(out!2)", CONJ}
    report = check_propositions(c)
    assert report.theory_within_true and report.true_within_language
    assert report.theory_equals_true is None
    assert report.violations == []


def test_mature_with_narrow_vocabulary():
    b = scenario(
        [checker("w1", vocab=["out!1"]), checker("w2")],
        {"g": fixed(P2, "enabled(out!1)")},
    )
    c = contexts(b, "g", 1)[("w1", 0)]
    # enabled(out!2) is true in w2 but meaningless in w1
    assert "enabled(out!2)" not in c.language
    assert "enabled(out!2)" not in c.theory
    assert is_mature(c)
    assert check_propositions(c).theory_equals_true


def test_propositions_not_applicable_when_incorrect(gate):
    c = contexts(gate, "enum", 1)[("w2", 0)]
    report = check_propositions(c)
    assert not report.correct
    assert report.theory_within_true is None and report.violations == []


def test_holds_in_limit_examples():
    assert holds_in_limit(lambda n: n >= 2, 10) == LimitVerdict(2, 10)
    assert str(holds_in_limit(lambda n: n >= 2, 10)) == "HoldsFrom(2, N=10)"
    assert not holds_in_limit(lambda n: n >= 2, 2).holds
    assert str(holds_in_limit(lambda n: n % 2 == 0, 5)) == "HoldsFrom(4, N=5)"
    assert str(holds_in_limit(lambda n: n % 2 == 0, 6)) == "FailsWithinHorizon(N=6)"
    assert holds_in_limit(lambda n: True, 3).holds_from == 0
    with pytest.raises(ValueError):
        holds_in_limit(lambda n: True, 0)


@st.composite
def ev_const(draw, horizon=12):
    k = draw(st.integers(0, horizon))
    prefix = draw(st.lists(st.booleans(), min_size=k, max_size=k))
    tail = draw(st.booleans())
    return prefix + [tail] * (horizon - k)


@given(ev_const(), ev_const())
def test_limit_conjunction(p, q):
    both = verdict_of(a and b for a, b in zip(p, q))
    vp, vq = verdict_of(p), verdict_of(q)
    if vp.holds and vq.holds:
        assert both.holds_from == max(vp.holds_from, vq.holds_from)
    else:
        assert not both.holds


def test_trace_lines_fields(gate):
    trace = run(gate.spec.world("w2"), gate.generator("enum"), 2)
    docs = [json.loads(line) for line in trace_lines(trace, gate.universes.hypotheses)]
    assert docs[0]["evidence"] == "must-out2"
    assert docs[0]["evidence.formula"] == "enabled(out!2)"
    assert docs[0]["action"] == "try:0"
    assert docs[1]["correct"] is True
    assert docs[1]["truth"] == "ttt"
    assert [d["step"] for d in docs] == [0, 1]


def test_replay_reproduces_lines(gate):
    for w in gate.spec:
        g = gate.generator("enum")
        lines = trace_lines(run(w, g, 4), gate.universes.hypotheses)
        assert replay_lines(lines, w, g, gate.universes.hypotheses) == lines


def test_replay_with_tampered_evidence_differs(gate):
    w, g = gate.spec.world("w2"), gate.generator("enum")
    lines = trace_lines(run(w, g, 3), gate.universes.hypotheses)
    doc = json.loads(lines[0])
    doc["evidence"] = "ok"
    del doc["evidence.formula"]
    tampered = [json.dumps(doc)] + lines[1:]
    assert replay_lines(tampered, w, g, gate.universes.hypotheses) != lines


def test_context_rejects_short_traces(gate):
    g = gate.generator("enum")
    traces = run_spec(gate.spec, g, 2)
    with pytest.raises(ValueError):
        Context(gate.spec, g.id, "w1", 2, traces, gate.universes)

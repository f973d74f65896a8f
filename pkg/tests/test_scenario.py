import copy
from pathlib import Path

import pytest
import yaml

from specworld.corpus import corpus
from specworld.kernel import NO_ACTION, T
from specworld.scenario import GATE, SCENARIO_PATH_ENV, ScenarioError, build, load_scenario, scenario_from_dict

REPO = Path(__file__).resolve().parent.parent


def test_builtin_gate():
    sc = load_scenario("gate")
    assert sc.name == "gate"
    assert [w["id"] for w in sc.worlds] == ["w1", "w2"]
    assert sc.program_id("output 1\noutput 2") == "p2"
    assert sc.program_id("") == "e"
    assert len(sc.diagnostics) == 1
    assert sc.diagnostics[0].startswith("programs[2] (p3) does not parse")


def test_example_file_matches_builtin():
    assert load_scenario(str(REPO / "scenarios" / "gate.yaml")).to_dict() == load_scenario("gate").to_dict()


def test_dump_load_round_trip(tmp_path):
    sc = load_scenario("gate")
    path = tmp_path / "again.yaml"
    path.write_text(sc.dump())
    assert load_scenario(str(path)).to_dict() == sc.to_dict()


def test_corpus_scenarios_round_trip_through_yaml():
    for sc in corpus(10):
        assert scenario_from_dict(yaml.safe_load(sc.dump()), sc.name).to_dict() == sc.to_dict()


def _broken(**changes):
    doc = copy.deepcopy(GATE)
    for k, v in changes.items():
        if v is None:
            del doc[k]
        else:
            doc[k] = v
    return doc


def test_missing_worlds():
    with pytest.raises(ScenarioError) as exc:
        scenario_from_dict(_broken(worlds=None))
    assert "worlds" in str(exc.value)


def test_duplicate_world_ids():
    worlds = copy.deepcopy(GATE["worlds"])
    worlds[1]["id"] = "w1"
    with pytest.raises(ScenarioError) as exc:
        scenario_from_dict(_broken(worlds=worlds))
    assert exc.value.location.endswith("worlds[1].id")


@pytest.mark.parametrize("key", ["programs", "hypotheses"])
def test_empty_universes(key):
    with pytest.raises(ScenarioError):
        scenario_from_dict(_broken(**{key: []}))


@pytest.mark.parametrize(
    "change",
    [
        {"schema": 2},
        {"horizon": 0},
        {"generators": {"x": {"kind": "magic"}}},
        {"generators": {"x": {"kind": "enum", "pool": ["output 1"], "target": "nonsense"}}},
        {"worlds": [{"id": "w", "kind": "oracle"}]},
        {"worlds": [{"id": "w", "constraints": [{"from": 0, "require": {"c": "enabled(out!9)"}}]}]},
        {"alphabet": "abc"},
    ],
)
def test_invalid_documents(change):
    with pytest.raises(ScenarioError):
        scenario_from_dict(_broken(**change))


def test_bad_schedule_is_reported_on_build():
    worlds = [{"id": "w", "constraints": [{"from": 1, "require": {}}]}]
    with pytest.raises(ScenarioError):
        build(scenario_from_dict(_broken(worlds=worlds)))


def test_unknown_generator_name(gate):
    with pytest.raises(ScenarioError):
        gate.generator("nope")


def test_malformed_yaml_reports_position(tmp_path):
    path = tmp_path / "bad.yaml"
    path.write_text("schema: 1\nprograms: [unclosed\n")
    with pytest.raises(ScenarioError) as exc:
        load_scenario(str(path))
    assert "bad.yaml:" in exc.value.location


def test_missing_file():
    with pytest.raises(ScenarioError):
        load_scenario("no-such-scenario")


def test_search_path_env(tmp_path, monkeypatch):
    (tmp_path / "mine.yaml").write_text(load_scenario("gate").dump().replace("name: gate", "name: mine"))
    monkeypatch.setenv(SCENARIO_PATH_ENV, str(tmp_path))
    assert load_scenario("mine").name == "mine"
    assert load_scenario("mine.yaml").name == "mine"


def test_scripted_world_from_document():
    worlds = [
        {
            "id": "s",
            "kind": "scripted",
            "default": {"truth": {"enabled(out!1)": "t"}, "evidence": "ok"},
            "table": [{"step": 0, "program": "output 1", "hypothesis": "enabled(out!1)", "truth": {}, "evidence": {"tag": "no"}}],
        }
    ]
    b = build(scenario_from_dict(_broken(worlds=worlds)))
    w = b.spec.world("s")
    assert w.respond("output 1", "enabled(out!1)", NO_ACTION, 0).evidence.tag == "no"
    assert w.respond("output 1", "enabled(out!1)", NO_ACTION, 1).truth("enabled(out!1)") is T


def test_scripted_world_rejects_bad_truth_value():
    worlds = [{"id": "s", "kind": "scripted", "default": {"truth": {"x": "yes"}}}]
    with pytest.raises(ScenarioError):
        build(scenario_from_dict(_broken(worlds=worlds)))

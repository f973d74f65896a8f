"""Scenario files: universes, worlds and generators for one experiment.

Scenarios are YAML (or JSON) documents with ``schema: 1``::

    schema: 1
    name: gate
    horizon: 10
    sem_limits: {state_limit: 4096}
    alphabet: null            # optional string of permitted symbols
    programs: [...]           # program universe, ids p1, p2, ... by position
    hypotheses: [...]         # hypothesis universe
    worlds:
      - id: w1
        kind: checker         # or: scripted
        vocab: [out!1, out!2]
        check_hypothesis: false
        state_limit: 4096     # optional per-world override
        constraints:
          - from: 0
            require: {must-out1: "enabled(out!1)"}
    generators:
      enum: {kind: enum, pool: [...], target: "..."}
      p2:   {kind: scripted, outputs: [{program: ..., hypothesis: ..., action: ...}]}
      rev:  {kind: revise, literals: {"enabled(out!1)": false}, pool: [...]}

A scripted world lists ``default`` and ``table`` responses, each with
``truth`` (hypothesis to ``t``/``f``/``?``) and ``evidence`` (a tag or a
``{tag, payload}`` mapping); table rows also carry ``step``, ``program`` and
``hypothesis``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping, Optional

import yaml

from .generators import ReviseState, enum_test_generator, revise_generator, scripted_generator
from .hyplogic import HypParseFailure, parse_hyp
from .interaction import Universes
from .kernel import (
    EMPTY,
    Action,
    AlphabetError,
    Evidence,
    GeneratorOutput,
    NO_ACTION,
    ProgramGenerator,
    SemanticalFramework,
    Specification,
    TruthValue,
    WorldResponse,
    check_str,
    make_truth_assignment,
)
from .toylang import ParseFailure, SemLimits, make_framework, parse
from .worlds import CheckerWorldConfig, SchedulePiece, checker_world, scripted_world

SCHEMA_VERSION = 1
SCENARIO_PATH_ENV = "SPECWORLD_SCENARIO_PATH"


class ScenarioError(ValueError):
    def __init__(self, location: str, message: str):
        super().__init__(f"{location}: {message}")
        self.location = location
        self.message = message


@dataclass
class Scenario:
    name: str
    programs: list[str]
    hypotheses: list[str]
    worlds: list[dict[str, Any]]
    generators: dict[str, dict[str, Any]]
    horizon: int = 10
    limits: SemLimits = field(default_factory=SemLimits)
    alphabet: Optional[str] = None
    diagnostics: list[str] = field(default_factory=list)

    @property
    def universes(self) -> Universes:
        return Universes(tuple(self.programs), tuple(self.hypotheses))

    def program_id(self, src: str) -> str:
        if src == EMPTY:
            return "e"
        if src in self.programs:
            return f"p{self.programs.index(src) + 1}"
        return repr(src)

    def to_dict(self) -> dict[str, Any]:
        return {
            "schema": SCHEMA_VERSION,
            "name": self.name,
            "horizon": self.horizon,
            "sem_limits": {"state_limit": self.limits.state_limit},
            "alphabet": self.alphabet,
            "programs": list(self.programs),
            "hypotheses": list(self.hypotheses),
            "worlds": [dict(w) for w in self.worlds],
            "generators": {k: dict(v) for k, v in self.generators.items()},
        }

    def dump(self) -> str:
        return yaml.safe_dump(self.to_dict(), sort_keys=False, allow_unicode=False)


# --- validation --------------------------------------------------------------

def _need(doc: Mapping, key: str, where: str, kind=None):
    if key not in doc:
        raise ScenarioError(where, f"missing '{key}'")
    value = doc[key]
    if kind is not None and not isinstance(value, kind):
        raise ScenarioError(f"{where}.{key}", f"expected {getattr(kind, '__name__', kind)}")
    return value


def _strings(value, where: str) -> list[str]:
    if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
        raise ScenarioError(where, "expected a list of strings")
    return list(value)


def _check_formula(src: str, where: str):
    try:
        parse_hyp(src)
    except HypParseFailure as exc:
        raise ScenarioError(where, f"formula does not parse ({exc})") from None


def _check_world(doc: Any, where: str) -> str:
    if not isinstance(doc, dict):
        raise ScenarioError(where, "expected a mapping")
    wid = _need(doc, "id", where, str)
    kind = doc.get("kind", "checker")
    if kind == "checker":
        _strings(doc.get("vocab", []), f"{where}.vocab")
        pieces = doc.get("constraints", [])
        if not isinstance(pieces, list):
            raise ScenarioError(f"{where}.constraints", "expected a list of schedule pieces")
        for j, piece in enumerate(pieces):
            pw = f"{where}.constraints[{j}]"
            if not isinstance(piece, dict):
                raise ScenarioError(pw, "expected a mapping")
            require = piece.get("require", {})
            if not isinstance(require, dict):
                raise ScenarioError(f"{pw}.require", "expected a name -> formula mapping")
            for name, src in require.items():
                _check_formula(str(src), f"{pw}.require.{name}")
    elif kind == "scripted":
        _need(doc, "default", where, dict)
    else:
        raise ScenarioError(f"{where}.kind", f"unknown world kind {kind!r}")
    return wid


def _check_generator(name: str, doc: Any, where: str):
    if not isinstance(doc, dict):
        raise ScenarioError(where, "expected a mapping")
    kind = _need(doc, "kind", where, str)
    if kind == "enum":
        if not _strings(_need(doc, "pool", where), f"{where}.pool"):
            raise ScenarioError(f"{where}.pool", "empty pool")
        _check_formula(_need(doc, "target", where, str), f"{where}.target")
    elif kind == "scripted":
        outputs = _need(doc, "outputs", where, list)
        if not outputs:
            raise ScenarioError(f"{where}.outputs", "empty output list")
        for j, out in enumerate(outputs):
            if not isinstance(out, dict):
                raise ScenarioError(f"{where}.outputs[{j}]", "expected a mapping")
    elif kind == "revise":
        _strings(_need(doc, "pool", where), f"{where}.pool")
        literals = doc.get("literals", {})
        if not isinstance(literals, dict):
            raise ScenarioError(f"{where}.literals", "expected an atom -> bool mapping")
        for atom in literals:
            _check_formula(str(atom), f"{where}.literals.{atom}")
    else:
        raise ScenarioError(f"{where}.kind", f"unknown generator kind {kind!r}")


def scenario_from_dict(doc: Any, source: str = "<scenario>") -> Scenario:
    if not isinstance(doc, dict):
        raise ScenarioError(source, "top level must be a mapping")
    schema = doc.get("schema")
    if schema != SCHEMA_VERSION:
        raise ScenarioError(f"{source}:schema", f"unsupported schema {schema!r} (expected {SCHEMA_VERSION})")
    programs = _strings(_need(doc, "programs", source), f"{source}:programs")
    hypotheses = _strings(_need(doc, "hypotheses", source), f"{source}:hypotheses")
    if not programs:
        raise ScenarioError(f"{source}:programs", "the program universe is empty")
    if not hypotheses:
        raise ScenarioError(f"{source}:hypotheses", "the hypothesis universe is empty")

    worlds = _need(doc, "worlds", source, list)
    if not worlds:
        raise ScenarioError(f"{source}:worlds", "no worlds")
    seen = set()
    for i, w in enumerate(worlds):
        wid = _check_world(w, f"{source}:worlds[{i}]")
        if wid in seen:
            raise ScenarioError(f"{source}:worlds[{i}].id", f"duplicate world id {wid!r}")
        seen.add(wid)

    generators = _need(doc, "generators", source, dict)
    if not generators:
        raise ScenarioError(f"{source}:generators", "no generators")
    for name, g in generators.items():
        _check_generator(name, g, f"{source}:generators.{name}")

    limits_doc = doc.get("sem_limits") or {}
    try:
        limits = SemLimits(int(limits_doc.get("state_limit", 4096)))
    except (TypeError, ValueError) as exc:
        raise ScenarioError(f"{source}:sem_limits", str(exc)) from None
    horizon = doc.get("horizon", 10)
    if not isinstance(horizon, int) or horizon < 1:
        raise ScenarioError(f"{source}:horizon", "must be a positive integer")

    alphabet = doc.get("alphabet")
    if alphabet is not None:
        for label, strings in (("programs", programs), ("hypotheses", hypotheses)):
            for i, s in enumerate(strings):
                try:
                    check_str(s, alphabet)
                except AlphabetError as exc:
                    raise ScenarioError(f"{source}:{label}[{i}]", str(exc)) from None

    diagnostics = []
    for i, src in enumerate(programs):
        try:
            parse(src)
        except ParseFailure as exc:
            diagnostics.append(f"programs[{i}] (p{i + 1}) does not parse: {exc}")
    for i, src in enumerate(hypotheses):
        try:
            parse_hyp(src)
        except HypParseFailure as exc:
            diagnostics.append(f"hypotheses[{i}] does not parse: {exc}")

    return Scenario(
        name=str(doc.get("name", Path(source).stem)),
        programs=programs,
        hypotheses=hypotheses,
        worlds=[dict(w) for w in worlds],
        generators={str(k): dict(v) for k, v in generators.items()},
        horizon=horizon,
        limits=limits,
        alphabet=alphabet,
        diagnostics=diagnostics,
    )


# --- the built-in demo -----------------------------------------------------------

GATE = {
    "schema": 1,
    "name": "gate",
    "horizon": 10,
    "sem_limits": {"state_limit": 4096},
    "alphabet": None,
    "programs": ["output 1", "output 1\noutput 2", "garbage(("],
    "hypotheses": [
        "enabled(out!1)",
        "enabled(out!2)",
        "enabled(out!1) and enabled(out!2)",
    ],
    "worlds": [
        {
            "id": "w1",
            "kind": "checker",
            "vocab": ["out!1", "out!2"],
            "check_hypothesis": True,
            "constraints": [{"from": 0, "require": {"must-out1": "enabled(out!1)"}}],
        },
        {
            "id": "w2",
            "kind": "checker",
            "vocab": ["out!1", "out!2"],
            "check_hypothesis": True,
            "constraints": [
                {"from": 0, "require": {"must-out1": "enabled(out!1)", "must-out2": "enabled(out!2)"}}
            ],
        },
    ],
    "generators": {
        "enum": {
            "kind": "enum",
            "pool": ["output 1", "output 1\noutput 2", "garbage(("],
            "target": "enabled(out!1) and enabled(out!2)",
        },
        "p2": {
            "kind": "scripted",
            "outputs": [{"program": "output 1\noutput 2", "hypothesis": "enabled(out!1) and enabled(out!2)"}],
        },
    },
}

BUILTIN = {"gate": GATE}


def load_scenario(name_or_path: str) -> Scenario:
    """Load a built-in scenario by name or a YAML/JSON file.

    Relative paths that do not exist are also looked up in the directories
    listed in ``SPECWORLD_SCENARIO_PATH``.
    """
    if name_or_path in BUILTIN:
        return scenario_from_dict(BUILTIN[name_or_path], name_or_path)
    path = Path(name_or_path)
    if not path.exists() and not path.is_absolute():
        for d in filter(None, os.environ.get(SCENARIO_PATH_ENV, "").split(os.pathsep)):
            for candidate in (Path(d) / path, Path(d) / f"{name_or_path}.yaml"):
                if candidate.exists():
                    path = candidate
                    break
            if path.exists():
                break
    if not path.exists():
        raise ScenarioError(name_or_path, "no such scenario file or built-in name")
    try:
        doc = yaml.safe_load(path.read_text(encoding="utf-8"))
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f"{path}:{mark.line + 1}:{mark.column + 1}" if mark else str(path)
        raise ScenarioError(where, "malformed YAML") from None
    return scenario_from_dict(doc, str(path))


# --- building runtime objects ---------------------------------------------------

def _evidence(doc: Any) -> Evidence:
    if doc is None:
        return Evidence("ok")
    if isinstance(doc, str):
        return Evidence(doc)
    return Evidence.from_dict(doc)


def _action(doc: Any) -> Action:
    if doc is None:
        return NO_ACTION
    if isinstance(doc, str):
        return Action(doc)
    return Action.from_dict(doc)


def _truth(doc: Mapping[str, Any], where: str):
    entries = {}
    for s, v in (doc or {}).items():
        try:
            entries[str(s)] = TruthValue(str(v))
        except ValueError:
            raise ScenarioError(f"{where}.{s}", f"truth value must be t, f or ?, got {v!r}") from None
    try:
        return make_truth_assignment(entries)
    except ValueError as exc:
        raise ScenarioError(where, str(exc)) from None


@dataclass
class Built:
    scenario: Scenario
    spec: Specification
    generators: dict[str, ProgramGenerator]
    frameworks: dict[str, SemanticalFramework]

    @property
    def universes(self) -> Universes:
        return self.scenario.universes

    def generator(self, name: str) -> ProgramGenerator:
        try:
            return self.generators[name]
        except KeyError:
            raise ScenarioError("generators", f"unknown generator {name!r}; have {sorted(self.generators)}") from None


def build(sc: Scenario) -> Built:
    frameworks: dict[int, SemanticalFramework] = {}

    def framework_for(limit: int) -> SemanticalFramework:
        if limit not in frameworks:
            frameworks[limit] = make_framework(SemLimits(limit))
        return frameworks[limit]

    default_fw = framework_for(sc.limits.state_limit)
    worlds = []
    world_fw = {}
    for i, doc in enumerate(sc.worlds):
        where = f"worlds[{i}]"
        fw = framework_for(int(doc.get("state_limit", sc.limits.state_limit)))
        world_fw[doc["id"]] = fw
        if doc.get("kind", "checker") == "checker":
            pieces = []
            for j, piece in enumerate(doc.get("constraints", []) or [{"from": 0, "require": {}}]):
                require = tuple((str(k), str(v)) for k, v in (piece.get("require") or {}).items())
                try:
                    pieces.append(SchedulePiece(int(piece.get("from", 0)), require))
                except ValueError as exc:
                    raise ScenarioError(f"{where}.constraints[{j}]", str(exc)) from None
            try:
                cfg = CheckerWorldConfig(
                    doc["id"],
                    fw,
                    frozenset(doc.get("vocab", [])),
                    tuple(pieces),
                    bool(doc.get("check_hypothesis", False)),
                )
            except ValueError as exc:
                raise ScenarioError(f"{where}.constraints", str(exc)) from None
            worlds.append(checker_world(cfg))
        else:
            default_doc = doc["default"]
            default = WorldResponse(fw, _truth(default_doc.get("truth"), f"{where}.default.truth"), _evidence(default_doc.get("evidence")))
            table = {}
            for j, row in enumerate(doc.get("table", [])):
                key = (int(row["step"]), str(row.get("program", "")), str(row.get("hypothesis", "")))
                table[key] = WorldResponse(fw, _truth(row.get("truth"), f"{where}.table[{j}].truth"), _evidence(row.get("evidence")))
            worlds.append(scripted_world(doc["id"], table, default))

    generators = {}
    for name, doc in sc.generators.items():
        kind = doc["kind"]
        if kind == "enum":
            generators[name] = enum_test_generator(name, doc["pool"], doc["target"])
        elif kind == "scripted":
            outputs = [
                GeneratorOutput(str(o.get("program", "")), str(o.get("hypothesis", "")), _action(o.get("action")))
                for o in doc["outputs"]
            ]
            generators[name] = scripted_generator(name, outputs)
        else:
            try:
                init = ReviseState.of({str(k): bool(v) for k, v in (doc.get("literals") or {}).items()}, doc["pool"])
            except ValueError as exc:
                raise ScenarioError(f"generators.{name}.literals", str(exc)) from None
            generators[name] = revise_generator(name, init, default_fw)

    return Built(sc, Specification(tuple(worlds)), generators, world_fw)

"""Possible-world constructors.

A checker world interprets the submitted program in its framework, marks
hypotheses true exactly when they hold of that program, and reports the
first constraint of the current schedule piece the program violates.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .hyplogic import eval_hyp, try_parse_hyp, vocabulary
from .kernel import (
    OK,
    Action,
    Evidence,
    F,
    M,
    PossibleWorld,
    SemanticalFramework,
    T,
    TruthAssignment,
    TruthValue,
    WorldResponse,
)

REFUTED = "hypothesis-refuted"


@dataclass(frozen=True)
class SchedulePiece:
    start: int
    constraints: tuple[tuple[str, str], ...]  # (name, formula source)

    def __post_init__(self):
        names = [name for name, _ in self.constraints]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate constraint names in piece starting at {self.start}: {names}")
        for name, src in self.constraints:
            if try_parse_hyp(src) is None:
                raise ValueError(f"constraint {name!r} does not parse: {src!r}")


@dataclass(frozen=True, eq=False)
class CheckerWorldConfig:
    id: str
    framework: SemanticalFramework
    vocab: frozenset[str]
    schedule: tuple[SchedulePiece, ...] = (SchedulePiece(0, ()),)
    # also refute submitted hypotheses that are not true of the program
    check_hypothesis: bool = False

    def __post_init__(self):
        if not self.schedule or self.schedule[0].start != 0:
            raise ValueError("the constraint schedule must start at step 0")
        starts = [p.start for p in self.schedule]
        if starts != sorted(set(starts)):
            raise ValueError(f"schedule pieces must have strictly increasing starts, got {starts}")

    def constraints_at(self, n: int) -> tuple[tuple[str, str], ...]:
        current = self.schedule[0]
        for piece in self.schedule:
            if piece.start <= n:
                current = piece
        return current.constraints


def _checker_truth(obj, vocab: frozenset[str]) -> TruthAssignment:
    memo: dict[str, TruthValue] = {}

    def oracle(s: str) -> TruthValue:
        if s not in memo:
            f = try_parse_hyp(s)
            if f is None or not vocabulary(f) <= vocab:
                memo[s] = M
            else:
                memo[s] = T if eval_hyp(f, obj) else F
        return memo[s]

    return TruthAssignment({}, oracle)


def checker_world(cfg: CheckerWorldConfig) -> PossibleWorld:
    fw = cfg.framework

    def respond(program: str, hypothesis: str, action: Action, n: int) -> WorldResponse:
        obj = fw.interpret(program)
        truth = _checker_truth(obj, cfg.vocab)
        evidence = OK
        for name, src in cfg.constraints_at(n):
            if not eval_hyp(try_parse_hyp(src), obj):
                evidence = Evidence.of(name, formula=src)
                break
        else:
            if cfg.check_hypothesis and truth(hypothesis) is not T:
                evidence = Evidence.of(REFUTED, hypothesis=hypothesis)
        return WorldResponse(fw, truth, evidence)

    return PossibleWorld(cfg.id, respond)


def scripted_world(
    world_id: str,
    table: Mapping[tuple[int, str, str], WorldResponse],
    default: WorldResponse,
) -> PossibleWorld:
    """World answering from a lookup table keyed by ``(step, program, hypothesis)``."""
    table = dict(table)

    def respond(program: str, hypothesis: str, action: Action, n: int) -> WorldResponse:
        return table.get((n, program, hypothesis), default)

    return PossibleWorld(world_id, respond)


def respond(w: PossibleWorld, program: str, hypothesis: str, action: Action, n: int) -> WorldResponse:
    return w.respond(program, hypothesis, action, n)

"""Generator/world interaction and the sets and predicates derived from it.

``run`` executes the recurrence

    (P_0, h_0, a_0)          = gen(())
    (framework_n, u_n, e_n)  = world(P_n, h_n, a_n, n)
    (P_n+1, h_n+1, a_n+1)    = gen((e_0, ..., e_n))

and a :class:`Context` pins one generator, world and step within a
specification. Sets that are infinite in principle (languages, theories,
program sets) are enumerated over the scenario universes, closed under the
context's own current program and hypothesis.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Mapping, Optional, Sequence

from .kernel import (
    EMPTY,
    M,
    T,
    Action,
    Evidence,
    ProgramGenerator,
    PossibleWorld,
    SemanticalFramework,
    Specification,
    TruthAssignment,
)


class ReplayMismatch(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class StepRecord:
    n: int
    program: str
    hypothesis: str
    action: Action
    truth: TruthAssignment
    framework: SemanticalFramework
    evidence: Evidence


@dataclass(frozen=True, eq=False)
class InteractionTrace:
    world_id: str
    generator_id: str
    steps: tuple[StepRecord, ...]

    def __len__(self) -> int:
        return len(self.steps)

    def __getitem__(self, n: int) -> StepRecord:
        return self.steps[n]

    @property
    def evidence(self) -> tuple[Evidence, ...]:
        return tuple(r.evidence for r in self.steps)


def run(w: PossibleWorld, g: ProgramGenerator, steps: int) -> InteractionTrace:
    if steps < 1:
        raise ValueError("at least one step is required")
    history: list[Evidence] = []
    records = []
    for n in range(steps):
        out = g.next(tuple(history))
        resp = w.respond(out.program, out.hypothesis, out.action, n)
        records.append(StepRecord(n, out.program, out.hypothesis, out.action, resp.truth, resp.framework, resp.evidence))
        history.append(resp.evidence)
    trace = InteractionTrace(w.id, g.id, tuple(records))
    problems = check_recurrence(trace, w, g)
    if problems:
        raise ReplayMismatch("; ".join(problems))
    return trace


def check_recurrence(trace: InteractionTrace, w: PossibleWorld, g: ProgramGenerator) -> list[str]:
    """Re-invoke generator and world on every evidence prefix and report differences."""
    problems = []
    ev = trace.evidence
    for r in trace.steps:
        out = g.next(ev[: r.n])
        if (out.program, out.hypothesis, out.action) != (r.program, r.hypothesis, r.action):
            problems.append(f"step {r.n}: generator output differs on replay")
            continue
        resp = w.respond(r.program, r.hypothesis, r.action, r.n)
        if resp.evidence != r.evidence or resp.framework is not r.framework:
            problems.append(f"step {r.n}: world response differs on replay")
        elif resp.truth(r.hypothesis) is not r.truth(r.hypothesis):
            problems.append(f"step {r.n}: truth of the hypothesis differs on replay")
    return problems


def run_spec(spec: Specification, g: ProgramGenerator, steps: int) -> dict[str, InteractionTrace]:
    return {w.id: run(w, g, steps) for w in spec}


# --- serialization -----------------------------------------------------------

def record_to_dict(trace: InteractionTrace, r: StepRecord, hypotheses: Sequence[str]) -> dict[str, object]:
    doc: dict[str, object] = {
        "world": trace.world_id,
        "generator": trace.generator_id,
        "step": r.n,
        "program": r.program,
        "hypothesis": r.hypothesis,
        "action": r.action.tag,
    }
    doc.update({f"action.{k}": v for k, v in r.action.payload})
    doc["framework"] = r.framework.name
    doc["evidence"] = r.evidence.tag
    doc.update({f"evidence.{k}": v for k, v in r.evidence.payload})
    doc["correct"] = r.truth(r.hypothesis) is T
    doc["truth"] = r.truth.summary(hypotheses)
    return doc


def trace_lines(trace: InteractionTrace, hypotheses: Sequence[str]) -> list[str]:
    return [json.dumps(record_to_dict(trace, r, hypotheses), ensure_ascii=True) for r in trace.steps]


def _tagged_from(doc: Mapping[str, object], key: str, cls):
    prefix = key + "."
    payload = tuple(sorted((k[len(prefix):], str(v)) for k, v in doc.items() if k.startswith(prefix)))
    return cls(str(doc[key]), payload)


def replay_lines(
    lines: Sequence[str], w: PossibleWorld, g: ProgramGenerator, hypotheses: Sequence[str]
) -> list[str]:
    """Rebuild trace lines from the evidence recorded in ``lines``.

    Each step's generator output is recomputed from the recorded evidence
    prefix and the world is asked again; the result is serialized afresh, so
    a faithful trace file comes back byte for byte.
    """
    docs = [json.loads(line) for line in lines]
    history = [_tagged_from(d, "evidence", Evidence) for d in docs]
    records = []
    for n, d in enumerate(docs):
        if d["step"] != n:
            raise ReplayMismatch(f"line {n + 1}: expected step {n}, found {d['step']}")
        out = g.next(tuple(history[:n]))
        resp = w.respond(out.program, out.hypothesis, out.action, n)
        records.append(StepRecord(n, out.program, out.hypothesis, out.action, resp.truth, resp.framework, resp.evidence))
    trace = InteractionTrace(w.id, g.id, tuple(records))
    return trace_lines(trace, hypotheses)


# --- contexts and derived sets ---------------------------------------------------

@dataclass(frozen=True)
class Universes:
    programs: tuple[str, ...]
    hypotheses: tuple[str, ...]


@dataclass(frozen=True, eq=False)
class Context:
    spec: Specification
    generator_id: str
    world_id: str
    n: int
    traces: Mapping[str, InteractionTrace]
    universes: Universes

    def __post_init__(self):
        for w in self.spec:
            trace = self.traces.get(w.id)
            if trace is None or len(trace) <= self.n:
                raise ValueError(f"world {w.id!r} has no trace reaching step {self.n}")
            if trace.generator_id != self.generator_id:
                raise ValueError(f"trace for {w.id!r} comes from generator {trace.generator_id!r}")

    @property
    def label(self) -> str:
        return f"{self.generator_id}@{self.world_id}#{self.n}"

    def record_in(self, world_id: str) -> StepRecord:
        return self.traces[world_id].steps[self.n]

    @cached_property
    def record(self) -> StepRecord:
        return self.record_in(self.world_id)

    @property
    def program(self) -> str:
        return self.record.program

    @property
    def hypothesis(self) -> str:
        return self.record.hypothesis

    @property
    def truth(self) -> TruthAssignment:
        return self.record.truth

    @property
    def framework(self) -> SemanticalFramework:
        return self.record.framework

    @cached_property
    def hypothesis_universe(self) -> tuple[str, ...]:
        hs = self.universes.hypotheses
        return hs if self.hypothesis in hs else hs + (self.hypothesis,)

    @cached_property
    def program_universe(self) -> tuple[str, ...]:
        ps = self.universes.programs
        return ps if self.program in ps else ps + (self.program,)

    @cached_property
    def true_set(self) -> frozenset[str]:
        return frozenset(s for s in self.hypothesis_universe if self.truth(s) is T)

    @cached_property
    def language(self) -> frozenset[str]:
        return language_at(self)

    @cached_property
    def theory(self) -> frozenset[str]:
        return theory_at(self)

    @cached_property
    def local_programs(self) -> frozenset[str]:
        return local_programs_at(self)

    @cached_property
    def valid_programs(self) -> frozenset[str]:
        return global_valid_programs_at(self)


def contexts_for(
    spec: Specification, traces: Mapping[str, InteractionTrace], universes: Universes, n: int
) -> dict[str, Context]:
    gen_id = next(iter(traces.values())).generator_id
    return {w.id: Context(spec, gen_id, w.id, n, traces, universes) for w in spec}


def language_at(ctx: Context) -> frozenset[str]:
    return frozenset(s for s in ctx.hypothesis_universe if ctx.truth(s) is not M)


def entails_local(ctx: Context, r: str, s: str, world_id: Optional[str] = None) -> bool:
    u = ctx.record_in(world_id or ctx.world_id).truth
    return u(r) is not T or u(s) is T


def entails_global(ctx: Context, r: str, s: str) -> bool:
    return all(entails_local(ctx, r, s, w.id) for w in ctx.spec)


def theory_at(ctx: Context) -> frozenset[str]:
    h = ctx.hypothesis
    supporting = [ctx.record_in(w.id).truth for w in ctx.spec]
    supporting = [u for u in supporting if u(h) is T]
    return frozenset(s for s in ctx.hypothesis_universe if all(u(s) is T for u in supporting))


def makes_sense_in(ctx: Context, p: str, world_id: str) -> bool:
    fw = ctx.record_in(world_id).framework
    return fw.interpret(p) != fw.bottom


def is_globally_valid(ctx: Context, p: str) -> bool:
    return all(makes_sense_in(ctx, p, w.id) for w in ctx.spec)


def is_local_program(ctx: Context, p: str) -> bool:
    return p in (EMPTY, ctx.program) or makes_sense_in(ctx, p, ctx.world_id)


def local_programs_at(ctx: Context) -> frozenset[str]:
    return frozenset({EMPTY, ctx.program}) | {p for p in ctx.program_universe if makes_sense_in(ctx, p, ctx.world_id)}


def global_valid_programs_at(ctx: Context) -> frozenset[str]:
    return frozenset(p for p in ctx.program_universe if is_globally_valid(ctx, p))


def is_valid(ctx: Context) -> bool:
    return is_globally_valid(ctx, ctx.program)


def is_correct(ctx: Context) -> bool:
    return ctx.truth(ctx.hypothesis) is T


def is_complete(ctx: Context) -> bool:
    return ctx.true_set <= ctx.theory


def is_mature(ctx: Context) -> bool:
    return is_valid(ctx) and is_correct(ctx) and is_complete(ctx)


def failing_clause(ctx: Context) -> Optional[str]:
    """First maturity clause that fails at ``ctx``, or ``None`` when mature."""
    if not is_valid(ctx):
        return "valid"
    if not is_correct(ctx):
        return "correct"
    if not is_complete(ctx):
        return "complete"
    return None


@dataclass(frozen=True)
class PropositionReport:
    correct: bool
    mature: bool
    theory_within_true: Optional[bool] = None
    true_within_language: Optional[bool] = None
    theory_equals_true: Optional[bool] = None
    witnesses: dict[str, tuple[str, ...]] = field(default_factory=dict)

    @property
    def violations(self) -> list[str]:
        checks = {
            "theory-within-true": self.theory_within_true,
            "true-within-language": self.true_within_language,
            "theory-equals-true": self.theory_equals_true,
        }
        return [name for name, ok in checks.items() if ok is False]

    def lines(self) -> list[str]:
        def show(v: Optional[bool]) -> str:
            return "n/a" if v is None else ("holds" if v else "VIOLATED")

        out = [
            f"correct={self.correct} mature={self.mature}",
            f"  Th within true-set: {show(self.theory_within_true)}",
            f"  true-set within language: {show(self.true_within_language)}",
            f"  Th equals true-set: {show(self.theory_equals_true)}",
        ]
        for k, v in self.witnesses.items():
            out.append(f"  witness {k}: {list(v)}")
        return out


def check_propositions(ctx: Context) -> PropositionReport:
    correct = is_correct(ctx)
    mature = correct and is_mature(ctx)
    if not correct:
        return PropositionReport(False, False)
    witnesses = {}
    extra = ctx.theory - ctx.true_set
    if extra:
        witnesses["theory-within-true"] = tuple(sorted(extra))
    outside = ctx.true_set - ctx.language
    if outside:
        witnesses["true-within-language"] = tuple(sorted(outside))
    equal = None
    if mature:
        equal = ctx.theory == ctx.true_set
        if not equal:
            witnesses["theory-equals-true"] = tuple(sorted(ctx.theory ^ ctx.true_set))
    return PropositionReport(True, mature, not extra, not outside, equal, witnesses)


# --- in the limit ------------------------------------------------------------------

@dataclass(frozen=True)
class LimitVerdict:
    """``holds_from`` is the least step from which the predicate held up to the
    horizon, or ``None`` when it failed at the last step within it."""

    holds_from: Optional[int]
    horizon: int

    @property
    def holds(self) -> bool:
        return self.holds_from is not None

    def __str__(self) -> str:
        if self.holds_from is None:
            return f"FailsWithinHorizon(N={self.horizon})"
        return f"HoldsFrom({self.holds_from}, N={self.horizon})"


def holds_in_limit(pred: Callable[[int], bool], horizon: int) -> LimitVerdict:
    """Finite-horizon reading of "from some step on": checks steps ``0..horizon-1``."""
    if horizon < 1:
        raise ValueError("horizon must be at least 1")
    k = horizon
    for n in range(horizon - 1, -1, -1):
        if not pred(n):
            break
        k = n
    return LimitVerdict(None if k == horizon else k, horizon)


def verdict_of(values: Iterable[bool]) -> LimitVerdict:
    values = list(values)
    return holds_in_limit(lambda n: values[n], len(values))

"""Program-generator strategies.

Every generator is a pure function of the evidence history. Evidence is read
through the checker-world convention: tag ``ok`` for success, otherwise the
name of a violated constraint with its formula in the ``formula`` payload.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .hyplogic import Atom, eval_hyp, format_hyp, literals_of, parse_hyp, try_parse_hyp
from .kernel import EMPTY, Action, Evidence, GeneratorOutput, ProgramGenerator, SemanticalFramework


def scripted_generator(gen_id: str, outputs: Sequence[GeneratorOutput]) -> ProgramGenerator:
    outputs = tuple(outputs)
    if not outputs:
        raise ValueError("a scripted generator needs at least one output")

    def step(history: tuple[Evidence, ...]) -> GeneratorOutput:
        return outputs[min(len(history), len(outputs) - 1)]

    return ProgramGenerator(gen_id, step)


def enum_test_generator(gen_id: str, pool: Sequence[str], target: str) -> ProgramGenerator:
    """Trial and error: advance through ``pool`` once per non-ok evidence."""
    pool = tuple(pool)
    if not pool:
        raise ValueError("the candidate pool is empty")
    parse_hyp(target)

    def step(history: tuple[Evidence, ...]) -> GeneratorOutput:
        i = min(sum(1 for e in history if e.tag != "ok"), len(pool) - 1)
        return GeneratorOutput(pool[i], target, Action(f"try:{i}"))

    return ProgramGenerator(gen_id, step)


@dataclass(frozen=True)
class ReviseState:
    """Current description of the implementation as signed atoms, plus the
    candidate programs it is matched against."""

    literals: tuple[tuple[str, bool], ...]
    pool: tuple[str, ...]

    def __post_init__(self):
        atoms = [a for a, _ in self.literals]
        if len(set(atoms)) != len(atoms):
            raise ValueError("an atom appears more than once among the literals")
        for a in atoms:
            if not isinstance(try_parse_hyp(a), Atom):
                raise ValueError(f"literal {a!r} is not an atom")

    @classmethod
    def of(cls, literals: dict[str, bool], pool: Sequence[str]) -> "ReviseState":
        return cls(tuple(sorted(literals.items())), tuple(pool))

    def revise(self, evidence: Evidence) -> "ReviseState":
        src = evidence.get("formula")
        if evidence.tag == "ok" or src is None:
            return self
        f = try_parse_hyp(src)
        lits = literals_of(f) if f is not None else None
        if not lits:
            return self
        current = dict(self.literals)
        for atom, sign in lits:
            current[format_hyp(atom)] = sign
        return ReviseState.of(current, self.pool)

    def hypothesis(self) -> str:
        return " and ".join(a if sign else f"not {a}" for a, sign in self.literals)


def revise_generator(gen_id: str, init: ReviseState, framework: SemanticalFramework) -> ProgramGenerator:
    """Belief-revision generator without entrenchment.

    Each violated constraint that is a conjunction of literals overrides the
    matching literals of the description; the hypothesis is the conjunction of
    the description and the program is the first pool member satisfying it.
    """

    def step(history: tuple[Evidence, ...]) -> GeneratorOutput:
        state = init
        for e in history:
            state = state.revise(e)
        hyp = state.hypothesis()
        program = EMPTY
        if hyp:
            f = parse_hyp(hyp)
            for p in state.pool:
                if eval_hyp(f, framework.interpret(p)):
                    program = p
                    break
        elif state.pool:
            program = state.pool[0]
        return GeneratorOutput(program, hyp, Action("revise"))

    return ProgramGenerator(gen_id, step)

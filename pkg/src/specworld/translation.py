"""Translations between the outputs of two generators.

A translation has a program part (defined on the source's local programs)
and a sentence part (defined on the source's language). ``verify`` checks
the eight preservation conditions by enumeration and keeps a witness for
each failure.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from itertools import product
from typing import Mapping, Optional

from .interaction import (
    Context,
    LimitVerdict,
    entails_global,
    entails_local,
    failing_clause,
    holds_in_limit,
    is_globally_valid,
    is_local_program,
    is_mature,
    run_spec,
    Universes,
)
from .kernel import EMPTY, M, T, ProgramGenerator, Specification, program_simulates


class DomainMismatch(ValueError):
    pass


class NotMature(ValueError):
    def __init__(self, label: str, clause: str):
        super().__init__(f"{label} is not mature: clause '{clause}' fails")
        self.label = label
        self.clause = clause


class Direction(enum.Enum):
    SOURCE_TO_TARGET = "SourceToTarget"
    TARGET_TO_SOURCE = "TargetToSource"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class TranslationFunction:
    programs: Mapping[str, str]
    sentences: Mapping[str, str]
    source: Optional[str] = None  # context labels, for composition checks
    target: Optional[str] = None

    def program(self, p: str) -> str:
        try:
            return self.programs[p]
        except KeyError:
            raise DomainMismatch(f"program {p!r} is outside the translation's domain") from None

    def sentence(self, s: str) -> str:
        try:
            return self.sentences[s]
        except KeyError:
            raise DomainMismatch(f"sentence {s!r} is outside the translation's domain") from None

    def table(self) -> list[tuple[str, str, str]]:
        rows = [("program", p, q) for p, q in sorted(self.programs.items())]
        rows += [("sentence", s, t) for s, t in sorted(self.sentences.items())]
        return rows


CONDITIONS = (
    (1, "empty program preserved"),
    (2, "language into language"),
    (3, "local programs into local programs"),
    (4, "current program simulated by target program"),
    (5, "entailment preserved"),
    (6, "simulation preserved"),
    (7, "theory into theory"),
    (8, "valid programs into valid programs"),
)


@dataclass(frozen=True)
class ConditionResult:
    index: int
    name: str
    passed: bool
    witness: Optional[tuple] = None


@dataclass(frozen=True)
class TranslationReport:
    results: tuple[ConditionResult, ...]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def failed(self) -> list[int]:
        return [r.index for r in self.results if not r.passed]

    def lines(self) -> list[str]:
        out = []
        for r in self.results:
            line = f"{r.index}. {'PASS' if r.passed else 'FAIL'} {r.name}"
            if r.witness is not None:
                line += f" witness={r.witness!r}"
            out.append(line)
        return out


def _first(items, bad) -> Optional[tuple]:
    for item in items:
        if bad(item):
            return item if isinstance(item, tuple) else (item,)
    return None


def verify(f: TranslationFunction, src: Context, dst: Context) -> TranslationReport:
    progs = sorted(src.local_programs)
    lang = sorted(src.language)
    missing = [p for p in progs if p not in f.programs] + [s for s in lang if s not in f.sentences]
    if missing:
        raise DomainMismatch(f"translation undefined on {missing[:5]!r}")

    fp, fs = f.programs, f.sentences
    src_fw, dst_fw = src.framework, dst.framework
    witnesses: dict[int, Optional[tuple]] = {}

    witnesses[1] = None if fp[EMPTY] == EMPTY else (EMPTY, fp[EMPTY])
    witnesses[2] = _first(lang, lambda s: dst.truth(fs[s]) is M)
    witnesses[3] = _first(progs, lambda p: not is_local_program(dst, fp[p]))
    witnesses[4] = (
        None
        if program_simulates(dst_fw, fp[src.program], dst.program)
        else (src.program, fp[src.program], dst.program)
    )
    witnesses[5] = _first(
        product(lang, lang),
        lambda rs: entails_local(src, rs[0], rs[1]) and not entails_local(dst, fs[rs[0]], fs[rs[1]]),
    )
    witnesses[6] = _first(
        product(progs, progs),
        lambda pq: program_simulates(src_fw, pq[0], pq[1]) and not program_simulates(dst_fw, fp[pq[0]], fp[pq[1]]),
    )
    # image of the theory: members outside the language have no translation
    theory = sorted(src.theory & src.language)
    witnesses[7] = _first(theory, lambda s: not entails_global(dst, dst.hypothesis, fs[s]))
    witnesses[8] = _first(sorted(src.valid_programs), lambda p: not is_globally_valid(dst, fp[p]))

    return TranslationReport(
        tuple(ConditionResult(i, name, witnesses[i] is None, witnesses[i]) for i, name in CONDITIONS)
    )


def identity_translation(ctx: Context) -> TranslationFunction:
    return TranslationFunction(
        {p: p for p in ctx.local_programs}, {s: s for s in ctx.language}, ctx.label, ctx.label
    )


def compose(f: TranslationFunction, g: TranslationFunction) -> TranslationFunction:
    """``f`` first, then ``g``."""
    if f.target is not None and g.source is not None and f.target != g.source:
        raise DomainMismatch(f"cannot compose: {f.target} is not {g.source}")
    return TranslationFunction(
        {p: g.program(q) for p, q in f.programs.items()},
        {s: g.sentence(t) for s, t in f.sentences.items()},
        f.source,
        g.target,
    )


def trivial_translation(frm: Context, to: Context) -> TranslationFunction:
    """The four-valued map from ``frm`` to ``to``.

    True sentences go to the target's hypothesis and every other sentence to
    the least false sentence of the target language. Programs at or above some
    valid program of the source go to the target's program, the rest to ``""``.
    """
    s_true = to.hypothesis
    false_sentences = sorted(s for s in to.language if to.truth(s) is not T)
    s_false = false_sentences[0] if false_sentences else s_true
    sentences = {s: (s_true if frm.truth(s) is T else s_false) for s in frm.language}

    valid = sorted(frm.valid_programs)
    programs = {}
    for p in frm.local_programs:
        above_valid = any(program_simulates(frm.framework, q, p) for q in valid)
        programs[p] = to.program if above_valid else EMPTY
    return TranslationFunction(programs, sentences, frm.label, to.label)


def _has_false(ctx: Context) -> bool:
    return any(ctx.truth(s) is not T for s in ctx.language)


def synthesize_trivial(src: Context, dst: Context) -> tuple[Direction, TranslationFunction]:
    for ctx in (src, dst):
        clause = failing_clause(ctx)
        if clause is not None:
            raise NotMature(ctx.label, clause)
    if _has_false(dst) or not _has_false(src):
        direction, f = Direction.SOURCE_TO_TARGET, trivial_translation(src, dst)
        frm, to = src, dst
    else:
        direction, f = Direction.TARGET_TO_SOURCE, trivial_translation(dst, src)
        frm, to = dst, src
    report = verify(f, frm, to)
    if not report.passed:
        raise AssertionError(f"synthesized translation fails conditions {report.failed()}")
    return direction, f


def translatable_either_way(a: Context, b: Context) -> bool:
    """Sound check used for the limit: both sides mature and synthesis succeeds."""
    if not (is_mature(a) and is_mature(b)):
        return False
    synthesize_trivial(a, b)
    return True


def limit_translatability(
    spec: Specification,
    g1: ProgramGenerator,
    g2: ProgramGenerator,
    horizon: int,
    universes: Universes,
) -> dict[str, LimitVerdict]:
    t1 = run_spec(spec, g1, horizon)
    t2 = run_spec(spec, g2, horizon)
    verdicts = {}
    for w in spec:
        def pred(n: int, wid: str = w.id) -> bool:
            a = Context(spec, g1.id, wid, n, t1, universes)
            b = Context(spec, g2.id, wid, n, t2, universes)
            return translatable_either_way(a, b)

        verdicts[w.id] = holds_in_limit(pred, horizon)
    return verdicts

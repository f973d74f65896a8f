"""Framework-agnostic domain types: strings, truth values, semantical
frameworks, and the world / generator interfaces.

Programs and hypotheses are plain ``str`` values. The empty string plays the
role of the empty program and is always meaningless as a hypothesis.
"""

from __future__ import annotations

import enum
import string
from dataclasses import dataclass, field
from itertools import product
from typing import Any, Callable, Iterable, Mapping, Optional, Sequence

EMPTY = ""

#: Default symbol set for programs and hypotheses.
DEFAULT_ALPHABET = frozenset(string.printable)


class RejectedEmptyString(ValueError):
    """The empty string was mapped to a definite truth value."""


class AlphabetError(ValueError):
    pass


def check_str(s: str, alphabet: Iterable[str] = DEFAULT_ALPHABET) -> str:
    alphabet = frozenset(alphabet)
    for i, ch in enumerate(s):
        if ch not in alphabet:
            raise AlphabetError(f"symbol {ch!r} at offset {i} is outside the alphabet")
    return s


class TruthValue(enum.Enum):
    TRUE = "t"
    FALSE = "f"
    MEANINGLESS = "?"

    def __str__(self) -> str:
        return self.value


T = TruthValue.TRUE
F = TruthValue.FALSE
M = TruthValue.MEANINGLESS


@dataclass(frozen=True, eq=False)
class TruthAssignment:
    """A total function from strings to truth values.

    Explicit ``entries`` take precedence; strings not listed are handed to the
    optional ``oracle`` and otherwise default to meaningless. The empty string
    is meaningless whatever the entries or the oracle say.
    """

    entries: Mapping[str, TruthValue] = field(default_factory=dict)
    oracle: Optional[Callable[[str], TruthValue]] = None

    def __call__(self, s: str) -> TruthValue:
        if s == EMPTY:
            return M
        value = self.entries.get(s)
        if value is not None:
            return value
        if self.oracle is not None:
            return self.oracle(s)
        return M

    def summary(self, universe: Sequence[str]) -> str:
        """One character per member of ``universe``: ``t``, ``f`` or ``?``."""
        return "".join(self(s).value for s in universe)


def make_truth_assignment(entries: Mapping[str, TruthValue]) -> TruthAssignment:
    if entries.get(EMPTY, M) is not M:
        raise RejectedEmptyString("the empty string must stay meaningless")
    return TruthAssignment({s: v for s, v in entries.items() if s != EMPTY})


class _Bottom:
    __slots__ = ()
    _instance: Optional["_Bottom"] = None

    def __new__(cls) -> "_Bottom":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "BOTTOM"

    def __reduce__(self):
        return (_Bottom, ())


#: Semantic object of invalid programs and of the empty program.
BOTTOM = _Bottom()


@dataclass(frozen=True, eq=False)
class SemanticalFramework:
    """Interpretation of programs into semantic objects plus a simulation
    preorder with ``bottom`` as minimum."""

    name: str
    interpret: Callable[[str], Any]
    bottom: Any
    sim: Callable[[Any, Any], bool]

    def __repr__(self) -> str:
        return f"SemanticalFramework({self.name!r})"


def program_simulates(fw: SemanticalFramework, p: str, q: str) -> bool:
    return fw.sim(fw.interpret(p), fw.interpret(q))


def bisimilar(fw: SemanticalFramework, p: str, q: str) -> bool:
    return program_simulates(fw, p, q) and program_simulates(fw, q, p)


@dataclass(frozen=True)
class LawResult:
    law: str
    passed: bool
    checked: int
    witness: Optional[tuple] = None


@dataclass(frozen=True)
class LawReport:
    framework: str
    results: tuple[LawResult, ...]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def lines(self) -> list[str]:
        out = []
        for r in self.results:
            status = "PASS" if r.passed else "FAIL"
            line = f"{status} {r.law} ({r.checked} checked)"
            if r.witness is not None:
                line += f" witness={r.witness!r}"
            out.append(line)
        return out


def check_framework_laws(fw: SemanticalFramework, samples: Iterable[str]) -> LawReport:
    """Exhaustively check the preorder laws of ``fw`` on interpreted samples.

    Witnesses are the offending programs. With no samples only the
    empty-program rule and minimality of bottom against itself are checked.
    """
    programs = list(dict.fromkeys(samples))
    objs = [(p, fw.interpret(p)) for p in programs]
    results = []

    empty_ok = fw.interpret(EMPTY) == fw.bottom
    results.append(LawResult("empty-is-bottom", empty_ok, 1, None if empty_ok else (EMPTY,)))

    witness = None
    for p, x in objs:
        if not fw.sim(x, x):
            witness = (p,)
            break
    results.append(LawResult("reflexivity", witness is None, len(objs), witness))

    witness = None
    count = 0
    for (p, x), (q, y), (r, z) in product(objs, repeat=3):
        count += 1
        if fw.sim(x, y) and fw.sim(y, z) and not fw.sim(x, z):
            witness = (p, q, r)
            break
    results.append(LawResult("transitivity", witness is None, count, witness))

    witness = None
    carrier = [(EMPTY, fw.bottom)] + objs
    for p, x in carrier:
        if not fw.sim(fw.bottom, x):
            witness = (p,)
            break
    results.append(LawResult("bottom-minimum", witness is None, len(carrier), witness))

    return LawReport(fw.name, tuple(results))


@dataclass(frozen=True)
class Tagged:
    """Opaque structured record: a tag plus string payload."""

    tag: str
    payload: tuple[tuple[str, str], ...] = ()

    @classmethod
    def of(cls, tag: str, **payload: str):
        return cls(tag, tuple(sorted(payload.items())))

    def get(self, key: str, default: Optional[str] = None) -> Optional[str]:
        return dict(self.payload).get(key, default)

    def to_dict(self) -> dict[str, Any]:
        return {"tag": self.tag, "payload": dict(self.payload)}

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]):
        return cls(str(data["tag"]), tuple(sorted((str(k), str(v)) for k, v in data.get("payload", {}).items())))

    def __str__(self) -> str:
        return self.tag


class Action(Tagged):
    pass


class Evidence(Tagged):
    pass


NO_ACTION = Action("none")
OK = Evidence("ok")


@dataclass(frozen=True)
class WorldResponse:
    framework: SemanticalFramework
    truth: TruthAssignment
    evidence: Evidence


@dataclass(frozen=True, eq=False)
class PossibleWorld:
    id: str
    fn: Callable[[str, str, Action, int], WorldResponse]

    def respond(self, program: str, hypothesis: str, action: Action, n: int) -> WorldResponse:
        return self.fn(program, hypothesis, action, n)


@dataclass(frozen=True)
class Specification:
    worlds: tuple[PossibleWorld, ...]

    def __post_init__(self):
        if not self.worlds:
            raise ValueError("a specification needs at least one world")
        ids = [w.id for w in self.worlds]
        if len(set(ids)) != len(ids):
            raise ValueError(f"duplicate world ids in {ids}")

    def __iter__(self):
        return iter(self.worlds)

    def __len__(self) -> int:
        return len(self.worlds)

    def world(self, world_id: str) -> PossibleWorld:
        for w in self.worlds:
            if w.id == world_id:
                return w
        raise KeyError(world_id)

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(w.id for w in self.worlds)


@dataclass(frozen=True)
class GeneratorOutput:
    program: str
    hypothesis: str
    action: Action = NO_ACTION


@dataclass(frozen=True, eq=False)
class ProgramGenerator:
    id: str
    fn: Callable[[tuple[Evidence, ...]], GeneratorOutput]

    def next(self, history: Sequence[Evidence] = ()) -> GeneratorOutput:
        return self.fn(tuple(history))

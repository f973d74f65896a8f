"""Propositional formulas over reachability properties of an LTS.

Atoms: ``enabled(L)`` (some reachable transition carries L),
``initenabled(L)`` (the initial state has an L transition) and
``deadlockfree`` (every reachable state has a successor). Connectives, by
increasing binding strength: ``implies`` (right associative), ``or``,
``and``, ``not``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Union

from .toylang import LABELS, Lts

LABEL_SET = frozenset(LABELS)


class HypParseFailure(ValueError):
    def __init__(self, offset: int, message: str):
        super().__init__(f"offset {offset}: {message}")
        self.offset = offset
        self.message = message


@dataclass(frozen=True)
class Atom:
    kind: str  # enabled | initenabled | deadlockfree
    label: Optional[str] = None


@dataclass(frozen=True)
class Not:
    arg: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


Formula = Union[Atom, Not, And, Or, Implies]

_TOKEN_RE = re.compile(r"(?P<ws>\s+)|(?P<label>(?:in\?|out!)[0-9]+)|(?P<word>[a-z]+)|(?P<punct>[()])")


def _tokenize(src: str) -> list[tuple[str, int]]:
    out = []
    pos = 0
    while pos < len(src):
        m = _TOKEN_RE.match(src, pos)
        if m is None:
            raise HypParseFailure(pos, f"unexpected character {src[pos]!r}")
        if m.lastgroup != "ws":
            out.append((m.group(), pos))
        pos = m.end()
    out.append(("", len(src)))
    return out


class _Parser:
    def __init__(self, src: str):
        self.toks = _tokenize(src)
        self.i = 0

    @property
    def tok(self) -> str:
        return self.toks[self.i][0]

    def fail(self, message: str):
        raise HypParseFailure(self.toks[self.i][1], message)

    def eat(self, tok: str):
        if self.tok != tok:
            self.fail(f"expected {tok!r}, found {self.tok or 'end of input'!r}")
        self.i += 1

    def formula(self) -> Formula:
        f = self.implication()
        if self.tok != "":
            self.fail(f"unexpected {self.tok!r}")
        return f

    def implication(self) -> Formula:
        left = self.disjunction()
        if self.tok == "implies":
            self.i += 1
            return Implies(left, self.implication())
        return left

    def disjunction(self) -> Formula:
        left = self.conjunction()
        while self.tok == "or":
            self.i += 1
            left = Or(left, self.conjunction())
        return left

    def conjunction(self) -> Formula:
        left = self.negation()
        while self.tok == "and":
            self.i += 1
            left = And(left, self.negation())
        return left

    def negation(self) -> Formula:
        if self.tok == "not":
            self.i += 1
            return Not(self.negation())
        return self.primary()

    def primary(self) -> Formula:
        tok = self.tok
        if tok == "(":
            self.i += 1
            f = self.implication()
            self.eat(")")
            return f
        if tok == "deadlockfree":
            self.i += 1
            return Atom("deadlockfree")
        if tok in ("enabled", "initenabled"):
            self.i += 1
            self.eat("(")
            label = self.tok
            if label not in LABEL_SET:
                self.fail(f"unknown label {label!r}")
            self.i += 1
            self.eat(")")
            return Atom(tok, label)
        if tok == "":
            self.fail("empty formula" if self.i == 0 else "unexpected end of input")
        self.fail(f"unexpected {tok!r}")


@lru_cache(maxsize=8192)
def parse_hyp(src: str) -> Formula:
    return _Parser(src).formula()


def try_parse_hyp(src: str) -> Optional[Formula]:
    try:
        return parse_hyp(src)
    except HypParseFailure:
        return None


_BIND = {Implies: 1, Or: 2, And: 3, Not: 4, Atom: 5}


def format_hyp(f: Formula) -> str:
    def wrap(g: Formula, min_bind: int) -> str:
        text = format_hyp(g)
        return f"({text})" if _BIND[type(g)] < min_bind else text

    if isinstance(f, Atom):
        return f.kind if f.label is None else f"{f.kind}({f.label})"
    if isinstance(f, Not):
        return "not " + wrap(f.arg, 4)
    if isinstance(f, And):
        return f"{wrap(f.left, 3)} and {wrap(f.right, 4)}"
    if isinstance(f, Or):
        return f"{wrap(f.left, 2)} or {wrap(f.right, 3)}"
    return f"{wrap(f.left, 2)} implies {wrap(f.right, 1)}"


def eval_hyp(f: Formula, lts) -> bool:
    """Evaluate ``f`` on ``lts``; any non-LTS argument (bottom) makes every atom false."""
    if isinstance(f, Atom):
        if not isinstance(lts, Lts):
            return False
        return _atom(f, lts)
    if isinstance(f, Not):
        return not eval_hyp(f.arg, lts)
    if isinstance(f, And):
        return eval_hyp(f.left, lts) and eval_hyp(f.right, lts)
    if isinstance(f, Or):
        return eval_hyp(f.left, lts) or eval_hyp(f.right, lts)
    return (not eval_hyp(f.left, lts)) or eval_hyp(f.right, lts)


def _atom(f: Atom, lts: Lts) -> bool:
    if f.kind == "initenabled":
        return any(a == f.label for a, _ in lts.successors[lts.initial])
    if f.kind == "enabled":
        return any(a == f.label for s in lts.reachable for a, _ in lts.successors[s])
    return all(lts.successors[s] for s in lts.reachable)


def vocabulary(f: Formula) -> frozenset[str]:
    if isinstance(f, Atom):
        return frozenset() if f.label is None else frozenset({f.label})
    if isinstance(f, Not):
        return vocabulary(f.arg)
    return vocabulary(f.left) | vocabulary(f.right)


def literals_of(f: Formula) -> Optional[list[tuple[Atom, bool]]]:
    """Split a conjunction of (possibly negated) atoms; ``None`` for anything else."""
    if isinstance(f, Atom):
        return [(f, True)]
    if isinstance(f, Not) and isinstance(f.arg, Atom):
        return [(f.arg, False)]
    if isinstance(f, And):
        left, right = literals_of(f.left), literals_of(f.right)
        if left is None or right is None:
            return None
        return left + right
    return None

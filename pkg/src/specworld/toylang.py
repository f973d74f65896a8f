"""A small imperative language over three variables with values mod 4.

Programs are parsed into an AST, compiled to a flat control-flow graph and
explored into a finite labeled transition system whose states are
``(pc, (a, b, c))`` pairs. Labels are ``in?k``, ``out!k`` and ``tau``.

Grammar::

    program  := stmts
    stmts    := [stmt] ((NEWLINE | ';') [stmt])*
    stmt     := 'input' VAR | 'output' expr | VAR '=' expr
              | 'if' expr block ['else' block] | 'while' expr block
    block    := '{' stmts '}'
    expr     := sum [('==' | '<') sum]
    sum      := term (('+' | '-') term)*
    term     := atom ('*' atom)*
    atom     := VAR | LIT
    VAR      := 'a' | 'b' | 'c'
    LIT      := '0' | '1' | '2' | '3'
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import product
from typing import Hashable, Iterable, Optional, Union

from .kernel import BOTTOM, EMPTY, SemanticalFramework

VARS = ("a", "b", "c")
MODULUS = 4
VALUES = tuple(range(MODULUS))
TAU = "tau"
LABELS = tuple(f"in?{k}" for k in VALUES) + tuple(f"out!{k}" for k in VALUES) + (TAU,)


class ParseFailure(ValueError):
    def __init__(self, offset: int, message: str):
        super().__init__(f"offset {offset}: {message}")
        self.offset = offset
        self.message = message


class Blowup(RuntimeError):
    def __init__(self, state_count: int):
        super().__init__(f"state space exceeded the limit ({state_count} states)")
        self.state_count = state_count


class OracleTooLarge(ValueError):
    pass


# --- AST -------------------------------------------------------------------

@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Lit:
    value: int


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"


Expr = Union[Var, Lit, BinOp]


@dataclass(frozen=True)
class Input:
    var: str


@dataclass(frozen=True)
class Output:
    expr: Expr


@dataclass(frozen=True)
class Assign:
    var: str
    expr: Expr


@dataclass(frozen=True)
class If:
    cond: Expr
    then: tuple
    orelse: tuple = ()


@dataclass(frozen=True)
class While:
    cond: Expr
    body: tuple


Stmt = Union[Input, Output, Assign, If, While]


@dataclass(frozen=True)
class Program:
    body: tuple[Stmt, ...] = ()

    def __len__(self) -> int:
        return len(self.body)


# --- lexer / parser --------------------------------------------------------

_TOKEN_RE = re.compile(
    r"(?P<ws>[ \t\r]+)|(?P<nl>\n)|(?P<op>==|[=+\-*<{};])|(?P<num>[0-9]+)|(?P<word>[A-Za-z_][A-Za-z_0-9]*)"
)
_KEYWORDS = {"input", "output", "if", "else", "while"}


def _tokenize(src: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(src):
        m = _TOKEN_RE.match(src, pos)
        if m is None:
            raise ParseFailure(pos, f"unexpected character {src[pos]!r}")
        kind = m.lastgroup
        text = m.group()
        if kind == "nl" or text == ";":
            tokens.append(("sep", text, pos))
        elif kind == "op":
            tokens.append((text, text, pos))
        elif kind == "num":
            if text not in {"0", "1", "2", "3"}:
                raise ParseFailure(pos, f"literal {text} outside 0..3")
            tokens.append(("lit", text, pos))
        elif kind == "word":
            if text in _KEYWORDS:
                tokens.append((text, text, pos))
            elif text in VARS:
                tokens.append(("var", text, pos))
            else:
                raise ParseFailure(pos, f"unknown word {text!r}")
        pos = m.end()
    tokens.append(("eof", "", len(src)))
    return tokens


class _Parser:
    def __init__(self, src: str):
        self.tokens = _tokenize(src)
        self.i = 0

    @property
    def kind(self) -> str:
        return self.tokens[self.i][0]

    def expect(self, kind: str) -> str:
        k, text, pos = self.tokens[self.i]
        if k != kind:
            raise ParseFailure(pos, f"expected {kind!r}, found {text or k!r}")
        self.i += 1
        return text

    def program(self) -> Program:
        body = self.stmts()
        self.expect("eof")
        return Program(body)

    def stmts(self) -> tuple:
        out = []
        while True:
            while self.kind == "sep":
                self.i += 1
            if self.kind in ("eof", "}"):
                return tuple(out)
            out.append(self.stmt())
            if self.kind not in ("sep", "eof", "}"):
                _, text, pos = self.tokens[self.i]
                raise ParseFailure(pos, f"expected end of statement, found {text!r}")

    def block(self) -> tuple:
        self.expect("{")
        body = self.stmts()
        self.expect("}")
        return body

    def stmt(self) -> Stmt:
        k, text, pos = self.tokens[self.i]
        if k == "input":
            self.i += 1
            return Input(self.expect("var"))
        if k == "output":
            self.i += 1
            return Output(self.expr())
        if k == "var":
            self.i += 1
            self.expect("=")
            return Assign(text, self.expr())
        if k == "if":
            self.i += 1
            cond = self.expr()
            then = self.block()
            orelse: tuple = ()
            if self.kind == "else":
                self.i += 1
                orelse = self.block()
            return If(cond, then, orelse)
        if k == "while":
            self.i += 1
            cond = self.expr()
            return While(cond, self.block())
        raise ParseFailure(pos, f"unexpected {text or k!r}")

    def expr(self) -> Expr:
        left = self.sum()
        if self.kind in ("==", "<"):
            op = self.expect(self.kind)
            left = BinOp(op, left, self.sum())
        return left

    def sum(self) -> Expr:
        left = self.term()
        while self.kind in ("+", "-"):
            op = self.expect(self.kind)
            left = BinOp(op, left, self.term())
        return left

    def term(self) -> Expr:
        left = self.atom()
        while self.kind == "*":
            self.i += 1
            left = BinOp("*", left, self.atom())
        return left

    def atom(self) -> Expr:
        k, text, pos = self.tokens[self.i]
        if k == "var":
            self.i += 1
            return Var(text)
        if k == "lit":
            self.i += 1
            return Lit(int(text))
        raise ParseFailure(pos, f"expected a variable or literal, found {text or k!r}")


@lru_cache(maxsize=4096)
def parse(src: str) -> Program:
    """Parse ``src``; raises :class:`ParseFailure` with a character offset."""
    return _Parser(src).program()


# --- printing --------------------------------------------------------------

_PREC = {"==": 1, "<": 1, "+": 2, "-": 2, "*": 3}


def format_expr(e: Expr) -> str:
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Lit):
        return str(e.value)
    # no parentheses in the grammar: operands are printed left-associatively and
    # the parser only accepts shapes it can produce, so this is exact
    return f"{format_expr(e.left)} {e.op} {format_expr(e.right)}"


def _format_stmts(stmts: Iterable[Stmt], indent: int) -> list[str]:
    pad = "  " * indent
    lines = []
    for s in stmts:
        if isinstance(s, Input):
            lines.append(f"{pad}input {s.var}")
        elif isinstance(s, Output):
            lines.append(f"{pad}output {format_expr(s.expr)}")
        elif isinstance(s, Assign):
            lines.append(f"{pad}{s.var} = {format_expr(s.expr)}")
        elif isinstance(s, If):
            lines.append(f"{pad}if {format_expr(s.cond)} {{")
            lines += _format_stmts(s.then, indent + 1)
            if s.orelse:
                lines.append(f"{pad}}} else {{")
                lines += _format_stmts(s.orelse, indent + 1)
            lines.append(f"{pad}}}")
        elif isinstance(s, While):
            lines.append(f"{pad}while {format_expr(s.cond)} {{")
            lines += _format_stmts(s.body, indent + 1)
            lines.append(f"{pad}}}")
    return lines


def format_program(prog: Program) -> str:
    return "\n".join(_format_stmts(prog.body, 0))


# --- operational semantics -------------------------------------------------

@dataclass(frozen=True)
class SemLimits:
    state_limit: int = 4096
    value_modulus: int = MODULUS

    def __post_init__(self):
        if self.state_limit < 1:
            raise ValueError("state_limit must be positive")
        if self.value_modulus != MODULUS:
            raise ValueError(f"value_modulus is fixed at {MODULUS}")


@dataclass(frozen=True)
class Lts:
    states: tuple[Hashable, ...]
    initial: Hashable
    transitions: frozenset[tuple[Hashable, str, Hashable]]

    def __post_init__(self):
        known = set(self.states)
        if self.initial not in known:
            raise ValueError("initial state not among states")
        for s, _, t in self.transitions:
            if s not in known or t not in known:
                raise ValueError(f"transition endpoint outside states: {(s, t)}")

    def __hash__(self) -> int:
        return self._hash

    @cached_property
    def _hash(self) -> int:
        return hash((self.states, self.initial, self.transitions))

    @cached_property
    def successors(self) -> dict[Hashable, tuple[tuple[str, Hashable], ...]]:
        succ: dict = {s: [] for s in self.states}
        for s, a, t in sorted(self.transitions, key=repr):
            succ[s].append((a, t))
        return {s: tuple(v) for s, v in succ.items()}

    @cached_property
    def reachable(self) -> frozenset:
        seen = {self.initial}
        todo = [self.initial]
        while todo:
            s = todo.pop()
            for _, t in self.successors[s]:
                if t not in seen:
                    seen.add(t)
                    todo.append(t)
        return frozenset(seen)

    @property
    def labels(self) -> frozenset[str]:
        return frozenset(a for _, a, _ in self.transitions)


def _eval(e: Expr, env: tuple[int, int, int]) -> int:
    if isinstance(e, Lit):
        return e.value
    if isinstance(e, Var):
        return env[VARS.index(e.name)]
    x, y = _eval(e.left, env), _eval(e.right, env)
    if e.op == "+":
        return (x + y) % MODULUS
    if e.op == "-":
        return (x - y) % MODULUS
    if e.op == "*":
        return (x * y) % MODULUS
    if e.op == "==":
        return int(x == y)
    return int(x < y)


HALT = -1


def _compile(prog: Program) -> tuple[int, list[tuple]]:
    code: list = []

    def block(stmts: tuple, cont: int) -> int:
        for s in reversed(stmts):
            cont = stmt(s, cont)
        return cont

    def stmt(s: Stmt, cont: int) -> int:
        if isinstance(s, If):
            then_pc = block(s.then, cont)
            else_pc = block(s.orelse, cont)
            code.append(("branch", s.cond, then_pc, else_pc))
            return len(code) - 1
        if isinstance(s, While):
            head = len(code)
            code.append(None)
            body_pc = block(s.body, head)
            code[head] = ("branch", s.cond, body_pc, cont)
            return head
        if isinstance(s, Input):
            code.append(("input", s.var, cont))
        elif isinstance(s, Output):
            code.append(("output", s.expr, cont))
        else:
            code.append(("assign", s.var, s.expr, cont))
        return len(code) - 1

    entry = block(prog.body, HALT)
    return entry, code


def _set(env: tuple, var: str, value: int) -> tuple:
    i = VARS.index(var)
    return env[:i] + (value,) + env[i + 1:]


def lts_of(prog: Program, limits: SemLimits = SemLimits()) -> Lts:
    """Explore the reachable configurations of ``prog`` from all-zero variables.

    Raises :class:`Blowup` as soon as more than ``limits.state_limit`` states
    are discovered.
    """
    entry, code = _compile(prog)
    init = (entry, (0, 0, 0))
    order = [init]
    seen = {init}
    transitions = set()
    queue = deque([init])
    while queue:
        state = queue.popleft()
        pc, env = state
        if pc == HALT:
            continue
        ins = code[pc]
        if ins[0] == "input":
            moves = [(f"in?{k}", (ins[2], _set(env, ins[1], k))) for k in VALUES]
        elif ins[0] == "output":
            moves = [(f"out!{_eval(ins[1], env)}", (ins[2], env))]
        elif ins[0] == "assign":
            moves = [(TAU, (ins[3], _set(env, ins[1], _eval(ins[2], env))))]
        else:
            target = ins[2] if _eval(ins[1], env) else ins[3]
            moves = [(TAU, (target, env))]
        for label, nxt in moves:
            transitions.add((state, label, nxt))
            if nxt not in seen:
                seen.add(nxt)
                order.append(nxt)
                if len(order) > limits.state_limit:
                    raise Blowup(len(order))
                queue.append(nxt)
    return Lts(tuple(order), init, frozenset(transitions))


def simulation_preorder(l1: Lts, l2: Lts) -> bool:
    """Whether ``l2`` simulates ``l1`` from their initial states.

    Greatest-fixpoint refinement, starting from every state pair reachable
    from the initial pair by equally labelled moves. Obligations of such pairs
    only mention pairs in the same set, so the restriction loses nothing.
    """
    succ1, succ2 = l1.successors, l2.successors
    start = (l1.initial, l2.initial)
    rel = {start}
    todo = [start]
    while todo:
        s, t = todo.pop()
        for a, s2 in succ1[s]:
            for b, t2 in succ2[t]:
                if a == b and (s2, t2) not in rel:
                    rel.add((s2, t2))
                    todo.append((s2, t2))
    changed = True
    while changed:
        changed = False
        for s, t in list(rel):
            for a, s2 in succ1[s]:
                if not any(b == a and (s2, t2) in rel for b, t2 in succ2[t]):
                    rel.discard((s, t))
                    changed = True
                    break
    return start in rel


BRUTE_FORCE_LIMIT = 12


def brute_force_simulates(l1: Lts, l2: Lts) -> bool:
    """Search every relation containing the initial pair for a simulation."""
    pairs = [(s, t) for s in l1.states for t in l2.states]
    if len(pairs) > BRUTE_FORCE_LIMIT:
        raise OracleTooLarge(f"{len(l1.states)}x{len(l2.states)} states exceed the oracle guard")
    start = (l1.initial, l2.initial)
    others = [p for p in pairs if p != start]
    moves1 = {s: [(a, t) for (s0, a, t) in l1.transitions if s0 == s] for s in l1.states}
    moves2 = {s: [(a, t) for (s0, a, t) in l2.transitions if s0 == s] for s in l2.states}
    for bits in product((False, True), repeat=len(others)):
        rel = {start} | {p for p, keep in zip(others, bits) if keep}
        if all(
            any(b == a and (s2, t2) in rel for b, t2 in moves2[t])
            for s, t in rel
            for a, s2 in moves1[s]
        ):
            return True
    return False


def make_framework(limits: SemLimits = SemLimits(), name: Optional[str] = None) -> SemanticalFramework:
    """Toy-language framework: parse then explore; failures and ``""`` map to bottom."""

    @lru_cache(maxsize=None)
    def interpret(src: str):
        if src == EMPTY:
            return BOTTOM
        try:
            return lts_of(parse(src), limits)
        except (ParseFailure, Blowup):
            return BOTTOM

    @lru_cache(maxsize=None)
    def sim(x, y) -> bool:
        if x is BOTTOM:
            return True
        if y is BOTTOM:
            return False
        return simulation_preorder(x, y)

    return SemanticalFramework(name or f"toy[{limits.state_limit}]", interpret, BOTTOM, sim)

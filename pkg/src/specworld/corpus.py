"""Seeded random scenarios and toy programs for property checks."""

from __future__ import annotations

import random
from typing import Optional

from .hyplogic import Atom, eval_hyp, format_hyp, parse_hyp
from .scenario import Scenario, scenario_from_dict
from .toylang import SemLimits, make_framework

OUT_LABELS = ("out!0", "out!1", "out!2", "out!3")
SOME_LABELS = OUT_LABELS + ("in?0", "in?1", "tau")
GARBAGE = ("garbage((", "output", "a = ", "while a {", "output 7")


def random_expr(rng: random.Random, depth: int = 1) -> str:
    if depth == 0 or rng.random() < 0.6:
        return rng.choice(["a", "b", "c", "0", "1", "2", "3"])
    return f"{random_expr(rng, 0)} {rng.choice(['+', '-', '*', '==', '<'])} {random_expr(rng, 0)}"


def random_stmt(rng: random.Random, depth: int) -> str:
    r = rng.random()
    if r < 0.35:
        return f"output {rng.choice(['0', '1', '2', '3', 'a', 'b', 'a + 1'])}"
    if r < 0.5:
        return f"input {rng.choice('ab')}"
    if r < 0.7 or depth == 0:
        return f"{rng.choice('abc')} = {random_expr(rng)}"
    if r < 0.85:
        then = "; ".join(random_stmt(rng, depth - 1) for _ in range(rng.randint(1, 2)))
        orelse = "; ".join(random_stmt(rng, depth - 1) for _ in range(rng.randint(0, 2)))
        tail = f" else {{ {orelse} }}" if orelse else ""
        return f"if {random_expr(rng)} {{ {then} }}{tail}"
    # bounded loop: counts c up to a limit
    body = "; ".join(random_stmt(rng, 0) for _ in range(rng.randint(0, 1)))
    sep = "; " if body else ""
    return f"while c < {rng.randint(1, 3)} {{ {body}{sep}c = c + 1 }}"


def random_program(rng: random.Random, max_stmts: int = 3) -> str:
    if rng.random() < 0.1:
        return rng.choice(GARBAGE)
    return "\n".join(random_stmt(rng, 1) for _ in range(rng.randint(1, max_stmts)))


def random_atom(rng: random.Random, labels=SOME_LABELS) -> str:
    r = rng.random()
    if r < 0.1:
        return "deadlockfree"
    kind = "enabled" if r < 0.8 else "initenabled"
    return f"{kind}({rng.choice(labels)})"


def random_formula(rng: random.Random, depth: int = 2) -> str:
    if depth == 0 or rng.random() < 0.4:
        return random_atom(rng)
    op = rng.choice(["and", "or", "implies", "not"])
    if op == "not":
        return format_hyp(parse_hyp(f"not ({random_formula(rng, depth - 1)})"))
    return format_hyp(parse_hyp(f"({random_formula(rng, depth - 1)}) {op} ({random_formula(rng, depth - 1)})"))


def description_of(program: str, atoms: list[str], limits: SemLimits = SemLimits()) -> Optional[str]:
    """Conjunction of the literals over ``atoms`` that hold of ``program``."""
    obj = make_framework(limits).interpret(program)
    lits = []
    for a in atoms:
        lits.append(a if eval_hyp(parse_hyp(a), obj) else f"not {a}")
    return " and ".join(lits) or None


def random_scenario(rng: random.Random, name: str = "random") -> Scenario:
    n_programs = rng.randint(2, 6)
    pool = list(dict.fromkeys(random_program(rng) for _ in range(n_programs)))
    atoms = list(dict.fromkeys(random_atom(rng, OUT_LABELS) for _ in range(rng.randint(1, 3))))

    hypotheses = list(atoms)
    while len(hypotheses) < rng.randint(2, 8):
        hypotheses.append(random_formula(rng))
    hypotheses = list(dict.fromkeys(hypotheses))[:8]

    shared_vocab = rng.random() < 0.6
    base_vocab = sorted(rng.sample(SOME_LABELS, rng.randint(3, len(SOME_LABELS))))
    worlds = []
    for i in range(rng.randint(1, 3)):
        vocab = base_vocab if shared_vocab else sorted(rng.sample(SOME_LABELS, rng.randint(2, len(SOME_LABELS))))
        pieces = [{"from": 0, "require": {f"c{i}_{k}": random_atom(rng, OUT_LABELS) for k in range(rng.randint(0, 2))}}]
        if rng.random() < 0.3:
            pieces.append({"from": 2, "require": {f"c{i}_late": random_atom(rng, OUT_LABELS)}})
        world = {
            "id": f"w{i + 1}",
            "kind": "checker",
            "vocab": vocab,
            "check_hypothesis": rng.random() < 0.5,
            "constraints": pieces,
        }
        if rng.random() < 0.2:
            world["state_limit"] = rng.choice([2, 3, 6])
        worlds.append(world)

    target_program = rng.choice(pool)
    target = description_of(target_program, atoms) if rng.random() < 0.7 else random_formula(rng, 1)
    order = pool[:]
    rng.shuffle(order)
    generators = {
        "enum": {"kind": "enum", "pool": order, "target": target},
        "revise": {
            "kind": "revise",
            "literals": {a: rng.random() < 0.5 for a in atoms if isinstance(parse_hyp(a), Atom)},
            "pool": pool,
        },
        "fixed": {
            "kind": "scripted",
            "outputs": [{"program": target_program, "hypothesis": description_of(target_program, atoms) or target}],
        },
    }
    doc = {
        "schema": 1,
        "name": name,
        "horizon": 6,
        "sem_limits": {"state_limit": 4096},
        "programs": pool,
        "hypotheses": hypotheses,
        "worlds": worlds,
        "generators": generators,
    }
    return scenario_from_dict(doc, name)


def corpus(size: int = 100, seed: int = 20240101) -> list[Scenario]:
    rng = random.Random(seed)
    return [random_scenario(rng, f"random-{i:03d}") for i in range(size)]

"""Batch command line: ``run``, ``check``, ``translate`` and ``laws``.

Exit status is 0 on success, 1 when the checked property does not hold, and
2 for usage, scenario or I/O errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

from .interaction import (
    Context,
    check_propositions,
    holds_in_limit,
    is_complete,
    is_correct,
    is_mature,
    is_valid,
    run_spec,
    trace_lines,
)
from .kernel import check_framework_laws
from .scenario import Built, ScenarioError, build, load_scenario
from .translation import NotMature, synthesize_trivial, verify

EXIT_OK, EXIT_FAIL, EXIT_ERROR = 0, 1, 2


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def _non_negative(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return value


def _load(name: str) -> Built:
    sc = load_scenario(name)
    for d in sc.diagnostics:
        print(f"note: {d}", file=sys.stderr)
    return build(sc)


def _contexts(b: Built, gen_name: str, steps: int):
    g = b.generator(gen_name)
    traces = run_spec(b.spec, g, steps)
    ctx = {
        (w.id, n): Context(b.spec, g.id, w.id, n, traces, b.universes)
        for w in b.spec
        for n in range(steps)
    }
    return traces, ctx


def cmd_run(args) -> int:
    b = _load(args.scenario)
    traces, ctx = _contexts(b, args.generator, args.steps)
    out = Path(args.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
        for wid in sorted(traces):
            path = out / f"{args.generator}.{wid}.jsonl"
            path.write_text("\n".join(trace_lines(traces[wid], b.universes.hypotheses)) + "\n", encoding="ascii")
    except OSError as exc:
        print(f"error: cannot write traces: {exc}", file=sys.stderr)
        return EXIT_ERROR
    for wid in sorted(traces):
        print(f"world {wid}  (generator {args.generator}, {args.steps} steps)")
        print(f"  {'step':>4}  {'program':<8} {'evidence':<20} {'correct':<8} valid")
        for n, r in enumerate(traces[wid].steps):
            c = ctx[(wid, n)]
            print(f"  {n:>4}  {b.scenario.program_id(r.program):<8} {r.evidence.tag:<20} {str(is_correct(c)):<8} {is_valid(c)}")
    print(f"traces written to {out}")
    return EXIT_OK


PREDICATES = (("valid", is_valid), ("correct", is_correct), ("complete", is_complete), ("mature", is_mature))


def cmd_check(args) -> int:
    b = _load(args.scenario)
    horizon = args.horizon or b.scenario.horizon
    _, ctx = _contexts(b, args.generator, horizon)
    all_mature = True
    for wid in sorted(w.id for w in b.spec):
        print(f"world {wid}  (generator {args.generator}, horizon {horizon})")
        for name, pred in PREDICATES:
            verdict = holds_in_limit(lambda n: pred(ctx[(wid, n)]), horizon)
            print(f"  {name:<9} {verdict}")
            if name == "mature" and not verdict.holds:
                all_mature = False
        mature_steps = [n for n in range(horizon) if is_mature(ctx[(wid, n)])]
        if mature_steps:
            last = mature_steps[-1]
            print(f"  propositions at step {last}:")
            for line in check_propositions(ctx[(wid, last)]).lines():
                print(f"    {line}")
        else:
            print("  propositions: no mature step within the horizon")
    return EXIT_OK if all_mature else EXIT_FAIL


def cmd_translate(args) -> int:
    b = _load(args.scenario)
    ids = [w.id for w in b.spec]
    pair = (args.world or ids[0]).split(",")
    if len(pair) == 1:
        pair = pair * 2
    for wid in pair:
        if wid not in ids:
            raise ScenarioError("--world", f"unknown world {wid!r}; have {ids}")
    _, ctx1 = _contexts(b, args.gen1, args.m + 1)
    _, ctx2 = _contexts(b, args.gen2, args.n + 1)
    src, dst = ctx1[(pair[0], args.m)], ctx2[(pair[1], args.n)]
    try:
        direction, f = synthesize_trivial(src, dst)
    except NotMature as exc:
        print(f"NotMature: {exc.label} fails clause '{exc.clause}'")
        return EXIT_FAIL
    frm, to = (src, dst) if f.source == src.label else (dst, src)
    print(f"direction: {direction}  ({frm.label} -> {to.label})")
    print("mapping:")
    for part, x, y in f.table():
        print(f"  {part:<8} {x!r} -> {y!r}")
    report = verify(f, frm, to)
    print("report:")
    for line in report.lines():
        print(f"  {line}")
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_laws(args) -> int:
    b = _load(args.scenario)
    samples = list(b.universes.programs)
    ok = True
    seen = set()
    for wid, fw in b.frameworks.items():
        if fw.name in seen:
            continue
        seen.add(fw.name)
        report = check_framework_laws(fw, samples)
        print(f"framework {fw.name} (world {wid}, {len(samples)} samples)")
        for line in report.lines():
            print(f"  {line}")
        ok = ok and report.passed
    return EXIT_OK if ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="specworld", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run a generator against every world and write traces")
    p.add_argument("scenario")
    p.add_argument("generator")
    p.add_argument("-n", "--steps", type=_positive, default=10)
    p.add_argument("--out", default="traces")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("check", help="limit verdicts for validity, correctness, completeness, maturity")
    p.add_argument("scenario")
    p.add_argument("generator")
    p.add_argument("--horizon", type=_positive, default=None)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("translate", help="synthesize and verify a translation between two generators")
    p.add_argument("scenario")
    p.add_argument("gen1")
    p.add_argument("gen2")
    p.add_argument("--m", type=_non_negative, default=0, help="step of the first generator")
    p.add_argument("--n", type=_non_negative, default=0, help="step of the second generator")
    p.add_argument("--world", default=None, help="world id, or W1,W2 for a pair")
    p.set_defaults(func=cmd_translate)

    p = sub.add_parser("laws", help="check the framework laws over the program universe")
    p.add_argument("scenario")
    p.set_defaults(func=cmd_laws)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ScenarioError as exc:
        print(f"scenario error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())

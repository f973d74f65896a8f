"""Small builders shared by the test modules."""

from specworld.interaction import Context, run_spec
from specworld.scenario import build, scenario_from_dict

VOCAB12 = ["out!1", "out!2"]


def checker(wid, require=None, vocab=VOCAB12, check=False, **extra):
    doc = {
        "id": wid,
        "kind": "checker",
        "vocab": list(vocab),
        "check_hypothesis": check,
        "constraints": [{"from": 0, "require": dict(require or {})}],
    }
    doc.update(extra)
    return doc


def fixed(program, hypothesis):
    return {"kind": "scripted", "outputs": [{"program": program, "hypothesis": hypothesis}]}


def scenario(worlds, generators, programs=None, hypotheses=None, name="t"):
    doc = {
        "schema": 1,
        "name": name,
        "programs": programs or ["output 1", "output 1\noutput 2", "garbage(("],
        "hypotheses": hypotheses or ["enabled(out!1)", "enabled(out!2)", "enabled(out!1) and enabled(out!2)"],
        "worlds": worlds,
        "generators": generators,
    }
    return build(scenario_from_dict(doc, name))


def contexts(built, gen, steps):
    """All contexts of ``gen`` as a dict keyed by (world id, step)."""
    g = built.generator(gen)
    traces = run_spec(built.spec, g, steps)
    return {
        (w.id, n): Context(built.spec, g.id, w.id, n, traces, built.universes)
        for w in built.spec
        for n in range(steps)
    }

"""Seeded random programs over the pure signals ``a`` and ``b``.

Programs are produced as source text and parsed against ``PRELUDE``, so they
exercise the same desugaring as hand-written files.  ``small_program`` keeps
drawing until the explored LTS has at most ``max_states`` states.
"""
from __future__ import annotations

import random

from .lts.semantics import BoundsExceeded
from .lts.space import Bounds, Lts, default_alphabet
from .syntax.parser import parse, parse_program

PRELUDE = """
signal a, b : Sig(1);
Loop() = tau.Loop() + tau.0;
Tick() = pause.(emit a || Tick());
Wait() = present a(x) { emit b } else Wait();
Pick(l : List(Nat)) = match l with [0; 1] -> emit a | _ -> emit b;
PickA(l : List(Nat)) = match l with [0; 1] -> emit a | _ -> 0;
"""

_defs_cache = None


def prelude_defs():
    """A fresh copy-safe definition table for generated programs."""
    global _defs_cache
    if _defs_cache is None:
        _defs_cache = parse(PRELUDE)[1]
    return _defs_cache


def gen_text(rng: random.Random, depth=3, sigs="ab") -> str:
    """Random source text; with ``sigs="a"`` only ``a`` occurs free."""
    def sub(dd):
        return gen_text(rng, dd, sigs)

    if depth <= 0:
        return rng.choice(["0", f"emit {rng.choice(sigs)}", f"emit {rng.choice(sigs)}"])
    d = depth - 1
    pick = rng.randrange(17)
    if pick == 0:
        return "0"
    if pick in (1, 2):
        return f"emit {rng.choice(sigs)}"
    if pick == 3:
        return f"present {rng.choice(sigs)}(x) {{ {sub(d)} }} else 0"
    if pick == 4:
        k = rng.choice(["Wait()", "Tick()", "0"] if sigs == "ab" else ["Tick()", "0"])
        return f"present {rng.choice(sigs)}(x) {{ {sub(d)} }} else {k}"
    if pick in (5, 6):
        return f"({sub(d)} || {sub(d)})"
    if pick == 7:
        return f"tau.{_atom(sub(d))}"
    if pick in (8, 14, 15, 16):
        return f"({_atom(sub(d))} + {_atom(sub(d))})"
    if pick == 9:
        return f"pause.{_atom(sub(d))}"
    if pick == 10:
        return f"new s in ({sub(d)} || emit s || present s(y) {{ {sub(d)} }} else 0)"
    if pick == 11:
        x, y = rng.choice(sigs), rng.choice(sigs)
        return f"if {x} = {y} {{ {sub(d)} }} else {{ {sub(d)} }}"
    if pick == 12:
        return rng.choice(["Loop()", "Tick()", "Wait()"] if sigs == "ab" else ["Loop()", "Tick()"])
    pick_thread = "Pick" if sigs == "ab" else "PickA"
    return f"new s in (emit s 0 || emit s 1 || pause.{pick_thread}(!s))"


def _atom(text: str) -> str:
    return text if text.startswith("(") or " " not in text else f"({text})"


def mutate(rng: random.Random, text: str) -> str:
    """A small edit that may or may not preserve equivalence."""
    sigs = "ab" if "b" in text.replace("Tick", "") else "a"

    pick = rng.randrange(7)
    if pick == 0:
        return f"({text} || 0)"
    if pick == 1:
        return f"tau.({text})"
    if pick == 2:
        return f"({text} || {text})"
    if pick == 3:
        return text.replace("emit a", "emit b", 1) if "emit a" in text else text.replace("emit b", "emit a", 1)
    if pick == 4:
        return f"({text} || emit {rng.choice(sigs)})"
    if pick == 5:
        return f"(({text}) + ({text}))"
    return f"pause.({text})" if rng.random() < 0.3 else gen_text(rng, 2, sigs)


def lts_size(program, defs, limit) -> int | None:
    """Number of states, or None when more than ``limit``."""
    lts = Lts(defs, default_alphabet([program], defs), Bounds(max_states=limit))
    try:
        lts.add_program(program)
        lts.explore()
    except BoundsExceeded:
        return None
    return None if lts.partial else len(lts.states)


def small_program(rng: random.Random, max_states=12, depth=3, tries=200):
    """``(text, program)`` with an LTS of at most ``max_states`` states."""
    defs = prelude_defs()
    for _ in range(tries):
        text = gen_text(rng, rng.randint(1, depth), rng.choice(["a", "ab"]))
        prog = parse_program(text, defs)
        if lts_size(prog, defs, max_states) is not None:
            return text, prog
    raise RuntimeError("no small program found")


def program_pairs(n: int, seed=0, max_states=12):
    """``n`` pairs ``(text_p, p, text_q, q)`` of small programs.

    Half the right-hand sides are mutations of the left, half fresh draws.
    """
    rng = random.Random(seed)
    defs = prelude_defs()
    out = []
    while len(out) < n:
        tp, p = small_program(rng, max_states)
        if rng.random() < 0.5:
            tq = mutate(rng, tp)
            q = parse_program(tq, defs)
            if lts_size(q, defs, max_states) is None:
                continue
        else:
            tq, q = small_program(rng, max_states)
        out.append((tp, p, tq, q))
    return out


def program_strategy(max_states=12):
    """A hypothesis strategy of ``(text, program)`` pairs."""
    from hypothesis import strategies as st
    return st.integers(min_value=0, max_value=2**32 - 1).map(
        lambda seed: small_program(random.Random(seed), max_states))


__all__ = ["PRELUDE", "prelude_defs", "gen_text", "mutate", "small_program",
           "program_pairs", "program_strategy", "lts_size"]

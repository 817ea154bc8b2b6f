"""Search for static contexts that separate two programs.

A static context is ``ν s⃗ ([ ] | R₁ | … | Rₖ)``.  Fragments ``Rᵢ`` range
over the free and declared signals: emissions now or after a pause, one-shot
relays between signals of equal type, or any programs the caller supplies.
"""
from __future__ import annotations

import dataclasses
import itertools
import random
from dataclasses import dataclass

from ..syntax.ast import UNIT, Con, Emit, Nil, Present, TCon, Var, new_all, par_all
from ..syntax.parser import parse_program
from ..syntax.printer import pretty, pretty_expr
from ..syntax.terms import fv
from ..syntax.types import SpiTypeError, typecheck
from ..lts.space import default_alphabet
from .bisim import Verdict, bisim

HOLE = "[ ]"


@dataclass(frozen=True)
class StaticContext:
    restricted: tuple = ()
    fragments: tuple = ()

    @property
    def size(self) -> int:
        return len(self.restricted) + len(self.fragments)

    def fill(self, p):
        return new_all(list(self.restricted), par_all([p, *self.fragments]))

    def __str__(self) -> str:
        body = " || ".join([HOLE] + [f"({pretty(r)})" for r in self.fragments])
        if self.restricted:
            return f"new {', '.join(self.restricted)} in ({body})"
        return body


@dataclass
class FalsifierResult:
    context: StaticContext | None
    verdict: Verdict | None
    tested: int

    @property
    def found(self) -> bool:
        return self.context is not None


def _signals(p, q, defs) -> list:
    return sorted(fv(p) | fv(q) | set(defs.signals))


def default_fragments(p, q, defs, alphabet=None) -> list:
    """Emissions (immediate and delayed) and relays ``present s(x) {emit t x} else 0``.

    Delayed emissions need helper threads, which are added to ``defs``.
    """
    try:
        sigs = typecheck(defs, None, extra=[p, q]).signals
    except SpiTypeError:
        sigs = {}
    names = _signals(p, q, defs)
    if alphabet is None:
        alphabet = list(default_alphabet([p, q], defs))
        for s in names:
            if s in defs.inputs:
                alphabet += [(s, v) for v in defs.inputs[s]]
            elif sigs.get(s) == TCon("Sig", (UNIT,)):
                alphabet.append((s, Con("*")))
        alphabet = list(dict.fromkeys(alphabet))
    frags = [Emit(s, v) for s, v in alphabet]
    frags += [parse_program(f"pause.emit {s} {pretty_expr(v)}", defs) for s, v in alphabet]
    for s, t in itertools.permutations(names, 2):
        if s in sigs and sigs.get(s) == sigs.get(t):
            frags.append(Present(s, "x", Emit(t, Var("x")), Nil()))
    return frags


def enumerate_contexts(p, q, defs, size_cap=2, fragments=None, alphabet=None):
    """All static contexts up to ``size_cap`` in a fixed order, smallest first."""
    frags = list(fragments) if fragments is not None else default_fragments(p, q, defs, alphabet)
    names = _signals(p, q, defs)
    yield StaticContext()
    for size in range(1, size_cap + 1):
        for nres in range(0, min(size, len(names)) + 1):
            for res in itertools.combinations(names, nres):
                for fr in itertools.combinations_with_replacement(range(len(frags)), size - nres):
                    yield StaticContext(res, tuple(frags[i] for i in fr))


def context_falsifier(p, q, defs, alphabet=None, bounds=None, size_cap=2, fragments=None,
                      samples=None, seed=0, variant="standard") -> FalsifierResult:
    """Look for a context C with C[p] and C[q] distinguished.

    Contexts that do not typecheck are dropped.  With ``samples`` set, the
    empty context plus a seeded random choice among the rest is tried.  The
    alphabet for each filled pair is its default one unless ``alphabet`` is given.
    """
    defs = dataclasses.replace(defs, threads=dict(defs.threads))
    ctxs = []
    for c in enumerate_contexts(p, q, defs, size_cap, fragments):
        try:
            typecheck(defs, None, extra=[c.fill(p), c.fill(q)])
        except SpiTypeError:
            continue
        ctxs.append(c)
    if samples is not None and samples < len(ctxs):
        rng = random.Random(seed)
        ctxs = [ctxs[0]] + rng.sample(ctxs[1:], samples - 1)
    tested = 0
    for c in ctxs:
        cp, cq = c.fill(p), c.fill(q)
        tested += 1
        v = bisim(cp, cq, defs, alphabet, bounds, variant)
        if v.verdict == "distinguished":
            return FalsifierResult(c, v, tested)
    return FalsifierResult(None, None, tested)


__all__ = ["StaticContext", "FalsifierResult", "context_falsifier",
           "enumerate_contexts", "default_fragments", "HOLE"]

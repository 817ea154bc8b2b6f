"""Canonical forms modulo structural equivalence.

A canonical state is ``new %0, ..., %n-1 in C1 || ... || Ck`` where every
restriction has been lifted to the top, emissions carry evaluated values,
identical emissions are merged, and components are sorted by their printed
form.  Binders inside components are renamed ``$0, $1, ...`` in traversal
order; top-level binders get the indices that make the printed state
lexicographically least (within a permutation budget).

Besides the laws of structural equivalence, two garbage-collection laws are
applied, both strong bisimilarities:

* ``new s in P`` is ``P`` when ``s`` is not free in ``P``;
* a restricted signal that is only ever the subject of top-level emissions
  is dropped together with those emissions (nobody can observe them).
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .ast import (
    App, Call, Con, Deref, Emit, MatchSig, MatchVal, New, Nil, Par, PCon,
    Present, PVar, PWild, Var, new_all, par_all,
)
from .evaluate import eval_expr
from .printer import pretty
from .terms import expr_fv, fresh_name, fv, rename

PERMUTATION_BUDGET = 720


@dataclass(frozen=True)
class State:
    """A program in canonical form.  Equality and hashing use ``key``."""
    nbound: int
    comps: tuple
    key: str

    def __eq__(self, other):
        return isinstance(other, State) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    @property
    def bound(self) -> tuple:
        return tuple(bound_name(i) for i in range(self.nbound))

    def program(self):
        return new_all(self.bound, par_all(self.comps))

    def free_names(self) -> frozenset:
        out = set()
        for c in self.comps:
            out |= fv(c)
        return frozenset(out - set(self.bound))

    def __str__(self):
        return self.key


def bound_name(i: int) -> str:
    return f"%{i}"


def _key(nbound, printed) -> str:
    body = " || ".join(printed) if printed else "0"
    if nbound:
        names = ", ".join(bound_name(i) for i in range(nbound))
        return f"new {names} in {body}"
    return body


# -- flattening ------------------------------------------------------------

def _flatten(p, ren, binders, comps, origin, defs):
    if isinstance(p, Nil):
        return
    if isinstance(p, Par):
        _flatten(p.left, ren, binders, comps, origin, defs)
        _flatten(p.right, ren, binders, comps, origin, defs)
        return
    if isinstance(p, New):
        t = fresh_name("b")
        binders.append(t)
        if p.name.startswith("%"):
            origin[t] = p.name
        _flatten(p.body, {**ren, p.name: t}, binders, comps, origin, defs)
        return
    q = rename(p, ren) if ren else p
    if isinstance(q, Emit):
        q = Emit(q.sig, eval_expr(q.expr, defs))
    comps.append(q)


def _collect(binders, comps):
    """Apply the garbage-collection laws until nothing changes."""
    while True:
        names = [fv(c) for c in comps]
        live = set().union(*names) if names else set()
        keep = [b for b in binders if b in live]
        dead = set()
        for b in keep:
            users = [c for c, ns in zip(comps, names) if b in ns]
            if all(isinstance(c, Emit) and c.sig == b and b not in expr_fv(c.expr) for c in users):
                dead.add(b)
        if not dead and len(keep) == len(binders):
            return binders, comps
        binders = [b for b in keep if b not in dead]
        comps = [c for c in comps if not (isinstance(c, Emit) and c.sig in dead)]


# -- inner alpha normalisation ---------------------------------------------

def _nexpr(e, env):
    if isinstance(e, Var):
        n = env.get(e.name)
        return e if n is None else Var(n)
    if isinstance(e, Deref):
        return Deref(env.get(e.sig, e.sig))
    if not e.args:
        return e
    args = tuple(_nexpr(a, env) for a in e.args)
    return Con(e.name, args) if isinstance(e, Con) else App(e.fun, args)


def _npat(p, env, ctr):
    if isinstance(p, PVar):
        n = f"${next(ctr)}"
        env[p.name] = n
        return PVar(n)
    if isinstance(p, PWild):
        return p
    return PCon(p.name, tuple(_npat(a, env, ctr) for a in p.args))


def _norm(p, env, ctr):
    if isinstance(p, Nil):
        return p
    if isinstance(p, Call):
        return Call(p.name, tuple(_nexpr(a, env) for a in p.args))
    if isinstance(p, Emit):
        return Emit(env.get(p.sig, p.sig), _nexpr(p.expr, env))
    if isinstance(p, Present):
        n = f"${next(ctr)}"
        body = _norm(p.body, {**env, p.var: n}, ctr)
        return Present(env.get(p.sig, p.sig), n, body, _norm(p.cont, env, ctr))
    if isinstance(p, MatchSig):
        return MatchSig(env.get(p.left, p.left), env.get(p.right, p.right),
                        _norm(p.then, env, ctr), _norm(p.orelse, env, ctr))
    if isinstance(p, MatchVal):
        inner = dict(env)
        pat = _npat(p.pattern, inner, ctr)
        return MatchVal(_nexpr(p.subject, env), pat, _norm(p.then, inner, ctr),
                        _norm(p.orelse, env, ctr))
    if isinstance(p, New):
        n = f"${next(ctr)}"
        return New(n, _norm(p.body, {**env, p.name: n}, ctr))
    if isinstance(p, Par):
        return Par(_norm(p.left, env, ctr), _norm(p.right, env, ctr))
    raise TypeError(f"not a program: {p!r}")


def alpha_normalize(p):
    """Rename every binder of ``p`` to ``$k`` in traversal order."""
    return _norm(p, {}, itertools.count())


# -- top-level naming ------------------------------------------------------

def _printed(comps, naming):
    return sorted(pretty(rename(c, naming)) for c in comps)


def _refine(binders, comps, occurs):
    """Colour binders by how they occur, refined a few rounds."""
    colour = {b: 0 for b in binders}
    for _ in range(4):
        sig = {}
        for b in binders:
            naming = {o: f"?{colour[o]}" for o in binders if o != b}
            naming[b] = "#"
            sig[b] = (colour[b], tuple(sorted(pretty(rename(c, naming)) for c in occurs[b])))
        ranks = {s: i for i, s in enumerate(sorted(set(sig.values())))}
        new = {b: ranks[sig[b]] for b in binders}
        if len(set(new.values())) == len(set(colour.values())):
            colour = new
            break
        colour = new
    return colour


def _name_binders(binders, comps):
    if not binders:
        return {}
    occurs = {b: [c for c in comps if b in fv(c)] for b in binders}
    colour = _refine(binders, comps, occurs) if len(binders) > 1 else {binders[0]: 0}
    groups: dict = {}
    for b in binders:
        groups.setdefault(colour[b], []).append(b)
    ordered = [groups[k] for k in sorted(groups)]
    budget = math.prod(math.factorial(len(g)) for g in ordered)
    if budget > PERMUTATION_BUDGET:
        # give up on exhaustive search; greedy by colour then occurrence
        flat = [b for g in ordered for b in g]
        return {b: bound_name(i) for i, b in enumerate(flat)}
    best = None
    for choice in itertools.product(*(itertools.permutations(g) for g in ordered)):
        flat = [b for g in choice for b in g]
        naming = {b: bound_name(i) for i, b in enumerate(flat)}
        printed = _printed(comps, naming)
        if best is None or printed < best[0]:
            best = (printed, naming)
    return best[1]


def canonicalize_with_map(p, defs):
    """Canonicalize ``p``; also return how its ``%``-named binders were
    renamed (original name -> new name, or None when collected)."""
    binders, comps, origin = [], [], {}
    _flatten(p, {}, binders, comps, origin, defs)
    binders, comps = _collect(binders, comps)
    seen, uniq = set(), []
    for c in comps:
        k = c if isinstance(c, Emit) else None
        if k is not None:
            if k in seen:
                continue
            seen.add(k)
        uniq.append(alpha_normalize(c))
    naming = _name_binders(binders, uniq)
    final = [rename(c, naming) for c in uniq]
    final.sort(key=pretty)
    printed = [pretty(c) for c in final]
    state = State(len(binders), tuple(final), _key(len(binders), printed))
    mapping = {orig: naming.get(t) for t, orig in origin.items()}
    return state, mapping


def canonicalize(p, defs) -> State:
    return canonicalize_with_map(p, defs)[0]


def struct_equiv(p, q, defs) -> bool:
    return canonicalize(p, defs) == canonicalize(q, defs)


def rename_free(state: State, mapping: dict, defs) -> State:
    """Rename free names of a canonical state."""
    mapping = {k: v for k, v in mapping.items() if k != v}
    if not mapping:
        return state
    return canonicalize(rename(state.program(), mapping), defs)


__all__ = [
    "State", "canonicalize", "canonicalize_with_map", "struct_equiv",
    "alpha_normalize", "bound_name", "rename_free",
]

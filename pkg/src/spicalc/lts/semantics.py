"""One-step transitions of canonical states.

Because canonical states have every restriction lifted to the top, the
nested rules reduce to local rewrites of single components (``rec``, the
two matches) or of an emitter/receiver pair (``synch``).  Rule ``comp`` and
``ν`` are implicit; ``ν_ex`` appears as the extrusion of bound names in
``Out`` steps.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

from ..syntax.ast import (
    Call, Con, Deref, Emit, MatchSig, MatchVal, Nil, Par, Present, Var,
    mk_list, new_all, par_all,
)
from ..syntax.canonical import State, canonicalize_with_map
from ..syntax.evaluate import eval_expr, match_value
from ..syntax.printer import pretty_expr
from ..syntax.terms import rename, substitute, value_names
from .actions import NEXT, TAU, AuxIn, In, Out


class BoundsExceeded(Exception):
    """Exploration hit a configured bound; results are inconclusive."""


@dataclass(frozen=True)
class Step:
    action: object
    target: State
    ren: dict = field(default_factory=dict, compare=False, hash=False)
    rule: str = ""
    comp: int = -1


def _rebuild(state: State, idx, replacement, defs, extra=()):
    comps = list(state.comps)
    if idx is not None:
        comps[idx] = replacement
    comps.extend(extra)
    return canonicalize_with_map(new_all(state.bound, par_all(comps)), defs)


def _value_key(v):
    return pretty_expr(v)


def sorted_values(vals):
    """Canonical value order: by printed form."""
    return sorted(set(vals), key=_value_key)


# -- nested steps ------------------------------------------------------------

def _local_tau(c, defs):
    """τ steps of a single component: (rule, successor program)."""
    if isinstance(c, Call):
        d = defs.thread(c.name)
        vals = [eval_expr(a, defs) for a in c.args]
        theta = {x: v for x, v in zip(d.params, vals)}
        return [("rec", substitute(d.body, theta))]
    if isinstance(c, MatchSig):
        if c.left == c.right:
            return [("=sig1", c.then)]
        return [("=sig2", c.orelse)]
    if isinstance(c, MatchVal):
        v = eval_expr(c.subject, defs)
        theta = match_value(v, c.pattern)
        if theta is not None:
            return [("=ind1", substitute(c.then, theta))]
        return [("=ind2", c.orelse)]
    return []


def emissions(state: State) -> dict:
    """Signal -> list of values emitted by top-level emitters."""
    out: dict = {}
    for c in state.comps:
        if isinstance(c, Emit):
            out.setdefault(c.sig, []).append(c.expr)
    return out


def tau_steps(state: State, defs, kind="std"):
    steps = []
    em = emissions(state)
    for i, c in enumerate(state.comps):
        for rule, succ in _local_tau(c, defs):
            tgt, ren = _rebuild(state, i, succ, defs)
            steps.append(Step(TAU, tgt, ren, rule, i))
        if isinstance(c, Present):
            for v in em.get(c.sig, ()):
                body = substitute(c.body, {c.var: v})
                extra = (Emit(c.sig, v),) if kind == "v1" else ()
                tgt, ren = _rebuild(state, i, body, defs, extra)
                steps.append(Step(TAU, tgt, ren, "synch", i))
    return steps


def _fresh_extruded(state: State, count: int) -> list:
    taken = state.free_names()
    out, k = [], 0
    while len(out) < count:
        n = f"@{k}"
        if n not in taken:
            out.append(n)
        k += 1
    return out


def out_steps(state: State, defs):
    bound = set(state.bound)
    steps = []
    for i, c in enumerate(state.comps):
        if not isinstance(c, Emit) or c.sig in bound:
            continue
        ext = [n for n in value_names(c.expr) if n in bound]
        fresh = _fresh_extruded(state, len(ext))
        mapping = dict(zip(ext, fresh))
        keep = [b for b in state.bound if b not in mapping]
        comps = [rename(x, mapping) for x in state.comps]
        tgt, ren = canonicalize_with_map(new_all(keep, par_all(comps)), defs)
        ren = {**ren, **mapping}
        value = rename(Emit(c.sig, c.expr), mapping).expr
        steps.append(Step(Out(tuple(fresh), c.sig, value), tgt, ren, "out", i))
    return steps


def aux_in_steps(state: State, alphabet):
    """``s?v`` offers of present statements on free signals (never relevant)."""
    bound = set(state.bound)
    out = []
    for i, c in enumerate(state.comps):
        if isinstance(c, Present) and c.sig not in bound:
            for s, v in alphabet:
                if s == c.sig:
                    out.append((AuxIn(s, v), i))
    return out


def nested_steps(state: State, defs, alphabet=(), kind="std"):
    """All τ and Out steps plus the auxiliary receive offers ``s?v``."""
    steps = tau_steps(state, defs, kind) + out_steps(state, defs)
    for a, i in aux_in_steps(state, alphabet):
        c = state.comps[i]
        body = substitute(c.body, {c.var: a.value})
        extra = (Emit(a.signal, a.value),) if kind == "v1" else ()
        tgt, ren = _rebuild(state, i, body, defs, extra)
        steps.append(Step(a, tgt, ren, "in_aux", i))
    return steps


def input_steps(state: State, alphabet, defs):
    """Rule (in): ``P --sv--> P | s̄v`` for every alphabet pair."""
    steps = []
    for s, v in alphabet:
        tgt, ren = _rebuild(state, None, None, defs, (Emit(s, v),))
        steps.append(Step(In(s, v), tgt, ren, "in", -1))
    return steps


def v2_input_steps(state: State, alphabet, defs):
    """Receive-from-environment steps of the variant without rule (in).

    The receiver keeps the value it read: ``s(x).P,K --sv--> [v/x]P | s̄v``.
    """
    steps = []
    for a, i in aux_in_steps(state, alphabet):
        c = state.comps[i]
        tgt, ren = _rebuild(state, i, substitute(c.body, {c.var: a.value}), defs,
                            (Emit(a.signal, a.value),))
        steps.append(Step(In(a.signal, a.value), tgt, ren, "in", i))
    return steps


# -- end of instant -----------------------------------------------------------

def suspended(state: State, defs=None) -> bool:
    em = emissions(state)
    for c in state.comps:
        if isinstance(c, (Call, MatchSig, MatchVal)):
            return False
        if isinstance(c, Present) and c.sig in em:
            return False
    return True


def _deref_sigs(e, out):
    if isinstance(e, Deref):
        out.add(e.sig)
    elif not isinstance(e, Var):
        for a in e.args:
            _deref_sigs(a, out)


def dereferenced(state: State) -> set:
    out: set = set()
    for c in state.comps:
        if isinstance(c, Present) and isinstance(c.cont, Call):
            for a in c.cont.args:
                _deref_sigs(a, out)
    return out


def apply_collect(k, V: dict):
    """``V(K)``: replace each ``!s`` in a continuation by the list ``V(s)``."""
    if isinstance(k, Nil):
        return k

    def sub(e):
        if isinstance(e, Deref):
            return mk_list(V.get(e.sig, ()))
        if isinstance(e, Var) or not e.args:
            return e
        return type(e)(e.name if isinstance(e, Con) else e.fun, tuple(sub(a) for a in e.args))

    return Call(k.name, tuple(sub(a) for a in k.args))


def eoi_component(p, V: dict, defs):
    """The ``(E,V)`` relation on a suspended, restriction-free program.

    Returns ``(E, successor)`` or None when ``V`` is not admissible.
    """
    if isinstance(p, Nil):
        return {}, Nil()
    if isinstance(p, Emit):
        v = eval_expr(p.expr, defs)
        if v not in V.get(p.sig, ()):
            return None
        return {p.sig: {v}}, Nil()
    if isinstance(p, Present):
        if V.get(p.sig):
            return None
        return {}, apply_collect(p.cont, V)
    if isinstance(p, Par):
        left = eoi_component(p.left, V, defs)
        right = eoi_component(p.right, V, defs)
        if left is None or right is None:
            return None
        E = {s: set(vs) for s, vs in left[0].items()}
        for s, vs in right[0].items():
            E.setdefault(s, set()).update(vs)
        return E, Par(left[1], right[1])
    return None


def represents(V: dict, E: dict) -> bool:
    """``V ⊩ E``: each ``V(s)`` lists ``E(s)`` without repetition."""
    for s in set(V) | set(E):
        lst = list(V.get(s, ()))
        if len(lst) != len(set(lst)) or set(lst) != set(E.get(s, ())):
            return False
    return True


def emission_map(state: State) -> dict:
    return {s: set(vs) for s, vs in emissions(state).items()}


def collect_maps(state: State, max_perms=720, policy="enumerate"):
    """CollectMaps V with V ⊩ E for a suspended state.

    Only signals dereferenced by some continuation are permuted; the order of
    the others cannot influence the successor.
    """
    E = {s: sorted_values(vs) for s, vs in emissions(state).items()}
    deref = dereferenced(state)
    free = [s for s in sorted(E) if s in deref and len(E[s]) > 1]
    base = {s: tuple(vs) for s, vs in E.items()}
    if policy == "sorted" or not free:
        return [base]
    total = math.prod(math.factorial(len(E[s])) for s in free)
    if total > max_perms:
        raise BoundsExceeded(f"{total} value orderings exceed the bound {max_perms}")
    out = []
    for combo in itertools.product(*(itertools.permutations(E[s]) for s in free)):
        V = dict(base)
        V.update(zip(free, combo))
        out.append(V)
    return out


def next_target(state: State, V: dict, defs):
    comps = [apply_collect(c.cont, V) for c in state.comps if isinstance(c, Present)]
    return canonicalize_with_map(new_all(state.bound, par_all(comps)), defs)


def next_steps(state: State, defs, max_perms=720):
    """Rule (next) for every admissible CollectMap, deduplicated."""
    if not suspended(state):
        return []
    seen, steps = set(), []
    for V in collect_maps(state, max_perms):
        tgt, ren = next_target(state, V, defs)
        if tgt.key not in seen:
            seen.add(tgt.key)
            steps.append(Step(NEXT, tgt, ren, "next", -1))
    return steps


def relevant_steps(state: State, defs, alphabet=(), max_perms=720, kind="std"):
    """τ, Out, In and N steps, in a deterministic order."""
    if kind == "v2":
        steps = tau_steps(state, defs) + out_steps(state, defs)
        steps += v2_input_steps(state, alphabet, defs)
    else:
        steps = tau_steps(state, defs, kind) + out_steps(state, defs)
        steps += input_steps(state, alphabet, defs)
    steps += next_steps(state, defs, max_perms)
    return steps


__all__ = [
    "Step", "BoundsExceeded", "nested_steps", "input_steps", "v2_input_steps",
    "tau_steps", "out_steps", "suspended", "eoi_component", "next_steps",
    "relevant_steps", "collect_maps", "next_target", "emission_map",
    "represents", "apply_collect", "sorted_values", "dereferenced",
]

"""Suspension, weak suspension and commitment."""
from __future__ import annotations

from ..lts.actions import Out
from ..lts.semantics import out_steps
from ..lts.space import Bounds, Lts
from ..syntax.canonical import State, canonicalize


def _state(p, defs) -> State:
    return p if isinstance(p, State) else canonicalize(p, defs)


def weak_susp(p, defs, bounds: Bounds | None = None) -> bool:
    """True iff some τ-derivative of ``p`` is suspended.

    Raises BoundsExceeded when the τ-component is too large to decide.
    """
    lts = Lts(defs, (), bounds)
    root = lts.add_state(_state(p, defs))
    return any(lts.is_suspended(x) for x in lts.tau_star(root))


def commitment(p, defs) -> set:
    """Signals on which ``p`` can emit right now."""
    return {st.action.signal for st in out_steps(_state(p, defs), defs)
            if isinstance(st.action, Out)}


def tau_cycle(lts: Lts, roots) -> list | None:
    """A τ-cycle among states reachable from ``roots`` (as a state list), or None."""
    states = lts.reachable(roots)
    colour = {}
    for s0 in states:
        if s0 in colour:
            continue
        stack = [(s0, iter(lts.tau_edges(s0)))]
        path = [s0]
        colour[s0] = 1
        while stack:
            x, it = stack[-1]
            e = next(it, None)
            if e is None:
                colour[x] = 2
                stack.pop()
                path.pop()
                continue
            c = colour.get(e.dst)
            if c == 1:
                return path[path.index(e.dst):] + [e.dst]
            if c is None:
                colour[e.dst] = 1
                path.append(e.dst)
                stack.append((e.dst, iter(lts.tau_edges(e.dst))))
    return None


def is_reactive_lts(lts: Lts, roots) -> bool:
    return tau_cycle(lts, roots) is None


__all__ = ["weak_susp", "commitment", "tau_cycle", "is_reactive_lts"]

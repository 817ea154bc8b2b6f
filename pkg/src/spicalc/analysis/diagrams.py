"""Input/output commutation squares.

For a state ``Q`` with two distinct strong steps ``Q -α-> Q1`` and
``Q -β-> Q2`` where the pair is in–τ, in–in, out–τ, out–in or out–out,
the square closes if ``Q1 -β'-> Q3`` and ``Q2 -α'-> Q4`` exist with
``Q3`` and ``Q4`` structurally equivalent.  Primed labels are the same
actions seen from the other corner: names created by extrusion may differ,
and an output whose extruded names were already extruded loses them.
"""
from __future__ import annotations

import itertools

from ..lts.actions import In, Out, Tau
from ..lts.space import Lts
from ..syntax.ast import Var
from ..syntax.printer import pretty, pretty_expr
from ..syntax.terms import subst_expr, value_names

PAIRS = {("in", "tau"), ("in", "in"), ("out", "tau"), ("out", "in"), ("out", "out")}


def _kind(a) -> str | None:
    if isinstance(a, Tau):
        return "tau"
    if isinstance(a, In):
        return "in"
    if isinstance(a, Out):
        return "out"
    return None


def _shape(a, known) -> tuple:
    """The label with every name outside ``known`` blurred."""
    if _kind(a) in (None, "tau"):
        return (type(a).__name__,)
    theta = {n: Var("?") for n in value_names(a.value) if n not in known}
    sig = a.signal if a.signal in known else "?"
    return (_kind(a), sig, pretty_expr(subst_expr(a.value, theta)))


def _same_up_to_new(lts: Lts, x, y, known) -> bool:
    if lts.state(x).key == lts.state(y).key:
        return True
    nx = sorted(lts.free_names(x) - known)
    ny = sorted(lts.free_names(y) - known)
    if len(nx) != len(ny) or not nx:
        return False
    for perm in itertools.permutations(nx):
        if lts.renamed(y, dict(zip(ny, perm))) == x:
            return True
    return False


def closes(lts: Lts, q, e1, e2, known) -> bool:
    want_b = _shape(e2.action, known)
    want_a = _shape(e1.action, known)
    ends3 = [e.dst for e in lts.edges(e1.dst) if _shape(e.action, known) == want_b]
    ends4 = [e.dst for e in lts.edges(e2.dst) if _shape(e.action, known) == want_a]
    return any(_same_up_to_new(lts, x, y, known) for x in ends3 for y in ends4)


def check_squares(lts: Lts, roots=None) -> dict:
    """Check every applicable square on the states reachable from ``roots``.

    Returns ``{"checked": n, "failures": [...]}``.
    """
    alpha_names = set()
    for s, v in lts.alphabet:
        alpha_names |= {s, *value_names(v)}
    checked, failures = 0, []
    for q in lts.reachable(roots):
        known = set(lts.free_names(q)) | alpha_names
        edges = [e for e in lts.edges(q) if _kind(e.action) is not None]
        for e1, e2 in itertools.permutations(edges, 2):
            k = (_kind(e1.action), _kind(e2.action))
            if k not in PAIRS:
                continue
            checked += 1
            if not closes(lts, q, e1, e2, known):
                failures.append({"state": pretty(lts.state(q).program()), "pair": "-".join(k),
                                 "alpha": str(e1.action), "beta": str(e2.action),
                                 "q1": pretty(lts.state(e1.dst).program()),
                                 "q2": pretty(lts.state(e2.dst).program())})
    return {"checked": checked, "failures": failures}


__all__ = ["check_squares", "closes", "PAIRS"]

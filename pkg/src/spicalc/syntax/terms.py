"""Free names, capture-avoiding substitution and renaming."""
from __future__ import annotations

import itertools

from .ast import (
    App, Call, Con, Deref, Emit, MatchSig, MatchVal, New, Nil, Par, PCon,
    Present, PVar, PWild, Var,
)

_fresh = itertools.count()


def fresh_name(hint: str = "v") -> str:
    return f"~{hint}{next(_fresh)}"


def expr_fv(e) -> set:
    if isinstance(e, Var):
        return {e.name}
    if isinstance(e, Deref):
        return {e.sig}
    out = set()
    for a in e.args:
        out |= expr_fv(a)
    return out


def pattern_vars(p) -> list:
    if isinstance(p, PVar):
        return [p.name]
    if isinstance(p, PWild):
        return []
    out = []
    for a in p.args:
        out.extend(pattern_vars(a))
    return out


def fv(p) -> set:
    """Free variables of a program (signal names included)."""
    if isinstance(p, Nil):
        return set()
    if isinstance(p, Emit):
        return {p.sig} | expr_fv(p.expr)
    if isinstance(p, Call):
        out = set()
        for a in p.args:
            out |= expr_fv(a)
        return out
    if isinstance(p, Present):
        return {p.sig} | (fv(p.body) - {p.var}) | fv(p.cont)
    if isinstance(p, MatchSig):
        return {p.left, p.right} | fv(p.then) | fv(p.orelse)
    if isinstance(p, MatchVal):
        return expr_fv(p.subject) | (fv(p.then) - set(pattern_vars(p.pattern))) | fv(p.orelse)
    if isinstance(p, New):
        return fv(p.body) - {p.name}
    if isinstance(p, Par):
        return fv(p.left) | fv(p.right)
    raise TypeError(f"not a program: {p!r}")


def subst_expr(e, theta: dict):
    if isinstance(e, Var):
        return theta.get(e.name, e)
    if isinstance(e, Deref):
        r = theta.get(e.sig)
        if r is None:
            return e
        return Deref(_as_name(r, e.sig))
    if not e.args:
        return e
    args = tuple(subst_expr(a, theta) for a in e.args)
    return type(e)(e.name if isinstance(e, Con) else e.fun, args)


def _as_name(r, where) -> str:
    if isinstance(r, Var):
        return r.name
    raise TypeError(f"cannot substitute non-signal value {r!r} for signal {where!r}")


def _sig(name: str, theta: dict) -> str:
    r = theta.get(name)
    return name if r is None else _as_name(r, name)


def _range_fv(theta: dict, keys) -> set:
    out = set()
    for k in keys:
        if k in theta:
            out |= expr_fv(theta[k])
    return out


def _under_binders(binders, body_fv, theta):
    """Restrict theta for a scope binding ``binders``; rename any binder that
    would capture a name in the range.  Returns (renaming, inner theta)."""
    inner = {k: v for k, v in theta.items() if k not in binders and k in body_fv}
    if not inner:
        return {}, inner
    danger = _range_fv(inner, inner)
    ren = {}
    for b in binders:
        if b in danger:
            ren[b] = fresh_name(b.lstrip("~%$@")[:1] or "v")
    if ren:
        inner = dict(inner)
        for b, nb in ren.items():
            inner[b] = Var(nb)
    return ren, inner


def _rename_pattern(p, ren):
    if isinstance(p, PVar):
        return PVar(ren.get(p.name, p.name))
    if isinstance(p, PWild):
        return p
    return PCon(p.name, tuple(_rename_pattern(a, ren) for a in p.args))


def substitute(p, theta: dict):
    """Capture-avoiding substitution of variables by expressions/values.

    Bound names that would capture a free name of the substituted terms are
    freshened.
    """
    if not theta:
        return p
    if isinstance(p, Nil):
        return p
    if isinstance(p, Emit):
        return Emit(_sig(p.sig, theta), subst_expr(p.expr, theta))
    if isinstance(p, Call):
        return Call(p.name, tuple(subst_expr(a, theta) for a in p.args))
    if isinstance(p, Par):
        return Par(substitute(p.left, theta), substitute(p.right, theta))
    if isinstance(p, MatchSig):
        return MatchSig(_sig(p.left, theta), _sig(p.right, theta),
                        substitute(p.then, theta), substitute(p.orelse, theta))
    if isinstance(p, Present):
        ren, inner = _under_binders((p.var,), fv(p.body), theta)
        var = ren.get(p.var, p.var)
        return Present(_sig(p.sig, theta), var, substitute(p.body, inner),
                       substitute(p.cont, theta))
    if isinstance(p, MatchVal):
        pv = pattern_vars(p.pattern)
        ren, inner = _under_binders(pv, fv(p.then), theta)
        return MatchVal(subst_expr(p.subject, theta), _rename_pattern(p.pattern, ren),
                        substitute(p.then, inner), substitute(p.orelse, theta))
    if isinstance(p, New):
        ren, inner = _under_binders((p.name,), fv(p.body), theta)
        return New(ren.get(p.name, p.name), substitute(p.body, inner))
    raise TypeError(f"not a program: {p!r}")


def rename(p, mapping: dict):
    """Rename free names according to ``mapping`` (name -> name)."""
    return substitute(p, {k: Var(v) for k, v in mapping.items() if k != v})


def value_names(v) -> list:
    """Signal names of a value in order of first occurrence."""
    out = []

    def walk(x):
        if isinstance(x, Var):
            if x.name not in out:
                out.append(x.name)
        else:
            for a in x.args:
                walk(a)

    walk(v)
    return out


def is_value(e) -> bool:
    if isinstance(e, Var):
        return True
    if isinstance(e, Con):
        return all(is_value(a) for a in e.args)
    return False


def contains_deref(e) -> bool:
    if isinstance(e, Deref):
        return True
    if isinstance(e, Var):
        return False
    return any(contains_deref(a) for a in e.args)


__all__ = [
    "fresh_name", "fv", "expr_fv", "pattern_vars", "substitute", "subst_expr",
    "rename", "value_names", "is_value", "contains_deref", "App",
]

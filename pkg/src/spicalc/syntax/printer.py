"""Pretty printer producing the concrete ``.spi`` syntax.

For desugared programs ``parse(pretty(p)) == p``.
"""
from __future__ import annotations

from .ast import (
    App, Call, Choice, Con, Deref, Emit, MatchSig, MatchVal, New, Nil, Par,
    Pause, Present, PVar, PWild, TauPrefix, Var, list_items,
)


def pretty_expr(e) -> str:
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Deref):
        return "!" + e.sig
    if isinstance(e, Con):
        if e.name == "nil" and not e.args:
            return "[]"
        if e.name == "cons":
            items = list_items(e)
            if items is not None:
                return "[" + "; ".join(pretty_expr(x) for x in items) + "]"
        if not e.args:
            return e.name
        return f"{e.name}({', '.join(pretty_expr(a) for a in e.args)})"
    if isinstance(e, App):
        return f"{e.fun}({', '.join(pretty_expr(a) for a in e.args)})"
    raise TypeError(f"not an expression: {e!r}")


def pretty_pattern(p) -> str:
    if isinstance(p, PVar):
        return p.name
    if isinstance(p, PWild):
        return "_"
    if p.name == "nil" and not p.args:
        return "[]"
    if not p.args:
        return p.name
    return f"{p.name}({', '.join(pretty_pattern(a) for a in p.args)})"


def _atom(p) -> str:
    s = pretty(p)
    if isinstance(p, (Par, Choice)):
        return f"({s})"
    return s


def pretty(p) -> str:
    """Render a program on one line."""
    if isinstance(p, Nil):
        return "0"
    if isinstance(p, Call):
        return f"{p.name}({', '.join(pretty_expr(a) for a in p.args)})"
    if isinstance(p, Emit):
        return f"emit {p.sig} {pretty_expr(p.expr)}"
    if isinstance(p, Present):
        return f"present {p.sig}({p.var}) {{ {pretty(p.body)} }} else {pretty(p.cont)}"
    if isinstance(p, MatchSig):
        return f"if {p.left} = {p.right} {{ {pretty(p.then)} }} else {{ {pretty(p.orelse)} }}"
    if isinstance(p, MatchVal):
        then = _atom(p.then)
        if isinstance(p.then, MatchVal):
            then = f"({then})"
        return (f"match {pretty_expr(p.subject)} with {pretty_pattern(p.pattern)} -> "
                f"{then} | _ -> {_atom(p.orelse)}")
    if isinstance(p, New):
        names = [p.name]
        body = p.body
        while isinstance(body, New):
            names.append(body.name)
            body = body.body
        return f"new {', '.join(names)} in {_atom(body)}"
    if isinstance(p, Par):
        left = pretty(p.left)
        if isinstance(p.left, Par):
            left = f"({left})"
        return f"{left} || {pretty(p.right)}"
    if isinstance(p, Choice):
        return f"{_atom(p.left)} + {_atom(p.right)}"
    if isinstance(p, Pause):
        return f"pause.{_atom(p.body)}"
    if isinstance(p, TauPrefix):
        return f"tau.{_atom(p.body)}"
    raise TypeError(f"not a program: {p!r}")


def pretty_type(t) -> str:
    return str(t)


def pretty_defs(defs) -> str:
    """Render a definition table (threads, functions, types) as source."""
    lines = []
    for tname, ctors in defs.types.items():
        alts = []
        for c in ctors:
            args, _ = defs.constructors[c]
            alts.append(c if not args else f"{c}({', '.join(map(str, args))})")
        lines.append(f"type {tname} = {' | '.join(alts)};")
    for f in defs.functions.values():
        if f.signature is not None:
            args, res = f.signature
            lines.append(f"fun {f.name} : ({', '.join(map(str, args))}) -> {res};")
        for pats, body in f.equations:
            lines.append(f"fun {f.name}({', '.join(pretty_pattern(q) for q in pats)}) = "
                         f"{pretty_expr(body)};")
    for s, t in defs.signals.items():
        lines.append(f"signal {s} : {t};")
    for s, vals in defs.inputs.items():
        lines.append(f"input {s} : {', '.join(pretty_expr(v) for v in vals)};")
    for d in defs.threads.values():
        params = []
        for i, x in enumerate(d.params):
            ann = d.annotations[i] if i < len(d.annotations) else None
            params.append(x if ann is None else f"{x} : {ann}")
        lines.append(f"{d.name}({', '.join(params)}) = {pretty(d.body)};")
    return "\n".join(lines)

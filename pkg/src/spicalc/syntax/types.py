"""Monomorphic type inference by unification.

``Sig(σ)`` types signal names, ``List(σ)`` types dereferenced signals and
the builtin list constructors, ``1`` is the type of ``*`` and numerals
have type ``Nat``.  ``nil`` and ``cons`` are instantiated freshly at each
use; everything else is monomorphic.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .ast import (
    NAT, UNIT, App, Call, Con, Deref, Emit, MatchSig, MatchVal, New, Nil,
    Par, Present, PVar, PWild, TCon, TVar, Var, is_numeral, list_type,
    sig_type,
)
from .terms import fv


class SpiTypeError(Exception):
    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("\n".join(self.errors))


class _Mismatch(Exception):
    pass


@dataclass
class TypeInfo:
    """Result of a successful check; types are fully resolved where known."""
    signals: dict = field(default_factory=dict)    # free signal -> Type
    threads: dict = field(default_factory=dict)    # thread -> tuple of Types
    functions: dict = field(default_factory=dict)  # fun -> ((args), result)


class _Checker:
    def __init__(self, defs):
        self.defs = defs
        self.counter = itertools.count()
        self.subst: dict = {}
        self.globals: dict = {}
        self.threads: dict = {}
        self.functions: dict = {}

    def fresh(self):
        return TVar(next(self.counter))

    def resolve(self, t):
        while isinstance(t, TVar) and t.id in self.subst:
            t = self.subst[t.id]
        return t

    def zonk(self, t):
        t = self.resolve(t)
        if isinstance(t, TCon) and t.args:
            return TCon(t.name, tuple(self.zonk(a) for a in t.args))
        return t

    def occurs(self, v, t):
        t = self.resolve(t)
        if isinstance(t, TVar):
            return t.id == v.id
        return any(self.occurs(v, a) for a in t.args)

    def unify(self, a, b, what):
        a, b = self.resolve(a), self.resolve(b)
        if isinstance(a, TVar) and isinstance(b, TVar) and a.id == b.id:
            return
        if isinstance(a, TVar):
            if self.occurs(a, b):
                raise _Mismatch(f"{what}: infinite type")
            self.subst[a.id] = b
            return
        if isinstance(b, TVar):
            self.unify(b, a, what)
            return
        if a.name != b.name or len(a.args) != len(b.args):
            raise _Mismatch(f"{what}: expected {self.zonk(b)}, found {self.zonk(a)}")
        for x, y in zip(a.args, b.args):
            self.unify(x, y, what)

    # -- environment ------------------------------------------------------
    def global_sig(self, name):
        t = self.globals.get(name)
        if t is None:
            t = self.globals[name] = sig_type(self.fresh())
            declared = self.defs.signals.get(name)
            if declared is not None:
                self.unify(t, declared, f"signal {name}")
        return t

    def lookup(self, env, name):
        if name in env:
            return env[name]
        return self.global_sig(name)

    def ctor_type(self, name, nargs, what):
        if name == "*":
            args, res = (), UNIT
        elif is_numeral(name):
            args, res = (), NAT
        elif name == "nil":
            args, res = (), list_type(self.fresh())
        elif name == "cons":
            a = self.fresh()
            args, res = (a, list_type(a)), list_type(a)
        elif name in self.defs.constructors:
            args, res = self.defs.constructors[name]
        else:
            raise _Mismatch(f"{what}: unknown constructor {name}")
        if len(args) != nargs:
            raise _Mismatch(f"{what}: constructor {name} expects {len(args)} argument(s), got {nargs}")
        return args, res

    def fun_type(self, name):
        if name not in self.functions:
            fdef = self.defs.functions.get(name)
            if fdef is None:
                raise _Mismatch(f"unknown function {name}")
            if fdef.signature is not None:
                self.functions[name] = (tuple(fdef.signature[0]), fdef.signature[1])
            else:
                n = len(fdef.equations[0][0]) if fdef.equations else 0
                self.functions[name] = (tuple(self.fresh() for _ in range(n)), self.fresh())
        return self.functions[name]

    def thread_type(self, name):
        if name not in self.threads:
            d = self.defs.threads.get(name)
            if d is None:
                raise _Mismatch(f"call to undefined thread {name}")
            ts = []
            for i, _ in enumerate(d.params):
                ann = d.annotations[i] if i < len(d.annotations) else None
                ts.append(ann if ann is not None else self.fresh())
            self.threads[name] = tuple(ts)
        return self.threads[name]

    # -- terms ------------------------------------------------------------
    def expr(self, e, env, what):
        if isinstance(e, Var):
            return self.lookup(env, e.name)
        if isinstance(e, Deref):
            t = self.lookup(env, e.sig)
            elem = self.fresh()
            self.unify(t, sig_type(elem), f"{what}: dereference of non-signal {e.sig}")
            return list_type(elem)
        if isinstance(e, Con):
            args, res = self.ctor_type(e.name, len(e.args), what)
            for a, t in zip(e.args, args):
                self.unify(self.expr(a, env, what), t, f"{what}: argument of {e.name}")
            return res
        if isinstance(e, App):
            args, res = self.fun_type(e.fun)
            if len(args) != len(e.args):
                raise _Mismatch(f"{what}: {e.fun} expects {len(args)} argument(s), got {len(e.args)}")
            for a, t in zip(e.args, args):
                self.unify(self.expr(a, env, what), t, f"{what}: argument of {e.fun}")
            return res
        raise _Mismatch(f"{what}: not an expression {e!r}")

    def pattern(self, p, t, env, what):
        if isinstance(p, PVar):
            env[p.name] = t
            return
        if isinstance(p, PWild):
            return
        args, res = self.ctor_type(p.name, len(p.args), what)
        self.unify(t, res, f"{what}: pattern {p.name}")
        for q, a in zip(p.args, args):
            self.pattern(q, a, env, what)

    def sig(self, name, env, what):
        t = self.lookup(env, name)
        elem = self.fresh()
        self.unify(t, sig_type(elem), f"{what}: {name} is not a signal")
        return elem

    def program(self, p, env, what):
        if isinstance(p, Nil):
            return
        if isinstance(p, Call):
            params = self.thread_type(p.name)
            if len(params) != len(p.args):
                raise _Mismatch(f"{what}: {p.name} expects {len(params)} argument(s), got {len(p.args)}")
            for a, t in zip(p.args, params):
                self.unify(self.expr(a, env, what), t, f"{what}: argument of {p.name}")
        elif isinstance(p, Emit):
            elem = self.sig(p.sig, env, what)
            self.unify(self.expr(p.expr, env, what), elem, f"{what}: value emitted on {p.sig}")
        elif isinstance(p, Present):
            elem = self.sig(p.sig, env, what)
            self.program(p.body, {**env, p.var: elem}, what)
            self.program(p.cont, env, what)
        elif isinstance(p, MatchSig):
            a = self.sig(p.left, env, what)
            b = self.sig(p.right, env, what)
            self.unify(a, b, f"{what}: comparing {p.left} and {p.right}")
            self.program(p.then, env, what)
            self.program(p.orelse, env, what)
        elif isinstance(p, MatchVal):
            t = self.expr(p.subject, env, what)
            inner = dict(env)
            self.pattern(p.pattern, t, inner, what)
            self.program(p.then, inner, what)
            self.program(p.orelse, env, what)
        elif isinstance(p, New):
            self.program(p.body, {**env, p.name: sig_type(self.fresh())}, what)
        elif isinstance(p, Par):
            self.program(p.left, env, what)
            self.program(p.right, env, what)
        else:
            raise _Mismatch(f"{what}: unexpected node {type(p).__name__}")


def typecheck(defs, program=None, extra=()) -> TypeInfo:
    """Infer types for all definitions and the given program(s).

    Raises SpiTypeError listing every definition that fails to check.
    """
    ck = _Checker(defs)
    errors = []

    def attempt(what, fn):
        try:
            fn()
        except _Mismatch as err:
            errors.append(str(err))

    for fname, fdef in defs.functions.items():
        def check_fun(fname=fname, fdef=fdef):
            args, res = ck.fun_type(fname)
            for pats, body in fdef.equations:
                if len(pats) != len(args):
                    raise _Mismatch(f"function {fname}: equations disagree on arity")
                env: dict = {}
                for q, t in zip(pats, args):
                    ck.pattern(q, t, env, f"function {fname}")
                ck.unify(ck.expr(body, env, f"function {fname}"), res, f"function {fname}: result")
        attempt(fname, check_fun)
    for name, d in defs.threads.items():
        def check_thread(name=name, d=d):
            env = dict(zip(d.params, ck.thread_type(name)))
            ck.program(d.body, env, f"thread {name}")
        attempt(name, check_thread)
    for s, vals in defs.inputs.items():
        def check_input(s=s, vals=vals):
            elem = ck.sig(s, {}, f"input {s}")
            for v in vals:
                ck.unify(ck.expr(v, {}, f"input {s}"), elem, f"input value for {s}")
        attempt(s, check_input)
    progs = ([program] if program is not None else []) + list(extra)
    for p in progs:
        attempt("main", lambda p=p: ck.program(p, {}, "main"))
    for s in sorted(set().union(*(fv(p) for p in progs)) if progs else ()):
        attempt(s, lambda s=s: ck.global_sig(s))
    if errors:
        raise SpiTypeError(errors)
    return TypeInfo(
        signals={k: ck.zonk(v) for k, v in ck.globals.items()},
        threads={k: tuple(ck.zonk(t) for t in v) for k, v in ck.threads.items()},
        functions={k: (tuple(ck.zonk(t) for t in a), ck.zonk(r))
                   for k, (a, r) in ck.functions.items()},
    )


__all__ = ["typecheck", "TypeInfo", "SpiTypeError"]

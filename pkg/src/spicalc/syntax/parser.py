"""Parser for ``.spi`` source files.

File format (``;`` terminates every declaration, ``//`` and ``#`` start
comments)::

    type Req = req(Sig(Ans), Nat);
    fun f : (Nat) -> Ans;            // optional signature
    fun f(x) = ans(x);
    signal s : Sig(Req);             // optional free-signal typing
    input t : ans(0), ans(1);        // test values for environment inputs
    Server(s) = pause.Handle(s, !s);
    main = Server(s) || Client(0, s, t);

Program syntax, loosest binding first: ``P || Q`` (parallel), ``P + Q``
(internal choice), then the prefix forms ``0``, ``emit s e``,
``present s(x) { P } else K``, ``if s1 = s2 { P } else { Q }``,
``match e with p -> P | _ -> Q``, ``new s, t in P``, ``pause.P``,
``tau.P``, ``A(e, ...)`` and ``( P )``.  Bodies of prefix forms are single
prefix forms; parenthesise parallel compositions.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .ast import (
    NAT, UNIT, App, Call, Choice, Con, DefTable, Deref, Emit, FunDef,
    MatchSig, MatchVal, New, Nil, Par, Pause, PCon, Present, PVar, PWild,
    TauPrefix, TCon, ThreadDef, Var, is_builtin_ctor, is_numeral, mk_list,
)
from .terms import expr_fv, fv, pattern_vars


class SpiSyntaxError(Exception):
    """One or more positioned syntax errors."""

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("\n".join(f"{ln}:{col}: {msg}" for ln, col, msg in self.errors))


@dataclass(frozen=True)
class Token:
    kind: str    # ident, num, sym, eof
    text: str
    line: int
    col: int


_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>(//|\#)[^\n]*)
  | (?P<num>\d+)
  | (?P<ident>(?:[^\W\d]|[%$@~])[\w'~]*)
  | (?P<sym>\|\||->|::|⊕|[(){}\[\],;=|.!*:+_])
""", re.VERBOSE)

KEYWORDS = {"emit", "present", "else", "if", "match", "with", "new", "in",
            "pause", "tau", "τ", "type", "fun", "signal", "input", "main"}


def tokenize(text: str) -> list[Token]:
    out = []
    pos, line, col = 0, 1, 1
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise SpiSyntaxError([(line, col, f"unexpected character {text[pos]!r}")])
        kind = m.lastgroup
        chunk = m.group()
        if kind == "ident" and chunk == "_":
            kind = "sym"
        if kind not in ("ws", "comment"):
            out.append(Token(kind, chunk, line, col))
        nl = chunk.count("\n")
        if nl:
            line += nl
            col = len(chunk) - chunk.rfind("\n")
        else:
            col += len(chunk)
        pos = m.end()
    out.append(Token("eof", "", line, col))
    return out


class _Error(Exception):
    def __init__(self, tok, msg):
        self.tok, self.msg = tok, msg


class _Parser:
    def __init__(self, tokens):
        self.toks = tokens
        self.i = 0

    # -- token helpers ----------------------------------------------------
    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k=1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def at(self, text) -> bool:
        t = self.tok
        return t.text == text and t.kind in ("sym", "ident", "num")

    def advance(self) -> Token:
        t = self.tok
        self.i += 1
        return t

    def expect(self, text) -> Token:
        if not self.at(text):
            raise _Error(self.tok, f"expected {text!r}, found {self.tok.text or 'end of input'!r}")
        return self.advance()

    def ident(self, what="identifier") -> str:
        t = self.tok
        if t.kind != "ident" or t.text in KEYWORDS:
            raise _Error(t, f"expected {what}, found {t.text or 'end of input'!r}")
        self.i += 1
        return t.text

    # -- types ------------------------------------------------------------
    def type_(self):
        t = self.tok
        if t.kind == "num":
            if t.text != "1":
                raise _Error(t, "the only numeric type is 1")
            self.advance()
            return UNIT
        name = self.ident("type")
        args = ()
        if self.at("("):
            self.advance()
            args = [self.type_()]
            while self.at(","):
                self.advance()
                args.append(self.type_())
            self.expect(")")
            args = tuple(args)
        return TCon(name, args)

    # -- expressions ------------------------------------------------------
    def starts_expr(self) -> bool:
        t = self.tok
        if t.kind == "num":
            return True
        if t.kind == "ident":
            return t.text not in KEYWORDS
        return t.text in ("*", "[", "!")

    def expr(self):
        head = self.expr_term()
        if self.at("::"):
            self.advance()
            return Con("cons", (head, self.expr()))
        return head

    def expr_list(self, close):
        items = []
        if not self.at(close):
            items.append(self.expr())
            while self.at(","):
                self.advance()
                items.append(self.expr())
        self.expect(close)
        return tuple(items)

    def expr_term(self):
        t = self.tok
        if t.kind == "num":
            self.advance()
            return Con(t.text)
        if self.at("*"):
            self.advance()
            return Con("*")
        if self.at("!"):
            self.advance()
            return Deref(self.ident("signal name"))
        if self.at("["):
            self.advance()
            items = []
            if not self.at("]"):
                items.append(self.expr())
                while self.at(";"):
                    self.advance()
                    items.append(self.expr())
            self.expect("]")
            return mk_list(items)
        name = self.ident("expression")
        if self.at("("):
            self.advance()
            return App(name, self.expr_list(")"))
        return Var(name)

    # -- patterns ---------------------------------------------------------
    def pattern(self):
        head = self.pattern_term()
        if self.at("::"):
            self.advance()
            return PCon("cons", (head, self.pattern()))
        return head

    def pattern_term(self):
        t = self.tok
        if t.kind == "num":
            self.advance()
            return PCon(t.text)
        if self.at("*"):
            self.advance()
            return PCon("*")
        if self.at("_"):
            self.advance()
            return PWild()
        if self.at("["):
            self.advance()
            items = []
            if not self.at("]"):
                items.append(self.pattern())
                while self.at(";"):
                    self.advance()
                    items.append(self.pattern())
            self.expect("]")
            out = PCon("nil")
            for p in reversed(items):
                out = PCon("cons", (p, out))
            return out
        name = self.ident("pattern")
        if self.at("("):
            self.advance()
            args = []
            if not self.at(")"):
                args.append(self.pattern())
                while self.at(","):
                    self.advance()
                    args.append(self.pattern())
            self.expect(")")
            return PCon(name, tuple(args))
        return PVar(name)

    # -- programs ---------------------------------------------------------
    def program(self):
        left = self.choice()
        if self.at("||"):
            self.advance()
            return Par(left, self.program())
        return left

    def choice(self):
        left = self.atom()
        while self.at("+") or self.at("⊕"):
            self.advance()
            left = Choice(left, self.atom())
        return left

    def cont(self):
        if self.tok.kind == "num" and self.tok.text == "0":
            self.advance()
            return Nil()
        name = self.ident("continuation")
        self.expect("(")
        return Call(name, self.expr_list(")"))

    def atom(self):
        t = self.tok
        if t.kind == "num":
            if t.text != "0":
                raise _Error(t, "expected a program")
            self.advance()
            return Nil()
        if self.at("("):
            self.advance()
            p = self.program()
            self.expect(")")
            return p
        if t.kind != "ident":
            raise _Error(t, f"expected a program, found {t.text or 'end of input'!r}")
        kw = t.text
        if kw == "emit":
            self.advance()
            s = self.ident("signal name")
            e = self.expr() if self.starts_expr() else Con("*")
            return Emit(s, e)
        if kw == "present":
            self.advance()
            s = self.ident("signal name")
            self.expect("(")
            x = self.ident("variable")
            self.expect(")")
            self.expect("{")
            body = self.program()
            self.expect("}")
            self.expect("else")
            return Present(s, x, body, self.cont())
        if kw == "if":
            self.advance()
            a = self.ident("signal name")
            self.expect("=")
            b = self.ident("signal name")
            self.expect("{")
            p1 = self.program()
            self.expect("}")
            self.expect("else")
            self.expect("{")
            p2 = self.program()
            self.expect("}")
            return MatchSig(a, b, p1, p2)
        if kw == "match":
            self.advance()
            u = self.expr()
            self.expect("with")
            pat = self.pattern()
            self.expect("->")
            p1 = self.atom()
            self.expect("|")
            self.expect("_")
            self.expect("->")
            p2 = self.atom()
            return MatchVal(u, pat, p1, p2)
        if kw == "new":
            self.advance()
            names = [self.ident("signal name")]
            while self.at(","):
                self.advance()
                names.append(self.ident("signal name"))
            self.expect("in")
            body = self.atom()
            for n in reversed(names):
                body = New(n, body)
            return body
        if kw == "pause":
            self.advance()
            self.expect(".")
            return Pause(self.atom())
        if kw in ("tau", "τ"):
            self.advance()
            self.expect(".")
            return TauPrefix(self.atom())
        name = self.ident("program")
        self.expect("(")
        return Call(name, self.expr_list(")"))

    # -- declarations -----------------------------------------------------
    def skip_decl(self):
        depth = 0
        while self.tok.kind != "eof":
            t = self.advance()
            if t.text in ("(", "[", "{"):
                depth += 1
            elif t.text in (")", "]", "}"):
                depth = max(0, depth - 1)
            elif t.text == ";" and depth == 0:
                return

    def looks_like_thread_def(self) -> bool:
        if self.tok.kind != "ident" or self.tok.text in KEYWORDS or self.peek().text != "(":
            return False
        depth, k = 0, 1
        while True:
            t = self.peek(k)
            if t.kind == "eof":
                return False
            if t.text == "(":
                depth += 1
            elif t.text == ")":
                depth -= 1
                if depth == 0:
                    return self.peek(k + 1).text == "="
            k += 1


@dataclass
class _Raw:
    types: list
    funsigs: list
    funeqs: list
    signals: list
    inputs: list
    threads: list
    main: object
    main_tok: object


RESERVED_PREFIXES = ("_", "%", "$", "@", "~")


def _parse_raw(text: str) -> _Raw:
    toks = tokenize(text)
    p = _Parser(toks)
    raw = _Raw([], [], [], [], [], [], None, None)
    errors = [(t.line, t.col, f"identifier {t.text!r} uses a reserved prefix")
              for t in toks if t.kind == "ident" and t.text.startswith(RESERVED_PREFIXES)]
    while p.tok.kind != "eof":
        start = p.tok
        try:
            if p.at("type"):
                p.advance()
                tname = p.ident("type name")
                p.expect("=")
                alts = []
                while True:
                    ctok = p.tok
                    cname = p.ident("constructor")
                    args = ()
                    if p.at("("):
                        p.advance()
                        args = [p.type_()]
                        while p.at(","):
                            p.advance()
                            args.append(p.type_())
                        p.expect(")")
                        args = tuple(args)
                    alts.append((cname, args, ctok))
                    if not p.at("|"):
                        break
                    p.advance()
                p.expect(";")
                raw.types.append((tname, alts, start))
            elif p.at("fun"):
                p.advance()
                fname = p.ident("function name")
                if p.at(":"):
                    p.advance()
                    p.expect("(")
                    args = []
                    if not p.at(")"):
                        args.append(p.type_())
                        while p.at(","):
                            p.advance()
                            args.append(p.type_())
                    p.expect(")")
                    p.expect("->")
                    res = p.type_()
                    p.expect(";")
                    raw.funsigs.append((fname, (tuple(args), res), start))
                else:
                    p.expect("(")
                    pats = []
                    if not p.at(")"):
                        pats.append(p.pattern())
                        while p.at(","):
                            p.advance()
                            pats.append(p.pattern())
                    p.expect(")")
                    p.expect("=")
                    body = p.expr()
                    p.expect(";")
                    raw.funeqs.append((fname, tuple(pats), body, start))
            elif p.at("signal"):
                p.advance()
                names = [p.ident("signal name")]
                while p.at(","):
                    p.advance()
                    names.append(p.ident("signal name"))
                p.expect(":")
                ty = p.type_()
                p.expect(";")
                for n in names:
                    raw.signals.append((n, ty, start))
            elif p.at("input"):
                p.advance()
                s = p.ident("signal name")
                p.expect(":")
                vals = [p.expr()]
                while p.at(","):
                    p.advance()
                    vals.append(p.expr())
                p.expect(";")
                raw.inputs.append((s, tuple(vals), start))
            elif p.at("main"):
                p.advance()
                p.expect("=")
                prog = p.program()
                p.expect(";")
                if raw.main is not None:
                    raise _Error(start, "duplicate main program")
                raw.main, raw.main_tok = prog, start
            elif p.looks_like_thread_def():
                name = p.ident("thread name")
                p.expect("(")
                params, anns = [], []
                if not p.at(")"):
                    while True:
                        params.append(p.ident("parameter"))
                        if p.at(":"):
                            p.advance()
                            anns.append(p.type_())
                        else:
                            anns.append(None)
                        if not p.at(","):
                            break
                        p.advance()
                p.expect(")")
                p.expect("=")
                body = p.program()
                p.expect(";")
                raw.threads.append((name, tuple(params), tuple(anns), body, start))
            else:
                prog = p.program()
                if p.at(";"):
                    p.advance()
                if p.tok.kind != "eof" and raw.main is None and not raw.threads:
                    raise _Error(p.tok, f"unexpected {p.tok.text!r} after program")
                if raw.main is not None:
                    raise _Error(start, "duplicate main program")
                raw.main, raw.main_tok = prog, start
        except _Error as err:
            errors.append((err.tok.line, err.tok.col, err.msg))
            if p.i == start and p.tok.kind != "eof":
                p.advance()
            p.skip_decl()
    if errors:
        raise SpiSyntaxError(errors)
    return raw


# -- resolution and desugaring ---------------------------------------------

class _Resolver:
    def __init__(self, defs: DefTable, errors: list, taken=()):
        self.defs = defs
        self.errors = errors
        self.counter = 0
        self.aux_threads = []
        self.taken = set(taken)

    def err(self, tok, msg):
        self.errors.append((tok.line, tok.col, msg))

    def is_ctor(self, name):
        return name in self.defs.constructors or is_builtin_ctor(name)

    def fresh(self, base):
        while True:
            self.counter += 1
            name = f"_{base}{self.counter}"
            if name not in self.defs.threads and name not in self.taken:
                self.taken.add(name)
                return name

    def expr(self, e, tok, allow_deref=False):
        if isinstance(e, Var):
            if self.is_ctor(e.name):
                self._check_arity(e.name, 0, tok)
                return Con(e.name)
            return e
        if isinstance(e, Deref):
            if not allow_deref:
                self.err(tok, f"dereference !{e.sig} is only allowed in continuation arguments")
            return e
        if isinstance(e, Con):
            return Con(e.name, tuple(self.expr(a, tok, allow_deref) for a in e.args))
        args = tuple(self.expr(a, tok, allow_deref) for a in e.args)
        if self.is_ctor(e.fun):
            self._check_arity(e.fun, len(args), tok)
            return Con(e.fun, args)
        if e.fun in self.defs.functions:
            return App(e.fun, args)
        self.err(tok, f"unknown constructor or function {e.fun!r}")
        return App(e.fun, args)

    def _check_arity(self, name, n, tok):
        if name in self.defs.constructors:
            want = len(self.defs.constructors[name][0])
        elif name == "cons":
            want = 2
        else:
            want = 0
        if want != n:
            self.err(tok, f"constructor {name} expects {want} argument(s), got {n}")

    def pattern(self, p, tok):
        if isinstance(p, PVar):
            if self.is_ctor(p.name):
                self._check_arity(p.name, 0, tok)
                return PCon(p.name)
            return p
        if isinstance(p, PWild):
            return p
        if not self.is_ctor(p.name):
            self.err(tok, f"unknown constructor {p.name!r}")
        else:
            self._check_arity(p.name, len(p.args), tok)
        out = PCon(p.name, tuple(self.pattern(a, tok) for a in p.args))
        names = pattern_vars(out)
        if len(names) != len(set(names)):
            self.err(tok, "pattern variables must be distinct")
        return out

    def cont(self, k, tok):
        if isinstance(k, Nil):
            return k
        return Call(k.name, tuple(self.expr(a, tok, allow_deref=True) for a in k.args))

    def program(self, p, tok):
        if isinstance(p, Nil):
            return p
        if isinstance(p, Call):
            return Call(p.name, tuple(self.expr(a, tok) for a in p.args))
        if isinstance(p, Emit):
            return Emit(p.sig, self.expr(p.expr, tok))
        if isinstance(p, Present):
            return Present(p.sig, p.var, self.program(p.body, tok), self.cont(p.cont, tok))
        if isinstance(p, MatchSig):
            return MatchSig(p.left, p.right, self.program(p.then, tok), self.program(p.orelse, tok))
        if isinstance(p, MatchVal):
            subj = self.expr(p.subject, tok)
            pat = self.pattern(p.pattern, tok)
            then = self.program(p.then, tok)
            if isinstance(subj, Var) and subj.name in fv(then) and subj.name not in pattern_vars(pat):
                self.err(tok, f"matched variable {subj.name} may not occur free in the first branch")
            return MatchVal(subj, pat, then, self.program(p.orelse, tok))
        if isinstance(p, New):
            return New(p.name, self.program(p.body, tok))
        if isinstance(p, Par):
            return Par(self.program(p.left, tok), self.program(p.right, tok))
        if isinstance(p, TauPrefix):
            body = self.program(p.body, tok)
            return MatchVal(Con("*"), PCon("*"), body, Nil())
        if isinstance(p, Choice):
            left = self.program(p.left, tok)
            right = self.program(p.right, tok)
            return choice(left, right, self.fresh("c"), self.fresh("x"))
        if isinstance(p, Pause):
            return self.pause(p.body, tok)
        raise TypeError(p)

    def pause(self, body, tok):
        s, x = self.fresh("p"), self.fresh("x")
        if isinstance(body, Call):
            k = self.cont(body, tok)
        elif isinstance(body, Nil):
            k = body
        else:
            inner = self.program(body, tok)
            params = tuple(sorted(fv(inner)))
            name = self.fresh("Pause")
            self.aux_threads.append(ThreadDef(name, params, inner, (None,) * len(params)))
            k = Call(name, tuple(Var(v) for v in params))
        return New(s, Present(s, x, Nil(), k))


def choice(left, right, sig: str, var: str):
    """Internal choice ``left + right`` encoded with a private signal carrying
    both 0 and 1; the present statement picks one value nondeterministically."""
    branch = MatchVal(Var(var), PCon("0"), left, right)
    return New(sig, Par(Emit(sig, Con("0")),
                        Par(Emit(sig, Con("1")), Present(sig, var, branch, Nil()))))


def _type_name_ok(t, known):
    if t.name in ("1", "Nat") and not t.args:
        return True
    if t.name in ("Sig", "List") and len(t.args) == 1:
        return _type_name_ok(t.args[0], known)
    return t.name in known and not t.args


def parse(text: str, taken=()):
    """Parse a source file.  Returns ``(main, defs)``; ``main`` is None when
    the file only holds declarations.  Generated thread names avoid
    ``taken``.  Raises SpiSyntaxError."""
    raw = _parse_raw(text)
    defs = DefTable()
    errors = []
    known_types = {name for name, _, _ in raw.types}
    for tname, alts, tok in raw.types:
        if tname in defs.types or tname in ("1", "Nat", "Sig", "List"):
            errors.append((tok.line, tok.col, f"duplicate type {tname}"))
            continue
        names = []
        for cname, args, ctok in alts:
            if cname in defs.constructors or is_builtin_ctor(cname):
                errors.append((ctok.line, ctok.col, f"duplicate constructor {cname}"))
                continue
            for a in args:
                if not _type_name_ok(a, known_types):
                    errors.append((ctok.line, ctok.col, f"unknown type {a}"))
            defs.constructors[cname] = (args, TCon(tname))
            names.append(cname)
        defs.types[tname] = tuple(names)
    sigs = {}
    for fname, sig, tok in raw.funsigs:
        if fname in sigs:
            errors.append((tok.line, tok.col, f"duplicate signature for {fname}"))
        sigs[fname] = sig
    eqs: dict = {}
    for fname, pats, body, tok in raw.funeqs:
        eqs.setdefault(fname, []).append((pats, body, tok))
    for fname in sigs:
        if fname not in eqs:
            tok = next(t for n, _, t in raw.funsigs if n == fname)
            errors.append((tok.line, tok.col, f"function {fname} has no equations"))
    # functions must be known before resolving their bodies
    for fname in eqs:
        if fname in defs.constructors or is_builtin_ctor(fname):
            tok = eqs[fname][0][2]
            errors.append((tok.line, tok.col, f"{fname} is already a constructor"))
        defs.functions[fname] = FunDef(fname, (), sigs.get(fname))
    res = _Resolver(defs, errors, taken)
    for fname, items in eqs.items():
        equations = []
        for pats, body, tok in items:
            rp = tuple(res.pattern(q, tok) for q in pats)
            names = [v for q in rp for v in pattern_vars(q)]
            if len(names) != len(set(names)):
                errors.append((tok.line, tok.col, "pattern variables must be distinct"))
            rb = res.expr(body, tok)
            extra = expr_fv(rb) - set(names)
            if extra:
                errors.append((tok.line, tok.col,
                               f"unbound variable(s) {', '.join(sorted(extra))} in {fname}"))
            equations.append((rp, rb))
        defs.functions[fname] = FunDef(fname, tuple(equations), sigs.get(fname))
    for s, ty, tok in raw.signals:
        if ty.name != "Sig":
            errors.append((tok.line, tok.col, f"signal {s} must have a Sig(...) type"))
        defs.signals[s] = ty
    for s, vals, tok in raw.inputs:
        defs.inputs[s] = tuple(defs.inputs.get(s, ())) + tuple(res.expr(v, tok) for v in vals)
    for name, params, anns, body, tok in raw.threads:
        if name in defs.threads:
            errors.append((tok.line, tok.col, f"duplicate thread definition {name}"))
            continue
        if len(set(params)) != len(params):
            errors.append((tok.line, tok.col, f"repeated parameter in {name}"))
        defs.threads[name] = ThreadDef(name, params, res.program(body, tok), anns)
    main = None
    if raw.main is not None:
        main = res.program(raw.main, raw.main_tok)
    for d in res.aux_threads:
        defs.threads[d.name] = d
    _check_calls(defs, main, errors, raw)
    if errors:
        raise SpiSyntaxError(sorted(errors))
    return main, defs


def thread_calls(p, out):
    if isinstance(p, Call):
        out.append(p)
    elif isinstance(p, Present):
        thread_calls(p.body, out)
        if isinstance(p.cont, Call):
            out.append(p.cont)
    elif isinstance(p, (MatchSig, MatchVal)):
        thread_calls(p.then, out)
        thread_calls(p.orelse, out)
    elif isinstance(p, New):
        thread_calls(p.body, out)
    elif isinstance(p, Par):
        thread_calls(p.left, out)
        thread_calls(p.right, out)


def _check_calls(defs, main, errors, raw):
    toks = {name: tok for name, _, _, _, tok in raw.threads}
    bodies = [(d.name, d.body) for d in defs.threads.values()]
    if main is not None:
        bodies.append(("main", main))
    for owner, body in bodies:
        calls = []
        thread_calls(body, calls)
        tok = toks.get(owner, raw.main_tok)
        for c in calls:
            if c.name not in defs.threads:
                line, col = (tok.line, tok.col) if tok else (1, 1)
                errors.append((line, col, f"call to undefined thread {c.name} in {owner}"))


def parse_program(text: str, defs: DefTable | None = None):
    """Parse a bare program against an existing definition table."""
    p = _Parser(tokenize(text))
    try:
        prog = p.program()
        if p.at(";"):
            p.advance()
        if p.tok.kind != "eof":
            raise _Error(p.tok, f"unexpected {p.tok.text!r} after program")
    except _Error as err:
        raise SpiSyntaxError([(err.tok.line, err.tok.col, err.msg)]) from None
    defs = defs if defs is not None else DefTable()
    errors: list = []
    res = _Resolver(defs, errors)
    out = res.program(prog, Token("sym", "", 1, 1))
    for d in res.aux_threads:
        defs.threads[d.name] = d
    if errors:
        raise SpiSyntaxError(errors)
    return out


def merge_defs(a: DefTable, b: DefTable) -> DefTable:
    """Union of two definition tables; a name defined differently in both is an error."""
    out = DefTable(fuel=min(a.fuel, b.fuel))
    errors = []
    for fld in ("threads", "functions", "constructors", "types", "signals"):
        merged = dict(getattr(a, fld))
        for k, v in getattr(b, fld).items():
            if k in merged and merged[k] != v:
                errors.append((1, 1, f"conflicting definitions of {k}"))
            merged[k] = v
        setattr(out, fld, merged)
    out.inputs = dict(a.inputs)
    for s, vals in b.inputs.items():
        out.inputs[s] = tuple(dict.fromkeys(tuple(out.inputs.get(s, ())) + tuple(vals)))
    if errors:
        raise SpiSyntaxError(errors)
    return out


__all__ = ["parse", "parse_program", "merge_defs", "tokenize", "SpiSyntaxError", "choice", "NAT", "is_numeral"]

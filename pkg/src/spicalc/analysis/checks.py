"""Determinacy and confluence checks over explored LTSs.

Every verdict is relative to the input alphabet and the exploration bounds;
a property that holds on a partial LTS is reported as inconclusive.

Diamonds compare states that may have gained free names by extrusion.  To
decide whether a name on one side is "the same" as a name on the other, each
extruded name is traced back to its origin: a bound name of the state where
the diamond starts, or a name created along the path.  Created names are
matched by their position in the action label.
"""
from __future__ import annotations

import time
from collections import deque
from dataclasses import dataclass, field

from ..equiv.bisim import BisimEngine
from ..equiv.predicates import tau_cycle
from ..lts.actions import Next, Out, Tau, compatible, encode_action
from ..lts.semantics import BoundsExceeded
from ..lts.space import Bounds, Lts, default_alphabet, extruded_alignment
from ..syntax.ast import Var
from ..syntax.printer import pretty, pretty_expr
from ..syntax.terms import subst_expr

PROPERTIES = ("reactive", "tau_inert", "determinate", "confluent",
              "locally_confluent", "diamond_5_6_2", "strong_confluence")


@dataclass
class AnalysisVerdict:
    property: str
    status: str                    # holds | fails | inconclusive
    witness: dict | None = None
    alphabet: tuple = ()
    bounds: dict = field(default_factory=dict)
    seconds: float = 0.0
    note: str = ""

    @property
    def holds(self) -> bool:
        return self.status == "holds"

    @property
    def fails(self) -> bool:
        return self.status == "fails"

    def to_dict(self) -> dict:
        out = {"status": self.status,
               "relative_to": {"alphabet": [[s, pretty_expr(v)] for s, v in self.alphabet],
                               "bounds": self.bounds},
               "seconds": round(self.seconds, 4)}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.note:
            out["note"] = self.note
        return out


class _Fail(Exception):
    def __init__(self, witness):
        self.witness = witness


class Analyzer:
    """Shares one explored LTS and one self-bisimulation across all checks."""

    def __init__(self, program, defs, alphabet=None, bounds: Bounds | None = None):
        self.defs = defs
        self.alphabet = tuple(default_alphabet([program], defs) if alphabet is None else alphabet)
        self.bounds = bounds or Bounds()
        self.lts = Lts(defs, self.alphabet, self.bounds)
        self.root = None
        self.error = None
        try:
            self.root = self.lts.add_program(program)
            self.lts.explore()
        except BoundsExceeded as err:
            self.error = str(err)
        self.complete = self.root is not None and not self.lts.partial
        self.engine = BisimEngine(self.lts, "standard")
        self._derivs = None

    # -- helpers ----------------------------------------------------------
    def term(self, sid) -> str:
        return pretty(self.lts.state(sid).program())

    def derivatives(self) -> list:
        if self._derivs is None:
            seen, todo = {self.root}, [self.root]
            while todo:
                x = todo.pop()
                for e in self.lts._edges.get(x, ()):
                    if e.dst not in seen:
                        seen.add(e.dst)
                        todo.append(e.dst)
            self._derivs = sorted(s for s in seen if s in self.lts._edges)
        return self._derivs

    def equiv(self, a, b) -> bool:
        return self.engine.related(a, b)

    def _run(self, name, fn) -> AnalysisVerdict:
        t0 = time.perf_counter()
        base = dict(alphabet=self.alphabet, bounds=self.bounds.as_dict())
        if self.root is None:
            return AnalysisVerdict(name, "inconclusive", note=self.error or "", **base)
        try:
            fn()
            status, witness = "holds", None
        except _Fail as f:
            status, witness = "fails", f.witness
        except BoundsExceeded as err:
            return AnalysisVerdict(name, "inconclusive", note=str(err),
                                   seconds=time.perf_counter() - t0, **base)
        note = ""
        if status == "holds" and (self.lts.partial or not self.complete):
            status, note = "inconclusive", "exploration bounds were hit"
        return AnalysisVerdict(name, status, witness, seconds=time.perf_counter() - t0,
                               note=note, **base)

    # -- reactivity -------------------------------------------------------
    def reactivity(self) -> AnalysisVerdict:
        def go():
            if not self.complete:
                raise BoundsExceeded("LTS is partial")
            cyc = tau_cycle(self.lts, [self.root])
            if cyc is not None:
                raise _Fail({"tau_cycle": [self.term(s) for s in cyc]})
        return self._run("reactive", go)

    # -- τ-inertness --------------------------------------------------------
    def tau_inert(self) -> AnalysisVerdict:
        def go():
            for x in self.derivatives():
                for e in self.lts.tau_edges(x):
                    if not self.equiv(x, e.dst):
                        raise _Fail({"from": self.term(x), "to": self.term(e.dst)})
        return self._run("tau_inert", go)

    # -- determinacy ------------------------------------------------------
    def determinate(self, max_len=None) -> AnalysisVerdict:
        def go():
            lts = self.lts
            start = lts.tau_star(self.root)
            parent = {}
            todo = deque()
            for i, a in enumerate(start):
                for b in start[i:]:
                    pr = (a, b) if a <= b else (b, a)
                    if pr not in parent:
                        parent[pr] = None
                        todo.append((pr, 0))
            while todo:
                (a, b), depth = todo.popleft()
                if not self.equiv(a, b):
                    raise _Fail({"sequence": _trace(parent, (a, b)),
                                 "left": self.term(a), "right": self.term(b)})
                if max_len is not None and depth >= max_len:
                    continue
                if len(parent) > self.bounds.max_states * 4:
                    raise BoundsExceeded("determinacy product too large")
                wa = [(x, d) for x, d in lts.weak(a) if not isinstance(x, Tau)]
                wb = [(x, d) for x, d in lts.weak(b) if not isinstance(x, Tau)]
                for x, da in wa:
                    for y, db in wb:
                        if type(x) is not type(y):
                            continue
                        avoid = lts.free_names(a) | lts.free_names(b) | \
                            lts.free_names(da) | lts.free_names(db)
                        al = extruded_alignment(x, y, avoid)
                        if al is None:
                            continue
                        lab, ma, mb = al
                        na, nb = lts.renamed(da, ma), lts.renamed(db, mb)
                        pr = (na, nb) if na <= nb else (nb, na)
                        if pr not in parent:
                            parent[pr] = ((a, b), encode_action(lab))
                            todo.append((pr, depth + 1))
        return self._run("determinate", go)

    # -- diamonds -----------------------------------------------------------
    def _diamond(self, q, w1, w2, weak_moves):
        """Close ``q -α-> q1``, ``q -β-> q2`` up to residuals and ≈."""
        lts = self.lts
        a, q1, m1 = w1
        b, q2, m2 = w2
        t1 = _Tokens(lts, q, a, q1, m1, "a")
        t2 = _Tokens(lts, q, b, q2, m2, "b")
        la, lb = t1.label, t2.label
        same = la == _swap_created(lb, "b", "a")
        if same:
            res_ba = res_ab = None
        elif isinstance(a, Out) and isinstance(b, Out):
            res_ba = _residual_label(lb, la)
            res_ab = _residual_label(la, lb)
        else:
            res_ba, res_ab = lb, la
        ends1 = _residual_ends(lts, t1, res_ba, "b")
        ends2 = _residual_ends(lts, t2, res_ab, "a")
        for q3, n3 in ends1:
            for q4, n4 in ends2:
                if same:
                    n4 = {k: (_swap_token(v, "b", "a")) for k, v in n4.items()}
                r3 = lts.renamed(q3, {k: v for k, v in n3.items()})
                r4 = lts.renamed(q4, {k: v for k, v in n4.items()})
                if self.equiv(r3, r4):
                    return True
        return False

    def _diamonds(self, strong: bool, only=None):
        lts = self.lts
        for q in self.derivatives():
            if strong:
                moves = [(e.action, e.dst, e.renmap) for e in lts.edges(q)]
            else:
                moves = [(w.action, w.dst, dict(w.ren)) for w in lts.weak_tracked(q)
                         if not (isinstance(w.action, Tau) and w.dst == q)]
            for i, w1 in enumerate(moves):
                for w2 in moves[i + 1:]:
                    if not compatible(w1[0], w2[0]):
                        continue
                    if only is not None:
                        if type(w1[0]) is not type(w2[0]) or not isinstance(w1[0], only):
                            continue
                    if not self._diamond(q, w1, w2, not strong):
                        raise _Fail({"state": self.term(q),
                                     "alpha": encode_action(w1[0]), "q1": self.term(w1[1]),
                                     "beta": encode_action(w2[0]), "q2": self.term(w2[1])})

    def confluent(self) -> AnalysisVerdict:
        return self._run("confluent", lambda: self._diamonds(strong=False))

    def locally_confluent(self) -> AnalysisVerdict:
        return self._run("locally_confluent", lambda: self._diamonds(strong=True))

    def diamond_5_6_2(self) -> AnalysisVerdict:
        def go():
            lts = self.lts
            for q in self.derivatives():
                for kind in (Tau, Next):
                    es = [e for e in lts.edges(q) if isinstance(e.action, kind)]
                    for i, e1 in enumerate(es):
                        for e2 in es[i + 1:]:
                            if not any(self.equiv(x, y) for x in lts.tau_star(e1.dst)
                                       for y in lts.tau_star(e2.dst)):
                                raise _Fail({"state": self.term(q), "action": str(kind()),
                                             "q1": self.term(e1.dst), "q2": self.term(e2.dst)})
        return self._run("diamond_5_6_2", go)

    def strong_confluence(self) -> AnalysisVerdict:
        def go():
            lts = self.lts
            for q in self.derivatives():
                taus = [e.dst for e in lts.tau_edges(q)]
                for i, x in enumerate(taus):
                    for y in taus[i + 1:]:
                        jx = {x} | {e.dst for e in lts.tau_edges(x)}
                        jy = {y} | {e.dst for e in lts.tau_edges(y)}
                        if not jx & jy:
                            raise _Fail({"state": self.term(q), "clause": "tau",
                                         "q1": self.term(x), "q2": self.term(y)})
                ns = [e.dst for e in lts.edges(q) if isinstance(e.action, Next)]
                for i, x in enumerate(ns):
                    for y in ns[i + 1:]:
                        if not self.equiv(x, y):
                            raise _Fail({"state": self.term(q), "clause": "N",
                                         "q1": self.term(x), "q2": self.term(y)})
        return self._run("strong_confluence", go)

    def run(self, name) -> AnalysisVerdict:
        return {
            "reactive": self.reactivity, "tau_inert": self.tau_inert,
            "determinate": self.determinate, "confluent": self.confluent,
            "locally_confluent": self.locally_confluent,
            "diamond_5_6_2": self.diamond_5_6_2,
            "strong_confluence": self.strong_confluence,
        }[name]()


def _trace(parent, pr):
    seq = []
    while parent.get(pr) is not None:
        pr, act = parent[pr]
        seq.append(act)
    return list(reversed(seq))


# -- name origins -------------------------------------------------------------

class _Tokens:
    """Tokenised view of one side of a diamond.

    ``names`` maps the free names of the side's target to tokens; bound names
    of the target are mapped to the token of their origin in ``q``.
    """

    def __init__(self, lts, q, action, dst, ren, tag):
        self.lts = lts
        self.dst = dst
        self.tag = tag
        inverse = {v: k for k, v in ren.items() if v is not None}
        self.names = {}
        for n in lts.free_names(dst):
            if isinstance(action, Out) and n in action.extruded:
                src = inverse.get(n)
                self.names[n] = f"@q{src[1:]}" if src else f"@{tag}{action.extruded.index(n)}"
            else:
                self.names[n] = n
        self.bound_origin = {}
        for b in lts.state(dst).bound:
            src = inverse.get(b)
            self.bound_origin[b] = f"@q{src[1:]}" if src else None
        self.label = _tok_label(action, self.names)


def _tok_label(action, names):
    if isinstance(action, Out):
        theta = {k: Var(v) for k, v in names.items()}
        return ("out", tuple(names.get(t, t) for t in action.extruded),
                names.get(action.signal, action.signal), pretty_expr(subst_expr(action.value, theta)))
    if isinstance(action, Tau):
        return ("tau",)
    if isinstance(action, Next):
        return ("next",)
    theta = {k: Var(v) for k, v in names.items()}
    return ("in", names.get(action.signal, action.signal),
            pretty_expr(subst_expr(action.value, theta)))


def _swap_token(tok, old, new):
    if isinstance(tok, str) and tok.startswith("@" + old) and tok[2:].isdigit():
        return "@" + new + tok[2:]
    return tok


def _swap_created(label, old, new):
    if label[0] != "out":
        return label
    ext = tuple(_swap_token(t, old, new) for t in label[1])
    value = label[3]
    for t in label[1]:
        value = value.replace(t, _swap_token(t, old, new))
    return ("out", ext, label[2], value)


def _residual_label(x, y):
    """Tokenised ``x ∖ y`` for two distinct outputs."""
    gone = set(y[1])
    return ("out", tuple(t for t in x[1] if t not in gone), x[2], x[3])


def _residual_ends(lts, side: _Tokens, want, created_tag):
    """Targets reachable from ``side.dst`` by a weak step matching the
    tokenised label ``want`` (None means τ), with their name→token maps."""
    out = []
    for w in lts.weak_tracked(side.dst):
        act, dst, ren = w.action, w.dst, dict(w.ren)
        if want is None or want == ("tau",):
            if not isinstance(act, Tau):
                continue
            out.append((dst, dict(side.names)))
            continue
        if want[0] == "out":
            if not isinstance(act, Out) or len(act.extruded) != len(want[1]):
                continue
            inverse = {v: k for k, v in ren.items() if v is not None}
            names = dict(side.names)
            ok = True
            for j, n in enumerate(act.extruded):
                src = inverse.get(n)
                tok = side.bound_origin.get(src) if src else None
                expect = want[1][j]
                if tok is None:
                    # created name: matches a created token of the other side
                    if not expect.startswith("@" + created_tag):
                        ok = False
                        break
                    tok = expect
                names[n] = tok
            if not ok:
                continue
            if _tok_label(act, names) != want:
                continue
            out.append((dst, names))
            continue
        if _tok_label(act, side.names) == want:
            out.append((dst, dict(side.names)))
    return out


# -- entry points -------------------------------------------------------------

def reactivity(lts_or_program, defs=None, alphabet=None, bounds=None) -> AnalysisVerdict:
    return Analyzer(lts_or_program, defs, alphabet, bounds).reactivity()


def tau_inert(p, defs, alphabet=None, bounds=None) -> AnalysisVerdict:
    return Analyzer(p, defs, alphabet, bounds).tau_inert()


def determinate_bounded(p, defs, alphabet=None, bounds=None, max_len=None) -> AnalysisVerdict:
    return Analyzer(p, defs, alphabet, bounds).determinate(max_len)


def confluent_bounded(p, defs, alphabet=None, bounds=None) -> AnalysisVerdict:
    return Analyzer(p, defs, alphabet, bounds).confluent()


def locally_confluent(p, defs, alphabet=None, bounds=None) -> AnalysisVerdict:
    return Analyzer(p, defs, alphabet, bounds).locally_confluent()


def diamond_5_6_2(p, defs, alphabet=None, bounds=None) -> AnalysisVerdict:
    return Analyzer(p, defs, alphabet, bounds).diamond_5_6_2()


def strong_confluence(p, defs, alphabet=None, bounds=None) -> AnalysisVerdict:
    return Analyzer(p, defs, alphabet, bounds).strong_confluence()


IMPLICATIONS = (
    ("confluent", "tau_inert", None),
    ("confluent", "determinate", None),
    ("determinate", "confluent", None),
    ("confluent", "locally_confluent", None),
    ("locally_confluent", "confluent", "reactive"),
    ("diamond_5_6_2", "locally_confluent", None),
    ("locally_confluent", "diamond_5_6_2", None),
    ("strong_confluence", "determinate", None),
)


def cross_check(results: dict) -> list:
    """Implications between the properties that the results must respect."""
    bad = []
    for lhs, rhs, cond in IMPLICATIONS:
        if lhs not in results or rhs not in results:
            continue
        if cond is not None and (cond not in results or not results[cond].holds):
            continue
        if results[lhs].holds and results[rhs].fails:
            c = f" (given {cond})" if cond else ""
            bad.append(f"{lhs} holds but {rhs} fails{c}")
    return bad


def analyze_all(p, defs, alphabet=None, bounds=None, properties=PROPERTIES) -> dict:
    """Run the selected checks on one shared LTS and cross-check the results."""
    an = Analyzer(p, defs, alphabet, bounds)
    results = {}
    for name in properties:
        if name not in PROPERTIES:
            raise ValueError(f"unknown property {name!r}")
        results[name] = an.run(name)
    return {
        "states": len(an.lts.states),
        "complete": an.complete and not an.lts.partial,
        "alphabet": [[s, pretty_expr(v)] for s, v in an.alphabet],
        "bounds": an.bounds.as_dict(),
        "results": results,
        "contradictions": cross_check(results),
    }


def report_to_dict(report: dict) -> dict:
    out = {k: v for k, v in report.items() if k != "results"}
    out["properties"] = {k: v.to_dict() for k, v in report["results"].items()}
    return out


__all__ = [
    "Analyzer", "AnalysisVerdict", "PROPERTIES", "reactivity", "tau_inert",
    "determinate_bounded", "confluent_bounded", "locally_confluent",
    "diamond_5_6_2", "strong_confluence", "analyze_all", "cross_check",
    "report_to_dict", "IMPLICATIONS",
]

"""Weak labelled bisimulation as a greatest fixpoint.

Pairs of states are discovered from the root pair.  Each pair carries a list
of obligations, one per challenge; an obligation lists alternative answers,
each a conjunction of pairs.  Starting from "every discovered pair holds",
pairs with an unanswerable challenge are removed until nothing changes.
The removal order gives a well-founded witness for every removed pair.

Variants:

``standard``  strong challenges, weak answers
``weak``      weak challenges, weak answers
``v1``        as standard, receivers keep the value they read
``v2``        no input rule; receivers read from the environment and the
              relation is closed under adding an alphabet emission
``v3``        as v2, with the disjunctive input clause and the N clause
              over emission contexts
``barbed``    τ, commitment and suspension/N clauses (reactive programs only)
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from ..lts.actions import In, Next, Out, encode_action
from ..lts.semantics import BoundsExceeded
from ..lts.space import Bounds, Lts, default_alphabet, extruded_alignment
from ..syntax.ast import Emit, par_all
from ..syntax.printer import pretty, pretty_expr

VARIANTS = ("standard", "weak", "v1", "v2", "v3", "barbed")


def lts_kind(variant: str) -> str:
    return {"v1": "v1", "v2": "v2", "v3": "v2"}.get(variant, "std")


@dataclass
class Verdict:
    verdict: str                 # equivalent | distinguished | inconclusive | unsupported
    variant: str
    alphabet: tuple = ()
    bounds: dict = field(default_factory=dict)
    witness: dict | None = None
    reason: str = ""
    relaxed_n: bool = False

    @property
    def equivalent(self) -> bool:
        return self.verdict == "equivalent"

    def to_dict(self) -> dict:
        out = {
            "verdict": self.verdict,
            "variant": self.variant + ("+relaxed-N" if self.relaxed_n else ""),
            "alphabet": [[s, pretty_expr(v)] for s, v in self.alphabet],
            "bounds": self.bounds,
        }
        if self.witness is not None:
            out["witness"] = self.witness
        if self.reason:
            out["reason"] = self.reason
        return out


@dataclass(frozen=True)
class Challenge:
    side: int          # 0: left state moves, 1: right state moves
    action: object
    target: int        # challenger's target (after alignment renaming)
    note: str = ""


def _norm(a, b):
    return (a, b) if a <= b else (b, a)


class BisimEngine:
    """Fixpoint solver over one LTS; results persist across queries."""

    def __init__(self, lts: Lts, variant="standard", context_size=2):
        if variant not in VARIANTS:
            raise ValueError(f"unknown variant {variant!r}")
        self.lts = lts
        self.variant = variant
        self.context_size = context_size
        self.obligations: dict = {}
        self.alive: set = set()
        self.dead: dict = {}          # pair -> (order, challenge index)
        self.deps: dict = {}
        self._contexts = None

    # -- obligations ------------------------------------------------------
    def _emission_contexts(self):
        if self._contexts is None:
            pairs = list(self.lts.alphabet)
            out = [()]
            for n in range(1, self.context_size + 1):
                for combo in itertools.combinations_with_replacement(range(len(pairs)), n):
                    S = tuple(sorted({pairs[i] for i in combo}, key=lambda sv: (sv[0], pretty_expr(sv[1]))))
                    if S not in out:
                        out.append(S)
            self._contexts = out
        return self._contexts

    def _with_context(self, sid, S):
        if not S:
            return sid
        return self.lts.compose_with(sid, par_all([Emit(s, v) for s, v in S]))

    def _answers_for(self, p_tgt, action, q, avoid):
        """Alternatives answering ``action`` (leading to ``p_tgt``) from ``q``."""
        lts = self.lts
        alts = []
        if isinstance(action, Out) and action.extruded:
            for b, q2 in lts.weak(q):
                if not isinstance(b, Out):
                    continue
                al = extruded_alignment(action, b, avoid | lts.free_names(p_tgt) | lts.free_names(q2))
                if al is None:
                    continue
                _, ma, mb = al
                alts.append(((lts.renamed(p_tgt, ma), lts.renamed(q2, mb)),))
            return alts
        for q2 in lts.weak_by_label(q, action):
            alts.append(((p_tgt, q2),))
        return alts

    def _one_side(self, p, q, side):
        """Challenges of ``p`` answered by ``q`` (pairs written left-to-right
        as (p-side, q-side) and normalised later)."""
        lts = self.lts
        v = self.variant
        out = []
        avoid = lts.free_names(p) | lts.free_names(q)
        if v == "barbed":
            return self._barbed(p, q, side)
        if v == "weak":
            moves = [(a, d) for a, d in lts.weak(p)]
        else:
            moves = [(e.action, e.dst) for e in lts.edges(p)]
        for a, p2 in moves:
            if v in ("v2",) and isinstance(a, In):
                continue
            if v == "v3" and isinstance(a, Next):
                continue
            if v == "v3" and isinstance(a, In):
                alts = [((p2, q2),) for q2 in lts.weak_by_label(q, a)]
                for q2 in lts.tau_star(q):
                    alts.append(((p2, lts.with_emission(q2, a.signal, a.value)),))
                out.append((Challenge(side, a, p2), alts))
                continue
            out.append((Challenge(side, a, p2), self._answers_for(p2, a, q, avoid)))
        if v == "v2":
            for s, val in lts.alphabet:
                pair = (lts.with_emission(p, s, val), lts.with_emission(q, s, val))
                out.append((Challenge(side, In(s, val), pair[0], "Inp"), [(pair,)]))
        if v == "v3":
            for S in self._emission_contexts():
                ps = self._with_context(p, S)
                qs = self._with_context(q, S)
                for e in lts.edges(ps):
                    if not isinstance(e.action, Next):
                        continue
                    alts = []
                    for q2 in lts.tau_star(qs):
                        for f in lts.edges(q2):
                            if isinstance(f.action, Next):
                                alts.append(((ps, q2), (e.dst, f.dst)))
                    note = "N|" + " ".join(f"{s}:{pretty_expr(x)}" for s, x in S)
                    out.append((Challenge(side, e.action, e.dst, note), alts))
        return out

    def _barbed(self, p, q, side):
        lts = self.lts
        out = []
        for e in lts.tau_edges(p):
            out.append((Challenge(side, e.action, e.dst), [((e.dst, q2),) for q2 in lts.tau_star(q)]))
        barbs = sorted({e.action.signal for e in lts.edges(p) if isinstance(e.action, Out)})
        for s in barbs:
            alts = []
            for q2 in lts.tau_star(q):
                if any(isinstance(f.action, Out) and f.action.signal == s for f in lts.edges(q2)):
                    alts.append(((p, q2),))
            out.append((Challenge(side, Out((), s, None), p, "barb"), alts))
        if lts.is_suspended(p):
            for e in lts.edges(p):
                if not isinstance(e.action, Next):
                    continue
                alts = []
                for q2 in lts.tau_star(q):
                    if not lts.is_suspended(q2):
                        continue
                    for f in lts.edges(q2):
                        if isinstance(f.action, Next):
                            alts.append(((p, q2), (e.dst, f.dst)))
                out.append((Challenge(side, e.action, e.dst), alts))
        return out

    def _compute(self, pair):
        p, q = pair
        obs = []
        for ch, alts in self._one_side(p, q, 0):
            obs.append((ch, [tuple(_norm(*pr) for pr in alt) for alt in alts]))
        for ch, alts in self._one_side(q, p, 1):
            # pairs were built as (q-side, p-side)
            obs.append((ch, [tuple(_norm(b, a) for a, b in alt) for alt in alts]))
        return obs

    # -- fixpoint ---------------------------------------------------------
    def _discover(self, root):
        todo = [root]
        new = []
        while todo:
            pair = todo.pop()
            if pair in self.obligations or pair[0] == pair[1]:
                continue
            obs = self._compute(pair)
            self.obligations[pair] = obs
            new.append(pair)
            for _, alts in obs:
                for alt in alts:
                    for pr in alt:
                        self.deps.setdefault(pr, set()).add(pair)
                        if pr not in self.obligations and pr[0] != pr[1]:
                            todo.append(pr)
        return new

    def _holds(self, pr) -> bool:
        return pr[0] == pr[1] or (pr not in self.dead)

    def _failing(self, pair):
        for i, (_, alts) in enumerate(self.obligations[pair]):
            if not any(all(self._holds(x) for x in alt) for alt in alts):
                return i
        return None

    def _refine(self, new):
        todo = list(new)
        pending = set(new)
        while todo:
            pair = todo.pop()
            pending.discard(pair)
            if pair in self.dead:
                continue
            i = self._failing(pair)
            if i is None:
                continue
            self.dead[pair] = (len(self.dead), i)
            for d in self.deps.get(pair, ()):
                if d not in self.dead and d not in pending and d in self.obligations:
                    pending.add(d)
                    todo.append(d)

    def related(self, p: int, q: int) -> bool:
        pair = _norm(p, q)
        if pair[0] == pair[1]:
            return True
        if pair not in self.obligations:
            self._refine(self._discover(pair))
        return pair not in self.dead

    # -- witnesses ----------------------------------------------------------
    def witness(self, p: int, q: int) -> dict | None:
        pair = _norm(p, q)
        if pair not in self.dead:
            return None
        nodes: dict = {}
        self._witness_node(pair, nodes)
        return {"root": _pid(pair), "nodes": nodes}

    def _witness_node(self, pair, nodes):
        pid = _pid(pair)
        if pid in nodes:
            return pid
        order, idx = self.dead[pair]
        ch, alts = self.obligations[pair][idx]
        lts = self.lts
        mover = pair[ch.side]
        node = {
            "order": order,
            "left": pretty(lts.state(pair[0]).program()),
            "right": pretty(lts.state(pair[1]).program()),
            "challenger": "left" if ch.side == 0 else "right",
            "from": pretty(lts.state(mover).program()),
            "action": _enc(ch.action),
            "target": pretty(lts.state(ch.target).program()),
            "clause": ch.note or "step",
            "answers": [],
            "_pair": [pair[0], pair[1]],
        }
        nodes[pid] = node
        for alt in alts:
            bad = next(x for x in alt if not self._holds(x))
            node["answers"].append({"pairs": [list(x) for x in alt], "fails": _pid(bad)})
            self._witness_node(bad, nodes)
        return pid


def _pid(pair) -> str:
    return f"{pair[0]}~{pair[1]}"


def _enc(a):
    if isinstance(a, Out) and a.value is None:
        return {"kind": "barb", "signal": a.signal}
    return encode_action(a)


def replay_witness(engine: BisimEngine, witness: dict) -> bool:
    """Re-derive every node of a witness from the LTS.

    Each node must name a challenge the mover really has, list every answer
    the LTS offers for it, and each answer must contain a pair whose own
    node was removed strictly earlier.
    """
    nodes = witness["nodes"]
    for pid, node in nodes.items():
        pair = tuple(node["_pair"])
        obs = engine._compute(pair)
        match = None
        for ch, alts in obs:
            if _enc(ch.action) == node["action"] and ch.side == (0 if node["challenger"] == "left" else 1) \
                    and pretty(engine.lts.state(ch.target).program()) == node["target"] \
                    and (ch.note or "step") == node["clause"]:
                listed = {tuple(tuple(x) for x in a["pairs"]) for a in node["answers"]}
                if {tuple(alt) for alt in alts} == listed:
                    match = alts
                    break
        if match is None:
            return False
        for ans in node["answers"]:
            child = ans["fails"]
            a, b = (int(x) for x in child.split("~"))
            if a == b or child not in nodes:
                return False
            if nodes[child]["order"] >= node["order"]:
                return False
            if [a, b] not in ans["pairs"]:
                return False
    return True


def _build(p, q, defs, alphabet, bounds, variant, relaxed_n):
    if alphabet is None:
        alphabet = default_alphabet([p, q], defs)
    lts = Lts(defs, alphabet, bounds or Bounds(), lts_kind(variant), relaxed_n)
    return lts, alphabet


def bisim(p, q, defs, alphabet=None, bounds: Bounds | None = None, variant="standard",
          relaxed_n=False, want_witness=True) -> Verdict:
    """Decide ``p ≈ q`` relative to the alphabet and bounds."""
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    bounds = bounds or Bounds()
    lts, alphabet = _build(p, q, defs, alphabet, bounds, variant, relaxed_n)
    base = dict(variant=variant, alphabet=tuple(alphabet), bounds=bounds.as_dict(),
                relaxed_n=relaxed_n)
    try:
        a = lts.add_program(p)
        b = lts.add_program(q)
        if variant == "barbed":
            from .predicates import is_reactive_lts
            if not (is_reactive_lts(lts, [a]) and is_reactive_lts(lts, [b])):
                return Verdict("unsupported", reason="barbed bisimulation needs reactive programs", **base)
        eng = BisimEngine(lts, variant)
        ok = eng.related(a, b)
    except BoundsExceeded as err:
        return Verdict("inconclusive", reason=str(err), **base)
    if ok:
        return Verdict("equivalent", **base)
    w = eng.witness(a, b) if want_witness else None
    return Verdict("distinguished", witness=w, **base)


def bisim_relaxed_N(p, q, defs, alphabet=None, bounds=None, variant="standard") -> Verdict:
    """Same game with ``⇒N`` allowed to end with τ steps."""
    return bisim(p, q, defs, alphabet, bounds, variant, relaxed_n=True)


__all__ = ["bisim", "bisim_relaxed_N", "BisimEngine", "Verdict", "VARIANTS",
           "replay_witness", "lts_kind"]

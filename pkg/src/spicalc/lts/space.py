"""Explored transition systems over canonical states.

States are interned on first sight and their outgoing edges are computed on
demand, so the same object serves both full exploration and the on-demand
needs of equivalence checking.  Edge maps record, for every bound name of
the source, its name in the target (``None`` if it was collected); extruded
names map to their new free names.
"""
from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass, field

from ..syntax.ast import UNIT, Con, Emit, TCon, new_all, par_all
from ..syntax.canonical import State, canonicalize, rename_free
from ..syntax.terms import fv
from ..syntax.parser import thread_calls
from ..syntax.types import typecheck
from .actions import Next, Out, Tau, rename_action, sort_key
from .semantics import BoundsExceeded, relevant_steps


def _env_int(name, default):
    raw = os.environ.get(name)
    if raw is None or raw == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        return default
    return value if value > 0 else default


@dataclass(frozen=True)
class Bounds:
    """Exploration limits.  Defaults come from ``SPICALC_MAX_*`` variables."""
    max_states: int = field(default_factory=lambda: _env_int("SPICALC_MAX_STATES", 20000))
    max_depth: int = field(default_factory=lambda: _env_int("SPICALC_MAX_DEPTH", 10**6))
    max_instants: int = field(default_factory=lambda: _env_int("SPICALC_MAX_INSTANTS", 10**6))
    max_perms: int = field(default_factory=lambda: _env_int("SPICALC_MAX_PERMS", 720))

    def __post_init__(self):
        for k in ("max_states", "max_depth", "max_instants", "max_perms"):
            if getattr(self, k) <= 0:
                raise ValueError(f"{k} must be positive")

    def as_dict(self):
        return {"max_states": self.max_states, "max_depth": self.max_depth,
                "max_instants": self.max_instants, "max_perms": self.max_perms}


@dataclass(frozen=True)
class Edge:
    action: object
    dst: int
    ren: tuple = ()     # sorted (source bound name, target name or None)
    rule: str = ""
    comp: int = -1

    @property
    def renmap(self) -> dict:
        return dict(self.ren)


@dataclass(frozen=True)
class WeakEdge:
    action: object
    dst: int
    ren: tuple = ()     # source bound name -> target name, composed along the path


def compose(first: dict, second: dict) -> dict:
    """Compose name maps along a path: bound names go through ``second``,
    names that became free in between stay as they are."""
    out = {}
    for b, mid in first.items():
        if mid is None:
            out[b] = None
        elif mid.startswith("%"):
            out[b] = second.get(mid)
        else:
            out[b] = mid
    return out


class Lts:
    """A transition system over canonical states, expanded on demand."""

    def __init__(self, defs, alphabet=(), bounds: Bounds | None = None, kind="std",
                 relaxed_n=False):
        self.defs = defs
        self.alphabet = tuple(alphabet)
        self.bounds = bounds or Bounds()
        self.kind = kind
        self.relaxed_n = relaxed_n
        self.states: list[State] = []
        self.index: dict[str, int] = {}
        self.depth: list[int] = []
        self.instants: list[int] = []
        self._edges: dict[int, list[Edge]] = {}
        self._tau_star: dict = {}
        self._weak: dict = {}
        self._tracked: dict = {}
        self._weak_tracked: dict = {}
        self._fn: dict = {}
        self.partial = False
        self.roots: list[int] = []

    # -- states ----------------------------------------------------------
    def intern(self, state: State, depth=0, instants=0) -> int:
        sid = self.index.get(state.key)
        if sid is not None:
            return sid
        if len(self.states) >= self.bounds.max_states:
            self.partial = True
            raise BoundsExceeded(f"more than {self.bounds.max_states} states")
        sid = len(self.states)
        self.states.append(state)
        self.index[state.key] = sid
        self.depth.append(depth)
        self.instants.append(instants)
        return sid

    def add_program(self, program) -> int:
        sid = self.intern(canonicalize(program, self.defs))
        if sid not in self.roots:
            self.roots.append(sid)
        return sid

    def add_state(self, state: State) -> int:
        return self.intern(state)

    def state(self, sid) -> State:
        return self.states[sid]

    def compose_with(self, sid, extra_program) -> int:
        """Intern ``state | extra`` (used for emission contexts)."""
        st = self.states[sid]
        prog = new_all(st.bound, par_all(list(st.comps) + [extra_program]))
        return self.intern(canonicalize(prog, self.defs), self.depth[sid], self.instants[sid])

    def with_emission(self, sid, signal, value) -> int:
        return self.compose_with(sid, Emit(signal, value))

    def renamed(self, sid, mapping: dict) -> int:
        """Intern a copy of a state with free names renamed."""
        mapping = {k: v for k, v in mapping.items() if k != v}
        if not mapping:
            return sid
        st = rename_free(self.states[sid], mapping, self.defs)
        return self.intern(st, self.depth[sid], self.instants[sid])

    def free_names(self, sid) -> frozenset:
        got = self._fn.get(sid)
        if got is None:
            got = self._fn[sid] = self.states[sid].free_names()
        return got

    # -- strong edges ----------------------------------------------------
    def edges(self, sid) -> list[Edge]:
        got = self._edges.get(sid)
        if got is not None:
            return got
        d, n = self.depth[sid], self.instants[sid]
        if d >= self.bounds.max_depth or n >= self.bounds.max_instants:
            self.partial = True
            raise BoundsExceeded(f"state {sid} lies beyond the depth/instant bound")
        try:
            steps = relevant_steps(self.states[sid], self.defs, self.alphabet,
                                   self.bounds.max_perms, self.kind)
        except BoundsExceeded:
            self.partial = True
            raise
        out, seen = [], set()
        for st in steps:
            nxt = n + 1 if isinstance(st.action, Next) else n
            dst = self.intern(st.target, d + 1, nxt)
            ren = tuple(sorted(st.ren.items(), key=lambda kv: kv[0]))
            key = (st.action, dst, ren)
            if key in seen:
                continue
            seen.add(key)
            out.append(Edge(st.action, dst, ren, st.rule, st.comp))
        out.sort(key=lambda e: (sort_key(e.action), e.dst, e.rule, e.comp))
        self._edges[sid] = out
        return out

    def tau_edges(self, sid):
        return [e for e in self.edges(sid) if isinstance(e.action, Tau)]

    def is_suspended(self, sid) -> bool:
        return not self.tau_edges(sid)

    # -- weak edges ------------------------------------------------------
    def tau_star(self, sid) -> list[int]:
        """States reachable by zero or more τ steps (including ``sid``)."""
        got = self._tau_star.get(sid)
        if got is not None:
            return got
        seen = {sid}
        order = [sid]
        stack = [sid]
        while stack:
            x = stack.pop()
            for e in self.tau_edges(x):
                if e.dst not in seen:
                    seen.add(e.dst)
                    order.append(e.dst)
                    stack.append(e.dst)
        self._tau_star[sid] = order
        return order

    def tau_star_tracked(self, sid, cap=20000):
        """τ-reachable states paired with the composed name map from ``sid``."""
        got = self._tracked.get(sid)
        if got is not None:
            return got
        start = {b: b for b in self.states[sid].bound}
        key0 = (sid, tuple(sorted(start.items())))
        seen = {key0}
        out = [(sid, start)]
        stack = [(sid, start)]
        while stack:
            x, m = stack.pop()
            for e in self.tau_edges(x):
                m2 = compose(m, e.renmap)
                k = (e.dst, tuple(sorted(m2.items(), key=lambda kv: kv[0])))
                if k not in seen:
                    if len(seen) >= cap:
                        self.partial = True
                        raise BoundsExceeded("too many tracked τ paths")
                    seen.add(k)
                    out.append((e.dst, m2))
                    stack.append((e.dst, m2))
        self._tracked[sid] = out
        return out

    def weak(self, sid) -> list[tuple]:
        """Weak edges ``(action, dst)``; τ includes the empty path, N has no
        trailing τ unless the LTS is built with ``relaxed_n``."""
        got = self._weak.get(sid)
        if got is not None:
            return got
        out = set()
        for y in self.tau_star(sid):
            out.add((Tau(), y))
        for y in self.tau_star(sid):
            for e in self.edges(y):
                if isinstance(e.action, Tau):
                    continue
                if isinstance(e.action, Next) and not self.relaxed_n:
                    out.add((e.action, e.dst))
                    continue
                for z in self.tau_star(e.dst):
                    out.add((e.action, z))
        res = sorted(out, key=lambda ad: (sort_key(ad[0]), ad[1]))
        self._weak[sid] = res
        return res

    def weak_by_label(self, sid, action) -> list[int]:
        return [d for a, d in self.weak(sid) if a == action]

    def weak_tracked(self, sid) -> list[WeakEdge]:
        """Weak edges together with the composed bound-name map."""
        got = self._weak_tracked.get(sid)
        if got is not None:
            return got
        out = {}
        for y, m1 in self.tau_star_tracked(sid):
            key = (Tau(), y, tuple(sorted(m1.items())))
            out[key] = WeakEdge(Tau(), y, key[2])
        for y, m1 in self.tau_star_tracked(sid):
            for e in self.edges(y):
                if isinstance(e.action, Tau):
                    continue
                m2 = compose(m1, e.renmap)
                if isinstance(e.action, Next) and not self.relaxed_n:
                    tails = [(e.dst, {b: b for b in self.states[e.dst].bound})]
                else:
                    tails = self.tau_star_tracked(e.dst)
                for z, m3 in tails:
                    m = compose(m2, m3)
                    key = (e.action, z, tuple(sorted(m.items(), key=lambda kv: kv[0])))
                    out[key] = WeakEdge(e.action, z, key[2])
        res = sorted(out.values(), key=lambda w: (sort_key(w.action), w.dst, str(w.ren)))
        self._weak_tracked[sid] = res
        return res

    # -- exploration -----------------------------------------------------
    def explore(self, roots=None) -> "Lts":
        """Expand every state reachable from the roots (breadth first)."""
        todo = deque(self.roots if roots is None else roots)
        seen = set(todo)
        while todo:
            x = todo.popleft()
            try:
                es = self.edges(x)
            except BoundsExceeded:
                self.partial = True
                continue
            for e in es:
                if e.dst not in seen:
                    seen.add(e.dst)
                    todo.append(e.dst)
        return self

    def reachable(self, roots=None) -> list[int]:
        todo = deque(self.roots if roots is None else roots)
        seen = list(todo)
        mark = set(todo)
        while todo:
            x = todo.popleft()
            for e in self.edges(x):
                if e.dst not in mark:
                    mark.add(e.dst)
                    seen.append(e.dst)
                    todo.append(e.dst)
        return seen

    def all_edges(self, roots=None):
        for x in self.reachable(roots):
            for e in self.edges(x):
                yield x, e


def explore(root, defs, alphabet=(), bounds: Bounds | None = None, kind="std") -> Lts:
    """Build the LTS reachable from ``root``; ``partial`` flags a bound hit."""
    lts = Lts(defs, alphabet, bounds, kind)
    try:
        lts.add_program(root)
    except BoundsExceeded:
        lts.partial = True
        return lts
    return lts.explore()


def reachable_signals(programs, defs) -> set:
    """Free signals of the programs and of every thread they may call."""
    names: set = set()
    seen: set = set()
    todo = [(p, ()) for p in programs]
    while todo:
        body, params = todo.pop()
        names |= fv(body) - set(params)
        calls: list = []
        thread_calls(body, calls)
        for c in calls:
            if c.name not in seen and c.name in defs.threads:
                seen.add(c.name)
                d = defs.threads[c.name]
                todo.append((d.body, d.params))
    return names


def default_alphabet(programs, defs, typeinfo=None):
    """Declared ``input`` values, plus ``*`` for free signals of type Sig(1).

    Only signals the programs can reach count: their own free signals and the
    global signals mentioned by threads they may call.
    """
    if typeinfo is None:
        typeinfo = typecheck(defs, None, extra=list(programs))
    out = []
    for s in sorted(reachable_signals(programs, defs)):
        if s in defs.inputs:
            out.extend((s, v) for v in defs.inputs[s])
            continue
        t = typeinfo.signals.get(s)
        if t == TCon("Sig", (UNIT,)):
            out.append((s, Con("*")))
    return tuple(out)


def extruded_alignment(a, b, avoid) -> tuple | None:
    """Match two labels up to their extruded names.

    Returns ``(common_action, map_a, map_b)`` renaming each side's extruded
    names to shared names outside ``avoid``, or None if the labels differ.
    """
    if type(a) is not type(b):
        return None
    if not isinstance(a, Out):
        return (a, {}, {}) if a == b else None
    if a.signal != b.signal or len(a.extruded) != len(b.extruded):
        return None
    fresh, k = [], 0
    while len(fresh) < len(a.extruded):
        n = f"@{k}"
        if n not in avoid:
            fresh.append(n)
        k += 1
    ma = dict(zip(a.extruded, fresh))
    mb = dict(zip(b.extruded, fresh))
    ra, rb = rename_action(a, ma), rename_action(b, mb)
    if ra != rb:
        return None
    return ra, ma, mb


__all__ = [
    "Lts", "Bounds", "Edge", "WeakEdge", "explore", "default_alphabet", "reachable_signals",
    "BoundsExceeded", "compose", "extruded_alignment",
]

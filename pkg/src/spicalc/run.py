"""Instant-by-instant execution with reproducible scheduling."""
from __future__ import annotations

import hashlib
import json
import random
from dataclasses import dataclass, field

from .lts.semantics import collect_maps, emissions, next_target, suspended, tau_steps
from .syntax.canonical import State, canonicalize
from .syntax.evaluate import EvalError
from .syntax.printer import pretty_expr

TRACE_SCHEMA = 1
DEFAULT_TAU_FUEL = 10_000
SCHEDULERS = ("canonical", "random")
V_POLICIES = ("sorted", "random", "enumerate")


class RunError(Exception):
    """Execution could not finish an instant."""

    def __init__(self, msg, hint=None):
        super().__init__(msg)
        self.hint = hint


def digest(state: State) -> str:
    return hashlib.sha256(state.key.encode()).hexdigest()[:12]


@dataclass
class Instant:
    number: int
    start: str
    steps: list = field(default_factory=list)       # [{rule, comp, state}]
    suspended: str = ""
    emitted: list = field(default_factory=list)     # [[signal, value]]
    collect: dict = field(default_factory=dict)     # signal -> [values]
    alternatives: int = 1
    next: str = ""

    def to_dict(self) -> dict:
        return {"instant": self.number, "start": self.start, "tau_steps": self.steps,
                "suspended": self.suspended, "emitted": self.emitted,
                "collect": self.collect, "alternatives": self.alternatives,
                "next": self.next}


@dataclass
class RunTrace:
    scheduler: str
    policy: str
    seed: int | None
    instants: list = field(default_factory=list)

    def emitted_in(self, n: int) -> list:
        """Emissions at the end of instant ``n`` (1-based)."""
        return self.instants[n - 1].emitted

    def to_dict(self) -> dict:
        return {"schema": TRACE_SCHEMA, "scheduler": self.scheduler, "policy": self.policy,
                "seed": self.seed, "instants": [i.to_dict() for i in self.instants]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False) + "\n"


def _cycle_hint(history: list) -> str | None:
    seen = {}
    for i, key in enumerate(history):
        if key in seen:
            return f"state repeats after {i - seen[key]} τ steps: {key}"
        seen[key] = i
    return None


def run(program, defs, instants=1, scheduler="canonical", policy="sorted", seed=None,
        tau_fuel=DEFAULT_TAU_FUEL, max_perms=720) -> RunTrace:
    """Execute ``instants`` instants of ``program``.

    Each instant fires τ steps until the state is suspended, then takes one
    N step with the CollectMap chosen by ``policy``.  ``enumerate`` records
    how many distinct successors exist and continues with the first.
    """
    if scheduler not in SCHEDULERS:
        raise ValueError(f"unknown scheduler {scheduler!r}")
    if policy not in V_POLICIES:
        raise ValueError(f"unknown policy {policy!r}")
    rng = random.Random(seed)
    state = program if isinstance(program, State) else canonicalize(program, defs)
    trace = RunTrace(scheduler, policy, seed)
    for n in range(1, instants + 1):
        inst = Instant(n, state.key)
        history = [state.key]
        while True:
            try:
                steps = tau_steps(state, defs)
            except EvalError as err:
                raise RunError(f"instant {n}: evaluation failed: {err}") from err
            if not steps:
                break
            if len(inst.steps) >= tau_fuel:
                raise RunError(f"instant {n}: no suspension after {tau_fuel} τ steps "
                               "(program may not be reactive)", _cycle_hint(history))
            if scheduler == "canonical":
                st = min(steps, key=lambda s: (s.rule, s.comp, s.target.key))
            else:
                st = rng.choice(steps)
            state = st.target
            history.append(state.key)
            inst.steps.append({"rule": st.rule, "comp": st.comp, "state": digest(state)})
        assert suspended(state)
        inst.suspended = state.key
        inst.emitted = sorted([s, pretty_expr(v)] for s, vs in emissions(state).items()
                              for v in vs)
        if policy == "sorted":
            maps = collect_maps(state, max_perms, "sorted")
        else:
            maps = collect_maps(state, max_perms)
        if policy == "random":
            V = rng.choice(maps)
        else:
            V = maps[0]
        if policy == "enumerate":
            inst.alternatives = len({next_target(state, m, defs)[0].key for m in maps})
        inst.collect = {s: [pretty_expr(v) for v in vs] for s, vs in sorted(V.items())}
        state, _ = next_target(state, V, defs)
        inst.next = state.key
        trace.instants.append(inst)
    return trace


def final_program(trace: RunTrace) -> str:
    return trace.instants[-1].next if trace.instants else ""


__all__ = ["run", "RunTrace", "Instant", "RunError", "digest", "SCHEDULERS",
           "V_POLICIES", "TRACE_SCHEMA"]

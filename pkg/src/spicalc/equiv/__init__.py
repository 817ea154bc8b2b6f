"""Bisimulation variants, suspension predicates and context search."""
from .bisim import (VARIANTS, BisimEngine, Verdict, bisim, bisim_relaxed_N,
                    lts_kind, replay_witness)
from .contexts import (FalsifierResult, StaticContext, context_falsifier,
                       default_fragments, enumerate_contexts)
from .predicates import commitment, is_reactive_lts, tau_cycle, weak_susp

__all__ = [
    "VARIANTS", "BisimEngine", "Verdict", "bisim", "bisim_relaxed_N", "lts_kind",
    "replay_witness", "FalsifierResult", "StaticContext", "context_falsifier",
    "default_fragments", "enumerate_contexts", "commitment", "is_reactive_lts",
    "tau_cycle", "weak_susp",
]

"""Transition relation, explored LTSs, weak closures and action algebra."""
from .actions import (
    NEXT, TAU, AuxEV, AuxIn, In, Next, Out, Tau, compatible, encode_action,
    residual,
)
from .export import to_dot, to_json
from .semantics import (
    BoundsExceeded, eoi_component, input_steps, nested_steps, next_steps,
    relevant_steps, suspended,
)
from .space import Bounds, Lts, default_alphabet, explore


def weak_closure(lts: Lts, sid: int):
    """Weak edges of one state: ``⇒τ`` is τ*, ``⇒N`` is τ*·N."""
    return lts.weak(sid)


__all__ = [
    "Tau", "Out", "In", "Next", "AuxIn", "AuxEV", "TAU", "NEXT",
    "compatible", "residual", "encode_action", "nested_steps", "input_steps",
    "suspended", "eoi_component", "next_steps", "relevant_steps", "explore",
    "Lts", "Bounds", "BoundsExceeded", "default_alphabet", "weak_closure",
    "to_dot", "to_json",
]

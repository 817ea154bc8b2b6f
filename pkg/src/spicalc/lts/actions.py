"""Actions, compatibility and residuals."""
from __future__ import annotations

from dataclasses import dataclass

from ..syntax.printer import pretty_expr
from ..syntax.terms import subst_expr, value_names
from ..syntax.ast import Var


@dataclass(frozen=True)
class Tau:
    def __str__(self):
        return "τ"


@dataclass(frozen=True)
class Out:
    """``ν t⃗ s̄v``: emission on a free signal, extruding ``extruded``."""
    extruded: tuple
    signal: str
    value: object

    def __str__(self):
        nu = f"ν{','.join(self.extruded)} " if self.extruded else ""
        return f"{nu}{self.signal}̄{_arg(self.value)}"


@dataclass(frozen=True)
class In:
    signal: str
    value: object

    def __str__(self):
        return f"{self.signal}{_arg(self.value)}"


@dataclass(frozen=True)
class Next:
    def __str__(self):
        return "N"


@dataclass(frozen=True)
class AuxIn:
    """``s?v``: a present statement receiving a value (never exported)."""
    signal: str
    value: object

    def __str__(self):
        return f"{self.signal}?{_arg(self.value)}"


@dataclass(frozen=True)
class AuxEV:
    """``(E,V)``: end-of-instant collection (never exported)."""
    emissions: tuple   # sorted ((signal, (values...)), ...)
    collect: tuple     # sorted ((signal, (values...)), ...)

    def __str__(self):
        return "(E,V)"


TAU = Tau()
NEXT = Next()


def _arg(v) -> str:
    s = pretty_expr(v)
    return s if s.startswith("[") else f"({s})"


def is_relevant(a) -> bool:
    return isinstance(a, (Tau, Out, In, Next))


def action_names(a) -> set:
    """Names occurring in an action (n(μ))."""
    if isinstance(a, (Out, In, AuxIn)):
        return {a.signal} | set(value_names(a.value))
    return set()


def rename_action(a, mapping: dict):
    """Rename the names of an action."""
    if not mapping:
        return a
    theta = {k: Var(v) for k, v in mapping.items()}
    if isinstance(a, Out):
        return Out(tuple(mapping.get(t, t) for t in a.extruded), mapping.get(a.signal, a.signal),
                   subst_expr(a.value, theta))
    if isinstance(a, In):
        return In(mapping.get(a.signal, a.signal), subst_expr(a.value, theta))
    return a


def compatible(a, b) -> bool:
    """``N`` is compatible only with itself; all other actions with each other."""
    return isinstance(a, Next) == isinstance(b, Next)


class IncompatibleActions(ValueError):
    pass


def residual(a, b):
    """``a ∖ b``: what remains of ``a`` after ``b``."""
    if not compatible(a, b):
        raise IncompatibleActions(f"{a} and {b} are not compatible")
    if a == b:
        return TAU
    if isinstance(a, Out) and isinstance(b, Out):
        gone = set(b.extruded)
        return Out(tuple(t for t in a.extruded if t not in gone), a.signal, a.value)
    return a


def encode_action(a) -> dict:
    """JSON encoding shared by LTS export and witnesses."""
    if isinstance(a, Tau):
        return {"kind": "tau"}
    if isinstance(a, Next):
        return {"kind": "next"}
    if isinstance(a, Out):
        return {"kind": "out", "extruded": list(a.extruded), "signal": a.signal,
                "value": pretty_expr(a.value)}
    if isinstance(a, In):
        return {"kind": "in", "extruded": [], "signal": a.signal, "value": pretty_expr(a.value)}
    raise ValueError(f"auxiliary action {a} cannot be exported")


def sort_key(a) -> tuple:
    order = {Tau: 0, Out: 1, In: 2, Next: 3}
    return (order.get(type(a), 4), str(a))


__all__ = [
    "Tau", "Out", "In", "Next", "AuxIn", "AuxEV", "TAU", "NEXT", "compatible",
    "residual", "encode_action", "is_relevant", "rename_action", "sort_key",
    "IncompatibleActions", "action_names",
]

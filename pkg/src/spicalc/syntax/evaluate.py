"""Pattern matching and expression evaluation."""
from __future__ import annotations

from .ast import App, Con, Deref, PVar, PWild, Var


class EvalError(Exception):
    """Evaluation failed: no matching equation or a stuck term."""


class FuelExhausted(EvalError):
    """A user function did not terminate within the configured fuel."""


def match_value(v, p) -> dict | None:
    """Match a closed value against a linear pattern.

    Returns the substitution ``theta`` with ``theta(p) == v``, or None.
    """
    theta: dict = {}
    if _match(v, p, theta):
        return theta
    return None


def _match(v, p, theta) -> bool:
    if isinstance(p, PVar):
        theta[p.name] = v
        return True
    if isinstance(p, PWild):
        return True
    if not isinstance(v, Con) or v.name != p.name or len(v.args) != len(p.args):
        return False
    return all(_match(a, q, theta) for a, q in zip(v.args, p.args))


class _Fuel:
    __slots__ = ("left",)

    def __init__(self, n):
        self.left = n

    def burn(self, fname):
        self.left -= 1
        if self.left < 0:
            raise FuelExhausted(f"fuel exhausted while evaluating {fname}")


def eval_expr(e, defs, env: dict | None = None, fuel: int | None = None):
    """Evaluate an expression whose free variables are signal names.

    Function symbols are rewritten by their first matching equation.
    ``env`` optionally maps variables to values.
    """
    budget = _Fuel(defs.fuel if fuel is None else fuel)
    return _eval(e, defs, env or {}, budget)


def _eval(e, defs, env, fuel):
    if isinstance(e, Var):
        return env.get(e.name, e)
    if isinstance(e, Con):
        if not e.args:
            return e
        return Con(e.name, tuple(_eval(a, defs, env, fuel) for a in e.args))
    if isinstance(e, App):
        args = tuple(_eval(a, defs, env, fuel) for a in e.args)
        return apply_function(e.fun, args, defs, fuel)
    if isinstance(e, Deref):
        raise EvalError(f"dereference !{e.sig} outside a continuation")
    raise EvalError(f"not an expression: {e!r}")


def apply_function(name, args, defs, fuel):
    fdef = defs.functions.get(name)
    if fdef is None:
        raise EvalError(f"unknown function {name!r}")
    fuel.burn(name)
    for pats, body in fdef.equations:
        if len(pats) != len(args):
            continue
        theta: dict = {}
        if all(_match(a, p, theta) for a, p in zip(args, pats)):
            return _eval(body, defs, theta, fuel)
    shown = ", ".join(map(str, args))
    raise EvalError(f"no equation of {name} matches ({shown})")


__all__ = ["match_value", "eval_expr", "EvalError", "FuelExhausted", "Deref"]

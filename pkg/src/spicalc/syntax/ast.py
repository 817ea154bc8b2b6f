"""Abstract syntax of programs, expressions, patterns and types.

All nodes are immutable.  Signal names and variables are plain strings;
inside values a signal name appears as ``Var(name)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union


# -- expressions -----------------------------------------------------------

@dataclass(frozen=True, slots=True)
class Var:
    name: str


@dataclass(frozen=True, slots=True)
class Con:
    name: str
    args: tuple = ()


@dataclass(frozen=True, slots=True)
class App:
    """Application of a first-order function symbol."""
    fun: str
    args: tuple = ()


@dataclass(frozen=True, slots=True)
class Deref:
    """``!s``: the list of values emitted on ``s`` during the instant."""
    sig: str


Expr = Union[Var, Con, App, Deref]
# a Value is a Var (signal name) or a Con whose arguments are values
Value = Union[Var, Con]


# -- patterns --------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class PVar:
    name: str


@dataclass(frozen=True, slots=True)
class PCon:
    name: str
    args: tuple = ()


@dataclass(frozen=True, slots=True)
class PWild:
    pass


Pattern = Union[PVar, PCon, PWild]


# -- programs --------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class Nil:
    pass


@dataclass(frozen=True, slots=True)
class Call:
    name: str
    args: tuple = ()


@dataclass(frozen=True, slots=True)
class Emit:
    sig: str
    expr: Expr


@dataclass(frozen=True, slots=True)
class Present:
    """``present s(x) { body } else cont``; ``cont`` is a Call or Nil."""
    sig: str
    var: str
    body: "Program"
    cont: Union[Call, Nil]


@dataclass(frozen=True, slots=True)
class MatchSig:
    left: str
    right: str
    then: "Program"
    orelse: "Program"


@dataclass(frozen=True, slots=True)
class MatchVal:
    subject: Expr
    pattern: Pattern
    then: "Program"
    orelse: "Program"


@dataclass(frozen=True, slots=True)
class New:
    name: str
    body: "Program"


@dataclass(frozen=True, slots=True)
class Par:
    left: "Program"
    right: "Program"


Program = Union[Nil, Call, Emit, Present, MatchSig, MatchVal, New, Par]


# surface-only nodes, removed by desugaring
@dataclass(frozen=True, slots=True)
class Choice:
    left: "Program"
    right: "Program"


@dataclass(frozen=True, slots=True)
class Pause:
    body: "Program"


@dataclass(frozen=True, slots=True)
class TauPrefix:
    body: "Program"


# -- types -----------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class TCon:
    """Type constructor: ``1``, ``Nat``, ``Sig``, ``List`` or a declared type."""
    name: str
    args: tuple = ()

    def __str__(self):
        if not self.args:
            return self.name
        return f"{self.name}({', '.join(map(str, self.args))})"


@dataclass(frozen=True, slots=True)
class TVar:
    id: int

    def __str__(self):
        return f"'t{self.id}"


Type = Union[TCon, TVar]

UNIT = TCon("1")
NAT = TCon("Nat")


def sig_type(t: Type) -> TCon:
    return TCon("Sig", (t,))


def list_type(t: Type) -> TCon:
    return TCon("List", (t,))


# -- definition table ------------------------------------------------------

@dataclass(frozen=True)
class ThreadDef:
    name: str
    params: tuple          # parameter names
    body: Program
    annotations: tuple = ()  # per-parameter declared Type or None


@dataclass(frozen=True)
class FunDef:
    name: str
    equations: tuple       # ((pattern, ...), body expr)
    signature: tuple | None = None  # ((arg types), result type)


@dataclass
class DefTable:
    threads: dict = field(default_factory=dict)
    functions: dict = field(default_factory=dict)
    # constructor name -> (argument types, result type); builtins are added by
    # the type checker, user declarations live here
    constructors: dict = field(default_factory=dict)
    types: dict = field(default_factory=dict)      # type name -> ctor names
    signals: dict = field(default_factory=dict)    # free signal -> Type
    inputs: dict = field(default_factory=dict)     # signal -> tuple of Values
    fuel: int = 10_000

    def thread(self, name: str) -> ThreadDef:
        try:
            return self.threads[name]
        except KeyError:
            raise KeyError(f"undefined thread {name!r}") from None


# -- helpers ---------------------------------------------------------------

def is_numeral(name: str) -> bool:
    return name.isdigit()


def is_builtin_ctor(name: str) -> bool:
    return name in ("*", "nil", "cons") or is_numeral(name)


def mk_list(items) -> Con:
    out = Con("nil")
    for v in reversed(list(items)):
        out = Con("cons", (v, out))
    return out


def list_items(v) -> list | None:
    """Elements of a nil-terminated cons chain, or None."""
    out = []
    while isinstance(v, Con) and v.name == "cons" and len(v.args) == 2:
        out.append(v.args[0])
        v = v.args[1]
    if isinstance(v, Con) and v.name == "nil" and not v.args:
        return out
    return None


def par_all(items) -> Program:
    items = list(items)
    if not items:
        return Nil()
    out = items[-1]
    for p in reversed(items[:-1]):
        out = Par(p, out)
    return out


def new_all(names, body: Program) -> Program:
    for n in reversed(list(names)):
        body = New(n, body)
    return body

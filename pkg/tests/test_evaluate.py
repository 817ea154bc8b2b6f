import pytest

from spicalc.syntax.ast import Con, mk_list
from spicalc.syntax.evaluate import EvalError, FuelExhausted, eval_expr, match_value
from spicalc.syntax.parser import parse, parse_program


def defs_for(src):
    return parse(src)[1]


def test_function_equations_first_match():
    d = defs_for("fun f : (Nat) -> Nat;\nfun f(0) = 1;\nfun f(_) = 0;")
    p = parse_program("emit s f(0) || emit t f(3)", d)
    assert eval_expr(p.left.expr, d) == Con("1")
    assert eval_expr(p.right.expr, d) == Con("0")


def test_recursive_function_on_lists():
    d = defs_for("fun len(nil) = 0;\nfun len(x :: r) = suc(len(r));\ntype N = suc(Nat);")
    p = parse_program("emit s len([1; 2; 3])", d)
    assert eval_expr(p.expr, d) == Con("suc", (Con("suc", (Con("suc", (Con("0"),)),)),))


def test_fuel_exhaustion():
    d = defs_for("fun loop(x) = loop(x);")
    p = parse_program("emit s loop(0)", d)
    with pytest.raises(FuelExhausted):
        eval_expr(p.expr, d, fuel=50)


def test_non_exhaustive_function():
    d = defs_for("fun g(0) = 1;")
    p = parse_program("emit s g(1)", d)
    with pytest.raises(EvalError):
        eval_expr(p.expr, d)


def test_match_value_binds_pattern_variables():
    d = defs_for("")
    m = parse_program("match [0; 1] with x :: r -> emit s x | _ -> 0", d)
    theta = match_value(mk_list([Con("0"), Con("1")]), m.pattern)
    assert set(theta) == {"x", "r"}
    assert theta["r"] == mk_list([Con("1")])
    assert match_value(mk_list([]), m.pattern) is None

import random

from hypothesis import given, settings, strategies as st

from spicalc.generate import gen_text, prelude_defs
from spicalc.syntax.ast import Emit, New, Nil, Par, par_all
from spicalc.syntax.canonical import canonicalize, struct_equiv
from spicalc.syntax.parser import parse, parse_program
from spicalc.syntax.terms import fv, rename


def key(text, decls=""):
    defs = parse(decls)[1]
    return canonicalize(parse_program(text, defs), defs).key


def test_parallel_is_associative_and_commutative():
    assert key("emit a || (emit b || emit c)") == key("(emit c || emit a) || emit b")


def test_nil_is_unit():
    assert key("emit a || 0") == key("emit a")


def test_scope_extrusion():
    assert key("(new s in emit s a) || emit b") == key("new s in (emit s a || emit b)")


def test_alpha_conversion():
    assert key("new s in present s(x) { emit t x } else 0") == \
        key("new u in present u(y) { emit t y } else 0")


def test_duplicate_emission():
    assert key("emit a || emit a") == key("emit a")


def test_emission_evaluates_its_value():
    decls = "fun f(0) = 1;"
    assert key("emit s f(0)", decls) == key("emit s 1", decls)


def test_garbage_collection_of_unused_signals():
    assert key("new s in emit a") == key("emit a")
    assert key("new s in emit s") == key("0")


def test_idempotent():
    d = prelude_defs()
    st_ = canonicalize(parse_program("new s in (emit s || present s(y) { emit a } else 0)", d), d)
    assert canonicalize(st_.program(), d) == st_


def test_key_distinguishes_different_programs():
    assert key("emit a") != key("emit b")
    assert key("new s in (emit s || present s(x) {emit a} else 0)") != key("emit a || 0 || emit b")


# -- randomized re-association, reordering and renaming --------------------------

def _components(p):
    if isinstance(p, Par):
        return _components(p.left) + _components(p.right)
    if isinstance(p, Nil):
        return []
    return [p]


def _reassociate(items, rng):
    if not items:
        return Nil()
    if len(items) == 1:
        return items[0]
    cut = rng.randint(1, len(items) - 1)
    return Par(_reassociate(items[:cut], rng), _reassociate(items[cut:], rng))


def scramble(p, rng, counter=[0]):
    """A structurally equivalent variant of ``p``."""
    if isinstance(p, Par):
        items = [scramble(c, rng) for c in _components(p)]
        rng.shuffle(items)
        if rng.random() < 0.3:
            items.insert(rng.randint(0, len(items)), Nil())
        if items and isinstance(items[0], Emit) and rng.random() < 0.3:
            items.append(items[0])
        return _reassociate(items, rng)
    if isinstance(p, New):
        counter[0] += 1
        fresh = f"n{counter[0]}"
        body = scramble(rename(p.body, {p.name: fresh}), rng)
        if isinstance(body, Par) and rng.random() < 0.5:
            left, right = body.left, body.right
            if fresh not in fv(right):
                return Par(New(fresh, left), right)
        return New(fresh, body)
    return p


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**9))
def test_random_scrambles_have_same_key(seed):
    rng = random.Random(seed)
    d = prelude_defs()
    p = parse_program(gen_text(rng, 3), d)
    q = scramble(p, rng)
    assert struct_equiv(p, q, d)
    assert canonicalize(q, d) == canonicalize(canonicalize(p, d).program(), d)


def test_par_all_flattens():
    assert _components(par_all([Emit("a", None), Nil(), Emit("b", None)])) == \
        [Emit("a", None), Emit("b", None)]

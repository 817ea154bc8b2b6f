import json

import pytest

from spicalc.lts.actions import Next, Out, Tau
from spicalc.lts.export import lts_to_dict, to_dot, to_json
from spicalc.lts.semantics import BoundsExceeded
from spicalc.lts.space import Bounds, Lts, compose, default_alphabet, explore, reachable_signals
from spicalc.source import load
from spicalc.syntax.parser import parse, parse_program

DECLS = "signal a, b : Sig(1);\nK() = emit a;\n"


def build(text, decls=DECLS, **bounds):
    defs = parse(decls)[1]
    p = parse_program(text, defs)
    lts = Lts(defs, default_alphabet([p], defs), Bounds(**bounds))
    root = lts.add_program(p)
    return lts, root


def test_zero_has_one_state_with_next_loop():
    lts, root = build("0")
    lts.explore()
    assert len(lts.states) == 1
    (e,) = lts.edges(root)
    assert isinstance(e.action, Next) and e.dst == root


def test_tau_star_includes_the_start():
    lts, root = build("tau.tau.emit a")
    assert lts.tau_star(root)[0] == root
    assert len(lts.tau_star(root)) == 3


def test_weak_next_has_no_trailing_tau():
    lts, root = build("pause.tau.emit a")
    after = [d for a, d in lts.weak(root) if isinstance(a, Next)]
    (d,) = after
    assert not lts.is_suspended(d)


def test_relaxed_next_allows_trailing_tau():
    defs = parse(DECLS)[1]
    p = parse_program("pause.tau.emit a", defs)
    lts = Lts(defs, (), relaxed_n=True)
    root = lts.add_program(p)
    # the call, then the τ prefix
    assert len([d for a, d in lts.weak(root) if isinstance(a, Next)]) == 3


def test_weak_output_absorbs_tau_on_both_sides():
    lts, root = build("tau.(emit a || tau.0)")
    outs = {lts.state(d).key for a, d in lts.weak(root) if isinstance(a, Out)}
    assert build("emit a")[0].states[0].key in outs
    assert lts.state(root).key not in outs


def test_state_bound_marks_partial():
    lts, root = build("emit a || emit b || pause.K()", max_states=2)
    lts.explore()
    assert lts.partial and len(lts.states) == 2
    with pytest.raises(BoundsExceeded):
        lts.reachable()


def test_depth_bound():
    lts, root = build("tau.tau.tau.0", max_depth=1)
    lts.edges(root)
    assert not lts.partial
    lts.explore()
    assert lts.partial


def test_explore_convenience():
    defs = parse(DECLS)[1]
    lts = explore(parse_program("emit a", defs), defs)
    assert len(lts.reachable()) >= 1


def test_compose_maps():
    assert compose({"%0": "%1", "%1": None, "%2": "@0"}, {"%1": "%0"}) == \
        {"%0": "%0", "%1": None, "%2": "@0"}


def test_reachable_signals_follow_thread_calls():
    defs = parse("signal a, b, c : Sig(1);\nT() = emit b || U();\nU() = emit c;\n")[1]
    p = parse_program("T()", defs)
    assert reachable_signals([p], defs) == {"b", "c"}


def test_alphabet_uses_declared_inputs(corpus_dir):
    ld = load(corpus_dir / "server_client.spi")
    alpha = default_alphabet([ld.main], ld.defs, ld.types)
    assert [(s, str(v.name)) for s, v in alpha] == [("t", "5")]


def test_json_export_is_stable(corpus_dir):
    ld = load(corpus_dir / "choice_cycle.spi")

    def once():
        lts = Lts(ld.defs, default_alphabet([ld.main], ld.defs, ld.types))
        lts.add_program(ld.main)
        lts.explore()
        return to_json(lts), to_dot(lts)

    first = once()
    assert once() == first
    doc = json.loads(first[0])
    assert doc == lts_to_dict(explore(ld.main, ld.defs,
                                      default_alphabet([ld.main], ld.defs, ld.types)))
    assert first[1].startswith("digraph")


def test_tau_edges_are_tau():
    lts, root = build("tau.0 + emit a")
    assert all(isinstance(e.action, Tau) for e in lts.tau_edges(root))

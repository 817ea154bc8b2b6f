import itertools

import pytest
from hypothesis import given, settings, strategies as st

from spicalc.equiv.bisim import BisimEngine, bisim, bisim_relaxed_N, replay_witness
from spicalc.generate import program_pairs, prelude_defs
from spicalc.lts.space import Lts, default_alphabet
from spicalc.source import load
from spicalc.syntax.ast import Emit, Par
from spicalc.syntax.parser import parse, parse_program

from naive_bisim import naive_equivalent

DECLS = "signal a, b : Sig(1);\nOmega() = tau.Omega();\nA() = tau.A() + tau.0;\n"


def verdict(p_text, q_text, variant="standard", decls=DECLS, **kw):
    defs = parse(decls)[1]
    return bisim(parse_program(p_text, defs), parse_program(q_text, defs), defs,
                 variant=variant, **kw)


def files(corpus_dir, left, right, **kw):
    ld = load(corpus_dir / left, corpus_dir / right)
    p, q = ld.programs
    return bisim(p, q, ld.defs, default_alphabet([p, q], ld.defs, ld.types), **kw)


def test_divergence_is_observable():
    assert verdict("Omega()", "0").verdict == "distinguished"


def test_internal_choice_with_exit_is_silent():
    assert verdict("A()", "0").verdict == "equivalent"


def test_delayed_choice_pair(corpus_dir):
    assert files(corpus_dir, "delayed_choice.spi", "delayed_match.spi").verdict == "distinguished"
    assert files(corpus_dir, "delayed_choice.spi", "delayed_match.spi",
                 relaxed_n=True).verdict == "equivalent"


def test_relaxed_wrapper():
    assert bisim_relaxed_N(*[parse_program("0", prelude_defs())] * 2, prelude_defs()).equivalent


def test_emission_is_idempotent():
    assert verdict("emit a || emit a", "emit a").equivalent


def test_different_outputs():
    v = verdict("emit a", "emit b")
    assert v.verdict == "distinguished"
    assert v.witness is not None


def test_tau_prefix_is_absorbed():
    assert verdict("tau.emit a", "emit a").equivalent


def test_pause_is_observable():
    assert verdict("pause.emit a", "emit a").verdict == "distinguished"


def test_unknown_variant():
    with pytest.raises(ValueError):
        verdict("0", "0", variant="strong")


def test_barbed_needs_reactive_programs():
    assert verdict("Omega()", "0", variant="barbed").verdict == "unsupported"
    assert verdict("emit a", "emit a || tau.0", variant="barbed").equivalent


def test_bounds_make_the_result_inconclusive():
    from spicalc.lts.space import Bounds
    v = verdict("emit a || pause.emit b", "emit a || pause.emit b || tau.0",
                bounds=Bounds(max_states=2))
    assert v.verdict == "inconclusive"
    assert v.to_dict()["verdict"] == "inconclusive"


@pytest.mark.parametrize("pq", [("emit a", "emit b"), ("Omega()", "0"),
                                ("pause.emit a", "emit a"),
                                ("present a(x) { emit b } else 0", "emit b")])
def test_witness_replays(pq):
    defs = parse(DECLS)[1]
    p, q = (parse_program(t, defs) for t in pq)
    lts = Lts(defs, default_alphabet([p, q], defs))
    a, b = lts.add_program(p), lts.add_program(q)
    eng = BisimEngine(lts)
    assert not eng.related(a, b)
    w = eng.witness(a, b)
    assert replay_witness(eng, w)


def test_tampered_witness_is_rejected():
    defs = parse(DECLS)[1]
    p, q = parse_program("emit a", defs), parse_program("emit b", defs)
    lts = Lts(defs, default_alphabet([p, q], defs))
    a, b = lts.add_program(p), lts.add_program(q)
    eng = BisimEngine(lts)
    eng.related(a, b)
    w = eng.witness(a, b)
    node = next(iter(w["nodes"].values()))
    node["action"] = {"kind": "tau"}
    assert not replay_witness(eng, w)


def test_equivalence_relation_on_corpus_programs(corpus_dir):
    names = ["zero.spi", "tau_choice.spi", "omega.spi"]
    progs = []
    for n in names:
        ld = load(corpus_dir / n)
        progs.append((ld.main, ld.defs))
    defs = progs[0][1]
    for _, d in progs[1:]:
        defs.threads.update(d.threads)
    rel = {}
    for (i, (p, _)), (j, (q, _)) in itertools.product(enumerate(progs), repeat=2):
        rel[i, j] = bisim(p, q, defs).equivalent
    n = len(progs)
    assert all(rel[i, i] for i in range(n))
    assert all(rel[i, j] == rel[j, i] for i in range(n) for j in range(n))
    assert all(not (rel[i, j] and rel[j, k]) or rel[i, k]
               for i in range(n) for j in range(n) for k in range(n))


def test_closed_under_input_emission():
    # equivalent programs stay equivalent next to any alphabet emission
    defs = prelude_defs()
    for tp, tq in [("tau.emit a", "emit a"), ("Loop()", "0"),
                   ("present a(x) { emit b } else 0", "tau.present a(x) { emit b } else 0")]:
        p, q = parse_program(tp, defs), parse_program(tq, defs)
        assert bisim(p, q, defs).equivalent
        for s, v in default_alphabet([p, q], defs):
            assert bisim(Par(p, Emit(s, v)), Par(q, Emit(s, v)), defs).equivalent


def test_engine_agrees_with_naive_check():
    defs = prelude_defs()
    for tp, p, tq, q in program_pairs(60, seed=11, max_states=10):
        alpha = default_alphabet([p, q], defs)
        assert bisim(p, q, defs, alpha, want_witness=False).equivalent == \
            naive_equivalent(p, q, defs, alpha), (tp, tq)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_engine_agrees_with_naive_check_randomly(seed):
    defs = prelude_defs()
    ((tp, p, tq, q),) = program_pairs(1, seed=seed, max_states=10)
    alpha = default_alphabet([p, q], defs)
    assert bisim(p, q, defs, alpha, want_witness=False).equivalent == \
        naive_equivalent(p, q, defs, alpha)

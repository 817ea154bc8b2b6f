import pytest

from spicalc.analysis import (IMPLICATIONS, PROPERTIES, AnalysisVerdict, Analyzer, analyze_all,
                              check_squares, cross_check, determinate_bounded, diamond_5_6_2,
                              locally_confluent, reactivity, report_to_dict, strong_confluence,
                              tau_inert)
from spicalc.lts.space import Bounds, Lts, default_alphabet
from spicalc.source import load
from spicalc.syntax.parser import parse, parse_program

DECLS = """signal a, b : Sig(1);
Omega() = tau.Omega();
"""


def prog(text):
    defs = parse(DECLS)[1]
    return parse_program(text, defs), defs


def report(corpus_dir, name, **kw):
    ld = load(corpus_dir / name)
    rep = analyze_all(ld.main, ld.defs, default_alphabet([ld.main], ld.defs, ld.types), **kw)
    return {k: v.status for k, v in rep["results"].items()}, rep


def test_locally_confluent_but_not_confluent(corpus_dir):
    got, rep = report(corpus_dir, "choice_cycle.spi")
    assert got["reactive"] == "fails"
    assert got["locally_confluent"] == "holds"
    assert got["confluent"] == "fails"
    assert got["determinate"] == "fails"
    assert rep["contradictions"] == []


def test_server_client_is_deterministic(corpus_dir):
    got, _ = report(corpus_dir, "server_client.spi")
    assert got["reactive"] == got["determinate"] == got["confluent"] == "holds"


def test_order_of_collected_values(corpus_dir):
    got, _ = report(corpus_dir, "persistence.spi")
    assert got["determinate"] == got["diamond_5_6_2"] == "holds"
    got, _ = report(corpus_dir, "persistence_ordered.spi")
    assert got["determinate"] == got["diamond_5_6_2"] == "fails"


def test_internal_choice_is_not_determinate():
    v = determinate_bounded(*prog("emit a + emit b"))
    assert v.fails and v.witness


def test_reactivity_witness_is_a_cycle():
    v = reactivity(*prog("Omega()"))
    assert v.fails
    assert v.to_dict()["status"] == "fails"


@pytest.mark.parametrize("text", ["0", "emit a || present a(x) { emit b } else 0",
                                  "tau.emit a", "pause.emit a"])
def test_simple_programs_have_every_property(text):
    p, defs = prog(text)
    an = Analyzer(p, defs)
    for name in PROPERTIES:
        assert an.run(name).holds, name


def test_tau_inert_fails_on_a_real_choice():
    assert tau_inert(*prog("emit a + 0")).fails


def test_strong_confluence_implies_determinacy():
    p, defs = prog("tau.emit a || tau.emit b")
    assert strong_confluence(p, defs).holds
    assert determinate_bounded(p, defs).holds


def test_diamond_and_local_confluence_agree():
    for text in ["emit a + emit b", "tau.emit a || tau.emit b", "(emit a + emit a)"]:
        p, defs = prog(text)
        assert diamond_5_6_2(p, defs).status == locally_confluent(p, defs).status


def test_bounds_give_inconclusive_instead_of_holds():
    p, defs = prog("tau.tau.tau.tau.emit a")
    v = Analyzer(p, defs, bounds=Bounds(max_states=2)).run("determinate")
    assert v.status == "inconclusive"


def test_cross_check_flags_impossible_reports():
    fake = {"confluent": AnalysisVerdict("confluent", "holds"),
            "determinate": AnalysisVerdict("determinate", "fails")}
    assert cross_check(fake)
    fake["determinate"] = AnalysisVerdict("determinate", "holds")
    assert cross_check(fake) == []
    assert all(len(row) == 3 for row in IMPLICATIONS)


def test_report_is_serialisable(corpus_dir):
    import json
    _, rep = report(corpus_dir, "choice_cycle.spi", properties=("reactive",))
    doc = report_to_dict(rep)
    assert json.loads(json.dumps(doc))["properties"]["reactive"]["status"] == "fails"


def test_unknown_property():
    p, defs = prog("0")
    with pytest.raises(ValueError):
        analyze_all(p, defs, properties=("fast",))


def test_squares_close_on_extrusion(corpus_dir):
    ld = load(corpus_dir / "extrusion.spi")
    lts = Lts(ld.defs, default_alphabet([ld.main], ld.defs, ld.types))
    lts.add_program(ld.main)
    lts.explore()
    r = check_squares(lts)
    assert r["checked"] > 0 and r["failures"] == []

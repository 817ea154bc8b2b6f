"""Acceptance criteria, one test each.

Every test records a PASS/FAIL line with its running time; the lines are
printed at the end of the pytest run (see conftest.py) or directly when the
file is executed as a script.
"""
import os
import subprocess
import sys
import time
from contextlib import contextmanager

import pytest

from spicalc.analysis import analyze_all, check_squares
from spicalc.corpus import CORPUS_DIR, case_programs, equivalent_pairs, load_cases
from spicalc.equiv.bisim import bisim
from spicalc.equiv.contexts import context_falsifier
from spicalc.generate import lts_size, prelude_defs, program_pairs
from spicalc.lts.actions import Next
from spicalc.lts.space import Lts, default_alphabet
from spicalc.run import run
from spicalc.source import load
from spicalc.syntax.canonical import canonicalize
from spicalc.syntax.parser import parse_program

RESULTS: list = []
VARIANTS = ("standard", "weak", "v1", "v2", "v3")


@contextmanager
def criterion(number, title, limit=None):
    t0 = time.perf_counter()
    ok = False
    try:
        yield
        ok = True
    finally:
        dt = time.perf_counter() - t0
        if ok and limit is not None and dt >= limit:
            ok = False
            title += f" [over {limit:g}s]"
        RESULTS.append(f"{'PASS' if ok else 'FAIL'} {number:>2}. {title} ({dt:.2f}s)")
        print(RESULTS[-1])
    assert limit is None or dt < limit, f"took {dt:.2f}s, limit {limit}s"


def corpus(*names):
    return load(*(CORPUS_DIR / n for n in names))


def statuses(ld):
    rep = analyze_all(ld.main, ld.defs, default_alphabet([ld.main], ld.defs, ld.types))
    assert rep["contradictions"] == []
    return {k: v.status for k, v in rep["results"].items()}


@pytest.fixture(scope="module")
def generated():
    return program_pairs(200, seed=1, max_states=12)


def test_01_persistence_next_steps():
    with criterion(1, "persistence: next yields exactly B([v1;v2]) and B([v2;v1])", 1.0):
        ld = corpus("persistence.spi")
        lts = Lts(ld.defs)
        root = lts.add_program(ld.main)
        lts.explore()
        want = {canonicalize(parse_program(f"new s1, s2 in B({v})", ld.defs), ld.defs).key
                for v in ("[0; 1]", "[1; 0]")}
        # one suspended state per choice of the values read into x and y
        final = [x for x in lts.tau_star(root) if lts.is_suspended(x)]
        assert len(final) == 4
        for x in final:
            got = {lts.state(e.dst).key for e in lts.edges(x) if isinstance(e.action, Next)}
            assert got == want


def test_02_delayed_choice_discrimination():
    with criterion(2, "delayed choice vs delayed match: distinguished, equivalent under relaxed N", 5.0):
        ld = corpus("delayed_choice.spi", "delayed_match.spi")
        p, q = ld.programs
        alpha = default_alphabet([p, q], ld.defs, ld.types)
        assert bisim(p, q, ld.defs, alpha).verdict == "distinguished"
        assert bisim(p, q, ld.defs, alpha, relaxed_n=True).verdict == "equivalent"


def test_03_divergence():
    with criterion(3, "Omega vs 0 distinguished, tau.A + tau.0 vs 0 equivalent", 5.0):
        ld = corpus("omega.spi", "zero.spi")
        assert bisim(*ld.programs, ld.defs).verdict == "distinguished"
        ld = corpus("tau_choice.spi", "zero.spi")
        assert bisim(*ld.programs, ld.defs).verdict == "equivalent"


def test_04_local_confluence_example():
    with criterion(4, "A = s1 + B, B = s2 + A: analysis verdicts", 5.0):
        got = statuses(corpus("choice_cycle.spi"))
        assert (got["reactive"], got["locally_confluent"], got["confluent"],
                got["determinate"]) == ("fails", "holds", "fails", "fails")


def test_05_server_client():
    with criterion(5, "server/client: reply in instant 2, deterministic", 10.0):
        ld = corpus("server_client.spi")
        tr = run(ld.main, ld.defs, instants=3)
        # instant 1: the request is emitted and collected by the server;
        # instant 2: the server answers f(1) = 2, the client forwards it on t
        assert tr.instants[0].emitted == [["%0", "req(%1, 1)"]]
        assert tr.instants[0].collect == {"%0": ["req(%1, 1)"]}
        assert tr.emitted_in(2) == [["t", "2"]]
        assert tr.emitted_in(3) == []
        got = statuses(ld)
        assert got["reactive"] == got["determinate"] == got["confluent"] == "holds"


def test_06_variant_agreement(generated):
    with criterion(6, "200 generated pairs: five bisimulation variants agree"):
        defs = prelude_defs()
        bad = []
        for tp, p, tq, q in generated:
            alpha = default_alphabet([p, q], defs)
            assert len(alpha) <= 2
            assert lts_size(p, defs, 12) is not None and lts_size(q, defs, 12) is not None
            vs = {v: bisim(p, q, defs, alpha, variant=v, want_witness=False).verdict
                  for v in VARIANTS}
            assert "inconclusive" not in vs.values()
            if len(set(vs.values())) > 1:
                bad.append((tp, tq, vs))
        assert len(generated) >= 200
        assert bad == []


def test_07_property_cross_check(generated):
    with criterion(7, "reactive generated programs: confluence properties coincide"):
        defs = prelude_defs()
        progs = {}
        for tp, p, tq, q in generated:
            progs.setdefault(tp, p)
            progs.setdefault(tq, q)
        checked, bad = 0, []
        for text, p in progs.items():
            got = {k: v.status for k, v in analyze_all(p, defs)["results"].items()}
            if got["reactive"] != "holds":
                continue
            checked += 1
            eq = {got[k] for k in ("determinate", "confluent", "locally_confluent", "diamond_5_6_2")}
            if len(eq) != 1 or "inconclusive" in eq:
                bad.append((text, got))
            if got["strong_confluence"] == "holds" and got["determinate"] != "holds":
                bad.append((text, got))
        assert checked >= 100
        assert bad == []


def test_08_commutation_squares():
    with criterion(8, "corpus LTSs: every commutation square closes"):
        checked, failures = 0, []
        for case in load_cases():
            if case["kind"] == "check":
                continue
            progs, defs = case_programs(case)
            for p in progs:
                lts = Lts(defs, default_alphabet([p], defs))
                lts.add_program(p)
                lts.explore()
                assert not lts.partial
                r = check_squares(lts)
                checked += r["checked"]
                failures += [(case["name"], f) for f in r["failures"]]
        assert checked > 0
        assert failures == []


def test_09_congruence_sampling():
    with criterion(9, "20 equivalent pairs x 50 static contexts: none separates", 60.0):
        pairs = [x for x in equivalent_pairs() if x[0].startswith("pair-")][:20]
        assert len(pairs) == 20
        for name, p, q, defs in pairs:
            r = context_falsifier(p, q, defs, size_cap=3, samples=50, seed=0)
            assert r.tested == 50, name
            assert not r.found, (name, str(r.context))


def _spi(*args, seed):
    env = dict(os.environ, PYTHONHASHSEED=str(seed))
    return subprocess.run([sys.executable, "-m", "spicalc.cli", *args], env=env,
                          capture_output=True, check=True).stdout


def test_10_tool_output_is_reproducible():
    with criterion(10, "lts and run output byte-identical over 3 invocations"):
        jobs = [("lts", str(CORPUS_DIR / "server_client.spi")),
                ("lts", str(CORPUS_DIR / "choice_cycle.spi"), "--format", "dot"),
                ("run", str(CORPUS_DIR / "server_client.spi"), "--instants", "3"),
                ("run", str(CORPUS_DIR / "persistence.spi"), "--policy", "enumerate")]
        for job in jobs:
            outs = {_spi(*job, seed=s) for s in (0, 1, 2)}
            assert len(outs) == 1 and next(iter(outs)), job


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))

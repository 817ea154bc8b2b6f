"""Bundled example programs with their expected verdicts.

``cases.json`` lists the cases.  Each has a ``kind``:

``check``    the file parses and typechecks
``next``     N-successors of the suspended τ-derivatives of ``main``
``bisim``    verdict for two files, or two inline programs over one file
``analyze``  selected property statuses
``run``      emissions at the end of given instants
"""
from __future__ import annotations

import json
import time
from dataclasses import dataclass
from pathlib import Path

from ..analysis import analyze_all
from ..equiv.bisim import bisim
from ..lts.semantics import BoundsExceeded
from ..lts.actions import Next
from ..lts.space import Lts
from ..run import run
from ..source import load
from ..syntax.canonical import canonicalize
from ..syntax.parser import SpiSyntaxError, parse_program
from ..syntax.types import SpiTypeError

CORPUS_DIR = Path(__file__).resolve().parent


class CorpusError(Exception):
    pass


@dataclass
class CaseResult:
    name: str
    ok: bool
    expected: object
    got: object
    seconds: float

    def line(self) -> str:
        mark = "PASS" if self.ok else "FAIL"
        extra = "" if self.ok else f"  expected {self.expected!r}, got {self.got!r}"
        return f"{mark} {self.name} ({self.seconds:.2f}s){extra}"


def load_cases(directory=None) -> list:
    d = Path(directory) if directory is not None else CORPUS_DIR
    manifest = d / "cases.json"
    if not manifest.is_file():
        raise CorpusError(f"no cases.json in {d}")
    cases = json.loads(manifest.read_text(encoding="utf-8")).get("cases", [])
    if not cases:
        raise CorpusError(f"{manifest} lists no cases")
    return cases


def case_programs(case, directory=None):
    """``(programs, defs)`` for a case."""
    d = Path(directory) if directory is not None else CORPUS_DIR
    if "programs" in case:
        ld = load(d / case["file"], require_main=False)
        return [parse_program(t, ld.defs) for t in case["programs"]], ld.defs
    files = case.get("files") or [case["file"]]
    ld = load(*(d / f for f in files))
    return ld.programs, ld.defs


def next_successors(program, defs) -> set:
    """Keys of N-targets from every suspended τ-derivative of ``program``."""
    lts = Lts(defs)
    root = lts.add_program(program)
    out = set()
    for x in lts.tau_star(root):
        if lts.is_suspended(x):
            out |= {lts.state(e.dst).key for e in lts.edges(x) if isinstance(e.action, Next)}
    return out


def _evaluate(case, directory):
    kind = case["kind"]
    if kind == "check":
        try:
            case_programs(case, directory)
            return 0
        except (SpiSyntaxError, SpiTypeError, OSError):
            return 1
    progs, defs = case_programs(case, directory)
    if kind == "next":
        return sorted(next_successors(progs[0], defs))
    if kind == "bisim":
        v = bisim(progs[0], progs[1], defs, variant=case.get("variant", "standard"),
                  relaxed_n=case.get("relaxed_n", False), want_witness=False)
        return v.verdict
    if kind == "analyze":
        props = tuple(case["expect"])
        rep = analyze_all(progs[0], defs, properties=props)
        if rep["contradictions"]:
            return {"contradictions": rep["contradictions"]}
        return {k: v.status for k, v in rep["results"].items()}
    if kind == "run":
        tr = run(progs[0], defs, case["instants"])
        return {k: tr.emitted_in(int(k)) for k in case["expect"]}
    raise CorpusError(f"unknown case kind {kind!r}")


def _expected(case, directory):
    if case["kind"] == "next":
        _, defs = case_programs(case, directory)
        return sorted(canonicalize(parse_program(t, defs), defs).key for t in case["expect"])
    return case["expect"]


def run_case(case, directory=None) -> CaseResult:
    t0 = time.perf_counter()
    try:
        want = _expected(case, directory)
        got = _evaluate(case, directory)
    except (SpiSyntaxError, SpiTypeError, BoundsExceeded, OSError) as err:
        want, got = case.get("expect"), f"error: {err}"
    return CaseResult(case["name"], got == want, want, got, time.perf_counter() - t0)


def run_corpus(directory=None) -> list:
    return [run_case(c, directory) for c in load_cases(directory)]


def equivalent_pairs(directory=None) -> list:
    """``(name, p, q, defs)`` for every case expected to be equivalent."""
    out = []
    for c in load_cases(directory):
        if c["kind"] == "bisim" and c["expect"] == "equivalent" and not c.get("relaxed_n"):
            progs, defs = case_programs(c, directory)
            out.append((c["name"], progs[0], progs[1], defs))
    return out


__all__ = ["CORPUS_DIR", "CorpusError", "CaseResult", "load_cases", "case_programs",
           "run_case", "run_corpus", "equivalent_pairs", "next_successors"]

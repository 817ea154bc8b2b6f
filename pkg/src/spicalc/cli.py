"""Command-line front end.

Exit codes:

    0  success (bisim: equivalent)
    1  usage, I/O, syntax or type error; corpus deviation
    2  bisim: distinguished
    3  bisim: inconclusive or unsupported
    4  analyze: the report contradicts a known implication

Machine-readable output goes to stdout, diagnostics to stderr.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

from .analysis import PROPERTIES, analyze_all, report_to_dict
from .corpus import CorpusError, run_corpus
from .equiv.bisim import VARIANTS, bisim
from .lts.export import to_dot, to_json
from .lts.semantics import BoundsExceeded
from .lts.space import Bounds, Lts, default_alphabet
from .run import SCHEDULERS, V_POLICIES, RunError, run
from .source import load
from .syntax.parser import SpiSyntaxError
from .syntax.types import SpiTypeError

EXIT_OK, EXIT_ERROR, EXIT_DISTINGUISHED, EXIT_INCONCLUSIVE, EXIT_CONTRADICTION = 0, 1, 2, 3, 4


def _err(msg: str) -> None:
    print(msg, file=sys.stderr)


def _dump(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=2, ensure_ascii=False) + "\n")


def _bounds(args) -> Bounds:
    b = Bounds()
    over = {k: getattr(args, k) for k in ("max_states", "max_depth", "max_instants", "max_perms")
            if getattr(args, k, None) is not None}
    return dataclasses.replace(b, **over) if over else b


def _load(args, *paths, **kw):
    return load(*paths, alphabet_file=getattr(args, "alphabet", None), **kw)


def _report_load_error(path, err) -> None:
    if isinstance(err, SpiSyntaxError):
        for line, col, msg in err.errors:
            _err(f"{path}:{line}:{col}: {msg}")
    elif isinstance(err, SpiTypeError):
        for msg in err.errors:
            _err(f"{path}: type error: {msg}")
    else:
        _err(f"{path}: {err}")


def cmd_check(args) -> int:
    try:
        ld = _load(args, args.file, require_main=False)
    except (SpiSyntaxError, SpiTypeError, OSError) as err:
        _report_load_error(args.file, err)
        return EXIT_ERROR
    _err(f"{args.file}: ok ({len(ld.defs.threads)} threads, "
         f"{'with' if ld.main is not None else 'no'} main)")
    return EXIT_OK


def cmd_run(args) -> int:
    try:
        ld = _load(args, args.file)
        trace = run(ld.main, ld.defs, args.instants, args.scheduler, args.policy, args.seed,
                    max_perms=_bounds(args).max_perms)
    except (SpiSyntaxError, SpiTypeError, OSError) as err:
        _report_load_error(args.file, err)
        return EXIT_ERROR
    except (RunError, BoundsExceeded) as err:
        _err(f"{args.file}: {err}")
        if getattr(err, "hint", None):
            _err(f"  hint: {err.hint}")
        return EXIT_ERROR
    sys.stdout.write(trace.to_json())
    return EXIT_OK


def cmd_lts(args) -> int:
    try:
        ld = _load(args, args.file)
    except (SpiSyntaxError, SpiTypeError, OSError) as err:
        _report_load_error(args.file, err)
        return EXIT_ERROR
    alphabet = default_alphabet([ld.main], ld.defs, ld.types)
    lts = Lts(ld.defs, alphabet, _bounds(args))
    try:
        lts.add_program(ld.main)
    except BoundsExceeded as err:
        _err(f"{args.file}: {err}")
        return EXIT_ERROR
    lts.explore()
    if lts.partial:
        _err(f"{args.file}: bounds hit, the exported LTS is partial")
    text = to_dot(lts) if args.format == "dot" else to_json(lts)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_bisim(args) -> int:
    try:
        ld = _load(args, args.left, args.right)
    except (SpiSyntaxError, SpiTypeError, OSError) as err:
        _report_load_error(f"{args.left}, {args.right}", err)
        return EXIT_ERROR
    p, q = ld.programs
    alphabet = default_alphabet([p, q], ld.defs, ld.types)
    v = bisim(p, q, ld.defs, alphabet, _bounds(args), args.variant, relaxed_n=args.relaxed_n)
    _dump(v.to_dict())
    if v.verdict == "equivalent":
        return EXIT_OK
    if v.verdict == "distinguished":
        return EXIT_DISTINGUISHED
    if v.reason:
        _err(v.reason)
    return EXIT_INCONCLUSIVE


def cmd_analyze(args) -> int:
    props = PROPERTIES
    if args.properties:
        props = tuple(x.strip() for x in args.properties.split(",") if x.strip())
        bad = [x for x in props if x not in PROPERTIES]
        if bad:
            _err(f"unknown properties: {', '.join(bad)} (known: {', '.join(PROPERTIES)})")
            return EXIT_ERROR
    try:
        ld = _load(args, args.file)
    except (SpiSyntaxError, SpiTypeError, OSError) as err:
        _report_load_error(args.file, err)
        return EXIT_ERROR
    alphabet = default_alphabet([ld.main], ld.defs, ld.types)
    rep = analyze_all(ld.main, ld.defs, alphabet, _bounds(args), props)
    _dump(report_to_dict(rep))
    if rep["contradictions"]:
        for c in rep["contradictions"]:
            _err(f"internal contradiction: {c}")
        return EXIT_CONTRADICTION
    return EXIT_OK


def cmd_corpus(args) -> int:
    try:
        results = run_corpus(args.dir)
    except (CorpusError, OSError, ValueError) as err:
        _err(f"corpus: {err}")
        return EXIT_ERROR
    for r in results:
        print(r.line())
    failed = [r.name for r in results if not r.ok]
    if failed:
        _err(f"{len(failed)} of {len(results)} cases deviate: {', '.join(failed)}")
        return EXIT_ERROR
    return EXIT_OK


def _positive(text: str) -> int:
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _add_bounds(p) -> None:
    g = p.add_argument_group("bounds (defaults come from SPICALC_MAX_* variables)")
    g.add_argument("--max-states", type=_positive)
    g.add_argument("--max-depth", type=_positive)
    g.add_argument("--max-instants", type=_positive)
    g.add_argument("--max-perms", type=_positive)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="spi", description="Tools for synchronous pi-calculus programs.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="parse and typecheck a file")
    p.add_argument("file")
    p.add_argument("--alphabet", help="file with extra input declarations")
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("run", help="execute instants and print the trace as JSON")
    p.add_argument("file")
    p.add_argument("--instants", type=_positive, default=1)
    p.add_argument("--scheduler", choices=SCHEDULERS, default="canonical")
    p.add_argument("--policy", choices=V_POLICIES, default="sorted")
    p.add_argument("--seed", type=int)
    _add_bounds(p)
    p.set_defaults(fn=cmd_run)

    p = sub.add_parser("lts", help="explore and export the transition system")
    p.add_argument("file")
    p.add_argument("--alphabet")
    p.add_argument("--format", choices=("dot", "json"), default="json")
    p.add_argument("-o", "--output")
    _add_bounds(p)
    p.set_defaults(fn=cmd_lts)

    p = sub.add_parser("bisim", help="compare the main programs of two files")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--variant", choices=VARIANTS, default="standard")
    p.add_argument("--relaxed-N", dest="relaxed_n", action="store_true",
                   help="let weak N answers end with internal steps")
    p.add_argument("--alphabet")
    _add_bounds(p)
    p.set_defaults(fn=cmd_bisim)

    p = sub.add_parser("analyze", help="determinacy and confluence report")
    p.add_argument("file")
    p.add_argument("--properties", help=f"comma separated subset of {','.join(PROPERTIES)}")
    p.add_argument("--alphabet")
    _add_bounds(p)
    p.set_defaults(fn=cmd_analyze)

    p = sub.add_parser("corpus", help="run the bundled examples against their expectations")
    p.add_argument("--dir", help="corpus directory holding cases.json")
    p.set_defaults(fn=cmd_corpus)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())

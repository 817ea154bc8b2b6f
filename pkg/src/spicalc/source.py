"""Loading ``.spi`` files: parse, merge definition tables, typecheck."""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from pathlib import Path

from .syntax.ast import Call, DefTable
from .syntax.parser import SpiSyntaxError, merge_defs, parse
from .syntax.types import TypeInfo, typecheck


@dataclass
class Loaded:
    programs: list
    defs: DefTable
    types: TypeInfo

    @property
    def main(self):
        return self.programs[0]


def _read(path) -> str:
    return Path(path).read_text(encoding="utf-8")


def apply_alphabet_file(defs: DefTable, path) -> DefTable:
    """Add the ``input`` declarations of ``path`` to ``defs``."""
    main, extra = parse(_read(path))
    if main is not None or extra.threads or extra.functions:
        raise SpiSyntaxError([(1, 1, "an alphabet file may only declare inputs, signals and types")])
    return merge_defs(defs, extra)


def _generated(name: str) -> bool:
    return name.startswith("_")


def _match(x, y, ren: dict) -> bool:
    """Equal up to a consistent renaming ``ren`` of generated thread names in ``y``."""
    if isinstance(x, Call) and isinstance(y, Call) and _generated(x.name) and _generated(y.name):
        if ren.setdefault(y.name, x.name) != x.name:
            return False
        return _match(x.args, y.args, ren)
    if type(x) is not type(y):
        return False
    if isinstance(x, tuple):
        return len(x) == len(y) and all(_match(a, b, ren) for a, b in zip(x, y))
    if dataclasses.is_dataclass(x):
        return all(_match(getattr(x, f.name), getattr(y, f.name), ren)
                   for f in dataclasses.fields(x))
    return x == y


def _rename_calls(node, ren: dict):
    if isinstance(node, tuple):
        return tuple(_rename_calls(n, ren) for n in node)
    if not dataclasses.is_dataclass(node) or isinstance(node, type):
        return node
    if isinstance(node, Call) and node.name in ren:
        node = Call(ren[node.name], node.args)
    return dataclasses.replace(node, **{f.name: _rename_calls(getattr(node, f.name), ren)
                                        for f in dataclasses.fields(node) if f.init})


def _align_generated(old: DefTable, new: DefTable, main):
    """Reuse ``old``'s lifted helper threads for definitions shared with ``new``.

    The same thread parsed twice gets differently numbered helpers; without
    this step merging would report a conflict.
    """
    ren: dict = {}
    todo = [(k, k) for k in new.threads if k in old.threads and not _generated(k)]
    while todo:
        a, b = todo.pop()
        ta, tb = old.threads.get(a), new.threads.get(b)
        if ta is None or tb is None:
            continue
        trial = dict(ren)
        if _match((ta.params, ta.body, ta.annotations), (tb.params, tb.body, tb.annotations), trial):
            todo += [(trial[n], n) for n in trial if n not in ren]
            ren = trial
    if not ren:
        return new, main
    threads = {}
    for k, td in new.threads.items():
        if k in ren:
            continue
        threads[k] = dataclasses.replace(td, body=_rename_calls(td.body, ren))
    for k, v in ren.items():
        threads[v] = old.threads[v]
    new = dataclasses.replace(new, threads=threads)
    return new, (_rename_calls(main, ren) if main is not None else None)


def load(*paths, alphabet_file=None, require_main=True) -> Loaded:
    """Parse one or more files into a shared definition table and typecheck.

    Each file contributes its ``main`` program (in order).
    """
    defs, programs = DefTable(), []
    for path in paths:
        main, d = parse(_read(path), taken=defs.threads.keys())
        if main is None and require_main:
            raise SpiSyntaxError([(1, 1, f"{path}: no main program")])
        if programs or defs.threads:
            d, main = _align_generated(defs, d, main)
            defs = merge_defs(defs, d)
        else:
            defs = d
        programs.append(main)
    if alphabet_file is not None:
        defs = apply_alphabet_file(defs, alphabet_file)
    info = typecheck(defs, None, extra=[p for p in programs if p is not None])
    return Loaded(programs, defs, info)


__all__ = ["Loaded", "load", "apply_alphabet_file"]

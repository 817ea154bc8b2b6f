"""DOT and JSON serialisation of explored LTSs."""
from __future__ import annotations

import json

from ..syntax.printer import pretty, pretty_expr
from .actions import encode_action

SCHEMA_VERSION = 1


def _term(lts, sid) -> str:
    return pretty(lts.state(sid).program())


def lts_to_dict(lts) -> dict:
    ids = lts.reachable()
    renum = {sid: i for i, sid in enumerate(ids)}
    edges = []
    for sid in ids:
        for e in lts.edges(sid):
            edges.append({"src": renum[sid], "action": encode_action(e.action),
                          "dst": renum[e.dst]})
    return {
        "schema": SCHEMA_VERSION,
        "root": 0,
        "partial": lts.partial,
        "alphabet": [[s, pretty_expr(v)] for s, v in lts.alphabet],
        "bounds": lts.bounds.as_dict(),
        "states": [{"id": renum[sid], "term": _term(lts, sid)} for sid in ids],
        "edges": edges,
    }


def to_json(lts) -> str:
    return json.dumps(lts_to_dict(lts), indent=2, ensure_ascii=False) + "\n"


def _dot_escape(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"')


def to_dot(lts) -> str:
    data = lts_to_dict(lts)
    lines = ["digraph lts {", "  node [shape=box, fontname=\"monospace\"];"]
    for st in data["states"]:
        extra = ", peripheries=2" if st["id"] == 0 else ""
        lines.append(f'  s{st["id"]} [label="{_dot_escape(st["term"])}"{extra}];')
    ids = lts.reachable()
    renum = {sid: i for i, sid in enumerate(ids)}
    for sid in ids:
        for e in lts.edges(sid):
            style = ", style=dashed" if type(e.action).__name__ == "Tau" else ""
            lines.append(f'  s{renum[sid]} -> s{renum[e.dst]} '
                         f'[label="{_dot_escape(str(e.action))}"{style}];')
    if data["partial"]:
        lines.append('  partial [shape=note, label="bounds hit: partial LTS"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


__all__ = ["to_json", "to_dot", "lts_to_dict", "SCHEMA_VERSION"]

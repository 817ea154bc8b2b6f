"""A deliberately simple weak bisimilarity check used to cross-check the engine.

States are canonical keys, transitions come straight from ``relevant_steps``
and the relation is the greatest fixpoint computed by brute force over all
pairs.  Only suitable for programs whose outputs extrude nothing.
"""
from spicalc.lts.actions import Next, Tau
from spicalc.lts.semantics import relevant_steps
from spicalc.syntax.canonical import canonicalize


def _graph(roots, defs, alphabet):
    succ, todo = {}, list(roots)
    by_key = {r.key: r for r in roots}
    while todo:
        s = todo.pop()
        if s.key in succ:
            continue
        out = []
        for st in relevant_steps(s, defs, alphabet):
            assert not getattr(st.action, "extruded", ())
            out.append((st.action, st.target.key))
            if st.target.key not in by_key:
                by_key[st.target.key] = st.target
                todo.append(st.target)
        succ[s.key] = out
    return succ


def _closure(succ):
    tau = {}
    for x in succ:
        seen, stack = {x}, [x]
        while stack:
            y = stack.pop()
            for a, z in succ[y]:
                if isinstance(a, Tau) and z not in seen:
                    seen.add(z)
                    stack.append(z)
        tau[x] = seen
    weak = {}
    for x in succ:
        w = {}
        w.setdefault(Tau(), set()).update(tau[x])
        for y in tau[x]:
            for a, z in succ[y]:
                if isinstance(a, Tau):
                    continue
                tgt = {z} if isinstance(a, Next) else tau[z]
                w.setdefault(a, set()).update(tgt)
        weak[x] = w
    return weak


def naive_equivalent(p, q, defs, alphabet) -> bool:
    sp, sq = canonicalize(p, defs), canonicalize(q, defs)
    succ = _graph([sp, sq], defs, alphabet)
    weak = _closure(succ)
    rel = {(x, y) for x in succ for y in succ}
    changed = True
    while changed:
        changed = False
        for x, y in list(rel):
            ok = all(any((x2, y2) in rel for y2 in weak[y].get(a, ()))
                     for a, x2 in succ[x]) and \
                all(any((x2, y2) in rel for x2 in weak[x].get(a, ()))
                    for a, y2 in succ[y])
            if not ok:
                rel.discard((x, y))
                changed = True
    return (sp.key, sq.key) in rel

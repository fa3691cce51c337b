"""Canonical forms for decorated nets.

Iterative refinement colors places and transitions by their decorations
and neighborhood structure; when the partition does not become discrete,
individualization branches over the first ambiguous cell and the least
resulting form is taken.  Exponential in the worst case, fine at the net
sizes this library targets.

Two nets are isomorphic exactly when their canonical forms are equal, so
the form doubles as the dedup key for state-space exploration.
"""

from __future__ import annotations

import hashlib
import json

from ._util import sort_key, sorted_elems
from .nets import DecoratedNet


def _initial_colors(net: DecoratedNet):
    colors = {}
    for p in net.places:
        colors[("P", p)] = ("P", net.pname[p], repr(net.cap[p]), net.marking[p])
    for t in net.transition_ids:
        colors[("T", t)] = ("T", net.tname[t], net.tlb[t], net.rnw[t])
    return colors


def _refine(net: DecoratedNet, colors):
    """One round: extend every color by the multiset of neighbor colors."""
    new = {}
    for p in net.places:
        consumed = []
        produced = []
        inhibits = []
        for t in net.transition_ids:
            c = colors[("T", t)]
            if net.pre[t][p]:
                consumed.append((c, net.pre[t][p]))
            if net.post[t][p]:
                produced.append((c, net.post[t][p]))
            if p in net.inh[t]:
                inhibits.append(c)
        new[("P", p)] = (
            colors[("P", p)],
            tuple(sorted(consumed, key=sort_key)),
            tuple(sorted(produced, key=sort_key)),
            tuple(sorted(inhibits, key=sort_key)),
        )
    for t in net.transition_ids:
        pre = tuple(sorted(((colors[("P", p)], k) for p, k in net.pre[t].items()), key=sort_key))
        post = tuple(sorted(((colors[("P", p)], k) for p, k in net.post[t].items()), key=sort_key))
        inh = tuple(sorted((colors[("P", p)] for p in net.inh[t]), key=sort_key))
        below = tuple(sorted((colors[("T", u)] for u in net.transition_ids
                              if net.transitions.lt(u, t)), key=sort_key))
        above = tuple(sorted((colors[("T", u)] for u in net.transition_ids
                              if net.transitions.lt(t, u)), key=sort_key))
        new[("T", t)] = (colors[("T", t)], pre, post, inh, below, above)
    # compress to dense ranks so colors stay small across rounds
    ranks = {c: i for i, c in enumerate(sorted(set(new.values()), key=sort_key))}
    return {k: ("c", ranks[v]) for k, v in new.items()}


def _stable_coloring(net: DecoratedNet, colors):
    while True:
        new = _refine(net, colors)
        old_cells = _cells(colors)
        new_cells = _cells(new)
        if len(new_cells) == len(old_cells):
            return new
        colors = new


def _cells(colors):
    cells = {}
    for key, c in colors.items():
        cells.setdefault(c, []).append(key)
    return cells


def _form_from_discrete(net: DecoratedNet, colors):
    places = sorted(net.places, key=lambda p: colors[("P", p)])
    transitions = sorted(net.transition_ids, key=lambda t: colors[("T", t)])
    p_index = {p: i for i, p in enumerate(places)}
    t_index = {t: i for i, t in enumerate(transitions)}
    return (
        tuple((net.pname[p], repr(net.cap[p]), net.marking[p]) for p in places),
        tuple(
            (
                net.tname[t],
                net.tlb[t],
                net.rnw[t],
                tuple(sorted((p_index[p], k) for p, k in net.pre[t].items())),
                tuple(sorted((p_index[p], k) for p, k in net.post[t].items())),
                tuple(sorted(p_index[p] for p in net.inh[t])),
            )
            for t in transitions
        ),
        tuple(sorted((t_index[a], t_index[b]) for a, b in net.transitions.strict_pairs())),
    )


def _canonicalize(net: DecoratedNet, colors):
    colors = _stable_coloring(net, colors)
    cells = _cells(colors)
    ambiguous = [c for c, members in cells.items() if len(members) > 1]
    if not ambiguous:
        return _form_from_discrete(net, colors)
    target = min(ambiguous, key=sort_key)
    best = None
    for member in sorted(cells[target], key=sort_key):
        branched = dict(colors)
        branched[member] = (colors[member], "pivot")
        form = _canonicalize(net, branched)
        if best is None or form < best:
            best = form
    return best


def canonical_form(net: DecoratedNet):
    """A nested-tuple normal form equal for exactly the isomorphic nets."""
    return _canonicalize(net, _initial_colors(net))


def canonical_key(net: DecoratedNet) -> str:
    """Stable short digest of the canonical form (state-space node key)."""
    text = json.dumps(_jsonable(canonical_form(net)), separators=(",", ":"))
    return hashlib.sha256(text.encode("utf-8")).hexdigest()[:16]


def _jsonable(value):
    if isinstance(value, tuple):
        return [_jsonable(v) for v in value]
    if value == float("inf"):
        return "omega"
    return value


def isomorphic(a: DecoratedNet, b: DecoratedNet) -> bool:
    """Structure/decoration/marking/priority-preserving bijection exists."""
    if len(a.places) != len(b.places) or len(a.transition_ids) != len(b.transition_ids):
        return False
    if a.marking.total() != b.marking.total():
        return False
    if sorted(a.pname.values()) != sorted(b.pname.values()):
        return False
    if sorted(a.tname.values()) != sorted(b.tname.values()):
        return False
    return canonical_form(a) == canonical_form(b)

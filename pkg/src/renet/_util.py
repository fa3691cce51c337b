"""Deterministic ordering and small relation helpers shared across modules."""

from __future__ import annotations


def sort_key(value):
    """Total order on carrier identifiers (ints, strings, nested tuples).

    Hash-based iteration orders vary between processes; every sorted()
    over carrier elements goes through this key so output never does.
    """
    if isinstance(value, bool):
        return (0, "a-bool", value)
    if isinstance(value, int):
        return (0, "b-int", value)
    if isinstance(value, float):
        return (0, "c-float", value)
    if isinstance(value, str):
        return (1, "", value)
    if isinstance(value, tuple):
        return (2, "", tuple(sort_key(v) for v in value))
    return (3, type(value).__name__, repr(value))


def sorted_elems(values):
    return sorted(values, key=sort_key)


def close_pairs(pairs):
    """Transitive closure of a binary relation given as a set of pairs."""
    succ = {}
    for a, b in pairs:
        succ.setdefault(a, set()).add(b)
    changed = True
    while changed:
        changed = False
        for a, outs in succ.items():
            extra = set()
            for b in outs:
                extra |= succ.get(b, _EMPTY)
            if not extra <= outs:
                outs |= extra
                changed = True
    return {(a, b) for a, outs in succ.items() for b in outs}


_EMPTY: frozenset = frozenset()


def reflexive_transitive_closure(elements, pairs):
    closed = close_pairs(pairs)
    closed.update((x, x) for x in elements)
    return closed

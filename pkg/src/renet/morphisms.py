"""Structure-preserving maps between decorated nets.

A morphism is a pair of total maps (places, transitions) that preserves
arcs, capacities, names, labels, renew functions, inhibitor sets and the
priority order, and may only increase the marking.  Strict morphisms are
additionally injective, marking-exact, and embed the priority order
strictly; they are the admissible class for rewriting.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from ._util import sorted_elems
from .errors import InvalidMorphism
from .nets import DecoratedNet
from .posets import MonotoneMap, is_strict_order_embedding


@dataclass(frozen=True, eq=False)
class NetMorphism:
    source: DecoratedNet
    target: DecoratedNet
    place_map: dict
    transition_map: dict

    def place(self, p):
        return self.place_map[p]

    def transition(self, t):
        return self.transition_map[t]

    @cached_property
    def _signature(self):
        return (
            self.source._signature,
            self.target._signature,
            tuple(sorted(self.place_map.items(), key=lambda kv: str(kv))),
            tuple(sorted(self.transition_map.items(), key=lambda kv: str(kv))),
        )

    def __eq__(self, other):
        if not isinstance(other, NetMorphism):
            return NotImplemented
        return self._signature == other._signature

    def __hash__(self):
        return hash(self._signature)

    def __repr__(self):
        ps = ", ".join(f"{a!r}->{b!r}" for a, b in sorted(self.place_map.items(), key=str))
        ts = ", ".join(f"{a!r}->{b!r}" for a, b in sorted(self.transition_map.items(), key=str))
        return f"NetMorphism(places: {ps}; transitions: {ts})"


def identity_morphism(net: DecoratedNet) -> NetMorphism:
    return NetMorphism(net, net,
                       {p: p for p in net.places},
                       {t: t for t in net.transition_ids})


def compose_morphisms(g: NetMorphism, f: NetMorphism) -> NetMorphism:
    """g after f."""
    if f.target != g.source:
        raise ValueError("compose: inner target differs from outer source")
    return NetMorphism(
        f.source, g.target,
        {p: g.place(f.place(p)) for p in f.source.places},
        {t: g.transition(f.transition(t)) for t in f.source.transition_ids},
    )


def check_morphism(f: NetMorphism) -> list[str]:
    """All violated morphism conditions, each citing its condition number.

    Conditions: (1) arc preservation, (2) capacity equality, (3) place
    names, (4) transition name/label/renew equality, (5) marking may only
    grow, (inh) inhibitor image equality, (priority) order preservation.
    """
    src, dst = f.source, f.target
    problems = []

    if set(f.place_map) != set(src.places):
        problems.append("(map) place map is not total on the source places")
    if set(f.transition_map) != set(src.transition_ids):
        problems.append("(map) transition map is not total on the source transitions")
    if any(v not in dst.places for v in f.place_map.values()):
        problems.append("(map) place map leaves the target places")
    if any(v not in dst.transition_ids for v in f.transition_map.values()):
        problems.append("(map) transition map leaves the target transitions")
    if problems:
        return problems

    for t in sorted_elems(src.transition_ids):
        ft = f.transition(t)
        if src.pre[t].map_through(f.place_map) != dst.pre[ft]:
            problems.append(f"(1) pre image mismatch at transition {t!r}")
        if src.post[t].map_through(f.place_map) != dst.post[ft]:
            problems.append(f"(1) post image mismatch at transition {t!r}")
        if src.tname[t] != dst.tname[ft]:
            problems.append(f"(4) transition name mismatch at {t!r}")
        if src.tlb[t] != dst.tlb[ft]:
            problems.append(f"(4) label mismatch at {t!r}")
        if src.rnw[t] != dst.rnw[ft]:
            problems.append(f"(4) renew-function mismatch at {t!r}")
        if {f.place(p) for p in src.inh[t]} != dst.inh[ft]:
            problems.append(f"(inh) inhibitor image mismatch at {t!r}")

    for p in sorted_elems(src.places):
        fp = f.place(p)
        if src.cap[p] != dst.cap[fp]:
            problems.append(f"(2) capacity mismatch at place {p!r}")
        if src.pname[p] != dst.pname[fp]:
            problems.append(f"(3) place name mismatch at {p!r}")
        if src.marking[p] > dst.marking[fp]:
            problems.append(f"(5) marking shrinks at place {p!r}")

    for a, b in src.transitions.pairs():
        if not dst.transitions.le(f.transition(a), f.transition(b)):
            problems.append(f"(priority) order pair ({a!r}, {b!r}) not preserved")
    return problems


def transition_monotone(f: NetMorphism) -> MonotoneMap:
    """The transition component as a map between the priority posets."""
    return MonotoneMap(f.source.transitions, f.target.transitions, f.transition_map)


def is_strict(f: NetMorphism) -> bool:
    """Injective on both sorts, marking-exact, and a strict order embedding
    on the priority posets.  Raises InvalidMorphism when f is not even a
    valid morphism."""
    problems = check_morphism(f)
    if problems:
        raise InvalidMorphism("; ".join(problems))
    if len(set(f.place_map.values())) != len(f.place_map):
        return False
    if len(set(f.transition_map.values())) != len(f.transition_map):
        return False
    for p in f.source.places:
        if f.source.marking[p] != f.target.marking[f.place(p)]:
            return False
    return is_strict_order_embedding(transition_monotone(f))

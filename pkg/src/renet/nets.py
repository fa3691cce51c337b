"""Decorated place/transition nets and their token-game semantics.

A net carries, besides places/transitions/arcs/marking: per-place
capacities (finite or unbounded), place and transition name decorations,
per-transition labels with a renewal function applied on firing, inhibitor
place sets, and a partial order on transitions expressing priorities.

Nets are immutable values; firing returns a new net.  Enabledness is a
query, firing happens only on request.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

from ._util import sort_key, sorted_elems
from .errors import NotEnabled, NotEnabledParallel, UnknownTransition
from .posets import Poset, validate_poset

OMEGA = math.inf


class Multiset:
    """A finite multiset with positive counts; absent means zero.

    Addition, subtraction and comparison are pointwise; subtraction is
    only defined when the right operand is pointwise smaller.
    """

    __slots__ = ("_counts", "_hash")

    def __init__(self, counts=()):
        if isinstance(counts, Multiset):
            counts = counts._counts
        cleaned = {}
        for elem, k in dict(counts).items():
            if not isinstance(k, int) or isinstance(k, bool):
                raise ValueError(f"multiset count for {elem!r} must be an int, got {k!r}")
            if k < 0:
                raise ValueError(f"multiset count for {elem!r} is negative")
            if k > 0:
                cleaned[elem] = k
        object.__setattr__(self, "_counts", cleaned)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("Multiset is immutable")

    def __getitem__(self, elem):
        return self._counts.get(elem, 0)

    def items(self):
        return sorted(self._counts.items(), key=lambda kv: sort_key(kv[0]))

    def support(self):
        return frozenset(self._counts)

    def total(self):
        return sum(self._counts.values())

    def __bool__(self):
        return bool(self._counts)

    def __add__(self, other):
        counts = dict(self._counts)
        for elem, k in other._counts.items():
            counts[elem] = counts.get(elem, 0) + k
        return Multiset(counts)

    def __sub__(self, other):
        if not other <= self:
            raise ValueError("multiset subtraction would go negative")
        counts = dict(self._counts)
        for elem, k in other._counts.items():
            counts[elem] -= k
        return Multiset(counts)

    def __le__(self, other):
        return all(k <= other[elem] for elem, k in self._counts.items())

    def scaled(self, factor: int):
        if factor < 0:
            raise ValueError("negative multiset scaling")
        return Multiset({elem: k * factor for elem, k in self._counts.items()})

    def restrict(self, keep):
        keep = frozenset(keep)
        return Multiset({elem: k for elem, k in self._counts.items() if elem in keep})

    def map_through(self, func):
        """Image multiset: counts of merged elements add up."""
        counts = {}
        for elem, k in self._counts.items():
            image = func[elem] if isinstance(func, dict) else func(elem)
            counts[image] = counts.get(image, 0) + k
        return Multiset(counts)

    def __eq__(self, other):
        if not isinstance(other, Multiset):
            return NotImplemented
        return self._counts == other._counts

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash(tuple(self.items())))
        return self._hash

    def __repr__(self):
        inner = " + ".join(f"{k}*{elem!r}" for elem, k in self.items())
        return f"Multiset({inner or 'empty'})"


EMPTY = Multiset()

LABEL_TAGS = ("int", "bool", "sym")


def make_label(tag: str, value):
    """A transition label: a tagged value ('int' | 'bool' | 'sym')."""
    if tag == "int":
        if not isinstance(value, int) or isinstance(value, bool):
            raise ValueError(f"int label needs an int value, got {value!r}")
    elif tag == "bool":
        if not isinstance(value, bool):
            raise ValueError(f"bool label needs a bool value, got {value!r}")
    elif tag == "sym":
        if not isinstance(value, str):
            raise ValueError(f"sym label needs a string value, got {value!r}")
    else:
        raise ValueError(f"unknown label tag {tag!r}")
    return (tag, value)


def _renew_identity(label):
    return label


def _renew_inc(label):
    tag, value = label
    return (tag, value + 1) if tag == "int" else label


def _renew_dec_saturating(label):
    tag, value = label
    return (tag, max(0, value - 1)) if tag == "int" else label


def _renew_not(label):
    tag, value = label
    return (tag, not value) if tag == "bool" else label


# Closed registry of label endomorphisms; names are what nets store, which
# keeps serialization and morphism equality decidable.
RENEW_FUNCTIONS = {
    "identity": _renew_identity,
    "inc": _renew_inc,
    "dec_saturating": _renew_dec_saturating,
    "not": _renew_not,
}


def renew_label(name: str, label, times: int = 1):
    if name not in RENEW_FUNCTIONS:
        raise ValueError(f"unknown renew function {name!r}")
    func = RENEW_FUNCTIONS[name]
    for _ in range(times):
        label = func(label)
    return label


def valid_capacity(value) -> bool:
    if value == OMEGA:
        return True
    return isinstance(value, int) and not isinstance(value, bool) and value >= 1


@dataclass(frozen=True, eq=False)
class DecoratedNet:
    """An immutable decorated place/transition net.

    ``transitions`` is a Poset over the transition identifiers: its order
    is the priority relation.  All other components are keyed by place or
    transition identifiers.
    """

    places: frozenset
    transitions: Poset
    pre: dict
    post: dict
    marking: Multiset
    cap: dict
    pname: dict
    tname: dict
    tlb: dict
    rnw: dict
    inh: dict

    @property
    def transition_ids(self):
        return self.transitions.elements

    def sorted_places(self):
        return sorted_elems(self.places)

    def sorted_transitions(self):
        return sorted_elems(self.transition_ids)

    @cached_property
    def _signature(self):
        return (
            tuple(self.sorted_places()),
            tuple(self.transitions.pairs()),
            tuple((t, tuple(self.pre[t].items())) for t in self.sorted_transitions()),
            tuple((t, tuple(self.post[t].items())) for t in self.sorted_transitions()),
            tuple(self.marking.items()),
            tuple((p, self.cap[p]) for p in self.sorted_places()),
            tuple((p, self.pname[p]) for p in self.sorted_places()),
            tuple((t, self.tname[t]) for t in self.sorted_transitions()),
            tuple((t, self.tlb[t]) for t in self.sorted_transitions()),
            tuple((t, self.rnw[t]) for t in self.sorted_transitions()),
            tuple((t, tuple(sorted_elems(self.inh[t]))) for t in self.sorted_transitions()),
        )

    def __eq__(self, other):
        if not isinstance(other, DecoratedNet):
            return NotImplemented
        return self._signature == other._signature

    def __hash__(self):
        return hash(self._signature)

    def __repr__(self):
        return (
            f"DecoratedNet(|P|={len(self.places)}, |T|={len(self.transition_ids)}, "
            f"marking={self.marking!r})"
        )


def decorated_net(*, places=(), transitions=(), priorities=(), pre=None, post=None,
                  marking=None, cap=None, pname=None, tname=None, tlb=None,
                  rnw=None, inh=None, validate: bool = True) -> DecoratedNet:
    """Build a net, filling the usual defaults.

    ``priorities`` are generating pairs (lesser, greater) and get closed.
    Defaults: capacity unbounded, names equal to the identifier, label
    ("int", 0), renew "identity", no inhibitors, empty marking.
    """
    places = frozenset(places)
    order = Poset.from_cover(transitions, priorities)
    tids = order.elements
    pre = {t: Multiset((pre or {}).get(t, ())) for t in tids}
    post = {t: Multiset((post or {}).get(t, ())) for t in tids}
    marking = Multiset(marking or ())
    cap = {p: (cap or {}).get(p, OMEGA) for p in places}
    pname = {p: (pname or {}).get(p, str(p)) for p in places}
    tname = {t: (tname or {}).get(t, str(t)) for t in tids}
    tlb = {t: (tlb or {}).get(t, ("int", 0)) for t in tids}
    rnw = {t: (rnw or {}).get(t, "identity") for t in tids}
    inh = {t: frozenset((inh or {}).get(t, ())) for t in tids}
    net = DecoratedNet(places, order, pre, post, marking, cap, pname, tname, tlb, rnw, inh)
    if validate:
        problems = validate_net(net)
        if problems:
            raise ValueError("; ".join(problems))
    return net


def validate_net(net: DecoratedNet) -> list[str]:
    """All invariant violations, each with a path naming the component."""
    problems = []
    poset_report = validate_poset(net.transitions)
    if poset_report is not None:
        problems.append(f"transitions: priority order invalid: {poset_report}")
    tids = net.transition_ids

    for name, mapping in (("pre", net.pre), ("post", net.post), ("inh", net.inh),
                          ("tname", net.tname), ("tlb", net.tlb), ("rnw", net.rnw)):
        if set(mapping) != set(tids):
            problems.append(f"{name}: keys differ from the transition set")
    for name, mapping in (("cap", net.cap), ("pname", net.pname)):
        if set(mapping) != set(net.places):
            problems.append(f"{name}: keys differ from the place set")

    for t in sorted_elems(tids):
        for name, mapping in (("pre", net.pre), ("post", net.post)):
            if t in mapping and not mapping[t].support() <= net.places:
                bad = sorted_elems(mapping[t].support() - net.places)
                problems.append(f"{name}[{t!r}]: unknown places {bad!r}")
        if t in net.inh and not net.inh[t] <= net.places:
            bad = sorted_elems(net.inh[t] - net.places)
            problems.append(f"inh[{t!r}]: unknown places {bad!r}")
        if t in net.tlb:
            try:
                make_label(*net.tlb[t])
            except (ValueError, TypeError):
                problems.append(f"tlb[{t!r}]: invalid label {net.tlb[t]!r}")
        if t in net.rnw and net.rnw[t] not in RENEW_FUNCTIONS:
            problems.append(f"rnw[{t!r}]: unknown renew function {net.rnw[t]!r}")

    if not net.marking.support() <= net.places:
        bad = sorted_elems(net.marking.support() - net.places)
        problems.append(f"marking: unknown places {bad!r}")
    for p in net.sorted_places():
        if p in net.cap:
            if not valid_capacity(net.cap[p]):
                problems.append(f"cap[{p!r}]: invalid capacity {net.cap[p]!r}")
            elif net.marking[p] > net.cap[p]:
                problems.append(
                    f"marking: {net.marking[p]} tokens exceed capacity {net.cap[p]} at place {p!r}")
    return problems


PRIORITY_MODES = ("maximum", "maximal")


def _require_transition(net, t):
    if t not in net.transition_ids:
        raise UnknownTransition(f"unknown transition {t!r}")


def _token_ok(net, t):
    return net.pre[t] <= net.marking


def _capacity_ok(net, t, strict_capacity):
    if strict_capacity:
        follower = net.marking + net.post[t]
    else:
        follower = (net.marking - net.pre[t]) + net.post[t]
    return all(follower[p] <= net.cap[p] for p in follower.support())


def _inhibitor_ok(net, t):
    return all(net.marking[p] == 0 for p in net.inh[t])


def _core_enabled(net, strict_capacity):
    """Transitions passing the token, capacity and inhibitor tests."""
    return {
        t for t in net.transition_ids
        if _token_ok(net, t) and _capacity_ok(net, t, strict_capacity) and _inhibitor_ok(net, t)
    }


def _priority_ok(net, t, core, mode):
    if mode == "maximum":
        return all(net.transitions.le(other, t) for other in core)
    if mode == "maximal":
        return not any(net.transitions.lt(t, other) for other in core)
    raise ValueError(f"unknown priority mode {mode!r}")


def blocking_condition(net: DecoratedNet, t, mode: str = "maximum",
                       strict_capacity: bool = False):
    """The first failing enabledness sub-condition for t, or None.

    Checked in order: token, capacity, inhibitor, priority.
    """
    _require_transition(net, t)
    if not _token_ok(net, t):
        return "token"
    if not _capacity_ok(net, t, strict_capacity):
        return "capacity"
    if not _inhibitor_ok(net, t):
        return "inhibitor"
    core = _core_enabled(net, strict_capacity)
    if not _priority_ok(net, t, core, mode):
        return "priority"
    return None


def enabled(net: DecoratedNet, t, mode: str = "maximum",
            strict_capacity: bool = False) -> bool:
    """Whether t may fire: tokens available, follower marking within
    capacity, all inhibitor places empty, and t wins the priority test
    against every otherwise-enabled transition."""
    return blocking_condition(net, t, mode, strict_capacity) is None


def enabled_set(net: DecoratedNet, mode: str = "maximum",
                strict_capacity: bool = False):
    core = _core_enabled(net, strict_capacity)
    return {t for t in core if _priority_ok(net, t, core, mode)}


def fire(net: DecoratedNet, t, mode: str = "maximum",
         strict_capacity: bool = False) -> DecoratedNet:
    """Fire one transition: move tokens, renew the transition's label."""
    condition = blocking_condition(net, t, mode, strict_capacity)
    if condition is not None:
        raise NotEnabled(t, condition)
    marking = (net.marking - net.pre[t]) + net.post[t]
    tlb = dict(net.tlb)
    tlb[t] = renew_label(net.rnw[t], tlb[t])
    return DecoratedNet(net.places, net.transitions, net.pre, net.post, marking,
                        net.cap, net.pname, net.tname, tlb, net.rnw, net.inh)


def fire_parallel(net: DecoratedNet, vector, mode: str = "maximum",
                  strict_capacity: bool = False) -> DecoratedNet:
    """Fire a transition vector (t -> multiplicity) in one parallel step.

    The summed token demand must fit the marking, the summed follower
    marking must respect capacities, and every participating transition
    must pass the inhibitor and priority tests against the initial
    marking.  Each label is renewed once per occurrence.
    """
    vector = dict(vector)
    if not vector:
        raise NotEnabledParallel(None, "empty-vector")
    for t in sorted_elems(vector):
        _require_transition(net, t)
        if not isinstance(vector[t], int) or isinstance(vector[t], bool) or vector[t] < 1:
            raise ValueError(f"vector multiplicity for {t!r} must be a positive int")

    demand = EMPTY
    produce = EMPTY
    for t in sorted_elems(vector):
        demand = demand + net.pre[t].scaled(vector[t])
        produce = produce + net.post[t].scaled(vector[t])
    if not demand <= net.marking:
        raise NotEnabledParallel(None, "token")
    if strict_capacity:
        follower = net.marking + produce
    else:
        follower = (net.marking - demand) + produce
    for p in follower.support():
        if follower[p] > net.cap[p]:
            raise NotEnabledParallel(None, "capacity")
    core = _core_enabled(net, strict_capacity)
    for t in sorted_elems(vector):
        if not _inhibitor_ok(net, t):
            raise NotEnabledParallel(t, "inhibitor")
        if not _priority_ok(net, t, core, mode):
            raise NotEnabledParallel(t, "priority")

    marking = (net.marking - demand) + produce
    tlb = dict(net.tlb)
    for t in sorted_elems(vector):
        tlb[t] = renew_label(net.rnw[t], tlb[t], times=vector[t])
    return DecoratedNet(net.places, net.transitions, net.pre, net.post, marking,
                        net.cap, net.pname, net.tname, tlb, net.rnw, net.inh)

"""Finite partially ordered sets and monotone maps as a concrete category.

Carriers are finite sets of opaque identifiers (ints, strings, or nested
tuples of those).  The order relation is always stored fully closed, i.e.
as the complete reflexive-transitive set of pairs; validation rejects
non-closed input instead of silently closing it.

Besides the basic constructors this module provides the gluing
construction (pushout), the constraint product (pullback), and the class
of strict order embeddings that plays the role of the admissible
monomorphisms for rewriting.
"""

from __future__ import annotations

from typing import NamedTuple

from ._util import close_pairs, sort_key, sorted_elems
from .errors import AntisymmetryViolation


class Poset:
    """An immutable finite poset: a carrier plus a closed order relation.

    The constructor stores its arguments verbatim; use :func:`poset` for a
    validating factory or :meth:`from_cover` to build from generating pairs.
    """

    __slots__ = ("elements", "leq", "_hash")

    def __init__(self, elements=(), leq=()):
        object.__setattr__(self, "elements", frozenset(elements))
        object.__setattr__(self, "leq", frozenset(leq))
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("Poset is immutable")

    @classmethod
    def from_cover(cls, elements, pairs=()):
        """Build a poset from generating pairs, applying the full closure.

        Raises ValueError when the closure is not antisymmetric.
        """
        elements = frozenset(elements)
        for a, b in pairs:
            if a not in elements or b not in elements:
                raise ValueError(f"order pair ({a!r}, {b!r}) references unknown elements")
        closed = close_pairs(pairs)
        closed.update((x, x) for x in elements)
        for a, b in sorted(closed, key=sort_key):
            if a != b and (b, a) in closed:
                raise ValueError(f"order pairs create a cycle through {a!r} and {b!r}")
        return cls(elements, closed)

    def le(self, a, b):
        return (a, b) in self.leq

    def lt(self, a, b):
        return a != b and (a, b) in self.leq

    def __contains__(self, x):
        return x in self.elements

    def __len__(self):
        return len(self.elements)

    def __eq__(self, other):
        if not isinstance(other, Poset):
            return NotImplemented
        return self.elements == other.elements and self.leq == other.leq

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash((self.elements, self.leq)))
        return self._hash

    def __repr__(self):
        elems = ", ".join(repr(e) for e in sorted_elems(self.elements))
        pairs = ", ".join(f"{a!r}<{b!r}" for a, b in self.cover_pairs())
        return f"Poset({{{elems}}}{'; ' + pairs if pairs else ''})"

    def pairs(self):
        """The full closed relation as a deterministically sorted list."""
        return sorted(self.leq, key=sort_key)

    def strict_pairs(self):
        return [(a, b) for a, b in self.pairs() if a != b]

    def cover_pairs(self):
        """The transitive reduction: pairs a < b with nothing strictly between."""
        covers = []
        for a, b in self.strict_pairs():
            if not any(self.lt(a, z) and self.lt(z, b) for z in self.elements):
                covers.append((a, b))
        return covers

    def down_set(self, x):
        return frozenset(a for a, b in self.leq if b == x)

    def up_set(self, x):
        return frozenset(b for a, b in self.leq if a == x)

    def restrict(self, keep):
        """The induced subposet on ``keep`` (a subset of the carrier)."""
        keep = frozenset(keep)
        if not keep <= self.elements:
            raise ValueError("restriction set is not a subset of the carrier")
        return Poset(keep, {(a, b) for a, b in self.leq if a in keep and b in keep})


def validate_poset(p: Poset):
    """Return None when all poset invariants hold, else a report string.

    The report names the first violating pair in deterministic order.
    """
    carrier = p.elements
    pairs = sorted(p.leq, key=sort_key)
    for a, b in pairs:
        if a not in carrier or b not in carrier:
            return f"relation pair ({a!r}, {b!r}) is outside the carrier"
    for x in sorted_elems(carrier):
        if (x, x) not in p.leq:
            return f"reflexivity: ({x!r}, {x!r}) missing"
    for a, b in pairs:
        if a != b and (b, a) in p.leq:
            return f"antisymmetry: both ({a!r}, {b!r}) and ({b!r}, {a!r}) present"
    succ = {}
    for a, b in pairs:
        succ.setdefault(a, []).append(b)
    for a, b in pairs:
        for c in succ.get(b, ()):
            if (a, c) not in p.leq:
                return f"transitivity: ({a!r}, {c!r}) missing given ({a!r}, {b!r}) and ({b!r}, {c!r})"
    return None


def poset(elements=(), leq=()):
    """Checked constructor: raises ValueError when the relation is not a
    fully closed partial order on the carrier."""
    p = Poset(elements, leq)
    report = validate_poset(p)
    if report is not None:
        raise ValueError(report)
    return p


def initial_poset() -> Poset:
    """The empty poset; every poset receives exactly one map from it."""
    return Poset((), ())


def discrete(elements) -> Poset:
    """The discretely ordered poset on a plain set (identity relation only)."""
    elements = frozenset(elements)
    return Poset(elements, {(x, x) for x in elements})


def underlying(p: Poset) -> frozenset:
    """Forget the order: the carrier as a plain set."""
    return p.elements


class MonotoneMap:
    """A total order-preserving function between two posets."""

    __slots__ = ("source", "target", "mapping", "_hash")

    def __init__(self, source: Poset, target: Poset, mapping):
        mapping = dict(mapping)
        if set(mapping) != set(source.elements):
            missing = sorted_elems(source.elements - set(mapping))
            extra = sorted_elems(set(mapping) - source.elements)
            raise ValueError(f"map domain mismatch (missing {missing!r}, extra {extra!r})")
        for x, y in mapping.items():
            if y not in target.elements:
                raise ValueError(f"map sends {x!r} outside the target carrier ({y!r})")
        for a, b in source.leq:
            if (mapping[a], mapping[b]) not in target.leq:
                raise ValueError(
                    f"map is not order-preserving: {a!r} <= {b!r} but "
                    f"{mapping[a]!r} !<= {mapping[b]!r}"
                )
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "mapping", mapping)
        object.__setattr__(self, "_hash", None)

    @classmethod
    def _unchecked(cls, source, target, mapping):
        # for enumerators whose output is monotone by construction
        self = object.__new__(cls)
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "mapping", dict(mapping))
        object.__setattr__(self, "_hash", None)
        return self

    def __setattr__(self, name, value):
        raise AttributeError("MonotoneMap is immutable")

    def __call__(self, x):
        return self.mapping[x]

    def items(self):
        return sorted(self.mapping.items(), key=lambda kv: sort_key(kv[0]))

    def image(self):
        return frozenset(self.mapping.values())

    def is_injective(self):
        return len(set(self.mapping.values())) == len(self.mapping)

    def __eq__(self, other):
        if not isinstance(other, MonotoneMap):
            return NotImplemented
        return (
            self.source == other.source
            and self.target == other.target
            and self.mapping == other.mapping
        )

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(
                self, "_hash", hash((self.source, self.target, tuple(self.items())))
            )
        return self._hash

    def __repr__(self):
        entries = ", ".join(f"{x!r}->{y!r}" for x, y in self.items())
        return f"MonotoneMap({entries})"


def identity_map(p: Poset) -> MonotoneMap:
    return MonotoneMap(p, p, {x: x for x in p.elements})


def compose(g: MonotoneMap, f: MonotoneMap) -> MonotoneMap:
    """g after f."""
    if f.target != g.source:
        raise ValueError("compose: inner target differs from outer source")
    return MonotoneMap(f.source, g.target, {x: g(f(x)) for x in f.source.elements})


class Span(NamedTuple):
    """Two maps out of a shared source (pushout input, pullback output)."""

    left: MonotoneMap
    right: MonotoneMap

    @property
    def source(self):
        return self.left.source


class Cospan(NamedTuple):
    """Two maps into a shared target (pullback input, pushout output)."""

    left: MonotoneMap
    right: MonotoneMap

    @property
    def apex(self):
        return self.left.target


def is_order_embedding(f: MonotoneMap) -> bool:
    """x <= y holds exactly when f(x) <= f(y); implies injectivity."""
    for x in f.source.elements:
        for y in f.source.elements:
            if ((x, y) in f.source.leq) != ((f(x), f(y)) in f.target.leq):
                return False
    return True


def is_strict_order_embedding(f: MonotoneMap) -> bool:
    """Order embedding whose image is interval-closed in the target.

    Every z' lying between two image points must itself have a preimage;
    this is the admissible class for the rewriting constructions.
    """
    if not is_order_embedding(f):
        return False
    image = f.image()
    for x, y in f.source.leq:
        fx, fy = f(x), f(y)
        for z in f.target.elements:
            if (fx, z) in f.target.leq and (z, fy) in f.target.leq and z not in image:
                return False
    return True


def _require_common_source(f: MonotoneMap, g: MonotoneMap):
    if f.source != g.source:
        raise ValueError("span legs do not share their source poset")


def set_pushout(f: MonotoneMap, g: MonotoneMap):
    """Set-level pushout of the underlying functions, ignoring the orders.

    Returns (classes, left_map, right_map).  Classes are canonical tokens:
    the sorted tuple of tagged members ("L", x) / ("R", y), which keeps
    results deterministic and serializable.
    """
    _require_common_source(f, g)
    items = [("L", x) for x in sorted_elems(f.target.elements)]
    items += [("R", y) for y in sorted_elems(g.target.elements)]
    parent = {it: it for it in items}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    for x0 in sorted_elems(f.source.elements):
        union(("L", f(x0)), ("R", g(x0)))

    members = {}
    for it in items:
        members.setdefault(find(it), []).append(it)
    token = {root: tuple(sorted(ms, key=sort_key)) for root, ms in members.items()}
    left_map = {x: token[find(("L", x))] for x in f.target.elements}
    right_map = {y: token[find(("R", y))] for y in g.target.elements}
    return frozenset(token.values()), left_map, right_map


def pushout_raw_relation(f: MonotoneMap, g: MonotoneMap):
    """The one-step image relation on the set-level pushout classes.

    This is the relation obtained before any quotienting; it can contain
    symmetric pairs across distinct classes, which is exactly why the
    pushout construction has to quotient further.  Returns
    (classes, pairs).
    """
    classes, lmap, rmap = set_pushout(f, g)
    pairs = set()
    for a, b in f.target.leq:
        pairs.add((lmap[a], lmap[b]))
    for a, b in g.target.leq:
        pairs.add((rmap[a], rmap[b]))
    return classes, frozenset(pairs)


def pushout(f: MonotoneMap, g: MonotoneMap) -> Cospan:
    """Pushout of the span f: P0 -> P1, g: P0 -> P2.

    Construction: (a) set-level pushout of the underlying functions,
    (b) image relation generated by the two orders, (c) quotient by the
    equivalence closure of its symmetric pairs, (d) transitive closure of
    the quotient relation.  Steps (b)-(d) repeat until the result is
    antisymmetric: one round suffices when a leg is a strict order
    embedding, but general spans can force further collapsing (three
    classes in a generated cycle leave no symmetric pair to see in the
    first round).  Returns the cospan (P1 -> P3, P2 -> P3).
    """
    classes, lmap, rmap = set_pushout(f, g)
    parent = {c: c for c in classes}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    leq_reps = None
    while True:
        gen = set()
        for a, b in f.target.leq:
            gen.add((find(lmap[a]), find(lmap[b])))
        for a, b in g.target.leq:
            gen.add((find(rmap[a]), find(rmap[b])))
        closed = close_pairs(gen)
        closed.update(gen)
        merged = False
        for u, v in sorted(closed, key=sort_key):
            ru, rv = find(u), find(v)
            if ru != rv and (v, u) in closed:
                parent[ru] = rv
                merged = True
        if not merged:
            leq_reps = closed
            break

    final_members = {}
    for c in classes:
        final_members.setdefault(find(c), []).extend(c)
    final_token = {
        root: tuple(sorted(ms, key=sort_key)) for root, ms in final_members.items()
    }
    carrier = frozenset(final_token.values())
    leq = {(final_token[find(u)], final_token[find(v)]) for u, v in leq_reps}
    leq.update((t, t) for t in carrier)

    for a, b in leq:
        if a != b and (b, a) in leq:
            raise AntisymmetryViolation(
                f"pushout order is not antisymmetric between {a!r} and {b!r}"
            )
    apex = poset(carrier, leq)
    g_prime = MonotoneMap(f.target, apex, {x: final_token[find(lmap[x])] for x in f.target.elements})
    f_prime = MonotoneMap(g.target, apex, {y: final_token[find(rmap[y])] for y in g.target.elements})
    return Cospan(g_prime, f_prime)


def pullback(g: MonotoneMap, f: MonotoneMap) -> Span:
    """Pullback of the cospan g: P1 -> P0, f: P2 -> P0.

    Carrier: pairs (x1, x2) with g(x1) = f(x2); order componentwise.
    Returns the span of projections (P3 -> P1, P3 -> P2).
    """
    if g.target != f.target:
        raise ValueError("cospan legs do not share their target poset")
    carrier = []
    for x1 in sorted_elems(g.source.elements):
        for x2 in sorted_elems(f.source.elements):
            if g(x1) == f(x2):
                carrier.append((x1, x2))
    leq = set()
    for a in carrier:
        for b in carrier:
            if (a[0], b[0]) in g.source.leq and (a[1], b[1]) in f.source.leq:
                leq.add((a, b))
    apex = poset(carrier, leq)
    proj_left = MonotoneMap(apex, g.source, {p: p[0] for p in carrier})
    proj_right = MonotoneMap(apex, f.source, {p: p[1] for p in carrier})
    return Span(proj_left, proj_right)

"""Bounded universal-property oracles for poset (co)limits.

A genuine universal property quantifies over every poset; these checkers
quantify over all posets up to isomorphism below a size bound, which makes
them falsification procedures at test scale rather than proofs.  The bound
requested for a square is its apex size plus one; when the configured
ceiling truncates that, a BoundTooSmall warning is emitted and the check
runs at the ceiling.

The counting shortcut used throughout: when the two legs into an apex are
jointly surjective (pushout side) or jointly injective (pullback side),
the mediating map is forced pointwise, so "exactly one mediator per
cocone/cone" is equivalent to an exact count match between hom-sets and
cocones/cones.  Candidate squares without that property fall back to an
explicit collision check.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass
from functools import lru_cache

from ._util import sort_key, sorted_elems
from .errors import BoundTooSmall, InvalidCube
from .posets import (
    Cospan,
    MonotoneMap,
    Poset,
    Span,
    compose,
    discrete,
    is_strict_order_embedding,
    poset,
)

DEFAULT_SIZE_CEILING = 4


class _Indexed:
    """A poset re-encoded over integer indices with bitmask up/down sets."""

    __slots__ = ("elems", "pos", "n", "up", "down", "order", "preds", "components")

    def __init__(self, p: Poset):
        self.elems = sorted_elems(p.elements)
        self.pos = {e: i for i, e in enumerate(self.elems)}
        n = self.n = len(self.elems)
        self.up = [0] * n
        self.down = [0] * n
        for a, b in p.leq:
            i, j = self.pos[a], self.pos[b]
            self.up[i] |= 1 << j
            self.down[j] |= 1 << i
        # topological processing order: below-count is strictly monotone
        self.order = sorted(range(n), key=lambda i: (self.down[i].bit_count(), i))
        rank = {i: r for r, i in enumerate(self.order)}
        self.preds = []
        for i in self.order:
            mask = self.down[i] & ~(1 << i)
            ps = []
            while mask:
                low = mask & -mask
                j = low.bit_length() - 1
                mask ^= low
                ps.append(j)
            self.preds.append([j for j in ps if rank[j] < rank[i]])
        self.components = self._components()

    def _components(self):
        seen = [False] * self.n
        comps = []
        for start in range(self.n):
            if seen[start]:
                continue
            comp = []
            stack = [start]
            seen[start] = True
            while stack:
                i = stack.pop()
                comp.append(i)
                neigh = (self.up[i] | self.down[i]) & ~(1 << i)
                while neigh:
                    low = neigh & -neigh
                    j = low.bit_length() - 1
                    neigh ^= low
                    if not seen[j]:
                        seen[j] = True
                        stack.append(j)
            comps.append(sorted(comp))
        return comps


@lru_cache(maxsize=512)
def _indexed(p: Poset) -> _Indexed:
    return _Indexed(p)


def _hom_tuples(src: _Indexed, dst: _Indexed):
    """All monotone maps src -> dst as value-index tuples (src index order)."""
    n = src.n
    if n == 0:
        return [()]
    if dst.n == 0:
        return []
    out = []
    assign = [0] * n
    full = (1 << dst.n) - 1
    order = src.order
    preds = src.preds

    def rec(k):
        if k == n:
            out.append(tuple(assign))
            return
        i = order[k]
        mask = full
        for j in preds[k]:
            mask &= dst.up[assign[j]]
            if not mask:
                return
        m = mask
        while m:
            low = m & -m
            q = low.bit_length() - 1
            m ^= low
            assign[i] = q
            rec(k + 1)

    rec(0)
    return out


def _count_hom_component(src: _Indexed, comp, dst: _Indexed) -> int:
    """Count monotone maps from one connected component of src into dst."""
    if dst.n == 0:
        return 0 if comp else 1
    order = sorted(comp, key=src.order.index)
    assign = {}
    full = (1 << dst.n) - 1
    count = 0

    def rec(k):
        nonlocal count
        if k == len(order):
            count += 1
            return
        i = order[k]
        mask = full
        below = src.down[i] & ~(1 << i)
        m = below
        while m:
            low = m & -m
            j = low.bit_length() - 1
            m ^= low
            if j in assign:
                mask &= dst.up[assign[j]]
        if not mask:
            return
        m = mask
        while m:
            low = m & -m
            q = low.bit_length() - 1
            m ^= low
            assign[i] = q
            rec(k + 1)
        del assign[i]

    rec(0)
    return count


def _count_indexed(src: _Indexed, dst: _Indexed) -> int:
    if src.n == 0:
        return 1
    if dst.n == 0:
        return 0
    total = 1
    for comp in src.components:
        total *= _count_hom_component(src, comp, dst)
        if total == 0:
            return 0
    return total


def count_monotone_maps(p: Poset, q: Poset) -> int:
    """|Hom(p, q)| computed by factoring over p's comparability components."""
    return _count_indexed(_indexed(p), _indexed(q))


def monotone_maps(p: Poset, q: Poset):
    """All monotone maps p -> q as MonotoneMap values, deterministically ordered."""
    src, dst = _indexed(p), _indexed(q)
    maps = []
    for tup in sorted(_hom_tuples(src, dst)):
        maps.append(MonotoneMap._unchecked(
            p, q, {src.elems[i]: dst.elems[tup[i]] for i in range(src.n)}))
    return maps


def _upmasks(p: Poset):
    return tuple(_indexed(p).up)


@lru_cache(maxsize=None)
def _indexed_from_upmasks(up) -> _Indexed:
    n = len(up)
    pairs = {(i, j) for i in range(n) for j in _bits(up[i])}
    return _Indexed(Poset(range(n), pairs))


_CANON_PERM_BUDGET = 5040


@lru_cache(maxsize=None)
def _canon_or_raw(up):
    """Canonical relabeling of an upmask tuple, or the raw tuple when the
    automorphism search would be too symmetric to be worth it (counting by
    component factoring is cheap exactly in those cases)."""
    budget = 1
    idx = _indexed_from_upmasks(up)
    colors = {}
    for i in range(idx.n):
        colors.setdefault((idx.up[i].bit_count(), idx.down[i].bit_count()), []).append(i)
    for group in colors.values():
        for k in range(2, len(group) + 1):
            budget *= k
        if budget > _CANON_PERM_BUDGET:
            return up
    return _canonical_upmasks(up)


@lru_cache(maxsize=200_000)
def _count_hom_masks(dom_up, cod_up) -> int:
    return _count_indexed(_indexed_from_upmasks(dom_up), _indexed_from_upmasks(cod_up))


@lru_cache(maxsize=50_000)
def _hom_cached(p: Poset, q: Poset):
    return _hom_tuples(_indexed(p), _indexed(q))


@lru_cache(maxsize=200_000)
def _pre_group_cached(p: Poset, q: Poset, positions):
    """Counts of Hom(p, q) grouped by restriction to the given positions."""
    groups = {}
    for h in _hom_cached(p, q):
        key = tuple(h[i] for i in positions)
        groups[key] = groups.get(key, 0) + 1
    return groups


@lru_cache(maxsize=200_000)
def _post_group_cached(q: Poset, p: Poset, vals):
    """Counts of Hom(q, p) grouped by composition with vals: p-index -> value."""
    groups = {}
    for u in _hom_cached(q, p):
        key = tuple(vals[ui] for ui in u)
        groups[key] = groups.get(key, 0) + 1
    return groups


@lru_cache(maxsize=None)
def _labeled_posets(n: int):
    """All labeled posets on {0..n-1} as tuples of up-set bitmasks.

    Built by adding element n-1 to each smaller poset with a down-closed
    set below it and an up-closed set above it; transitivity demands every
    chosen lower element already sit below every chosen upper one.
    """
    if n == 0:
        return (( ),)
    e = n - 1
    bit_e = 1 << e
    out = []
    base_all = (1 << (n - 1)) - 1
    for up in _labeled_posets(n - 1):
        down_sets = [s for s in range(base_all + 1) if _is_down_closed(up, s)]
        up_sets = [s for s in range(base_all + 1) if _is_up_closed(up, s)]
        for d_set in down_sets:
            for u_set in up_sets:
                if d_set & u_set:
                    continue
                if not _all_below(up, d_set, u_set):
                    continue
                new = list(up)
                new.append(bit_e | u_set)
                m = d_set
                while m:
                    low = m & -m
                    i = low.bit_length() - 1
                    m ^= low
                    new[i] |= bit_e
                out.append(tuple(new))
    return tuple(out)


def _is_down_closed(up, sub):
    m = sub
    while m:
        low = m & -m
        i = low.bit_length() - 1
        m ^= low
        for j in range(len(up)):
            if up[j] >> i & 1 and not sub >> j & 1:
                return False
    return True


def _is_up_closed(up, sub):
    m = sub
    while m:
        low = m & -m
        i = low.bit_length() - 1
        m ^= low
        rest = up[i]
        if rest & ~sub & ~(1 << i):
            return False
    return True


def _all_below(up, d_set, u_set):
    m = d_set
    while m:
        low = m & -m
        i = low.bit_length() - 1
        m ^= low
        if u_set & ~up[i]:
            return False
    return True


def _canonical_upmasks(up):
    n = len(up)
    if n <= 1:
        return up
    down = [0] * n
    for i in range(n):
        m = up[i]
        while m:
            low = m & -m
            j = low.bit_length() - 1
            m ^= low
            down[j] |= 1 << i
    colors = [(up[i].bit_count(), down[i].bit_count()) for i in range(n)]
    for _ in range(n):
        sigs = []
        for i in range(n):
            above = sorted(colors[j] for j in _bits(up[i]) if j != i)
            below = sorted(colors[j] for j in _bits(down[i]) if j != i)
            sigs.append((colors[i], tuple(above), tuple(below)))
        ranks = {s: r for r, s in enumerate(sorted(set(sigs)))}
        new = [ranks[s] for s in sigs]
        if new == colors:
            break
        colors = new
    groups = {}
    for i in range(n):
        groups.setdefault(colors[i], []).append(i)
    ordered_groups = [groups[c] for c in sorted(groups)]
    best = None
    for perm_parts in itertools.product(*(itertools.permutations(g) for g in ordered_groups)):
        perm = [i for part in perm_parts for i in part]
        inv = [0] * n
        for new_pos, old in enumerate(perm):
            inv[old] = new_pos
        rel = []
        for new_i in range(n):
            old_i = perm[new_i]
            mask = 0
            m = up[old_i]
            while m:
                low = m & -m
                j = low.bit_length() - 1
                m ^= low
                mask |= 1 << inv[j]
            rel.append(mask)
        key = tuple(rel)
        if best is None or key < best:
            best = key
    return best


def _bits(mask):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


_POSET_CACHE: dict[int, tuple[Poset, ...]] = {}


def all_posets(n: int, up_to_iso: bool = True):
    """All posets on n elements (carrier 0..n-1), up to isomorphism by default."""
    if not up_to_iso:
        return tuple(_poset_from_upmasks(up) for up in _labeled_posets(n))
    if n not in _POSET_CACHE:
        seen = {}
        for up in _labeled_posets(n):
            seen.setdefault(_canonical_upmasks(up), up)
        reps = [seen[k] for k in sorted(seen)]
        _POSET_CACHE[n] = tuple(_poset_from_upmasks(up) for up in reps)
    return _POSET_CACHE[n]


def _poset_from_upmasks(up):
    n = len(up)
    pairs = {(i, j) for i in range(n) for j in _bits(up[i])}
    return poset(range(n), pairs)


def _warn_if_truncated(requested, ceiling):
    if requested > ceiling:
        warnings.warn(
            BoundTooSmall(
                f"universal-property probe bound {requested} exceeds the configured "
                f"ceiling {ceiling}; checking up to size {ceiling} only"
            )
        )
        return ceiling
    return requested


def verify_pushout(f: MonotoneMap, g: MonotoneMap, cospan: Cospan, *,
                   size_ceiling: int = DEFAULT_SIZE_CEILING) -> bool:
    """Decide (up to the probe bound) whether a commuting square is a pushout.

    For every target poset Q up to the bound and every commuting cocone
    there must be exactly one mediating monotone map out of the apex.
    """
    into_left, into_right = cospan.left, cospan.right
    if f.source != g.source:
        raise ValueError("square legs do not share a source")
    if into_left.source != f.target or into_right.source != g.target:
        raise ValueError("cospan does not sit on the span's targets")
    if into_left.target != into_right.target:
        raise ValueError("cospan legs do not share their apex")
    for x0 in f.source.elements:
        if into_left(f(x0)) != into_right(g(x0)):
            return False

    apex = into_left.target
    bound = _warn_if_truncated(len(apex) + 1, size_ceiling)

    src0 = _indexed(f.source)
    src1 = _indexed(f.target)
    src2 = _indexed(g.target)
    f_positions = tuple(src1.pos[f(e)] for e in src0.elems)
    g_positions = tuple(src2.pos[g(e)] for e in src0.elems)
    covered = into_left.image() | into_right.image() == apex.elements
    apex_key = _canon_or_raw(_upmasks(apex)) if covered else None

    for n in range(bound + 1):
        for q in all_posets(n):
            groups1 = _pre_group_cached(f.target, q, f_positions)
            groups2 = _pre_group_cached(g.target, q, g_positions)
            cocones = 0
            for key, c1 in groups1.items():
                c2 = groups2.get(key)
                if c2:
                    cocones += c1 * c2
            if covered:
                if _count_hom_masks(apex_key, _upmasks(q)) != cocones:
                    return False
            else:
                apx = _indexed(apex)
                left_positions = [apx.pos[into_left(e)] for e in src1.elems]
                right_positions = [apx.pos[into_right(e)] for e in src2.elems]
                seen = set()
                for h in _hom_tuples(apx, _indexed(q)):
                    pair = (
                        tuple(h[i] for i in left_positions),
                        tuple(h[i] for i in right_positions),
                    )
                    if pair in seen:
                        return False
                    seen.add(pair)
                if len(seen) != cocones:
                    return False
    return True


def verify_pullback(g: MonotoneMap, f: MonotoneMap, span: Span, *,
                    size_ceiling: int = DEFAULT_SIZE_CEILING) -> bool:
    """Dual oracle: probe posets map INTO the candidate apex.

    For every probe Q up to the bound and every commuting cone there must
    be exactly one mediating monotone map into the apex.
    """
    proj_left, proj_right = span.left, span.right
    if g.target != f.target:
        raise ValueError("square legs do not share a target")
    if proj_left.source != proj_right.source:
        raise ValueError("span legs do not share their apex")
    if proj_left.target != g.source or proj_right.target != f.source:
        raise ValueError("span does not sit on the cospan's sources")
    apex = proj_left.source
    for z in apex.elements:
        if g(proj_left(z)) != f(proj_right(z)):
            return False

    bound = _warn_if_truncated(len(apex) + 1, size_ceiling)
    p0 = _indexed(g.target)
    p1 = _indexed(g.source)
    p2 = _indexed(f.source)
    g_vals = tuple(p0.pos[g(e)] for e in p1.elems)
    f_vals = tuple(p0.pos[f(e)] for e in p2.elems)
    jointly_injective = len({(proj_left(z), proj_right(z)) for z in apex.elements}) == len(apex)
    apex_key = _canon_or_raw(_upmasks(apex)) if jointly_injective else None

    for n in range(bound + 1):
        for q in all_posets(n):
            groups1 = _post_group_cached(q, g.source, g_vals)
            groups2 = _post_group_cached(q, f.source, f_vals)
            cones = 0
            for key, c1 in groups1.items():
                c2 = groups2.get(key)
                if c2:
                    cones += c1 * c2
            if jointly_injective:
                if _count_hom_masks(_upmasks(q), apex_key) != cones:
                    return False
            else:
                apx = _indexed(apex)
                qi = _indexed(q)
                left_vals = [p1.pos[proj_left(e)] for e in apx.elems]
                right_vals = [p2.pos[proj_right(e)] for e in apx.elems]
                seen = set()
                for h in _hom_tuples(qi, apx):
                    pair = (
                        tuple(left_vals[h[i]] for i in range(qi.n)),
                        tuple(right_vals[h[i]] for i in range(qi.n)),
                    )
                    if pair in seen:
                        return False
                    seen.add(pair)
                if len(seen) != cones:
                    return False
    return True


def check_adjunction(elements, p: Poset) -> bool:
    """Hom-set bijection between plain maps into the carrier and monotone
    maps out of the discretely ordered set."""
    s = frozenset(elements)
    functions = len(p) ** len(s)
    return count_monotone_maps(discrete(s), p) == functions


@dataclass(frozen=True)
class Cube:
    """A commutative cube of posets.

    Bottom square: m: A -> B (the admissible leg), f: A -> C, g: B -> D,
    n: C -> D.  Top square carries the same roles between primed objects;
    va..vd are the vertical maps top -> bottom.
    """

    bottom_m: MonotoneMap
    bottom_f: MonotoneMap
    bottom_g: MonotoneMap
    bottom_n: MonotoneMap
    top_m: MonotoneMap
    top_f: MonotoneMap
    top_g: MonotoneMap
    top_n: MonotoneMap
    va: MonotoneMap
    vb: MonotoneMap
    vc: MonotoneMap
    vd: MonotoneMap


@dataclass(frozen=True)
class VkReport:
    """Outcome of a van-Kampen-style cube check."""

    top_is_pushout: bool
    fronts_are_pullbacks: bool

    @property
    def holds(self) -> bool:
        return self.top_is_pushout == self.fronts_are_pullbacks

    def __bool__(self) -> bool:
        return self.holds


def _squares_equal(a: MonotoneMap, b: MonotoneMap) -> bool:
    return a.source == b.source and a.target == b.target and a.mapping == b.mapping


def check_vk_square(cube: Cube, *, size_ceiling: int = DEFAULT_SIZE_CEILING) -> VkReport:
    """Check the pushout/pullback exchange property on a commutative cube.

    Preconditions (raising InvalidCube when broken): all six faces commute,
    the bottom is a pushout along a strict order embedding, and the two
    back faces are pullbacks.  The report states whether the top face is a
    pushout and whether both front faces are pullbacks; the property holds
    when the two answers agree.
    """
    c = cube
    checks = [
        ("bottom", compose(c.bottom_g, c.bottom_m), compose(c.bottom_n, c.bottom_f)),
        ("top", compose(c.top_g, c.top_m), compose(c.top_n, c.top_f)),
        ("back-left", compose(c.bottom_m, c.va), compose(c.vb, c.top_m)),
        ("back-right", compose(c.bottom_f, c.va), compose(c.vc, c.top_f)),
        ("front-right", compose(c.bottom_g, c.vb), compose(c.vd, c.top_g)),
        ("front-left", compose(c.bottom_n, c.vc), compose(c.vd, c.top_n)),
    ]
    for name, lhs, rhs in checks:
        if not _squares_equal(lhs, rhs):
            raise InvalidCube(f"cube face {name} does not commute")
    if not is_strict_order_embedding(c.bottom_m):
        raise InvalidCube("bottom leg m is not a strict order embedding")
    if not verify_pushout(c.bottom_m, c.bottom_f, Cospan(c.bottom_g, c.bottom_n),
                          size_ceiling=size_ceiling):
        raise InvalidCube("bottom face is not a pushout")
    if not verify_pullback(c.vb, c.bottom_m, Span(c.top_m, c.va), size_ceiling=size_ceiling):
        raise InvalidCube("back-left face is not a pullback")
    if not verify_pullback(c.vc, c.bottom_f, Span(c.top_f, c.va), size_ceiling=size_ceiling):
        raise InvalidCube("back-right face is not a pullback")

    top_po = verify_pushout(c.top_m, c.top_f, Cospan(c.top_g, c.top_n),
                            size_ceiling=size_ceiling)
    front_right = verify_pullback(c.vd, c.bottom_g, Span(c.top_g, c.vb),
                                  size_ceiling=size_ceiling)
    front_left = verify_pullback(c.vd, c.bottom_n, Span(c.top_n, c.vc),
                                 size_ceiling=size_ceiling)
    return VkReport(top_is_pushout=top_po, fronts_are_pullbacks=front_right and front_left)

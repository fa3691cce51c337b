"""Law-verification suites over the poset category.

Each suite runs a family of instances (exhaustive over small sizes, seeded
random above that) against the universal-property oracles and reports one
result line per law.  The CLI `check` command and the acceptance tests are
the two consumers.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from ._util import sorted_elems
from .oracles import (
    Cube,
    all_posets,
    check_adjunction,
    check_vk_square,
    count_monotone_maps,
    monotone_maps,
    verify_pullback,
    verify_pushout,
)
from .posets import (
    Cospan,
    MonotoneMap,
    Poset,
    Span,
    compose,
    discrete,
    identity_map,
    is_order_embedding,
    is_strict_order_embedding,
    poset,
    pullback,
    pushout,
    pushout_raw_relation,
    set_pushout,
)


@dataclass(frozen=True)
class LawResult:
    name: str
    ok: bool
    detail: str

    def line(self) -> str:
        return f"{'PASS' if self.ok else 'FAIL'} {self.name} ({self.detail})"


def random_poset(rng: random.Random, max_size: int, min_size: int = 0) -> Poset:
    n = rng.randint(min_size, max_size)
    perm = list(range(n))
    rng.shuffle(perm)
    density = rng.choice([0.0, 0.2, 0.4, 0.6])
    pairs = set()
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < density:
                pairs.add((perm[i], perm[j]))
    return Poset.from_cover(range(n), pairs)


def random_monotone_map(rng: random.Random, src: Poset, dst: Poset) -> MonotoneMap | None:
    if len(src) == 0:
        return MonotoneMap(src, dst, {})
    if len(dst) == 0:
        return None
    choices = monotone_maps(src, dst)
    return rng.choice(choices)


def random_span(rng: random.Random, max_size: int):
    while True:
        p0 = random_poset(rng, max_size)
        p1 = random_poset(rng, max_size)
        p2 = random_poset(rng, max_size)
        f = random_monotone_map(rng, p0, p1)
        g = random_monotone_map(rng, p0, p2)
        if f is not None and g is not None:
            return f, g


def interval_closed_subsets(p: Poset):
    elems = sorted_elems(p.elements)
    out = []
    for mask in range(1 << len(elems)):
        sub = frozenset(elems[i] for i in range(len(elems)) if mask >> i & 1)
        ok = True
        for x in sub:
            for y in sub:
                if not p.le(x, y):
                    continue
                for z in p.elements:
                    if z not in sub and p.le(x, z) and p.le(z, y):
                        ok = False
                        break
                if not ok:
                    break
            if not ok:
                break
        if ok:
            out.append(sub)
    return out


def random_m_inclusion(rng: random.Random, target: Poset) -> MonotoneMap:
    """An inclusion of a random interval-closed induced subposet: always
    a strict order embedding."""
    sub = rng.choice(interval_closed_subsets(target))
    src = target.restrict(sub)
    return MonotoneMap(src, target, {x: x for x in sub})


def random_m_span(rng: random.Random, max_size: int):
    while True:
        p1 = random_poset(rng, max_size)
        f = random_m_inclusion(rng, p1)
        p2 = random_poset(rng, max_size)
        g = random_monotone_map(rng, f.source, p2)
        if g is not None:
            return f, g


def iter_exhaustive_spans(max_size: int):
    objs = [p for n in range(max_size + 1) for p in all_posets(n)]
    for p0 in objs:
        lefts = [(p1, monotone_maps(p0, p1)) for p1 in objs]
        for p1, homs1 in lefts:
            if not homs1:
                continue
            for p2, homs2 in lefts:
                for f in homs1:
                    for g in homs2:
                        yield f, g


def _check_pushout_instance(f, g, *, size_ceiling):
    """Run one span through the construction and every law tied to it."""
    failures = []
    cospan = pushout(f, g)
    if not verify_pushout(f, g, cospan, size_ceiling=size_ceiling):
        failures.append("universal property")
    if is_strict_order_embedding(f):
        if not is_strict_order_embedding(cospan.right):
            failures.append("admissible-class stability")
        set_classes, _, _ = set_pushout(f, g)
        if cospan.apex.elements != set_classes:
            failures.append("carrier differs from set-level pushout")
    return failures


def _check_pullback_instance(g, f, *, size_ceiling):
    failures = []
    span = pullback(g, f)
    if not verify_pullback(g, f, span, size_ceiling=size_ceiling):
        failures.append("universal property")
    if is_strict_order_embedding(f) and not is_strict_order_embedding(span.left):
        failures.append("admissible-class stability")
    return failures


def pushout_law_suite(max_size: int = 3, samples: int = 1000, seed: int = 0, *,
                      size_ceiling: int = 4, random_carrier: int = 5) -> list[LawResult]:
    results = []

    bad = 0
    total = 0
    m_cases = 0
    for f, g in iter_exhaustive_spans(max_size):
        total += 1
        fails = _check_pushout_instance(f, g, size_ceiling=size_ceiling)
        if is_strict_order_embedding(f):
            m_cases += 1
        if fails:
            bad += 1
    results.append(LawResult(
        "pushout-universal-exhaustive", bad == 0,
        f"{total} spans with carriers <= {max_size}, {m_cases} along admissible legs, {bad} failures"))

    rng = random.Random(seed)
    bad = 0
    for _ in range(samples):
        f, g = random_span(rng, random_carrier)
        if _check_pushout_instance(f, g, size_ceiling=size_ceiling):
            bad += 1
    results.append(LawResult(
        "pushout-universal-random", bad == 0,
        f"{samples} random spans with carriers <= {random_carrier}, {bad} failures"))

    bad = 0
    m_samples = max(1, samples // 4)
    for _ in range(m_samples):
        f, g = random_m_span(rng, random_carrier)
        fails = _check_pushout_instance(f, g, size_ceiling=size_ceiling)
        if fails:
            bad += 1
    results.append(LawResult(
        "pushout-admissible-stability", bad == 0,
        f"{m_samples} random spans with an admissible left leg, {bad} failures"))

    results.append(_footnote_law())
    return results


def _footnote_law() -> LawResult:
    """The two-point/three-point instance showing the raw image relation is
    not yet a partial order: quotienting is genuinely required."""
    p0 = poset({0, 5}, {(0, 0), (5, 5), (0, 5)})
    p1 = poset({0, 3, 5}, {(0, 0), (3, 3), (5, 5), (0, 3), (3, 5), (0, 5)})
    p2 = poset({"dot"}, {("dot", "dot")})
    f = MonotoneMap(p0, p1, {0: 0, 5: 5})
    g = MonotoneMap(p0, p2, {0: "dot", 5: "dot"})
    classes, raw = pushout_raw_relation(f, g)
    sym_across = [
        (a, b) for (a, b) in raw if a != b and (b, a) in raw
    ]
    cospan = pushout(f, g)
    ok = (
        is_order_embedding(f)
        and not is_strict_order_embedding(f)
        and len(classes) == 2
        and len(sym_across) == 2
        and len(cospan.apex) == 1
        and verify_pushout(f, g, cospan)
    )
    return LawResult(
        "pushout-quotient-necessity", ok,
        f"raw relation has {len(sym_across)} symmetric cross-pairs over {len(classes)} classes; "
        f"final apex size {len(cospan.apex)}")


def pullback_law_suite(max_size: int = 3, samples: int = 1000, seed: int = 0, *,
                       size_ceiling: int = 4, random_carrier: int = 5) -> list[LawResult]:
    results = []
    bad = 0
    total = 0
    objs = [p for n in range(max_size + 1) for p in all_posets(n)]
    for p0 in objs:
        for p1 in objs:
            homs1 = monotone_maps(p1, p0)
            if not homs1 and len(p1) > 0:
                continue
            for p2 in objs:
                for g in homs1:
                    for f in monotone_maps(p2, p0):
                        total += 1
                        if _check_pullback_instance(g, f, size_ceiling=size_ceiling):
                            bad += 1
    results.append(LawResult(
        "pullback-universal-exhaustive", bad == 0,
        f"{total} cospans with carriers <= {max_size}, {bad} failures"))

    rng = random.Random(seed)
    bad = 0
    for _ in range(samples):
        p0 = random_poset(rng, random_carrier)
        g = None
        f = None
        while g is None or f is None:
            p0 = random_poset(rng, random_carrier)
            g = random_monotone_map(rng, random_poset(rng, random_carrier), p0)
            f = random_monotone_map(rng, random_poset(rng, random_carrier), p0)
        if _check_pullback_instance(g, f, size_ceiling=size_ceiling):
            bad += 1
    results.append(LawResult(
        "pullback-universal-random", bad == 0,
        f"{samples} random cospans with carriers <= {random_carrier}, {bad} failures"))

    bad = 0
    m_samples = max(1, samples // 4)
    for _ in range(m_samples):
        p0 = random_poset(rng, random_carrier, min_size=1)
        f = random_m_inclusion(rng, p0)
        g = None
        while g is None:
            g = random_monotone_map(rng, random_poset(rng, random_carrier), p0)
        if _check_pullback_instance(g, f, size_ceiling=size_ceiling):
            bad += 1
    results.append(LawResult(
        "pullback-admissible-stability", bad == 0,
        f"{m_samples} random cospans with an admissible leg, {bad} failures"))
    return results


def embedding_class_suite(max_size: int = 3, samples: int = 200, seed: int = 0) -> list[LawResult]:
    results = []

    objs = [p for n in range(max_size + 1) for p in all_posets(n)]
    bad = 0
    checked = 0
    for p in objs:
        if not is_strict_order_embedding(identity_map(p)):
            bad += 1
    for p in objs:
        for q in objs:
            for h in monotone_maps(p, q):
                checked += 1
                strict = is_strict_order_embedding(h)
                embed = is_order_embedding(h)
                inj = h.is_injective()
                if strict and not embed:
                    bad += 1
                elif embed and not inj:
                    bad += 1
    results.append(LawResult(
        "embedding-implication-chain", bad == 0,
        f"{checked} maps between posets of size <= {max_size}: "
        f"strict => embedding => injective, {bad} failures"))

    rng = random.Random(seed)
    bad = 0
    for _ in range(samples):
        outer = random_poset(rng, 5)
        mid_incl = random_m_inclusion(rng, outer)
        inner_incl = random_m_inclusion(rng, mid_incl.source)
        if not is_strict_order_embedding(compose(mid_incl, inner_incl)):
            bad += 1
    results.append(LawResult(
        "embedding-class-composition", bad == 0,
        f"identities on {len(objs)} small posets plus {samples} random compositions, {bad} failures"))
    return results


def adjunction_suite(max_size: int = 3) -> list[LawResult]:
    bad = 0
    total = 0
    for k in range(max_size + 1):
        s = frozenset(range(k))
        for n in range(max_size + 1):
            for p in all_posets(n):
                total += 1
                free = discrete(s)
                hom_from_free = count_monotone_maps(free, p)
                plain = len(p) ** len(s)
                if hom_from_free != plain or not check_adjunction(s, p):
                    bad += 1
    return [LawResult(
        "free-forgetful-hom-bijection", bad == 0,
        f"{total} set/poset pairs with sizes <= {max_size}, {bad} failures")]


def random_vk_cube(rng: random.Random, *, max_base: int = 3, max_probe: int = 3) -> Cube:
    """A cube built by pulling a pushout along a map into its apex.

    Bottom: pushout of a span whose left leg is a strict order embedding.
    All four side faces are pullbacks by construction, so a sound kernel
    must report the top face as a pushout.
    """
    while True:
        b = random_poset(rng, max_base)
        m = random_m_inclusion(rng, b)
        a = m.source
        c = random_poset(rng, max_base)
        f = random_monotone_map(rng, a, c)
        if f is None:
            continue
        bottom = pushout(m, f)
        bottom_g, bottom_n = bottom.left, bottom.right
        d = bottom.apex
        d_top = random_poset(rng, max_probe)
        vd = random_monotone_map(rng, d_top, d)
        if vd is None:
            continue
        composite = compose(bottom_g, m)

        b_pb = pullback(bottom_g, vd)
        c_pb = pullback(bottom_n, vd)
        a_pb = pullback(composite, vd)
        a_top = a_pb.left.source
        top_m = MonotoneMap(a_top, b_pb.left.source,
                            {(x, y): (m(x), y) for (x, y) in a_top.elements})
        top_f = MonotoneMap(a_top, c_pb.left.source,
                            {(x, y): (f(x), y) for (x, y) in a_top.elements})
        return Cube(
            bottom_m=m, bottom_f=f, bottom_g=bottom_g, bottom_n=bottom_n,
            top_m=top_m, top_f=top_f, top_g=b_pb.right, top_n=c_pb.right,
            va=a_pb.left, vb=b_pb.left, vc=c_pb.left, vd=vd,
        )


def vk_suite(samples: int = 200, seed: int = 0, *, max_base: int = 3,
             size_ceiling: int = 4) -> list[LawResult]:
    rng = random.Random(seed)
    results = []
    bad = 0
    for _ in range(samples):
        cube = random_vk_cube(rng, max_base=max_base)
        report = check_vk_square(cube, size_ceiling=size_ceiling)
        if not (report.top_is_pushout and report.fronts_are_pullbacks):
            bad += 1
    results.append(LawResult(
        "vk-exchange-both-directions", bad == 0,
        f"{samples} cubes pulled back from admissible pushouts, {bad} failures"))

    detect_samples = max(1, samples // 20)
    bad = 0
    for _ in range(detect_samples):
        cube = random_vk_cube(rng, max_base=max_base)
        while len(cube.vd.target) == 0:
            cube = random_vk_cube(rng, max_base=max_base)
        tampered = _enlarge_top_apex(cube)
        report = check_vk_square(tampered, size_ceiling=size_ceiling)
        if report.top_is_pushout:
            bad += 1
    results.append(LawResult(
        "vk-detects-broken-top", bad == 0,
        f"{detect_samples} cubes with an extra isolated point in the top apex, {bad} undetected"))
    return results


def _enlarge_top_apex(cube: Cube) -> Cube:
    d_top = cube.vd.source
    extra = "extra-point"
    while extra in d_top.elements:
        extra += "'"
    bigger = poset(
        set(d_top.elements) | {extra},
        set(d_top.leq) | {(extra, extra)},
    )
    target_elem = sorted_elems(cube.vd.target.elements)[0]
    vd = MonotoneMap(bigger, cube.vd.target, {**cube.vd.mapping, extra: target_elem})
    top_g = MonotoneMap(cube.top_g.source, bigger, dict(cube.top_g.mapping))
    top_n = MonotoneMap(cube.top_n.source, bigger, dict(cube.top_n.mapping))
    return Cube(
        bottom_m=cube.bottom_m, bottom_f=cube.bottom_f,
        bottom_g=cube.bottom_g, bottom_n=cube.bottom_n,
        top_m=cube.top_m, top_f=cube.top_f, top_g=top_g, top_n=top_n,
        va=cube.va, vb=cube.vb, vc=cube.vc, vd=vd,
    )


def poset_law_suite(max_size: int = 3, samples: int = 1000, seed: int = 0, *,
                    size_ceiling: int = 4, random_carrier: int = 5) -> list[LawResult]:
    """The whole bundle of order-category laws, one result per law."""
    results = []
    results += pushout_law_suite(max_size, samples, seed,
                                 size_ceiling=size_ceiling, random_carrier=random_carrier)
    results += pullback_law_suite(max_size, samples, seed,
                                  size_ceiling=size_ceiling, random_carrier=random_carrier)
    results += embedding_class_suite(max_size, max(1, samples // 5), seed)
    return results

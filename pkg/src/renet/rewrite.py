"""Rule-based net transformation.

A rule is a span of strict morphisms from an interface net into a left
(deleted + context) and a right (added + context) side.  Application at a
match works in two gluing squares: first the complement removes the
matched deleted part, then the result glues the right side back in.  Both
squares are re-verified after construction and failures are reported, not
silently accepted: the applicability condition is a sufficient one and
the verification is what makes it trustworthy.
"""

from __future__ import annotations

from dataclasses import dataclass

from ._util import sort_key, sorted_elems
from .canonical import isomorphic
from .errors import ComplementNotPushout, GluingViolated
from .morphisms import NetMorphism, check_morphism, is_strict, transition_monotone
from .nets import DecoratedNet, Multiset, validate_net
from .posets import MonotoneMap, Poset, is_strict_order_embedding
from .posets import pushout as poset_pushout


@dataclass(frozen=True)
class Rule:
    """A span of two strict net morphisms out of the interface net."""

    name: str
    left: DecoratedNet
    interface: DecoratedNet
    right: DecoratedNet
    to_left: NetMorphism
    to_right: NetMorphism


def make_rule(name: str, to_left: NetMorphism, to_right: NetMorphism) -> Rule:
    """Checked rule constructor: both legs must be strict and share the
    interface as their source."""
    if to_left.source != to_right.source:
        raise ValueError("rule legs do not share their interface net")
    if not is_strict(to_left):
        raise ValueError("left rule leg is not a strict morphism")
    if not is_strict(to_right):
        raise ValueError("right rule leg is not a strict morphism")
    return Rule(name, to_left.target, to_left.source, to_right.target, to_left, to_right)


def inverse_rule(rule: Rule, name: str | None = None) -> Rule:
    """The span reversed: left and right side swap, the interface stays."""
    return Rule(name or f"{rule.name}-inverse", rule.right, rule.interface,
                rule.left, rule.to_right, rule.to_left)


MATCH_POLICIES = ("injective", "all")


def find_matches(rule: Rule, net: DecoratedNet, policy: str = "injective"):
    """All valid morphisms from the rule's left side into the net.

    Backtracking over transitions first (names, labels, renew functions
    and arc shapes prune hard), then places; every complete assignment is
    confirmed by the full morphism check.  The result list is sorted
    canonically, so match indices are stable across runs.
    """
    if policy not in MATCH_POLICIES:
        raise ValueError(f"unknown match policy {policy!r}")
    left = rule.left
    ts = sorted_elems(left.transition_ids)
    ps = sorted_elems(left.places)

    def transition_candidates(t):
        out = []
        for c in sorted_elems(net.transition_ids):
            if left.tname[t] != net.tname[c] or left.tlb[t] != net.tlb[c]:
                continue
            if left.rnw[t] != net.rnw[c]:
                continue
            if left.pre[t].total() != net.pre[c].total():
                continue
            if left.post[t].total() != net.post[c].total():
                continue
            if policy == "injective":
                if sorted(k for _, k in left.pre[t].items()) != sorted(k for _, k in net.pre[c].items()):
                    continue
                if sorted(k for _, k in left.post[t].items()) != sorted(k for _, k in net.post[c].items()):
                    continue
                if len(left.inh[t]) != len(net.inh[c]):
                    continue
            elif len(net.inh[c]) > len(left.inh[t]):
                continue
            out.append(c)
        return out

    t_domains = {t: transition_candidates(t) for t in ts}
    p_domains = {
        p: [
            c for c in sorted_elems(net.places)
            if left.pname[p] == net.pname[c]
            and left.cap[p] == net.cap[c]
            and left.marking[p] <= net.marking[c]
        ]
        for p in ps
    }
    results = []

    def assign_places(t_assign):
        domains = {}
        for p in ps:
            dom = p_domains[p]
            for t in ts:
                c = t_assign[t]
                if left.pre[t][p]:
                    dom = [x for x in dom if net.pre[c][x]]
                if left.post[t][p]:
                    dom = [x for x in dom if net.post[c][x]]
                if p in left.inh[t]:
                    dom = [x for x in dom if x in net.inh[c]]
            domains[p] = dom

        def rec(j, p_assign, used):
            if j == len(ps):
                candidate = NetMorphism(left, net, dict(p_assign), dict(t_assign))
                if not check_morphism(candidate):
                    results.append(candidate)
                return
            p = ps[j]
            for x in domains[p]:
                if policy == "injective" and x in used:
                    continue
                p_assign[p] = x
                used.add(x)
                rec(j + 1, p_assign, used)
                del p_assign[p]
                used.discard(x)

        rec(0, {}, set())

    def assign_transitions(i, t_assign, used):
        if i == len(ts):
            assign_places(t_assign)
            return
        t = ts[i]
        for c in t_domains[t]:
            if policy == "injective" and c in used:
                continue
            consistent = True
            for t2, c2 in t_assign.items():
                if left.transitions.le(t, t2) and not net.transitions.le(c, c2):
                    consistent = False
                    break
                if left.transitions.le(t2, t) and not net.transitions.le(c2, c):
                    consistent = False
                    break
            if not consistent:
                continue
            t_assign[t] = c
            used.add(c)
            assign_transitions(i + 1, t_assign, used)
            del t_assign[t]
            used.discard(c)

    assign_transitions(0, {}, set())
    results.sort(key=lambda m: sort_key((
        tuple(sorted(m.transition_map.items(), key=sort_key)),
        tuple(sorted(m.place_map.items(), key=sort_key)),
    )))
    return results


@dataclass(frozen=True)
class GluingReport:
    """Why a rule is not applicable at a match; empty means applicable.

    identification: deleted elements identified with other matched ones.
    dangling: arcs at a deleted place's image from outside the match.
    tokens: deleted places whose image holds a different marking.
    priority: order pairs breaking the strict embedding of the interface
    into the complement's priority order.
    """

    identification: tuple = ()
    dangling: tuple = ()
    tokens: tuple = ()
    priority: tuple = ()

    @property
    def ok(self) -> bool:
        return not (self.identification or self.dangling or self.tokens or self.priority)

    def describe(self) -> str:
        if self.ok:
            return "ok"
        parts = []
        for label, entries in (
            ("identification", self.identification),
            ("dangling", self.dangling),
            ("tokens", self.tokens),
            ("priority", self.priority),
        ):
            if entries:
                parts.append(f"{label}: " + "; ".join(str(e) for e in entries))
        return " | ".join(parts)


def _deleted(rule: Rule):
    kept_places = {rule.to_left.place(p) for p in rule.interface.places}
    kept_transitions = {rule.to_left.transition(t) for t in rule.interface.transition_ids}
    return (
        frozenset(rule.left.places - kept_places),
        frozenset(rule.left.transition_ids - kept_transitions),
    )


def check_gluing(rule: Rule, match: NetMorphism) -> GluingReport:
    """Applicability of the rule at the match.

    Empty report exactly when the complement construction yields a
    well-formed net and its square can be a gluing square: no deleted
    element is identified with anything else, deleted places have no arcs
    from outside the match image, their marking is matched exactly, and
    the remaining priority order embeds the interface strictly.
    """
    if match.source != rule.left:
        raise ValueError("match does not start at the rule's left side")
    net = match.target
    del_places, del_transitions = _deleted(rule)

    identification = []
    for x in sorted_elems(del_places):
        for y in sorted_elems(rule.left.places):
            if x != y and match.place(x) == match.place(y):
                identification.append(("place", x, y))
    for x in sorted_elems(del_transitions):
        for y in sorted_elems(rule.left.transition_ids):
            if x != y and match.transition(x) == match.transition(y):
                identification.append(("transition", x, y))

    matched_transitions = {match.transition(t) for t in rule.left.transition_ids}
    dangling = []
    for p in sorted_elems(del_places):
        image = match.place(p)
        for t in sorted_elems(net.transition_ids):
            if t in matched_transitions:
                continue
            if net.pre[t][image] or net.post[t][image] or image in net.inh[t]:
                dangling.append((p, t))

    tokens = []
    for p in sorted_elems(del_places):
        if net.marking[match.place(p)] != rule.left.marking[p]:
            tokens.append((p, rule.left.marking[p], net.marking[match.place(p)]))

    priority = []
    keep_transitions = net.transition_ids - {match.transition(t) for t in del_transitions}
    order_d = net.transitions.restrict(keep_transitions)
    k_map = {
        t: match.transition(rule.to_left.transition(t))
        for t in rule.interface.transition_ids
    }
    if all(v in keep_transitions for v in k_map.values()):
        try:
            mono = MonotoneMap(rule.interface.transitions, order_d, k_map)
        except ValueError:
            mono = None
            priority.append(("interface order not preserved in complement",))
        if mono is not None and not is_strict_order_embedding(mono):
            priority.append(("interface does not embed strictly into the complement order",))
    else:
        priority.append(("interface transition mapped onto a deleted transition",))

    return GluingReport(tuple(identification), tuple(dangling), tuple(tokens), tuple(priority))


def _is_set_pushout(src_elems, to_left, to_right, left_elems, right_elems,
                    left_leg, right_leg, apex_elems) -> bool:
    """Exact set-level pushout check via the canonical mediator."""
    parent = {}
    for x in left_elems:
        parent[("L", x)] = ("L", x)
    for x in right_elems:
        parent[("R", x)] = ("R", x)

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for x in src_elems:
        ra, rb = find(("L", to_left[x])), find(("R", to_right[x]))
        if ra != rb:
            parent[ra] = rb

    value = {}
    for x in left_elems:
        root = find(("L", x))
        if value.setdefault(root, left_leg[x]) != left_leg[x]:
            return False
    for x in right_elems:
        root = find(("R", x))
        if value.setdefault(root, right_leg[x]) != right_leg[x]:
            return False
    values = list(value.values())
    return len(values) == len(set(values)) and set(values) == set(apex_elems)


def _is_poset_pushout(span_left: MonotoneMap, span_right: MonotoneMap,
                      into_left, into_right, apex: Poset) -> bool:
    """Compare a candidate square against the reference pushout via the
    forced mediator: it must exist and be an order isomorphism."""
    cospan = poset_pushout(span_left, span_right)
    mediator = {}
    for token in cospan.apex.elements:
        values = set()
        for tag, x in token:
            values.add(into_left[x] if tag == "L" else into_right[x])
        if len(values) != 1:
            return False
        mediator[token] = values.pop()
    if len(set(mediator.values())) != len(mediator):
        return False
    if set(mediator.values()) != set(apex.elements):
        return False
    for a in cospan.apex.elements:
        for b in cospan.apex.elements:
            if cospan.apex.le(a, b) != apex.le(mediator[a], mediator[b]):
                return False
    return True


def pushout_complement(rule: Rule, match: NetMorphism):
    """Remove the matched deleted part; returns (complement D, k: K -> D,
    d: D -> N).  The resulting square is verified componentwise and a
    failure raises ComplementNotPushout rather than being accepted."""
    report = check_gluing(rule, match)
    if not report.ok:
        raise GluingViolated(report)
    net = match.target
    del_places, del_transitions = _deleted(rule)
    removed_places = {match.place(p) for p in del_places}
    removed_transitions = {match.transition(t) for t in del_transitions}

    keep_places = net.places - removed_places
    keep_transitions = net.transition_ids - removed_transitions
    complement = DecoratedNet(
        places=frozenset(keep_places),
        transitions=net.transitions.restrict(keep_transitions),
        pre={t: net.pre[t] for t in keep_transitions},
        post={t: net.post[t] for t in keep_transitions},
        marking=net.marking.restrict(keep_places),
        cap={p: net.cap[p] for p in keep_places},
        pname={p: net.pname[p] for p in keep_places},
        tname={t: net.tname[t] for t in keep_transitions},
        tlb={t: net.tlb[t] for t in keep_transitions},
        rnw={t: net.rnw[t] for t in keep_transitions},
        inh={t: net.inh[t] for t in keep_transitions},
    )
    problems = validate_net(complement)
    if problems:
        raise ComplementNotPushout("complement is not a well-formed net: " + "; ".join(problems))

    k = NetMorphism(
        rule.interface, complement,
        {p: match.place(rule.to_left.place(p)) for p in rule.interface.places},
        {t: match.transition(rule.to_left.transition(t)) for t in rule.interface.transition_ids},
    )
    d = NetMorphism(
        complement, net,
        {p: p for p in complement.places},
        {t: t for t in complement.transition_ids},
    )
    _verify_square(rule.to_left, k, match, d, "(1)")
    return complement, k, d


def _verify_square(rule_leg: NetMorphism, k: NetMorphism, outer: NetMorphism,
                   inner: NetMorphism, square: str):
    """Componentwise pushout verification plus morphism-class checks for
    one gluing square: rule_leg: K -> X, k: K -> Y, outer: X -> Z,
    inner: Y -> Z."""
    for p in rule_leg.source.places:
        if outer.place(rule_leg.place(p)) != inner.place(k.place(p)):
            raise ComplementNotPushout(f"square {square} does not commute at place {p!r}")
    for t in rule_leg.source.transition_ids:
        if outer.transition(rule_leg.transition(t)) != inner.transition(k.transition(t)):
            raise ComplementNotPushout(f"square {square} does not commute at transition {t!r}")
    for name, morphism in (("interface-to-complement", k), ("complement-inclusion", inner)):
        problems = check_morphism(morphism)
        if problems:
            raise ComplementNotPushout(
                f"square {square}: {name} morphism invalid: " + "; ".join(problems))
    if not is_strict(inner):
        raise ComplementNotPushout(f"square {square}: inner leg is not strict")
    if not _is_set_pushout(
        sorted_elems(rule_leg.source.places),
        rule_leg.place_map, k.place_map,
        sorted_elems(rule_leg.target.places), sorted_elems(k.target.places),
        outer.place_map, inner.place_map,
        outer.target.places,
    ):
        raise ComplementNotPushout(f"square {square}: place component is not a pushout")
    if not _is_poset_pushout(
        transition_monotone(rule_leg), transition_monotone(k),
        outer.transition_map, inner.transition_map,
        outer.target.transitions,
    ):
        raise ComplementNotPushout(f"square {square}: priority component is not a pushout")


@dataclass(frozen=True)
class RewriteResult:
    """A direct transformation together with its two gluing squares."""

    rule: Rule
    match: NetMorphism
    complement: DecoratedNet
    net: DecoratedNet
    interface_to_complement: NetMorphism
    complement_to_source: NetMorphism
    comatch: NetMorphism
    complement_to_result: NetMorphism


def _fresh_id(base: str, taken) -> str:
    if base not in taken:
        return base
    i = 2
    while f"{base}~{i}" in taken:
        i += 1
    return f"{base}~{i}"


def apply_rule(rule: Rule, match: NetMorphism, *, verify: bool = False) -> RewriteResult:
    """One direct transformation step at the given match.

    Elements added from the right side keep its names; their identifiers
    are generated deterministically from the rule name.  With verify=True
    the transition-poset components of both squares additionally run
    through the bounded universal-property oracle.
    """
    complement, k, d = pushout_complement(rule, match)
    right = rule.right
    preserved_r_places = {rule.to_right.place(p): p for p in rule.interface.places}
    preserved_r_transitions = {rule.to_right.transition(t): t for t in rule.interface.transition_ids}

    place_map = {}
    taken_places = set(complement.places)
    for rp in sorted_elems(right.places):
        if rp in preserved_r_places:
            place_map[rp] = k.place(preserved_r_places[rp])
        else:
            fresh = _fresh_id(f"{rule.name}:{rp}", taken_places)
            taken_places.add(fresh)
            place_map[rp] = fresh
    transition_map = {}
    taken_transitions = set(complement.transition_ids)
    for rt in sorted_elems(right.transition_ids):
        if rt in preserved_r_transitions:
            transition_map[rt] = k.transition(preserved_r_transitions[rt])
        else:
            fresh = _fresh_id(f"{rule.name}:{rt}", taken_transitions)
            taken_transitions.add(fresh)
            transition_map[rt] = fresh

    new_places = [rp for rp in sorted_elems(right.places) if rp not in preserved_r_places]
    new_transitions = [rt for rt in sorted_elems(right.transition_ids)
                       if rt not in preserved_r_transitions]

    # priority order of the result: transport the reference poset pushout
    # of (interface -> right, interface -> complement) along the identifiers
    ref = poset_pushout(transition_monotone(rule.to_right), transition_monotone(k))
    token_to_id = {}
    for token in ref.apex.elements:
        ids = set()
        for tag, x in token:
            ids.add(transition_map[x] if tag == "L" else x)
        if len(ids) != 1:
            raise ComplementNotPushout("square (2): result priority order is ambiguous")
        token_to_id[token] = ids.pop()
    order_pairs = {(token_to_id[a], token_to_id[b]) for a, b in ref.apex.leq}
    transitions = Poset(set(token_to_id.values()), order_pairs)

    places = frozenset(complement.places) | {place_map[rp] for rp in new_places}
    pre = {t: complement.pre[t] for t in complement.transition_ids}
    post = {t: complement.post[t] for t in complement.transition_ids}
    inh = {t: complement.inh[t] for t in complement.transition_ids}
    tname = {t: complement.tname[t] for t in complement.transition_ids}
    tlb = {t: complement.tlb[t] for t in complement.transition_ids}
    rnw = {t: complement.rnw[t] for t in complement.transition_ids}
    for rt in new_transitions:
        ht = transition_map[rt]
        pre[ht] = right.pre[rt].map_through(place_map)
        post[ht] = right.post[rt].map_through(place_map)
        inh[ht] = frozenset(place_map[p] for p in right.inh[rt])
        tname[ht] = right.tname[rt]
        tlb[ht] = right.tlb[rt]
        rnw[ht] = right.rnw[rt]
    cap = {p: complement.cap[p] for p in complement.places}
    pname = {p: complement.pname[p] for p in complement.places}
    added_marking = {}
    for rp in new_places:
        hp = place_map[rp]
        cap[hp] = right.cap[rp]
        pname[hp] = right.pname[rp]
        if right.marking[rp]:
            added_marking[hp] = right.marking[rp]
    marking = complement.marking + Multiset(added_marking)

    result = DecoratedNet(places, transitions, pre, post, marking,
                          cap, pname, tname, tlb, rnw, inh)
    problems = validate_net(result)
    if problems:
        raise ComplementNotPushout("result is not a well-formed net: " + "; ".join(problems))

    comatch = NetMorphism(right, result, place_map, transition_map)
    embed = NetMorphism(complement, result,
                        {p: p for p in complement.places},
                        {t: t for t in complement.transition_ids})
    _verify_square(rule.to_right, k, comatch, embed, "(2)")

    if verify:
        from .oracles import verify_pushout
        from .posets import Cospan

        square1 = verify_pushout(
            transition_monotone(rule.to_left), transition_monotone(k),
            Cospan(transition_monotone(match), transition_monotone(d)))
        square2 = verify_pushout(
            transition_monotone(rule.to_right), transition_monotone(k),
            Cospan(transition_monotone(comatch), transition_monotone(embed)))
        if not (square1 and square2):
            raise ComplementNotPushout(
                "universal-property oracle rejected a transformation square")

    return RewriteResult(rule, match, complement, result, k, d, comatch, embed)


def net_isomorphic(a: DecoratedNet, b: DecoratedNet) -> bool:
    """Decoration-, marking- and priority-respecting bijection exists."""
    return isomorphic(a, b)

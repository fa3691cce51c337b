"""JSON document format for nets, rules and bundles.

Documents are plain JSON.  Saving is canonical (sorted keys, sorted
identifier lists, two-space indent, trailing newline), so a canonically
formatted document survives a load/save round trip byte-identically.

Net documents list places (id, name, cap, tokens) and transitions (id,
name, label, renew, pre, post, inhibitors); priorities are stored as
generating pairs [lesser, greater] of the covering relation and closed on
load.  A rule document holds three net documents plus the two interface
mappings; a bundle holds a net, its rules, and the semantics settings.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

from ._util import sorted_elems
from .errors import ParseError, ResolutionError, ValidationError
from .morphisms import NetMorphism
from .nets import (
    OMEGA,
    DecoratedNet,
    Multiset,
    RENEW_FUNCTIONS,
    make_label,
    validate_net,
)
from .posets import Poset
from .rewrite import Rule, make_rule
from .explore import ReconfigurableNet

DEFAULT_SETTINGS = {
    "match_policy": "injective",
    "priority_mode": "maximum",
    "strict_capacity": False,
}


def _cap_to_json(value):
    return "omega" if value == OMEGA else value


def _cap_from_json(value, where):
    if value == "omega":
        return OMEGA
    if isinstance(value, int) and not isinstance(value, bool) and value >= 1:
        return value
    raise ValidationError(f"{where}: capacity must be a positive int or \"omega\", got {value!r}")


def net_to_document(net: DecoratedNet) -> dict:
    places = []
    for p in net.sorted_places():
        places.append({
            "id": p,
            "name": net.pname[p],
            "cap": _cap_to_json(net.cap[p]),
            "tokens": net.marking[p],
        })
    transitions = []
    for t in net.sorted_transitions():
        tag, value = net.tlb[t]
        transitions.append({
            "id": t,
            "name": net.tname[t],
            "label": {"tag": tag, "value": value},
            "renew": net.rnw[t],
            "pre": {p: k for p, k in net.pre[t].items()},
            "post": {p: k for p, k in net.post[t].items()},
            "inhibitors": sorted_elems(net.inh[t]),
        })
    priorities = [[a, b] for a, b in net.transitions.cover_pairs()]
    return {"places": places, "transitions": transitions, "priorities": priorities}


def _require(cond, exc, message):
    if not cond:
        raise exc(message)


def net_from_document(doc: dict, where: str = "net") -> DecoratedNet:
    _require(isinstance(doc, dict), ValidationError, f"{where}: expected an object")
    for field in ("places", "transitions"):
        _require(field in doc, ValidationError, f"{where}: missing field {field!r}")
        _require(isinstance(doc[field], list), ValidationError, f"{where}: {field} must be a list")

    place_ids = []
    cap = {}
    pname = {}
    marking = {}
    for i, entry in enumerate(doc["places"]):
        here = f"{where}.places[{i}]"
        _require(isinstance(entry, dict) and "id" in entry, ValidationError, f"{here}: bad entry")
        pid = entry["id"]
        _require(pid not in cap, ValidationError, f"{here}: duplicate place id {pid!r}")
        place_ids.append(pid)
        cap[pid] = _cap_from_json(entry.get("cap", "omega"), here)
        pname[pid] = entry.get("name", str(pid))
        tokens = entry.get("tokens", 0)
        _require(isinstance(tokens, int) and not isinstance(tokens, bool) and tokens >= 0,
                 ValidationError, f"{here}: tokens must be a non-negative int")
        if tokens:
            marking[pid] = tokens

    known = set(place_ids)
    tids = []
    pre = {}
    post = {}
    tname = {}
    tlb = {}
    rnw = {}
    inh = {}
    for i, entry in enumerate(doc["transitions"]):
        here = f"{where}.transitions[{i}]"
        _require(isinstance(entry, dict) and "id" in entry, ValidationError, f"{here}: bad entry")
        tid = entry["id"]
        _require(tid not in pre, ValidationError, f"{here}: duplicate transition id {tid!r}")
        tids.append(tid)
        label = entry.get("label", {"tag": "int", "value": 0})
        _require(isinstance(label, dict) and "tag" in label and "value" in label,
                 ValidationError, f"{here}: label must be {{tag, value}}")
        try:
            tlb[tid] = make_label(label["tag"], label["value"])
        except ValueError as exc:
            raise ValidationError(f"{here}: {exc}") from exc
        renew = entry.get("renew", "identity")
        _require(renew in RENEW_FUNCTIONS, ValidationError,
                 f"{here}: unknown renew function {renew!r}")
        rnw[tid] = renew
        tname[tid] = entry.get("name", str(tid))
        for field, store in (("pre", pre), ("post", post)):
            arcs = entry.get(field, {})
            _require(isinstance(arcs, dict), ValidationError, f"{here}: {field} must be an object")
            for pid, k in arcs.items():
                _require(pid in known, ResolutionError,
                         f"{here}.{field}: unknown place {pid!r}")
                _require(isinstance(k, int) and not isinstance(k, bool) and k >= 1,
                         ValidationError, f"{here}.{field}: counts must be positive ints")
            store[tid] = Multiset(arcs)
        inhibitors = entry.get("inhibitors", [])
        _require(isinstance(inhibitors, list), ValidationError,
                 f"{here}: inhibitors must be a list")
        for pid in inhibitors:
            _require(pid in known, ResolutionError, f"{here}.inhibitors: unknown place {pid!r}")
        inh[tid] = frozenset(inhibitors)

    priorities = doc.get("priorities", [])
    _require(isinstance(priorities, list), ValidationError, f"{where}: priorities must be a list")
    pairs = []
    for i, pair in enumerate(priorities):
        here = f"{where}.priorities[{i}]"
        _require(isinstance(pair, list) and len(pair) == 2, ValidationError,
                 f"{here}: expected [lesser, greater]")
        for tid in pair:
            _require(tid in pre, ResolutionError, f"{here}: unknown transition {tid!r}")
        pairs.append((pair[0], pair[1]))
    try:
        order = Poset.from_cover(tids, pairs)
    except ValueError as exc:
        raise ValidationError(f"{where}.priorities: {exc}") from exc

    net = DecoratedNet(
        places=frozenset(place_ids),
        transitions=order,
        pre=pre, post=post,
        marking=Multiset(marking),
        cap=cap, pname=pname, tname=tname, tlb=tlb, rnw=rnw, inh=inh,
    )
    problems = validate_net(net)
    if problems:
        raise ValidationError(f"{where}: " + "; ".join(problems))
    return net


def rule_to_document(rule: Rule) -> dict:
    return {
        "name": rule.name,
        "left": net_to_document(rule.left),
        "interface": net_to_document(rule.interface),
        "right": net_to_document(rule.right),
        "to_left": {
            "places": {p: rule.to_left.place(p)
                       for p in rule.interface.sorted_places()},
            "transitions": {t: rule.to_left.transition(t)
                            for t in rule.interface.sorted_transitions()},
        },
        "to_right": {
            "places": {p: rule.to_right.place(p)
                       for p in rule.interface.sorted_places()},
            "transitions": {t: rule.to_right.transition(t)
                            for t in rule.interface.sorted_transitions()},
        },
    }


def _morphism_from_document(doc: dict, source: DecoratedNet, target: DecoratedNet,
                            where: str) -> NetMorphism:
    _require(isinstance(doc, dict), ValidationError, f"{where}: expected an object")
    placed = doc.get("places", {})
    trans = doc.get("transitions", {})
    for pid, img in placed.items():
        _require(pid in source.places, ResolutionError, f"{where}.places: unknown id {pid!r}")
        _require(img in target.places, ResolutionError, f"{where}.places: unknown image {img!r}")
    for tid, img in trans.items():
        _require(tid in source.transition_ids, ResolutionError,
                 f"{where}.transitions: unknown id {tid!r}")
        _require(img in target.transition_ids, ResolutionError,
                 f"{where}.transitions: unknown image {img!r}")
    return NetMorphism(source, target, dict(placed), dict(trans))


def rule_from_document(doc: dict, where: str = "rule") -> Rule:
    _require(isinstance(doc, dict), ValidationError, f"{where}: expected an object")
    for field in ("name", "left", "interface", "right", "to_left", "to_right"):
        _require(field in doc, ValidationError, f"{where}: missing field {field!r}")
    left = net_from_document(doc["left"], f"{where}.left")
    interface = net_from_document(doc["interface"], f"{where}.interface")
    right = net_from_document(doc["right"], f"{where}.right")
    to_left = _morphism_from_document(doc["to_left"], interface, left, f"{where}.to_left")
    to_right = _morphism_from_document(doc["to_right"], interface, right, f"{where}.to_right")
    try:
        return make_rule(doc["name"], to_left, to_right)
    except ValueError as exc:
        raise ValidationError(f"{where}: {exc}") from exc


def bundle_to_document(rn: ReconfigurableNet, settings: dict | None = None) -> dict:
    merged = dict(DEFAULT_SETTINGS)
    merged.update(settings or {})
    return {
        "net": net_to_document(rn.net),
        "rules": [rule_to_document(rule) for rule in sorted(rn.rules, key=lambda r: r.name)],
        "settings": merged,
    }


def bundle_from_document(doc: dict, where: str = "bundle"):
    _require(isinstance(doc, dict), ValidationError, f"{where}: expected an object")
    _require("net" in doc, ValidationError, f"{where}: missing field 'net'")
    net = net_from_document(doc["net"], f"{where}.net")
    rules = []
    for i, rule_doc in enumerate(doc.get("rules", [])):
        rules.append(rule_from_document(rule_doc, f"{where}.rules[{i}]"))
    settings = dict(DEFAULT_SETTINGS)
    given = doc.get("settings", {})
    _require(isinstance(given, dict), ValidationError, f"{where}: settings must be an object")
    for key, value in given.items():
        _require(key in DEFAULT_SETTINGS, ValidationError, f"{where}.settings: unknown key {key!r}")
        settings[key] = value
    _require(settings["match_policy"] in ("injective", "all"), ValidationError,
             f"{where}.settings: bad match_policy")
    _require(settings["priority_mode"] in ("maximum", "maximal"), ValidationError,
             f"{where}.settings: bad priority_mode")
    _require(isinstance(settings["strict_capacity"], bool), ValidationError,
             f"{where}.settings: strict_capacity must be a bool")
    try:
        rn = ReconfigurableNet(net, tuple(rules))
    except ValueError as exc:
        raise ValidationError(f"{where}: {exc}") from exc
    return rn, settings


def document_kind(doc) -> str:
    if isinstance(doc, dict):
        if "net" in doc:
            return "bundle"
        if "left" in doc:
            return "rule"
        if "places" in doc:
            return "net"
    raise ValidationError("document is not a net, rule, or bundle")


def dumps(doc: dict) -> str:
    """Canonical serialization: sorted keys, stable lists, trailing newline."""
    return json.dumps(_reject_inf(doc), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _reject_inf(value):
    if isinstance(value, float) and (math.isinf(value) or math.isnan(value)):
        raise ValidationError("non-finite number in document; use \"omega\" for capacities")
    if isinstance(value, dict):
        return {k: _reject_inf(v) for k, v in value.items()}
    if isinstance(value, list):
        return [_reject_inf(v) for v in value]
    return value


def loads(text: str) -> dict:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc


def load_path(path):
    """Parse a document file and build the value it denotes.

    Returns (kind, value): nets load as DecoratedNet, rules as Rule,
    bundles as (ReconfigurableNet, settings).
    """
    text = Path(path).read_text(encoding="utf-8")
    doc = loads(text)
    kind = document_kind(doc)
    if kind == "net":
        return kind, net_from_document(doc)
    if kind == "rule":
        return kind, rule_from_document(doc)
    return kind, bundle_from_document(doc)


def save_path(path, doc: dict):
    Path(path).write_text(dumps(doc), encoding="utf-8")

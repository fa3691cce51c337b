"""The bundled example: a cyclic process and its modification rules.

The net has a distinguished place named "start" carrying one token, a step
transition into a buffer place, and a cycle-back transition returning the
token.  The cycle-back transition counts its firings through an
incrementing label, so no firing sequence reproduces the initial state
exactly; the rules never match it either, because its renew function
differs from the one the rule patterns carry.

Rules: one anchored extension inserting a step right after "start" (not
reversible by design), plus two inverse pairs inserting/removing a
sequential step and a fork/join pair between generic places.  Inverse
rules are literal span reversals of each other, sharing the interface.

The JSON files in this directory are the canonical serializations of the
builders below; a test keeps them byte-identical.
"""

from __future__ import annotations

from importlib import resources

from ..documents import (
    bundle_from_document,
    bundle_to_document,
    loads,
    net_to_document,
    rule_to_document,
)
from ..explore import ReconfigurableNet
from ..morphisms import NetMorphism
from ..nets import decorated_net
from ..rewrite import Rule, inverse_rule, make_rule


def start_net():
    return decorated_net(
        places=("start", "p1"),
        transitions=("t1", "t2"),
        pre={"t1": {"start": 1}, "t2": {"p1": 1}},
        post={"t1": {"p1": 1}, "t2": {"start": 1}},
        marking={"start": 1},
        pname={"start": "start", "p1": "p"},
        tname={"t1": "t", "t2": "t"},
        rnw={"t2": "inc"},
    )


def _context_places(*specs):
    """Shared helper: context nets with named places only."""
    ids = tuple(pid for pid, _ in specs)
    return decorated_net(places=ids, pname=dict(specs))


def sequential_ext_s_rule() -> Rule:
    left = decorated_net(
        places=("s", "q"),
        transitions=("a",),
        pre={"a": {"s": 1}},
        post={"a": {"q": 1}},
        pname={"s": "start", "q": "p"},
        tname={"a": "t"},
    )
    interface = _context_places(("s", "start"), ("q", "p"))
    right = decorated_net(
        places=("s", "q", "mid"),
        transitions=("in", "out"),
        pre={"in": {"s": 1}, "out": {"mid": 1}},
        post={"in": {"mid": 1}, "out": {"q": 1}},
        pname={"s": "start", "q": "p", "mid": "p"},
        tname={"in": "t", "out": "t"},
    )
    embed = {"s": "s", "q": "q"}
    return make_rule(
        "sequential_ext_s",
        NetMorphism(interface, left, dict(embed), {}),
        NetMorphism(interface, right, dict(embed), {}),
    )


def sequential_ext_rule() -> Rule:
    left = decorated_net(
        places=("u", "w"),
        transitions=("a",),
        pre={"a": {"u": 1}},
        post={"a": {"w": 1}},
        pname={"u": "p", "w": "p"},
        tname={"a": "t"},
    )
    interface = _context_places(("u", "p"), ("w", "p"))
    right = decorated_net(
        places=("u", "w", "mid"),
        transitions=("in", "out"),
        pre={"in": {"u": 1}, "out": {"mid": 1}},
        post={"in": {"mid": 1}, "out": {"w": 1}},
        pname={"u": "p", "w": "p", "mid": "p"},
        tname={"in": "t", "out": "t"},
    )
    embed = {"u": "u", "w": "w"}
    return make_rule(
        "sequential_ext",
        NetMorphism(interface, left, dict(embed), {}),
        NetMorphism(interface, right, dict(embed), {}),
    )


def sequential_red_rule() -> Rule:
    return inverse_rule(sequential_ext_rule(), "sequential_red")


def parallel_ext_rule() -> Rule:
    left = decorated_net(
        places=("u", "w"),
        transitions=("a",),
        pre={"a": {"u": 1}},
        post={"a": {"w": 1}},
        pname={"u": "p", "w": "p"},
        tname={"a": "t"},
    )
    interface = _context_places(("u", "p"), ("w", "p"))
    right = decorated_net(
        places=("u", "w", "b1", "b2"),
        transitions=("fork", "join"),
        pre={"fork": {"u": 1}, "join": {"b1": 1, "b2": 1}},
        post={"fork": {"b1": 1, "b2": 1}, "join": {"w": 1}},
        pname={"u": "p", "w": "p", "b1": "p", "b2": "p"},
        tname={"fork": "t", "join": "t"},
    )
    embed = {"u": "u", "w": "w"}
    return make_rule(
        "parallel_ext",
        NetMorphism(interface, left, dict(embed), {}),
        NetMorphism(interface, right, dict(embed), {}),
    )


def parallel_red_rule() -> Rule:
    return inverse_rule(parallel_ext_rule(), "parallel_red")


def rules() -> tuple[Rule, ...]:
    return (
        sequential_ext_s_rule(),
        sequential_ext_rule(),
        sequential_red_rule(),
        parallel_ext_rule(),
        parallel_red_rule(),
    )


def bundle() -> ReconfigurableNet:
    return ReconfigurableNet(start_net(), rules())


def bundle_document() -> dict:
    return bundle_to_document(bundle())


def documents() -> dict[str, dict]:
    """File name -> canonical document for everything this corpus ships."""
    docs = {"start_net.json": net_to_document(start_net())}
    for rule in rules():
        docs[f"{rule.name}.json"] = rule_to_document(rule)
    docs["bundle.json"] = bundle_document()
    return docs


def data_path(name: str):
    return resources.files(__package__) / name


def load_bundle() -> ReconfigurableNet:
    """The committed bundle file, parsed."""
    text = data_path("bundle.json").read_text(encoding="utf-8")
    rn, _settings = bundle_from_document(loads(text))
    return rn

"""Interleaved behavior of a net with a rule set.

A reconfigurable net evolves by firing transitions or applying rules; the
two kinds of step share one successor relation.  This module builds the
bounded reachability graph over that relation (nodes deduplicated up to
isomorphism via canonical keys) and runs seeded random simulation.

Randomness: simulation draws uniformly over the deterministic successor
list with Python's Mersenne-Twister generator (random.Random), so a seed
fixes the whole trace.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from ._util import sort_key, sorted_elems
from .canonical import canonical_key
from .nets import DecoratedNet, enabled_set, fire, fire_parallel
from .errors import NotEnabledParallel
from .rewrite import Rule, apply_rule, check_gluing, find_matches


@dataclass(frozen=True)
class ReconfigurableNet:
    """A decorated net together with its transformation rules."""

    net: DecoratedNet
    rules: tuple[Rule, ...] = ()

    def __post_init__(self):
        names = [rule.name for rule in self.rules]
        if len(set(names)) != len(names):
            raise ValueError("rule names must be unique")

    def rule(self, name: str) -> Rule:
        for rule in self.rules:
            if rule.name == name:
                return rule
        raise KeyError(f"unknown rule {name!r}")

    def with_net(self, net: DecoratedNet) -> "ReconfigurableNet":
        return ReconfigurableNet(net, self.rules)


@dataclass(frozen=True)
class StepLabel:
    """A replayable edge label: firing step or rule application."""

    kind: str  # "fire" | "fire-parallel" | "apply"
    transition: object = None
    vector: tuple = ()  # sorted ((transition, count), ...)
    rule: str = ""
    match_index: int = -1

    def render(self) -> str:
        if self.kind == "fire":
            return f"fire {self.transition}"
        if self.kind == "fire-parallel":
            inner = ",".join(f"{t}={k}" for t, k in self.vector)
            return f"fire-parallel {inner}"
        return f"apply {self.rule} {self.match_index}"


def _vectors_up_to(transitions, budget):
    """Multiplicity vectors with total occurrence count 2..budget."""
    transitions = sorted_elems(transitions)
    vectors = []

    def rec(start, remaining, current):
        if sum(current.values()) >= 2:
            vectors.append(dict(current))
        if remaining == 0:
            return
        for i in range(start, len(transitions)):
            t = transitions[i]
            current[t] = current.get(t, 0) + 1
            rec(i, remaining - 1, current)
            current[t] -= 1
            if not current[t]:
                del current[t]

    rec(0, budget, {})
    uniq = {tuple(sorted(v.items(), key=sort_key)): v for v in vectors}
    return [uniq[key] for key in sorted(uniq, key=sort_key)]


def successors(rn: ReconfigurableNet, mode: str = "maximum", *,
               strict_capacity: bool = False, match_policy: str = "injective",
               include_parallel: bool = False, parallel_budget: int = 2):
    """All single-step evolutions, deterministically ordered.

    Single firings come first (transitions in canonical order), then, when
    enabled via the flag, parallel vectors with small total multiplicity,
    then rule applications ordered by rule name and match index.  Matches
    violating the gluing condition are not applicable, hence not listed.
    """
    net = rn.net
    out = []
    for t in sorted_elems(enabled_set(net, mode, strict_capacity)):
        out.append((StepLabel(kind="fire", transition=t),
                    fire(net, t, mode, strict_capacity)))
    if include_parallel:
        for vector in _vectors_up_to(net.transition_ids, parallel_budget):
            try:
                result = fire_parallel(net, vector, mode, strict_capacity)
            except NotEnabledParallel:
                continue
            out.append((StepLabel(kind="fire-parallel",
                                  vector=tuple(sorted(vector.items(), key=sort_key))),
                        result))
    for rule in sorted(rn.rules, key=lambda r: r.name):
        matches = find_matches(rule, net, match_policy)
        for index, match in enumerate(matches):
            if not check_gluing(rule, match).ok:
                continue
            result = apply_rule(rule, match)
            out.append((StepLabel(kind="apply", rule=rule.name, match_index=index),
                        result.net))
    return out


@dataclass
class ReachabilityGraph:
    """Bounded graph of reachable states; node keys are canonical forms."""

    root: str
    nodes: dict = field(default_factory=dict)  # key -> net, insertion = BFS order
    depths: dict = field(default_factory=dict)
    edges: list = field(default_factory=list)  # (source key, StepLabel, target key)
    truncated_by_depth: bool = False
    truncated_by_nodes: bool = False

    def node_rows(self):
        rows = []
        for index, (key, net) in enumerate(self.nodes.items()):
            marking = " ".join(f"{net.pname[p]}={net.marking[p]}"
                               for p in sorted_elems(net.marking.support()))
            labels = " ".join(
                f"{net.tname[t]}:{net.tlb[t][0]}:{net.tlb[t][1]}"
                for t in net.sorted_transitions())
            rows.append((key, index, self.depths[key], len(net.places),
                         len(net.transition_ids), marking, labels))
        return rows

    def edge_rows(self):
        return [(src, label.render(), tgt) for src, label, tgt in self.edges]

    def to_document(self) -> dict:
        return {
            "root": self.root,
            "truncated": {
                "depth": self.truncated_by_depth,
                "nodes": self.truncated_by_nodes,
            },
            "nodes": [
                {
                    "key": key,
                    "index": index,
                    "depth": depth,
                    "places": n_places,
                    "transitions": n_transitions,
                    "marking": marking,
                    "labels": labels,
                }
                for key, index, depth, n_places, n_transitions, marking, labels
                in self.node_rows()
            ],
            "edges": [
                {"source": src, "label": label, "target": tgt}
                for src, label, tgt in self.edge_rows()
            ],
        }

    def to_dot(self) -> str:
        lines = ["digraph reachability {", "  rankdir=LR;", "  node [shape=box];"]
        index = {key: i for i, key in enumerate(self.nodes)}
        for key, i, depth, n_places, n_transitions, marking, _labels in self.node_rows():
            shape = f"P={n_places} T={n_transitions}"
            label = f"n{i}\\n{shape}\\n{marking}" if marking else f"n{i}\\n{shape}"
            extra = " style=bold" if key == self.root else ""
            lines.append(f'  n{i} [label="{label}"{extra}];')
        for src, label, tgt in self.edges:
            lines.append(f'  n{index[src]} -> n{index[tgt]} [label="{label.render()}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def explore(rn: ReconfigurableNet, depth: int, max_nodes: int,
            mode: str = "maximum", **step_options) -> ReachabilityGraph:
    """Breadth-first reachability up to a depth and node budget.

    Nodes are deduplicated by canonical key (isomorphic states coincide).
    Raising either bound only ever adds nodes and edges.
    """
    if depth < 0 or max_nodes < 0:
        raise ValueError("bounds must be non-negative")
    root_key = canonical_key(rn.net)
    graph = ReachabilityGraph(root=root_key)
    if max_nodes == 0:
        graph.truncated_by_nodes = True
        return graph
    graph.nodes[root_key] = rn.net
    graph.depths[root_key] = 0
    frontier = [(root_key, rn.net, 0)]
    while frontier:
        key, net, level = frontier.pop(0)
        if level >= depth:
            graph.truncated_by_depth = graph.truncated_by_depth or bool(
                successors(rn.with_net(net), mode, **step_options))
            continue
        for label, successor in successors(rn.with_net(net), mode, **step_options):
            succ_key = canonical_key(successor)
            if succ_key not in graph.nodes:
                if len(graph.nodes) >= max_nodes:
                    graph.truncated_by_nodes = True
                    continue
                graph.nodes[succ_key] = successor
                graph.depths[succ_key] = level + 1
                frontier.append((succ_key, successor, level + 1))
            graph.edges.append((key, label, succ_key))
    return graph


@dataclass(frozen=True)
class SimulationResult:
    labels: tuple[StepLabel, ...]
    final: DecoratedNet
    halted_early: bool

    @property
    def steps_taken(self) -> int:
        return len(self.labels)


def simulate(rn: ReconfigurableNet, steps: int, seed: int,
             mode: str = "maximum", **step_options) -> SimulationResult:
    """Uniform random walk over the successor relation; a seed fixes it.

    Halts early (reported in the result) when no successor exists.
    """
    if steps < 0:
        raise ValueError("steps must be non-negative")
    rng = random.Random(seed)
    current = rn
    labels = []
    for _ in range(steps):
        options = successors(current, mode, **step_options)
        if not options:
            return SimulationResult(tuple(labels), current.net, halted_early=True)
        label, net = rng.choice(options)
        labels.append(label)
        current = current.with_net(net)
    return SimulationResult(tuple(labels), current.net, halted_early=False)


def replay(rn: ReconfigurableNet, label: StepLabel, mode: str = "maximum",
           **step_options) -> DecoratedNet:
    """Re-execute one step label against a state; used to audit graphs."""
    strict_capacity = step_options.get("strict_capacity", False)
    if label.kind == "fire":
        return fire(rn.net, label.transition, mode, strict_capacity)
    if label.kind == "fire-parallel":
        return fire_parallel(rn.net, dict(label.vector), mode, strict_capacity)
    rule = rn.rule(label.rule)
    matches = find_matches(rule, rn.net, step_options.get("match_policy", "injective"))
    return apply_rule(rule, matches[label.match_index]).net

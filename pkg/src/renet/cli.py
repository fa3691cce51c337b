"""Command-line interface.

Exit codes: 0 success, 1 domain error (invalid document, disabled
transition, gluing violation, failed law check), 2 usage error.
All output is deterministic given the inputs and the seed; the seed
defaults to the RENET_SEED environment variable, then 0.
"""

from __future__ import annotations

import os
import sys

import click

from . import documents
from ._util import sorted_elems
from .errors import RenetError
from .explore import ReconfigurableNet, explore, simulate
from .lawcheck import adjunction_suite, poset_law_suite, vk_suite
from .nets import blocking_condition, enabled_set, fire, fire_parallel
from .rewrite import apply_rule, check_gluing, find_matches


def _fail(message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(1)


def _load(path):
    try:
        return documents.load_path(path)
    except RenetError as exc:
        _fail(str(exc))
    except OSError as exc:
        _fail(str(exc))


def _load_bundle(path):
    """Nets are accepted wherever bundles are: a bare net is a bundle with
    no rules and default settings."""
    kind, value = _load(path)
    if kind == "bundle":
        rn, settings = value
        return kind, rn, settings
    if kind == "net":
        return kind, ReconfigurableNet(value, ()), dict(documents.DEFAULT_SETTINGS)
    _fail(f"{path}: expected a net or bundle document, found a {kind}")


def _semantics(settings, priority_mode, match_policy, strict_capacity):
    if priority_mode is not None:
        settings["priority_mode"] = priority_mode
    if match_policy is not None:
        settings["match_policy"] = match_policy
    if strict_capacity:
        settings["strict_capacity"] = True
    return settings


def _emit(kind, rn, settings, out):
    if kind == "net":
        doc = documents.net_to_document(rn.net)
    else:
        doc = documents.bundle_to_document(rn, settings)
    text = documents.dumps(doc)
    if out is None:
        click.echo(text, nl=False)
    else:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(text)


def _default_seed() -> int:
    raw = os.environ.get("RENET_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        return 0


semantics_options = [
    click.option("--priority-mode", type=click.Choice(["maximum", "maximal"]),
                 default=None, help="Override the bundle's priority mode."),
    click.option("--match-policy", type=click.Choice(["injective", "all"]),
                 default=None, help="Override the bundle's match policy."),
    click.option("--strict-capacity", is_flag=True,
                 help="Capacity must hold before consumed tokens are removed."),
]


def with_semantics(func):
    for option in reversed(semantics_options):
        func = option(func)
    return func


@click.group()
def main():
    """Reconfigurable decorated place/transition nets."""


@main.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
def validate(file):
    """Check that FILE is a well-formed net, rule, or bundle document."""
    kind, _value = _load(file)
    click.echo(f"ok: {kind} {file}")


@main.command()
@click.argument("bundle", type=click.Path(exists=True, dir_okay=False))
@with_semantics
def enabled(bundle, priority_mode, match_policy, strict_capacity):
    """List each transition with its enabledness or first failing test."""
    _kind, rn, settings = _load_bundle(bundle)
    settings = _semantics(settings, priority_mode, match_policy, strict_capacity)
    net = rn.net
    live = enabled_set(net, settings["priority_mode"], settings["strict_capacity"])
    click.echo("transition\tstatus\tdetail")
    for t in sorted_elems(net.transition_ids):
        if t in live:
            click.echo(f"{t}\tenabled\t-")
        else:
            condition = blocking_condition(
                net, t, settings["priority_mode"], settings["strict_capacity"])
            click.echo(f"{t}\tdisabled\t{condition}")


@main.command(name="fire")
@click.argument("bundle", type=click.Path(exists=True, dir_okay=False))
@click.option("--transition", "-t", required=True, help="Transition id (or unique name).")
@click.option("--count", default=1, show_default=True, help="Fire this many times in sequence.")
@click.option("--out", type=click.Path(dir_okay=False), default=None,
              help="Write the resulting document here instead of stdout.")
@with_semantics
def fire_command(bundle, transition, count, out, priority_mode, match_policy, strict_capacity):
    """Fire a transition and print the resulting document."""
    kind, rn, settings = _load_bundle(bundle)
    settings = _semantics(settings, priority_mode, match_policy, strict_capacity)
    net = rn.net
    t = _resolve_transition(net, transition)
    try:
        for _ in range(count):
            net = fire(net, t, settings["priority_mode"], settings["strict_capacity"])
    except RenetError as exc:
        _fail(str(exc))
    _emit(kind, rn.with_net(net), settings, out)


def _resolve_transition(net, name):
    if name in net.transition_ids:
        return name
    named = [t for t in sorted_elems(net.transition_ids) if net.tname[t] == name]
    if len(named) == 1:
        return named[0]
    if not named:
        _fail(f"unknown transition {name!r}")
    _fail(f"transition name {name!r} is ambiguous: {named}")


@main.command(name="fire-parallel")
@click.argument("bundle", type=click.Path(exists=True, dir_okay=False))
@click.option("--vector", required=True, help="Occurrence vector, e.g. t1=2,t2=1.")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@with_semantics
def fire_parallel_command(bundle, vector, out, priority_mode, match_policy, strict_capacity):
    """Fire a transition vector in one parallel step."""
    kind, rn, settings = _load_bundle(bundle)
    settings = _semantics(settings, priority_mode, match_policy, strict_capacity)
    parsed = {}
    for part in vector.split(","):
        if "=" not in part:
            raise click.UsageError(f"bad vector entry {part!r}; expected name=count")
        name, _, raw = part.partition("=")
        try:
            parsed[_resolve_transition(rn.net, name.strip())] = int(raw)
        except ValueError:
            raise click.UsageError(f"bad multiplicity in {part!r}") from None
    try:
        net = fire_parallel(rn.net, parsed,
                            settings["priority_mode"], settings["strict_capacity"])
    except RenetError as exc:
        _fail(str(exc))
    _emit(kind, rn.with_net(net), settings, out)


@main.command(name="match")
@click.argument("bundle", type=click.Path(exists=True, dir_okay=False))
@click.option("--rule", "rule_name", required=True)
@click.option("--all", "non_injective", is_flag=True,
              help="Shorthand for --match-policy all.")
@with_semantics
def match_command(bundle, rule_name, non_injective, priority_mode, match_policy, strict_capacity):
    """List the matches of a rule, with their gluing status."""
    _kind, rn, settings = _load_bundle(bundle)
    settings = _semantics(settings, priority_mode, match_policy, strict_capacity)
    if non_injective:
        settings["match_policy"] = "all"
    try:
        rule = rn.rule(rule_name)
    except KeyError as exc:
        _fail(str(exc.args[0]))
    matches = find_matches(rule, rn.net, settings["match_policy"])
    click.echo(f"matches\t{len(matches)}")
    for index, match in enumerate(matches):
        report = check_gluing(rule, match)
        mapping = " ".join(
            [f"{a}->{b}" for a, b in sorted(match.transition_map.items(), key=str)]
            + [f"{a}->{b}" for a, b in sorted(match.place_map.items(), key=str)]
        )
        click.echo(f"{index}\t{'ok' if report.ok else report.describe()}\t{mapping}")


@main.command(name="apply")
@click.argument("bundle", type=click.Path(exists=True, dir_okay=False))
@click.option("--rule", "rule_name", required=True)
@click.option("--match", "match_index", default=0, show_default=True)
@click.option("--verify-pushouts", is_flag=True,
              help="Also run the bounded universal-property oracle on both squares.")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@with_semantics
def apply_command(bundle, rule_name, match_index, verify_pushouts, out,
                  priority_mode, match_policy, strict_capacity):
    """Apply a rule at a match and print the resulting document."""
    kind, rn, settings = _load_bundle(bundle)
    settings = _semantics(settings, priority_mode, match_policy, strict_capacity)
    try:
        rule = rn.rule(rule_name)
    except KeyError as exc:
        _fail(str(exc.args[0]))
    matches = find_matches(rule, rn.net, settings["match_policy"])
    if not 0 <= match_index < len(matches):
        _fail(f"match index {match_index} out of range ({len(matches)} matches)")
    try:
        result = apply_rule(rule, matches[match_index], verify=verify_pushouts)
    except RenetError as exc:
        _fail(str(exc))
    _emit(kind, rn.with_net(result.net), settings, out)


@main.command(name="simulate")
@click.argument("bundle", type=click.Path(exists=True, dir_okay=False))
@click.option("--steps", required=True, type=int)
@click.option("--seed", type=int, default=None, help="Defaults to RENET_SEED, then 0.")
@click.option("--out", type=click.Path(dir_okay=False), default=None,
              help="Write the final state as a document here.")
@click.option("--plot", type=click.Path(dir_okay=False), default=None,
              help="Render the trace statistics to this image file.")
@with_semantics
def simulate_command(bundle, steps, seed, out, plot,
                     priority_mode, match_policy, strict_capacity):
    """Run a seeded random trace of firings and rule applications."""
    kind, rn, settings = _load_bundle(bundle)
    settings = _semantics(settings, priority_mode, match_policy, strict_capacity)
    seed = _default_seed() if seed is None else seed
    result = simulate(rn, steps, seed,
                      settings["priority_mode"],
                      strict_capacity=settings["strict_capacity"],
                      match_policy=settings["match_policy"])
    click.echo(f"seed\t{seed}")
    for index, label in enumerate(result.labels):
        click.echo(f"{index}\t{label.render()}")
    if result.halted_early:
        click.echo(f"halted\tno successor after step {result.steps_taken}")
    final = result.final
    click.echo(f"final\tplaces={len(final.places)} transitions={len(final.transition_ids)} "
               f"tokens={final.marking.total()}")
    if out is not None:
        _emit(kind, rn.with_net(final), settings, out)
    if plot is not None:
        from .plotting import save_trace_figure

        snapshots = [rn.net]
        current = rn
        for label in result.labels:
            from .explore import replay

            current = current.with_net(replay(
                current, label, settings["priority_mode"],
                strict_capacity=settings["strict_capacity"],
                match_policy=settings["match_policy"]))
            snapshots.append(current.net)
        save_trace_figure(snapshots, plot, title=f"simulation (seed {seed})")
        click.echo(f"plot\t{plot}")


@main.command(name="explore")
@click.argument("bundle", type=click.Path(exists=True, dir_okay=False))
@click.option("--depth", required=True, type=int)
@click.option("--max-nodes", required=True, type=int)
@click.option("--dot", type=click.Path(dir_okay=False), default=None,
              help="Write the graph in DOT format here.")
@click.option("--plot", type=click.Path(dir_okay=False), default=None,
              help="Render the graph to this image file.")
@click.option("--json", "json_out", type=click.Path(dir_okay=False), default=None,
              help="Write the graph document here.")
@with_semantics
def explore_command(bundle, depth, max_nodes, dot, plot, json_out,
                    priority_mode, match_policy, strict_capacity):
    """Build the bounded reachability graph and print its tables."""
    _kind, rn, settings = _load_bundle(bundle)
    settings = _semantics(settings, priority_mode, match_policy, strict_capacity)
    graph = explore(rn, depth, max_nodes,
                    settings["priority_mode"],
                    strict_capacity=settings["strict_capacity"],
                    match_policy=settings["match_policy"])
    click.echo(f"nodes\t{len(graph.nodes)}")
    click.echo(f"edges\t{len(graph.edges)}")
    click.echo(f"truncated\tdepth={graph.truncated_by_depth} nodes={graph.truncated_by_nodes}")
    click.echo("key\tindex\tdepth\tplaces\ttransitions\tmarking\tlabels")
    for key, index, level, n_places, n_transitions, marking, labels in graph.node_rows():
        click.echo(f"{key}\t{index}\t{level}\t{n_places}\t{n_transitions}\t{marking}\t{labels}")
    click.echo("source\tlabel\ttarget")
    for src, label, tgt in graph.edge_rows():
        click.echo(f"{src}\t{label}\t{tgt}")
    if dot is not None:
        with open(dot, "w", encoding="utf-8") as handle:
            handle.write(graph.to_dot())
        click.echo(f"dot\t{dot}")
    if json_out is not None:
        documents.save_path(json_out, graph.to_document())
        click.echo(f"json\t{json_out}")
    if plot is not None:
        from .plotting import save_graph_figure

        save_graph_figure(graph, plot)
        click.echo(f"plot\t{plot}")


@main.command(name="draw")
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--out", required=True, type=click.Path(dir_okay=False),
              help="Image file to render the net into.")
def draw_command(file, out):
    """Render a net document as a figure."""
    kind, value = _load(file)
    if kind == "bundle":
        net = value[0].net
    elif kind == "net":
        net = value
    else:
        _fail(f"{file}: cannot draw a {kind} document")
    from .plotting import save_net_figure

    save_net_figure(net, out, title=os.path.basename(file))
    click.echo(f"plot\t{out}")


@main.command(name="check")
@click.argument("suite", type=click.Choice(["poset-laws", "adjunction", "vk"]))
@click.option("--max-size", default=3, show_default=True,
              help="Exhaustive-family size bound (capped at 5).")
@click.option("--samples", default=200, show_default=True)
@click.option("--seed", type=int, default=None, help="Defaults to RENET_SEED, then 0.")
def check_command(suite, max_size, samples, seed):
    """Run the order-category law oracles and report one line per law."""
    seed = _default_seed() if seed is None else seed
    if max_size > 5:
        raise click.UsageError("--max-size above 5 is not supported")
    if suite == "poset-laws":
        results = poset_law_suite(max_size=max_size, samples=samples, seed=seed)
    elif suite == "adjunction":
        results = adjunction_suite(max_size=max_size)
    else:
        results = vk_suite(samples=samples, seed=seed)
    for result in results:
        click.echo(result.line())
    if not all(result.ok for result in results):
        sys.exit(1)


if __name__ == "__main__":
    main()

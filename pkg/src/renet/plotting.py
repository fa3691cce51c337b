"""Figure rendering for exploration graphs and simulation traces.

Layouts are computed here (layered by BFS depth); matplotlib only draws.
The Agg backend is forced so rendering works headless.
"""

from __future__ import annotations

from ._util import sorted_elems


def _axes(figsize):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=figsize)
    return fig, ax, plt


def save_graph_figure(graph, path, title: str = "reachability"):
    """Draw a reachability graph: nodes layered by depth, edges as arrows."""
    rows = graph.node_rows()
    by_depth: dict[int, list] = {}
    for key, index, depth, n_places, n_transitions, marking, labels in rows:
        by_depth.setdefault(depth, []).append((index, key, n_places, n_transitions))
    positions = {}
    for depth in sorted(by_depth):
        entries = sorted(by_depth[depth])
        for row, (index, key, _np, _nt) in enumerate(entries):
            positions[key] = (depth, -(row - (len(entries) - 1) / 2.0))

    width = max(4.0, 1.8 * (max(by_depth) + 1 if by_depth else 1))
    height = max(3.0, 0.9 * max((len(v) for v in by_depth.values()), default=1))
    fig, ax, plt = _axes((width, height))

    for src, label, tgt in graph.edges:
        x0, y0 = positions[src]
        x1, y1 = positions[tgt]
        ax.annotate(
            "", xy=(x1, y1), xytext=(x0, y0),
            arrowprops=dict(arrowstyle="-|>", color="0.45", lw=0.8,
                            shrinkA=12, shrinkB=12,
                            connectionstyle="arc3,rad=0.08"),
        )
        ax.text((x0 + x1) / 2, (y0 + y1) / 2, label.render(),
                fontsize=5, color="0.35", ha="center", va="center")

    sizes = {key: npl for key, _i, _d, npl, _nt, _m, _l in rows}
    for key, (x, y) in positions.items():
        root = key == graph.root
        ax.scatter([x], [y], s=260, zorder=3,
                   c="#d9762b" if root else "#3c78b4",
                   edgecolors="black", linewidths=0.6)
        index = next(i for k, i, *_ in rows if k == key)
        ax.text(x, y, f"n{index}", fontsize=7, ha="center", va="center",
                color="white", zorder=4)
        ax.text(x, y - 0.28, f"P={sizes[key]}", fontsize=5.5,
                ha="center", va="top", color="0.25")

    ax.set_title(f"{title}: {len(rows)} states, {len(graph.edges)} steps", fontsize=9)
    ax.set_xlabel("depth", fontsize=8)
    ax.set_yticks([])
    ax.spines["top"].set_visible(False)
    ax.spines["right"].set_visible(False)
    ax.spines["left"].set_visible(False)
    fig.savefig(path, dpi=160, bbox_inches="tight")
    plt.close(fig)


def save_trace_figure(snapshots, path, title: str = "simulation"):
    """Chart net size and token count along a simulation trace.

    ``snapshots`` is the list of nets visited, initial state first.
    """
    steps = list(range(len(snapshots)))
    places = [len(net.places) for net in snapshots]
    transitions = [len(net.transition_ids) for net in snapshots]
    tokens = [net.marking.total() for net in snapshots]

    fig, ax, plt = _axes((max(4.0, 0.5 * len(snapshots)), 3.2))
    ax.step(steps, places, where="post", label="places", color="#3c78b4")
    ax.step(steps, transitions, where="post", label="transitions", color="#d9762b")
    ax.step(steps, tokens, where="post", label="tokens", color="#4d9963", linestyle="--")
    ax.set_xlabel("step", fontsize=8)
    ax.set_title(title, fontsize=9)
    ax.legend(fontsize=7, frameon=False)
    ax.spines["top"].set_visible(False)
    ax.spines["right"].set_visible(False)
    fig.savefig(path, dpi=160, bbox_inches="tight")
    plt.close(fig)


def save_net_figure(net, path, title: str = "net"):
    """Draw one net: places as circles (token count inside), transitions
    as squares, arcs with multiplicities, inhibitor arcs dotted."""
    places = sorted_elems(net.places)
    transitions = net.sorted_transitions()
    positions = {}
    for i, p in enumerate(places):
        positions[("P", p)] = (0.0, -float(i))
    for i, t in enumerate(transitions):
        positions[("T", t)] = (2.0, -float(i) - 0.25)

    fig, ax, plt = _axes((5.0, max(3.0, 0.7 * max(len(places), len(transitions)))))
    for t in transitions:
        x1, y1 = positions[("T", t)]
        for p, k in net.pre[t].items():
            x0, y0 = positions[("P", p)]
            ax.annotate("", xy=(x1, y1), xytext=(x0, y0),
                        arrowprops=dict(arrowstyle="-|>", color="0.4", lw=0.8,
                                        shrinkA=12, shrinkB=12))
            if k > 1:
                ax.text((x0 + x1) / 2, (y0 + y1) / 2 + 0.08, str(k), fontsize=6)
        for p, k in net.post[t].items():
            x0, y0 = positions[("P", p)]
            ax.annotate("", xy=(x0, y0), xytext=(x1, y1),
                        arrowprops=dict(arrowstyle="-|>", color="0.4", lw=0.8,
                                        shrinkA=12, shrinkB=12,
                                        connectionstyle="arc3,rad=0.15"))
            if k > 1:
                ax.text((x0 + x1) / 2, (y0 + y1) / 2 - 0.12, str(k), fontsize=6)
        for p in sorted_elems(net.inh[t]):
            x0, y0 = positions[("P", p)]
            ax.annotate("", xy=(x1, y1), xytext=(x0, y0),
                        arrowprops=dict(arrowstyle="-o", color="#a33", lw=0.8,
                                        linestyle=":", shrinkA=12, shrinkB=12))
    for p in places:
        x, y = positions[("P", p)]
        ax.scatter([x], [y], s=300, c="white", edgecolors="black", zorder=3)
        ax.text(x, y, str(net.marking[p]) if net.marking[p] else "",
                fontsize=8, ha="center", va="center", zorder=4)
        ax.text(x - 0.15, y, net.pname[p], fontsize=7, ha="right", va="center")
    for t in transitions:
        x, y = positions[("T", t)]
        ax.scatter([x], [y], s=260, c="0.85", edgecolors="black", marker="s", zorder=3)
        tag, value = net.tlb[t]
        ax.text(x + 0.15, y, f"{net.tname[t]} [{tag}:{value}]", fontsize=7,
                ha="left", va="center")

    ax.set_title(title, fontsize=9)
    ax.set_xticks([])
    ax.set_yticks([])
    for side in ("top", "right", "bottom", "left"):
        ax.spines[side].set_visible(False)
    fig.savefig(path, dpi=160, bbox_inches="tight")
    plt.close(fig)

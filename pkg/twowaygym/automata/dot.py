"""
Graphviz export of machines and computation graphs.
"""
import graphviz

from twowaygym.automata.evaluators import ComputationGraph
from twowaygym.automata.machine import SurfaceConfig, TwoWayAutomaton


def _node_shape(A: TwoWayAutomaton, q: str) -> str:
    if q in A.accepting:
        return "doublecircle"
    if q in A.rejecting:
        return "octagon"
    if q in A.universal:
        return "box"
    return "ellipse"


def automaton_to_dot(A: TwoWayAutomaton) -> graphviz.Digraph:
    """
    State diagram; parallel transitions between two states share one edge with stacked labels.
    ∀ states are boxes, ∃ states ellipses and accepting states double circles.
    """
    dot = graphviz.Digraph(A.name or "automaton", graph_attr=dict(rankdir="LR"))
    dot.attr("node", fontname="Monospace", fontsize="10")
    dot.node("<start>", label="", shape="point")
    idx = A.state_index()
    for q in A.states:
        dot.node(f"q{idx[q]}", label=str(q), shape=_node_shape(A, q))
    dot.edge("<start>", f"q{idx[A.initial]}")
    by_pair: dict[tuple[str, str], list[str]] = {}
    for (q, s), moves in A.transitions.items():
        for k, (p, d) in enumerate(moves):
            label = f"{s},{d:+d}" if len(moves) == 1 else f"{s},{d:+d} [{k}]"
            by_pair.setdefault((f"q{idx[q]}", f"q{idx[p]}"), []).append(label)
    for (u, v), labels in by_pair.items():
        dot.edge(u, v, label="\n".join(sorted(labels)))
    return dot


def computation_graph_to_dot(A: TwoWayAutomaton, graph: ComputationGraph) -> graphviz.Digraph:
    """
    One cluster per level; nodes are labeled `state@head` and filled when labeled ACCEPT.
    """
    dot = graphviz.Digraph("computation", graph_attr=dict(rankdir="TB"))
    dot.attr("node", fontname="Monospace", fontsize="9")

    def node_id(depth: int, c: SurfaceConfig) -> str:
        return f"d{depth}_{A.states.index(c.state)}_{c.head}"

    for depth, level in enumerate(graph.levels):
        accepted = graph.labels[depth] if depth < len(graph.labels) else frozenset()
        with dot.subgraph(name=f"cluster_{depth}") as sub:
            sub.attr(label=f"level {depth} ({level.quantifier_label})", style="dashed")
            for c in level.configs:
                style = {"style": "filled", "fillcolor": "palegreen"} if c in accepted else {}
                sub.node(node_id(depth, c), label=f"{c.state}@{c.head}", shape=_node_shape(A, c.state), **style)
    for depth, level_edges in enumerate(graph.edges):
        for parent, child in level_edges:
            dot.edge(node_id(depth, parent), node_id(depth + 1, child))
    return dot

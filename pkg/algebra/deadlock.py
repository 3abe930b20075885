from __future__ import annotations

from typing import FrozenSet, Tuple

import networkx as nx

from schemas.lts_spec import LTS, Label, State, label_key


def deadlock_states(lts: LTS, include_final: bool = False) -> FrozenSet[State]:
    """Reachable states without outgoing transitions. Final states are legal sinks unless asked for."""
    graph = lts.to_graph()
    sinks = {s for s in lts.reachable if graph.out_degree(s) == 0}
    if not include_final:
        sinks -= lts.final
    return frozenset(sinks)


def trace_to(lts: LTS, state: State) -> Tuple[Label, ...]:
    """Labels along a shortest path from the initial state to `state`."""
    graph = lts.to_graph()
    nodes = nx.shortest_path(graph, lts.initial, state)
    labels = []
    for src, dst in zip(nodes, nodes[1:]):
        edges = graph.get_edge_data(src, dst).values()
        labels.append(min((e["label"] for e in edges), key=label_key))
    return tuple(labels)

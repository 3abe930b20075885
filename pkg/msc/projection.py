"""
msc/projection.py

From charts to behaviors. A bMSC is a total order of synchronous events;
an instance's projection keeps the events it takes part in, as outputs when
it sends and inputs when it receives. The HMSC glues node projections end
to start, and the result is determinized and minimized.
"""
from __future__ import annotations

import logging
from typing import List

from algebra import minimize
from schemas.errors import UnknownInstance
from schemas.lts_spec import LTS, TAU, Action, Kind, Polarity, Transition
from schemas.msc_spec import BMSC, EnhancementSpec, MscEvent

logger = logging.getLogger(__name__)


def event_action(event: MscEvent, instance: str) -> Action:
    polarity = Polarity.OUTPUT if event.sender == instance else Polarity.INPUT
    return Action(event.channel, event.message, polarity, event.kind or Kind.REQUEST)


def project_instance(chart: BMSC, instance: str) -> LTS:
    """Linear LTS over the events of `chart` involving `instance`; the last state is final."""
    chart.require(instance)
    actions = [event_action(ev, instance) for ev in chart.events if ev.involves(instance)]
    transitions = [(i, action, i + 1) for i, action in enumerate(actions)]
    return LTS.build(
        name=f"{chart.name}.{instance}",
        initial=0,
        transitions=transitions,
        final=[len(actions)],
    )


def msc_to_lts(spec: EnhancementSpec, instance: str) -> LTS:
    """
    The behavior of `instance` across the whole HMSC. Each node contributes
    its projection; tau edges join a node's last state to the first state of
    each successor; the last states of final nodes are final.
    """
    if instance not in spec.instances:
        raise UnknownInstance(f"[MSC ERROR] instance {instance!r} does not occur in enhancement {spec.name}")

    hmsc = spec.hmsc
    transitions: List[Transition] = []
    ends = {}
    for node_id, chart_name in hmsc.nodes.items():
        chart = spec.bmsc(chart_name) if chart_name is not None else None
        if chart is None or instance not in chart.instances:
            ends[node_id] = (node_id, 0)
            continue
        proj = project_instance(chart, instance)
        transitions.extend(((node_id, s), label, (node_id, d)) for s, label, d in proj.transitions)
        ends[node_id] = (node_id, max(proj.states))

    for src, dst in hmsc.edges:
        transitions.append((ends[src], TAU, (dst, 0)))

    nfa = LTS.build(
        name=instance,
        initial=(hmsc.initial, 0),
        transitions=transitions,
        final=[ends[n] for n in hmsc.final],
        states=[(n, 0) for n in hmsc.nodes],
    )
    result = minimize(nfa)
    logger.info(f"[MSC] {spec.name}: {instance} has {len(nfa.states)} chart states, "
                f"{len(result.states)} after minimization")
    return result

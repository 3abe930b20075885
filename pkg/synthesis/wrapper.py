"""
synthesis/wrapper.py

The wrapper W is the enhancement specification's wrapper instance, moved
onto its own connectors: traffic with the coordinator goes through K' on the
w' channels, traffic with the target components through K'' on the w''
channels.
"""
from __future__ import annotations

import logging
from dataclasses import replace
from typing import Dict, Iterable, List, Tuple

from algebra import assign_kinds
from architecture.closure import resolve_coordinator
from msc.projection import msc_to_lts
from schemas.errors import EnhancementError
from schemas.lts_spec import Action, Kind, label_key, state_key
from schemas.msc_spec import BMSC, HMSC, EnhancementSpec, MscEvent
from schemas.system_spec import Binding, CBASystem, Component, Port, Side
from synthesis.decouple import ChannelMap, plan_channel_map
from synthesis.sub_coordinator import extract_sub_coordinator

logger = logging.getLogger(__name__)


def resolve_spec_channels(spec: EnhancementSpec, cmap: ChannelMap) -> EnhancementSpec:
    """Rewrite every chart channel back to the original cut channel it names."""
    if cmap.is_empty:
        return spec

    def resolve(ev: MscEvent) -> MscEvent:
        orig = cmap.original(ev.channel)
        if orig is None:
            raise EnhancementError(
                f"[WRAPPER ERROR] '{ev}' uses channel {ev.channel}, which is not a cut channel "
                f"(cut: {list(cmap.channels)})"
            )
        return replace(ev, channel=orig)

    return spec.map_events(resolve)


def derive_wrapper(spec: EnhancementSpec, cmap: ChannelMap) -> Component:
    wrapper = spec.wrapper
    resolved = resolve_spec_channels(spec, cmap)
    kinds: Dict[Tuple[int, str], Kind] = {}
    explicit: Dict[Tuple[int, str], Kind] = {}

    def rewrite(ev: MscEvent) -> MscEvent:
        if not ev.involves(wrapper):
            return ev
        partner = ev.partner(wrapper)
        if partner == spec.coordinator:
            channel = cmap.wrapper_coordinator_side[ev.channel]
        elif partner in spec.targets:
            if cmap.owners.get(ev.channel) != partner:
                raise EnhancementError(
                    f"[WRAPPER ERROR] '{ev}': channel {ev.channel} does not lead to {partner}"
                )
            channel = cmap.wrapper_component_side[ev.channel]
        else:
            raise EnhancementError(
                f"[WRAPPER ERROR] '{ev}': wrapper {wrapper} may only talk to {spec.coordinator} "
                f"or the targets {', '.join(spec.targets)}"
            )
        base = cmap.kinds.get((ev.channel, ev.message))
        if base is not None:
            kinds[(channel, ev.message)] = base
        if ev.kind is not None:
            explicit[(channel, ev.message)] = ev.kind
        return replace(ev, channel=channel)

    rewired = resolved.map_events(rewrite)
    kinds.update(explicit)
    behavior = assign_kinds(msc_to_lts(rewired, wrapper), kinds).renamed(wrapper)

    bindings: List[Binding] = []
    next_index = {Side.TOP: 1, Side.BOTTOM: 1}

    def port(side: Side, channel: int) -> None:
        bindings.append(Binding.oriented(Port(wrapper, side, next_index[side]), channel))
        next_index[side] += 1

    # toward K' the wrapper stands where the target stood, toward K'' where the coordinator stood
    for ch in cmap.channels:
        port(cmap.target_sides[ch], cmap.wrapper_coordinator_side[ch])
    for ch in cmap.channels:
        port(cmap.target_sides[ch].opposite, cmap.wrapper_component_side[ch])

    logger.info(f"[Wrapper] {wrapper}: {len(behavior.states)} states, "
                f"{len(behavior.transitions)} transitions, channels {sorted(behavior.channels)}")
    return Component(name=wrapper, behavior=behavior, bindings=tuple(bindings), is_coordinator=False)


def identity_enhancement(
    system: CBASystem,
    coordinator: str,
    targets: Iterable[str],
    wrapper: str = "W",
) -> EnhancementSpec:
    """
    A pass-through enhancement: one chart per sub-coordinator transition in
    which the wrapper forwards the message unchanged.
    """
    targets = tuple(targets)
    coord = resolve_coordinator(system, coordinator)
    kbac = extract_sub_coordinator(coord, targets, system)
    cmap = plan_channel_map(system, coordinator, targets)
    lts = kbac.behavior

    instances = (*targets, wrapper, coordinator)
    charts: List[BMSC] = [BMSC(name="idle", instances=instances)]
    nodes: Dict[str, str] = {"start": "idle"}
    edges: List[Tuple[str, str]] = []
    final = {"start"} if lts.initial in lts.final else set()

    ordered = sorted(lts.transitions, key=lambda t: (state_key(t[0]), label_key(t[1]), state_key(t[2])))
    for i, (src, label, dst) in enumerate(ordered):
        if not isinstance(label, Action):
            raise EnhancementError(f"[WRAPPER ERROR] {kbac.source}: cannot forward {label}")
        target = cmap.owners[label.channel]
        if label.is_input:
            hops = [(target, wrapper), (wrapper, coordinator)]
        else:
            hops = [(coordinator, wrapper), (wrapper, target)]
        events = tuple(MscEvent(a, b, label.message, label.channel, label.kind) for a, b in hops)
        node = f"t{i}"
        charts.append(BMSC(name=node, instances=instances, events=events))
        nodes[node] = node
        if src == lts.initial:
            edges.append(("start", node))
        if dst in lts.final:
            final.add(node)
    for i, (_, _, dst) in enumerate(ordered):
        for j, (src, _, _) in enumerate(ordered):
            if dst == src:
                edges.append((f"t{i}", f"t{j}"))

    return EnhancementSpec(
        name="identity",
        bmscs=tuple(charts),
        hmsc=HMSC(nodes=nodes, edges=tuple(edges), initial="start", final=frozenset(final)),
        wrapper=wrapper,
        coordinator=coordinator,
        targets=targets,
        note="pass-through wrapper",
    )

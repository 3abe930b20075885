"""
synthesis/router.py

K' and K'' are routing-only coordinators: they accept a message on one
channel and immediately emit it, unrenamed, on another.

On its own a router is a star around one idle state and takes any routed
message at any time. Inside a glue it is guarded by the wrapper's protocol
on the channels the two share: it only picks up a message the wrapper
takes part in next.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Set, Tuple

from algebra import assign_kinds, determinize, hide, minimize
from schemas.errors import GlueError
from schemas.lts_spec import LTS, Action, Kind, Polarity, format_label
from schemas.system_spec import Binding, CBASystem, Component, Port, Side
from synthesis.decouple import ChannelMap

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Route:
    source: int
    target: int
    messages: Tuple[str, ...]


def _carried(routes: Sequence[Route], name: str) -> Dict[Tuple[int, str], int]:
    """(source channel, message) -> target channel."""
    carried: Dict[Tuple[int, str], int] = {}
    for route in routes:
        if route.source == route.target:
            raise GlueError(f"[ROUTER ERROR] {name}: route {route.source} -> {route.target} loops")
        if not route.messages:
            raise GlueError(f"[ROUTER ERROR] {name}: route {route.source} -> {route.target} carries nothing")
        for message in sorted(set(route.messages)):
            if (route.source, message) in carried:
                raise GlueError(f"[ROUTER ERROR] {name}: {route.source}?{message} routed twice")
            carried[(route.source, message)] = route.target
    return carried


def _star(carried: Mapping[Tuple[int, str], int], name: str) -> LTS:
    transitions = []
    for (source, message), target in sorted(carried.items()):
        busy = ("fwd", target, message)
        transitions.append((0, Action(source, message, Polarity.INPUT), busy))
        transitions.append((busy, Action(target, message, Polarity.OUTPUT), 0))
    return LTS.build(name=name, initial=0, transitions=transitions, final=[0])


def _guarded(carried: Mapping[Tuple[int, str], int], guard: LTS, name: str) -> LTS:
    delivered: Dict[Tuple[int, str], int] = {}
    for (source, message), target in carried.items():
        if delivered.setdefault((target, message), source) != source:
            raise GlueError(f"[ROUTER ERROR] {name}: {target}!{message} is fed from two channels")

    transitions = []
    for src, label, dst in guard.transitions:
        if not isinstance(label, Action):
            raise GlueError(f"[ROUTER ERROR] {name}: guard label {label} is not an action")
        key = (label.channel, label.message)
        # the wrapper's output is the router's input, and the other way round
        if label.is_output:
            source, target = label.channel, carried.get(key)
        else:
            source, target = delivered.get(key), label.channel
        if source is None or target is None:
            raise GlueError(f"[ROUTER ERROR] {name}: no route carries {format_label(label)}")
        busy = ("fwd", src, source, label.message)
        transitions.append((src, Action(source, label.message, Polarity.INPUT), busy))
        transitions.append((busy, Action(target, label.message, Polarity.OUTPUT), dst))
    return LTS.build(name=name, initial=guard.initial, transitions=transitions,
                     final=guard.states, states=guard.states)


def synthesize_router(
    routes: Sequence[Route],
    name: str = "K",
    bindings: Iterable[Binding] = (),
    kinds: Optional[Mapping[Tuple[int, str], Kind]] = None,
    guard: Optional[LTS] = None,
) -> Component:
    """
    A router carrying every message of every route from its source channel
    to its target channel. `guard`, when given, is the wrapper's protocol on
    the router's wrapper-facing channels, as the wrapper sees them.
    """
    carried = _carried(routes, name)
    raw = _star(carried, name) if guard is None else _guarded(carried, guard, name)
    behavior = minimize(raw)
    if kinds:
        behavior = assign_kinds(behavior, kinds)
    logger.debug(f"[Router] {name}: {len(routes)} route(s), {len(behavior.states)} states"
                 f"{' (guarded)' if guard is not None else ''}")
    return Component(name=name, behavior=behavior, bindings=tuple(bindings), is_coordinator=True)


def port_protocol(lts: LTS, channels: Iterable[int]) -> LTS:
    """What `lts` does on `channels`, as a deterministic prefix-closed protocol."""
    seen = determinize(hide(lts, channels))
    return minimize(replace(seen, final=seen.states))


def next_names(system: CBASystem, prefix: str, count: int, taken: Iterable[str] = ()) -> List[str]:
    """The next `count` free names `<prefix><n>`, n counting from 1."""
    used = set(system.component_names) | {g.name for g in system.glue} | set(taken)
    names: List[str] = []
    n = 1
    while len(names) < count:
        candidate = f"{prefix}{n}"
        if candidate not in used:
            names.append(candidate)
        n += 1
    return names


def _messages(lts: LTS, channel: int, output: bool) -> Set[str]:
    return {
        label.message for label in lts.alphabet
        if isinstance(label, Action) and label.channel == channel and label.is_output == output
    }


class _Ports:
    def __init__(self, owner: str):
        self.owner = owner
        self.bindings: List[Binding] = []
        self.index = {Side.TOP: 1, Side.BOTTOM: 1}

    def add(self, side: Side, channel: int) -> None:
        self.bindings.append(Binding.oriented(Port(self.owner, side, self.index[side]), channel))
        self.index[side] += 1


def build_routers(
    system: CBASystem,
    cmap: ChannelMap,
    wrapper: Component,
    names: Tuple[str, str],
) -> Tuple[Component, Component]:
    """
    K' between the decoupled coordinator and the wrapper, K'' between the
    wrapper and the decoupled targets. `system` is the decoupled system.
    Each direction carries the union of what either party can put on it;
    both routers are guarded by the wrapper's protocol on their shared channels.
    """
    w = wrapper.behavior
    up_routes: List[Route] = []
    down_routes: List[Route] = []
    up_ports, down_ports = _Ports(names[0]), _Ports(names[1])
    kinds: Dict[Tuple[int, str], Kind] = {}

    for ch in cmap.channels:
        c1, c2 = cmap.coordinator_side[ch], cmap.component_side[ch]
        w1, w2 = cmap.wrapper_coordinator_side[ch], cmap.wrapper_component_side[ch]
        coord = system.component(cmap.coordinator_owners[ch]).behavior
        target = system.component(cmap.owners[ch]).behavior

        for src, dst, msgs in (
            (w1, c1, _messages(w, w1, True) | _messages(coord, c1, False)),
            (c1, w1, _messages(coord, c1, True) | _messages(w, w1, False)),
        ):
            if msgs:
                up_routes.append(Route(src, dst, tuple(sorted(msgs))))
        for src, dst, msgs in (
            (c2, w2, _messages(target, c2, True) | _messages(w, w2, False)),
            (w2, c2, _messages(w, w2, True) | _messages(target, c2, False)),
        ):
            if msgs:
                down_routes.append(Route(src, dst, tuple(sorted(msgs))))

        for label in w.alphabet:
            if isinstance(label, Action) and label.channel in (w1, w2):
                kinds.setdefault((ch, label.message), label.kind)
        for (orig, message), kind in cmap.kinds.items():
            if orig == ch:
                kinds[(ch, message)] = kind

        up_ports.add(cmap.target_sides[ch], c1)
        up_ports.add(cmap.target_sides[ch].opposite, w1)
        down_ports.add(cmap.target_sides[ch], w2)
        down_ports.add(cmap.target_sides[ch].opposite, c2)

    fresh_kinds = {
        (fresh, message): kind
        for (ch, message), kind in kinds.items()
        for fresh in (cmap.coordinator_side[ch], cmap.component_side[ch],
                      cmap.wrapper_coordinator_side[ch], cmap.wrapper_component_side[ch])
    }
    up_guard = port_protocol(w, cmap.wrapper_coordinator_side.values())
    down_guard = port_protocol(w, cmap.wrapper_component_side.values())
    k_up = synthesize_router(up_routes, names[0], up_ports.bindings, fresh_kinds, guard=up_guard)
    k_down = synthesize_router(down_routes, names[1], down_ports.bindings, fresh_kinds, guard=down_guard)
    logger.info(f"[Router] {k_up.name} ({len(k_up.behavior.states)} states) toward the coordinator, "
                f"{k_down.name} ({len(k_down.behavior.states)} states) toward the components")
    return k_up, k_down

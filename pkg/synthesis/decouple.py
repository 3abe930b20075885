"""
synthesis/decouple.py

Decoupling cuts every direct connector between the coordinator and the
target components. Each cut channel c gets four fresh ids:

    c'   coordinator <-> K'        c''  component <-> K''
    w'   wrapper     <-> K'        w''  wrapper   <-> K''

Allocation order: (c', c'') for each target channel in ascending order,
then (w', w'') for each channel in the same order.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from typing import Dict, Iterable, Optional, Tuple

from algebra import relabel_channels
from architecture.closure import resolve_coordinator
from schemas.lts_spec import Action, Kind
from schemas.system_spec import Binding, CBASystem, Side
from synthesis.sub_coordinator import target_channels

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ChannelMap:
    coordinator: str = ""
    coordinator_side: Dict[int, int] = field(default_factory=dict)
    component_side: Dict[int, int] = field(default_factory=dict)
    wrapper_coordinator_side: Dict[int, int] = field(default_factory=dict)
    wrapper_component_side: Dict[int, int] = field(default_factory=dict)
    # channel -> target component, its port side, and the coordinator-side port owner
    owners: Dict[int, str] = field(default_factory=dict)
    target_sides: Dict[int, Side] = field(default_factory=dict)
    coordinator_owners: Dict[int, str] = field(default_factory=dict)
    kinds: Dict[Tuple[int, str], Kind] = field(default_factory=dict)
    next_fresh: int = 1

    @property
    def channels(self) -> Tuple[int, ...]:
        return tuple(sorted(self.coordinator_side))

    @property
    def is_empty(self) -> bool:
        return not self.coordinator_side

    def original(self, channel: int) -> Optional[int]:
        """The cut channel that `channel` stands for, whichever side it is on."""
        if channel in self.coordinator_side:
            return channel
        for table in (self.coordinator_side, self.component_side,
                      self.wrapper_coordinator_side, self.wrapper_component_side):
            for orig, fresh in table.items():
                if fresh == channel:
                    return orig
        return None

    def as_dict(self) -> Dict[str, Dict]:
        return {
            c: {
                "target": self.owners[c],
                "coordinator_side": self.coordinator_side[c],
                "component_side": self.component_side[c],
                "wrapper_coordinator_side": self.wrapper_coordinator_side[c],
                "wrapper_component_side": self.wrapper_component_side[c],
            }
            for c in self.channels
        }


def _collect_kinds(behaviors, channels) -> Dict[Tuple[int, str], Kind]:
    kinds: Dict[Tuple[int, str], Kind] = {}
    actions = [l for b in behaviors for l in b.alphabet if isinstance(l, Action) and l.channel in channels]
    # the sender decides a message's kind
    for label in sorted(actions, key=lambda l: (not l.is_output, l.channel, l.message)):
        kinds.setdefault((label.channel, label.message), label.kind)
    return kinds


def plan_channel_map(system: CBASystem, coordinator: str, targets: Iterable[str]) -> ChannelMap:
    """The ChannelMap `decouple` will produce, without touching the system."""
    targets = tuple(targets)
    if not targets:
        return ChannelMap(coordinator=coordinator, next_fresh=system.fresh_from)
    coord = resolve_coordinator(system, coordinator)
    shared = target_channels(coord, targets, system)

    owners = {ch: name for name, chs in shared.items() for ch in chs}
    channels = sorted(owners)
    fresh = system.fresh_from
    coordinator_side, component_side = {}, {}
    for ch in channels:
        coordinator_side[ch], component_side[ch] = fresh, fresh + 1
        fresh += 2
    wrapper_coordinator_side, wrapper_component_side = {}, {}
    for ch in channels:
        wrapper_coordinator_side[ch], wrapper_component_side[ch] = fresh, fresh + 1
        fresh += 2

    coordinator_owners = {ch: coord.binding_for(ch).port.owner for ch in channels}
    target_sides = {ch: system.component(owners[ch]).binding_for(ch).port.side for ch in channels}
    parties = [system.component(n).behavior for n in sorted(set(owners.values()) | set(coordinator_owners.values()))]

    return ChannelMap(
        coordinator=coord.name,
        coordinator_side=coordinator_side,
        component_side=component_side,
        wrapper_coordinator_side=wrapper_coordinator_side,
        wrapper_component_side=wrapper_component_side,
        owners=owners,
        target_sides=target_sides,
        coordinator_owners=coordinator_owners,
        kinds=_collect_kinds(parties, set(channels)),
        next_fresh=fresh,
    )


def decouple(system: CBASystem, coordinator: str, targets: Iterable[str]) -> Tuple[CBASystem, ChannelMap]:
    cmap = plan_channel_map(system, coordinator, targets)
    if cmap.is_empty:
        return system, cmap

    renames: Dict[str, Dict[int, int]] = {}
    for ch in cmap.channels:
        renames.setdefault(cmap.coordinator_owners[ch], {})[ch] = cmap.coordinator_side[ch]
        renames.setdefault(cmap.owners[ch], {})[ch] = cmap.component_side[ch]

    components = []
    for c in system.components:
        mapping = renames.get(c.name)
        if not mapping:
            components.append(c)
            continue
        bindings = tuple(
            Binding(port=b.port, connector=mapping.get(b.connector, b.connector), role=b.role)
            for b in c.bindings
        )
        components.append(replace(c, behavior=relabel_channels(c.behavior, mapping), bindings=bindings))
        logger.info(f"[Decouple] {c.name}: {', '.join(f'{k}->{v}' for k, v in sorted(mapping.items()))}")

    decoupled = replace(system, components=tuple(components), fresh_from=cmap.next_fresh)
    return decoupled, cmap

"""
synthesis/glue.py

The enhanced glue (K | K' | K'' | W): a glue block in the enhanced system
whose collapsed behavior is the composite coordinator.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

from algebra import deadlock_states, relabel_channels, trace_to
from architecture.closure import collapse_glue
from schemas.errors import DeadlockError
from schemas.lts_spec import LTS, state_key
from schemas.system_spec import CBASystem, Component
from schemas.verdict import Verdict
from synthesis.decouple import ChannelMap

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EnhancedGlue:
    name: str
    old_coordinator: Component
    router_to_coordinator: Component
    router_to_components: Component
    wrapper: Component
    composite: LTS
    channel_map: ChannelMap

    @property
    def members(self):
        return (self.old_coordinator, self.router_to_coordinator,
                self.router_to_components, self.wrapper)

    @property
    def state_bound(self) -> int:
        bound = 1
        for member in self.members:
            bound *= len(member.behavior.states)
        return bound


def assemble_glue(system: CBASystem, name: str, old: str, routers, wrapper: Component,
                  cmap: ChannelMap) -> EnhancedGlue:
    """
    Collapse glue block `name` of the enhanced system and refuse it when the
    composite can get stuck outside a final state.
    """
    old_view = collapse_glue(system, old) if system.glue_block(old) else system.component(old)
    composite = collapse_glue(system, name).behavior

    stuck = sorted(deadlock_states(composite), key=state_key)
    if stuck:
        trace = trace_to(composite, stuck[0])
        logger.error(f"[Glue] {name}: {len(stuck)} deadlock state(s)")
        raise DeadlockError(stuck[0], trace)

    glue = EnhancedGlue(
        name=name,
        old_coordinator=old_view,
        router_to_coordinator=routers[0],
        router_to_components=routers[1],
        wrapper=wrapper,
        composite=composite,
        channel_map=cmap,
    )
    logger.info(f"[Glue] {name}: composite has {len(composite.states)} states "
                f"(product bound {glue.state_bound})")
    return glue


def check_glue_containment(first: EnhancedGlue, second: EnhancedGlue, system: CBASystem) -> Verdict:
    """
    The second glue of `system` wraps the first one unchanged: every member
    of the first is still inside it, and the second's old-coordinator view,
    with its fresh coordinator-side channels read back, is the first composite.
    """
    inside = set(system.glue_members(second.name))
    expected = [n for m in first.members for n in system.glue_members(m.name)]
    missing = [n for n in expected if n not in inside]
    if missing:
        return Verdict(ok=False, detail=f"{second.name} lost member(s) {', '.join(missing)}")

    back = {fresh: orig for orig, fresh in second.channel_map.coordinator_side.items()}
    restored = relabel_channels(second.old_coordinator.behavior, back).canonical()
    if restored != first.composite.canonical():
        return Verdict(ok=False, detail=f"{second.name} does not contain {first.name} unchanged")
    return Verdict.passed(f"{second.name} contains {first.name} unchanged")

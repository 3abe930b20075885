"""
pipeline.py

The enhancement pipeline: from a CBA system S and an enhancement E to the
enhanced system S' whose coordinator is the glue (K | K' | K'' | W).

    extract_sub_coordinator -> check_conformance -> decouple
        -> derive_wrapper -> synthesize routers -> assemble S' and its glue
"""
from __future__ import annotations

import logging
from dataclasses import replace
from typing import Dict, Optional, Tuple

from algebra import deadlock_states, trace_to
from architecture.closure import close_system, resolve_coordinator
from config import GLUE_PREFIX, ROUTER_PREFIX
from schemas.errors import ConformanceError, DeadlockError, EnhancementError, OpenSystemError
from schemas.lts_spec import state_key
from schemas.msc_spec import EnhancementSpec
from schemas.system_spec import CBASystem, Component, GlueBlock
from synthesis.conformance import check_conformance
from synthesis.decouple import decouple, plan_channel_map
from synthesis.glue import EnhancedGlue, assemble_glue
from synthesis.router import build_routers, next_names
from synthesis.sub_coordinator import extract_sub_coordinator
from synthesis.wrapper import derive_wrapper
from validator.validate_all import ensure_valid

logger = logging.getLogger(__name__)


def _canonical(component: Component) -> Component:
    return replace(component, behavior=component.behavior.canonical())


def _check_closed_system(system: CBASystem) -> None:
    try:
        closed = close_system(system)
    except OpenSystemError as e:
        logger.warning(f"[Enhance] {system.name} is open, closed-system deadlock check skipped: {e}")
        return
    stuck = sorted(deadlock_states(closed), key=state_key)
    if stuck:
        logger.error(f"[Enhance] {system.name}: closed system reaches {len(stuck)} deadlock state(s)")
        raise DeadlockError(stuck[0], trace_to(closed, stuck[0]))


def apply_enhancement(
    system: CBASystem,
    spec: EnhancementSpec,
    coordinator: Optional[str] = None,
) -> Tuple[CBASystem, EnhancedGlue]:
    """
    Apply `spec` to `system`. `coordinator` overrides the spec's coordinator
    instance (a component, a glue block, or a member of one). Raises
    ConformanceError when the charts do not reflect the coordinator and
    DeadlockError when the glue or the enhanced system can get stuck.
    """
    coord_name = coordinator or spec.coordinator
    logger.info(f"[Enhance] {spec.name} on {system.name}: coordinator {coord_name}, "
                f"targets {', '.join(spec.targets)}")
    ensure_valid(system)

    coord = resolve_coordinator(system, coord_name)
    if system.has_component(spec.wrapper) or system.glue_block(spec.wrapper):
        raise EnhancementError(f"[ENHANCE ERROR] wrapper name {spec.wrapper} is already used in {system.name}")

    kbac = extract_sub_coordinator(coord, spec.targets, system)
    verdict = check_conformance(kbac, spec, plan_channel_map(system, coord_name, spec.targets))
    if not verdict:
        raise ConformanceError(verdict)

    decoupled, cmap = decouple(system, coord_name, spec.targets)
    wrapper = derive_wrapper(spec, cmap)
    router_names = next_names(decoupled, ROUTER_PREFIX, 2, taken=[spec.wrapper])
    k_up, k_down = build_routers(decoupled, cmap, wrapper, tuple(router_names))

    glue_name = next_names(decoupled, GLUE_PREFIX, 1, taken=[spec.wrapper, *router_names])[0]
    block = GlueBlock(name=glue_name, members=(coord.name, k_up.name, k_down.name, wrapper.name))
    enhanced = CBASystem(
        name=system.name,
        components=tuple(_canonical(c) for c in (*decoupled.components, k_up, k_down, wrapper)),
        fresh_from=cmap.next_fresh,
        glue=(*decoupled.glue, block),
    )
    ensure_valid(enhanced)

    glue = assemble_glue(
        enhanced,
        glue_name,
        coord.name,
        (enhanced.component(k_up.name), enhanced.component(k_down.name)),
        enhanced.component(wrapper.name),
        cmap,
    )
    _check_closed_system(enhanced)
    logger.info(f"[Enhance] {spec.name}: {system.name} enhanced with glue {glue_name} "
                f"({', '.join(block.members)})")
    return enhanced, glue


def enhancement_metrics(system: CBASystem, enhanced: CBASystem, glue: EnhancedGlue) -> Dict[str, int]:
    """State counts reported in the run manifest."""
    metrics = {
        "old_coordinator_states": len(glue.old_coordinator.behavior.states),
        "router_to_coordinator_states": len(glue.router_to_coordinator.behavior.states),
        "router_to_components_states": len(glue.router_to_components.behavior.states),
        "wrapper_states": len(glue.wrapper.behavior.states),
        "glue_states": len(glue.composite.states),
        "glue_transitions": len(glue.composite.transitions),
        "glue_state_bound": glue.state_bound,
    }
    try:
        metrics["closed_states_before"] = len(close_system(system).states)
        metrics["closed_states_after"] = len(close_system(enhanced).states)
    except OpenSystemError:
        pass
    return metrics

"""
architecture/closure.py

Behavioral views of a CBASystem: the closed system (every connector
synchronized) and the coordinator view of a glue block.
"""
from __future__ import annotations

import logging
from typing import FrozenSet

from algebra import compose_all
from schemas.errors import OpenSystemError
from schemas.lts_spec import LTS, Action, format_label, label_key
from schemas.system_spec import CBASystem, Component

logger = logging.getLogger(__name__)


def close_system(system: CBASystem) -> LTS:
    """
    Left fold of parallel composition over all component behaviors in
    declared order, synchronizing on every connector channel. The result
    carries only Sync (and tau) labels and does not depend on the order.
    """
    closed = compose_all(
        [c.behavior for c in system.components],
        system.channels,
        name=system.name,
        declared=[c.channels for c in system.components],
    )
    open_labels = sorted(
        (label for label in closed.alphabet if isinstance(label, Action)), key=label_key
    )
    if open_labels:
        shown = ", ".join(format_label(label, with_kind=False) for label in open_labels)
        raise OpenSystemError(
            f"[OPEN SYSTEM ERROR] {system.name}: actions without a partner: {shown}",
            open_labels,
        )
    logger.info(f"[Closure] {system.name}: closed system has {len(closed.states)} states, "
                f"{len(closed.transitions)} transitions")
    return closed


def internal_channels(system: CBASystem, members) -> FrozenSet[int]:
    """Connectors whose every bound port belongs to one of `members`."""
    inside = set(members)
    return frozenset(
        channel
        for channel, bindings in system.bindings_by_channel().items()
        if all(b.port.owner in inside for b in bindings)
    )


def collapse_glue(system: CBASystem, name: str) -> Component:
    """
    The coordinator view of glue block `name`: members composed in declared
    order, synchronized on glue-internal channels, exposing the members'
    bindings on external connectors. A nested block enters the fold as its
    own collapsed behavior, so an older glue keeps its exact composite.
    """
    block = system.glue_block(name)
    members = system.glue_members(name)
    internal = internal_channels(system, members)
    parts = [
        collapse_glue(system, m) if system.glue_block(m) is not None else system.component(m)
        for m in block.members
    ]
    behavior = compose_all([p.behavior for p in parts], internal, name=name,
                           declared=[p.channels for p in parts])
    bindings = tuple(
        b for m in members for b in system.component(m).bindings if b.connector not in internal
    )
    logger.debug(f"[Closure] glue {name}: {len(members)} member(s), internal channels "
                 f"{sorted(internal)}, {len(behavior.states)} states")
    return Component(name=name, behavior=behavior, bindings=bindings, is_coordinator=True)


def resolve_coordinator(system: CBASystem, name: str) -> Component:
    """
    A coordinator by name. Glue blocks, and components sitting inside one,
    resolve to the collapsed view of their outermost block.
    """
    if system.glue_block(name) is not None:
        outer = system.outermost_glue(system.glue_members(name)[0])
        return collapse_glue(system, outer.name if outer else name)
    outer = system.outermost_glue(name)
    if outer is not None:
        return collapse_glue(system, outer.name)
    return system.component(name)

"""
synthesis/sub_coordinator.py

The portion of a coordinator that talks to the target components: its
behavior filtered to their channels, then made deterministic and minimal.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, Tuple

from algebra import determinize, hide, minimize
from schemas.errors import GlueError, NotConnected
from schemas.lts_spec import LTS
from schemas.system_spec import CBASystem, Component

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SubCoordinator:
    source: str
    target_channels: FrozenSet[int]
    behavior: LTS


def target_channels(coord: Component, targets: Iterable[str], system: CBASystem) -> Dict[str, Tuple[int, ...]]:
    """Connector ids shared by `coord` and each target, in target order."""
    shared: Dict[str, Tuple[int, ...]] = {}
    for name in targets:
        channels = tuple(sorted(coord.channels & system.component(name).channels))
        if not channels:
            raise NotConnected(f"[SYNTHESIS ERROR] target {name} shares no connector with {coord.name}")
        shared[name] = channels
    return shared


def extract_sub_coordinator(coord: Component, targets: Iterable[str], system: CBASystem) -> SubCoordinator:
    targets = tuple(targets)
    if not coord.is_coordinator:
        raise GlueError(f"[SYNTHESIS ERROR] {coord.name} is not a coordinator")
    if not targets:
        raise GlueError(f"[SYNTHESIS ERROR] no target components given for {coord.name}")

    channels = frozenset(ch for chs in target_channels(coord, targets, system).values() for ch in chs)
    behavior = minimize(determinize(hide(coord.behavior, channels))).renamed(f"{coord.name}_BAC")
    logger.info(f"[Extract] {coord.name} on {sorted(channels)}: {len(coord.behavior.states)} -> "
                f"{len(behavior.states)} states")
    return SubCoordinator(source=coord.name, target_channels=channels, behavior=behavior)

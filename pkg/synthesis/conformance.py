"""
synthesis/conformance.py

An enhancement can only be applied when the coordinator instance of its
charts behaves exactly like the real sub-coordinator.
"""
from __future__ import annotations

import logging
from typing import Optional

from algebra import trace_equivalent
from msc.projection import msc_to_lts
from schemas.msc_spec import EnhancementSpec
from schemas.verdict import Verdict
from synthesis.decouple import ChannelMap
from synthesis.sub_coordinator import SubCoordinator
from synthesis.wrapper import resolve_spec_channels

logger = logging.getLogger(__name__)


def check_conformance(kbac: SubCoordinator, spec: EnhancementSpec,
                      cmap: Optional[ChannelMap] = None) -> Verdict:
    """
    Trace equivalence between the sub-coordinator and the coordinator
    instance's projection, chart channels read back onto the cut channels.
    """
    resolved = resolve_spec_channels(spec, cmap) if cmap is not None else spec
    expected = msc_to_lts(resolved, spec.coordinator).renamed(f"{spec.name}.{spec.coordinator}")
    verdict = trace_equivalent(kbac.behavior, expected)
    if verdict:
        logger.info(f"[Conformance] {spec.name} reflects {kbac.source}")
    else:
        logger.warning(f"[Conformance] {spec.name} does not reflect {kbac.source}: {verdict.detail}")
    return verdict

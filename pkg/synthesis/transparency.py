"""
synthesis/transparency.py
"""
from __future__ import annotations

import logging
from typing import Iterable, Optional

from algebra import hide, relabel_channels, trace_equivalent
from architecture.closure import close_system
from schemas.errors import GlueError
from schemas.system_spec import CBASystem
from schemas.verdict import Verdict
from synthesis.decouple import ChannelMap

logger = logging.getLogger(__name__)


def transparency_check(
    original: CBASystem,
    enhanced: CBASystem,
    untouched: Iterable[str],
    channel_map: Optional[ChannelMap] = None,
) -> Verdict:
    """
    Compare what the `untouched` components observe before and after an
    enhancement: both closed systems are hidden down to their channels and
    checked for trace equivalence. With a channel map, the fresh channels the
    decoupled coordinator and targets now use are read back as the original
    ones.
    """
    untouched = tuple(untouched)
    for name in untouched:
        if not (original.has_component(name) and enhanced.has_component(name)):
            raise GlueError(f"[TRANSPARENCY ERROR] {name} is not in both systems")

    before = hide(close_system(original), original.channels_of(untouched))
    after = hide(close_system(enhanced), enhanced.channels_of(untouched))
    if channel_map is not None and not channel_map.is_empty:
        back = {}
        # one image per original channel; the component side wins
        for table in (channel_map.component_side, channel_map.coordinator_side):
            for orig, fresh in table.items():
                if fresh in after.channels and orig not in back.values():
                    back[fresh] = orig
        after = relabel_channels(after, back)

    verdict = trace_equivalent(before.renamed(original.name), after.renamed(enhanced.name))
    shown = ", ".join(untouched)
    if verdict:
        logger.info(f"[Transparency] {shown}: observations preserved")
    else:
        logger.info(f"[Transparency] {shown}: observations differ ({verdict.witness_text})")
    return verdict

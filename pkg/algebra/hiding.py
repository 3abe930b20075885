from __future__ import annotations

from typing import Iterable

from schemas.lts_spec import LTS, TAU, label_channel


def hide(lts: LTS, keep_channels: Iterable[int]) -> LTS:
    """Relabel to tau every transition on a channel outside `keep_channels`."""
    keep = frozenset(keep_channels)
    transitions = frozenset(
        (src, label if label_channel(label) in keep else TAU, dst)
        for src, label, dst in lts.transitions
    )
    return LTS(
        name=lts.name,
        states=lts.states,
        initial=lts.initial,
        transitions=transitions,
        final=lts.final,
    )

"""
algebra/relabel.py

Channel renaming is how decoupling cuts a direct synchronization: the
coordinator and the component keep their behavior but stop sharing a channel.
"""
from __future__ import annotations

from dataclasses import replace
from typing import Mapping, Tuple

from schemas.errors import CollisionError
from schemas.lts_spec import LTS, Action, Kind, Label, Sync


def relabel_channels(lts: LTS, mapping: Mapping[int, int]) -> LTS:
    mapping = dict(mapping)
    images = list(mapping.values())
    if len(set(images)) != len(images):
        raise CollisionError(f"[RELABEL ERROR] {lts.name}: channel map {mapping} is not injective")
    clash = (lts.channels - mapping.keys()) & set(images)
    if clash:
        raise CollisionError(
            f"[RELABEL ERROR] {lts.name}: image channel(s) {sorted(clash)} already used unmapped"
        )

    def rewrite(label: Label) -> Label:
        if isinstance(label, (Action, Sync)) and label.channel in mapping:
            return replace(label, channel=mapping[label.channel])
        return label

    return LTS(
        name=lts.name,
        states=lts.states,
        initial=lts.initial,
        transitions=frozenset((s, rewrite(label), d) for s, label, d in lts.transitions),
        final=lts.final,
    )


def assign_kinds(lts: LTS, kinds: Mapping[Tuple[int, str], Kind]) -> LTS:
    """Set request/notification metadata from a (channel, message) table."""

    def rewrite(label: Label) -> Label:
        if isinstance(label, (Action, Sync)):
            kind = kinds.get((label.channel, label.message))
            if kind is not None and kind is not label.kind:
                return replace(label, kind=kind)
        return label

    return LTS(
        name=lts.name,
        states=lts.states,
        initial=lts.initial,
        transitions=frozenset((s, rewrite(label), d) for s, label, d in lts.transitions),
        final=lts.final,
    )

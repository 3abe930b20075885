"""
algebra/compose.py
"""
from __future__ import annotations

import logging
from collections import deque
from typing import AbstractSet, Iterable, Iterator, Optional, Sequence, Tuple

from schemas.errors import LTSError
from schemas.lts_spec import LTS, Action, Label, State, Sync

logger = logging.getLogger(__name__)


def _moves(
    left: LTS,
    right: LTS,
    ls: State,
    rs: State,
    sync: AbstractSet[int],
) -> Iterator[Tuple[Label, Tuple[State, State]]]:
    for label, ldst in left.out(ls):
        if isinstance(label, Action) and label.channel in sync:
            for rlabel, rdst in right.out(rs):
                if label.matches(rlabel):
                    sender = label if label.is_output else rlabel
                    yield Sync(label.channel, label.message, sender.kind), (ldst, rdst)
        else:
            yield label, (ldst, rs)
    for label, rdst in right.out(rs):
        if isinstance(label, Action) and label.channel in sync:
            continue
        yield label, (ls, rdst)


def parallel_compose(left: LTS, right: LTS, sync_channels: Iterable[int]) -> LTS:
    """
    Product of two LTSs over their reachable state pairs.

    Actions on a channel in `sync_channels` only fire as a handshake with the
    opposite-polarity action of the other operand and become Sync labels;
    everything else (other actions, tau, earlier Sync labels) interleaves.
    """
    sync = frozenset(sync_channels)
    initial = (left.initial, right.initial)
    seen = {initial}
    queue = deque([initial])
    transitions = set()

    while queue:
        state = queue.popleft()
        for label, dst in _moves(left, right, state[0], state[1], sync):
            transitions.add((state, label, dst))
            if dst not in seen:
                seen.add(dst)
                queue.append(dst)

    final = {s for s in seen if s[0] in left.final and s[1] in right.final}
    result = LTS(
        name=f"{left.name}|{right.name}",
        states=frozenset(seen),
        initial=initial,
        transitions=frozenset(transitions),
        final=frozenset(final),
    )
    logger.debug(
        f"[Compose] {left.name} ({len(left.states)}) x {right.name} ({len(right.states)}) "
        f"on {sorted(sync)} -> {len(result.states)} states"
    )
    return result


def compose_all(
    behaviors: Sequence[LTS],
    channels: Iterable[int],
    name: Optional[str] = None,
    declared: Optional[Sequence[AbstractSet[int]]] = None,
) -> LTS:
    """
    Left fold of parallel_compose. Each step synchronizes on the allowed
    channels declared both by an operand folded so far and by the next one,
    so the two parties of a connector meet exactly once whatever the order.

    `declared` gives each operand's channels (its bindings); by default an
    operand declares the channels of its own actions. Declarations, not the
    reachable product, decide the handshake: a party whose actions on a
    channel were cut off earlier still blocks its partner there.
    """
    if not behaviors:
        raise LTSError("[LTS ERROR] compose_all needs at least one behavior")
    if declared is None:
        declared = [b.action_channels for b in behaviors]
    elif len(declared) != len(behaviors):
        raise LTSError(f"[LTS ERROR] compose_all got {len(declared)} declaration(s) "
                       f"for {len(behaviors)} behavior(s)")
    allowed = frozenset(channels)
    acc = behaviors[0]
    folded = set(declared[0])
    for nxt, own in zip(behaviors[1:], declared[1:]):
        sync = allowed & folded & frozenset(own)
        acc = parallel_compose(acc, nxt, sync)
        folded |= own
    return acc.renamed(name) if name else acc

"""
algebra/minimize.py
"""
from __future__ import annotations

import logging
from typing import Dict

from algebra.determinize import determinize
from schemas.lts_spec import LTS, State, label_key, state_key

logger = logging.getLogger(__name__)


def minimize(lts: LTS) -> LTS:
    """
    Moore-style partition refinement of a deterministic, tau-free LTS.

    Inputs that are not deterministic are determinized first. The initial
    partition separates final from non-final states; blocks are numbered by
    the canonical number of their first member, and the quotient is
    canonicalized again.

    The result is minimal up to finality: trace-equivalent states are merged
    only when they agree on being final.
    """
    machine = lts.canonical() if lts.is_deterministic else determinize(lts)
    ordered = sorted(machine.states, key=state_key)
    block_of: Dict[State, int] = {s: int(s not in machine.final) for s in ordered}
    count = len(set(block_of.values()))

    rounds = 0
    while True:
        rounds += 1
        ids: Dict[tuple, int] = {}
        refined: Dict[State, int] = {}
        for state in ordered:
            signature = (
                block_of[state],
                tuple((label_key(label), block_of[dst]) for label, dst in machine.out(state)),
            )
            refined[state] = ids.setdefault(signature, len(ids))
        block_of = refined
        if len(ids) == count:
            break
        count = len(ids)

    quotient = LTS(
        name=machine.name,
        states=frozenset(block_of.values()),
        initial=block_of[machine.initial],
        transitions=frozenset(
            (block_of[src], label, block_of[dst]) for src, label, dst in machine.transitions
        ),
        final=frozenset(block_of[s] for s in machine.final),
    ).canonical()
    logger.debug(
        f"[Minimize] {lts.name}: {len(machine.states)} -> {len(quotient.states)} states "
        f"after {rounds} round(s)"
    )
    return quotient

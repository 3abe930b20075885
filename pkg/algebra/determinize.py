"""
algebra/determinize.py
"""
from __future__ import annotations

import logging
from collections import deque
from typing import Dict, FrozenSet, Iterable, Set

from schemas.lts_spec import LTS, Label, State, Tau, label_key

logger = logging.getLogger(__name__)


def tau_closure(lts: LTS, states: Iterable[State]) -> FrozenSet[State]:
    closure = set(states)
    stack = list(closure)
    while stack:
        state = stack.pop()
        for label, dst in lts.out(state):
            if isinstance(label, Tau) and dst not in closure:
                closure.add(dst)
                stack.append(dst)
    return frozenset(closure)


def determinize(lts: LTS) -> LTS:
    """
    Subset construction over tau-closures.

    Subsets are numbered breadth-first with labels explored in sorted order,
    so the result is already in canonical form. A subset is final iff it
    contains a final state.
    """
    start = tau_closure(lts, [lts.initial])
    numbering: Dict[FrozenSet[State], int] = {start: 0}
    queue = deque([start])
    transitions = set()

    while queue:
        subset = queue.popleft()
        moves: Dict[Label, Set[State]] = {}
        for state in subset:
            for label, dst in lts.out(state):
                if not isinstance(label, Tau):
                    moves.setdefault(label, set()).add(dst)
        for label in sorted(moves, key=label_key):
            target = tau_closure(lts, moves[label])
            if target not in numbering:
                numbering[target] = len(numbering)
                queue.append(target)
            transitions.add((numbering[subset], label, numbering[target]))

    final = {n for subset, n in numbering.items() if subset & lts.final}
    logger.debug(f"[Determinize] {lts.name}: {len(lts.states)} -> {len(numbering)} states")
    return LTS(
        name=lts.name,
        states=frozenset(numbering.values()),
        initial=0,
        transitions=frozenset(transitions),
        final=frozenset(final),
    )

"""
algebra/equivalence.py
"""
from __future__ import annotations

import logging
from collections import deque
from typing import Dict, Optional, Tuple

from algebra.determinize import determinize
from schemas.lts_spec import LTS, Label, State, label_key
from schemas.verdict import Verdict

logger = logging.getLogger(__name__)

Pair = Tuple[State, State]


def _path(parent: Dict[Pair, Optional[Tuple[Pair, Label]]], pair: Pair) -> Tuple[Label, ...]:
    labels = []
    while parent[pair] is not None:
        pair, label = parent[pair]
        labels.append(label)
    return tuple(reversed(labels))


def trace_equivalent(a: LTS, b: LTS) -> Verdict:
    """
    Observable trace equivalence. Both machines are determinized and explored
    in lockstep breadth-first, so the first label enabled on one side only
    closes a shortest distinguishing trace.
    """
    da, db = determinize(a), determinize(b)
    start = (da.initial, db.initial)
    parent: Dict[Pair, Optional[Tuple[Pair, Label]]] = {start: None}
    queue = deque([start])

    while queue:
        pair = queue.popleft()
        moves_a = dict(da.out(pair[0]))
        moves_b = dict(db.out(pair[1]))
        for label in sorted(set(moves_a) | set(moves_b), key=label_key):
            na, nb = moves_a.get(label), moves_b.get(label)
            if na is None or nb is None:
                witness = _path(parent, pair) + (label,)
                side, owner = ("left", a.name) if nb is None else ("right", b.name)
                shown = " ".join(str(x) for x in witness)
                logger.debug(f"[Equivalence] {a.name} vs {b.name}: '{shown}' only in {owner}")
                return Verdict(
                    ok=False,
                    witness=witness,
                    side=side,
                    detail=f"trace '{shown}' is only a trace of {owner}",
                )
            nxt = (na, nb)
            if nxt not in parent:
                parent[nxt] = (pair, label)
                queue.append(nxt)

    return Verdict.passed(f"{a.name} and {b.name} have the same observable traces")

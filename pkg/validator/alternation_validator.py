"""
validator/alternation_validator.py

Coordinator discipline: each input action is strictly followed by the
corresponding output action (same message, any channel).
"""
from __future__ import annotations

import logging
from typing import Dict, List, Optional

from schemas.errors import GlueError
from schemas.lts_spec import Action, Label, State, label_key, state_key
from schemas.system_spec import Component
from schemas.verdict import Verdict

logger = logging.getLogger(__name__)


def _violation(coord: Component, state: State, entered: Optional[Label], label: Label,
               reason: str) -> Verdict:
    witness = (entered, label) if entered is not None else (label,)
    detail = f"{coord.name}: state {state!r} {reason}"
    logger.debug(f"[Alternation] {detail}")
    return Verdict(ok=False, witness=witness, detail=detail, state=state)


def check_strict_alternation(coord: Component) -> Verdict:
    if not coord.is_coordinator:
        raise GlueError(f"[ALTERNATION ERROR] {coord.name} is not a coordinator")
    lts = coord.behavior

    entered_by_input: Dict[State, List[Action]] = {}
    entered_by_output: Dict[State, List[Action]] = {}
    ordered = sorted(lts.transitions, key=lambda t: (state_key(t[0]), label_key(t[1]), state_key(t[2])))
    for src, label, dst in ordered:
        if src not in lts.reachable:
            continue
        if not isinstance(label, Action):
            return _violation(coord, src, None, label, f"has non-action label {label}")
        target = entered_by_input if label.is_input else entered_by_output
        target.setdefault(dst, []).append(label)

    for state in sorted(lts.reachable, key=state_key):
        moves = lts.out(state)
        input_phase = state == lts.initial or state in entered_by_output
        if input_phase:
            for label, _ in moves:
                if label.is_output:
                    entered = (entered_by_output.get(state) or [None])[0]
                    return _violation(coord, state, entered, label,
                                      f"must wait for an input but emits {label}")
        for entering in entered_by_input.get(state, []):
            for label, _ in moves:
                if label.is_input:
                    return _violation(coord, state, entering, label,
                                      f"entered by {entering} accepts another input {label}")
                if label.message != entering.message:
                    return _violation(coord, state, entering, label,
                                      f"entered by {entering} emits {label} instead of "
                                      f"forwarding '{entering.message}'")

    return Verdict.passed(f"{coord.name} alternates strictly")

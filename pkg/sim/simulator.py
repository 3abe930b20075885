"""
sim/simulator.py

Scripted execution of a closed CBA system.

The stepper walks close_system(S). Whenever a scripted component has
enabled events carrying two or more different messages it is at a choice
point, and its next decision restricts those events to the decided message.
Whatever is left is picked by a seeded random.Random, so a run is fully
determined by (system, scripts, seed, max_steps).
"""
from __future__ import annotations

import logging
import random
from typing import Dict, Iterable, List, Optional, Set, Tuple

from architecture.closure import close_system
from schemas.errors import ArchitectureError, GlueError, ScriptError
from schemas.fault_spec import ExhaustedPolicy, FaultScript, Termination, Trace, TraceEvent
from schemas.lts_spec import Action, Label, State, Sync, label_channel
from schemas.system_spec import CBASystem
from validator.architecture_validator import validate_architecture
from validator.diagnostics import has_errors

logger = logging.getLogger(__name__)


class _Cursor:
    """Position in one component's decision list."""

    def __init__(self, script: FaultScript):
        self.script = script
        self.used = 0
        self.last: Optional[str] = None

    def peek(self, messages: Set[str]) -> Optional[str]:
        if self.used < len(self.script.decisions):
            return self.script.decisions[self.used]
        if self.script.exhausted is ExhaustedPolicy.DEFAULT_ORDER:
            return min(messages)
        return self.last

    def consume(self, message: str) -> None:
        if self.used < len(self.script.decisions):
            self.used += 1
        self.last = message


def _messages_of(system: CBASystem, component: str) -> Set[str]:
    return {
        label.message
        for label in system.component(component).behavior.alphabet
        if isinstance(label, (Action, Sync))
    }


def _check_scripts(system: CBASystem, scripts: Iterable[FaultScript]) -> List[FaultScript]:
    checked: Dict[str, FaultScript] = {}
    for script in scripts:
        if not system.has_component(script.component):
            raise ScriptError(f"[SCRIPT ERROR] no component {script.component} in {system.name}")
        if script.component in checked:
            raise ScriptError(f"[SCRIPT ERROR] component {script.component} scripted twice")
        known = _messages_of(system, script.component)
        for message in script.decisions:
            if message not in known:
                raise ScriptError(
                    f"[SCRIPT ERROR] {script.component} never exchanges message {message!r}"
                )
        checked[script.component] = script
    order = system.component_names
    return sorted(checked.values(), key=lambda s: order.index(s.component))


def _participants(system: CBASystem, label: Label) -> Tuple[str, ...]:
    channel = label_channel(label)
    return system.parties(channel) if channel is not None else ()


def simulate(
    system: CBASystem,
    scripts: Iterable[FaultScript] = (),
    seed: int = 0,
    max_steps: int = 200,
) -> Trace:
    issues = validate_architecture(system)
    if has_errors(issues):
        raise ArchitectureError(issues)
    if max_steps < 1:
        raise GlueError(f"[SIM ERROR] max_steps must be at least 1, got {max_steps}")

    cursors = [_Cursor(s) for s in _check_scripts(system, scripts)]
    closed = close_system(system)
    rng = random.Random(seed)

    state: State = closed.initial
    states: List[State] = [state]
    events: List[TraceEvent] = []
    while True:
        enabled = list(closed.out(state))
        if not enabled:
            terminated = Termination.FINAL if state in closed.final else Termination.DEADLOCK
            break
        if len(events) >= max_steps:
            terminated = Termination.STEP_LIMIT
            break

        candidates = enabled
        pending: List[Tuple[_Cursor, str]] = []
        for cursor in cursors:
            name = cursor.script.component
            involved = [(l, d) for l, d in candidates if name in _participants(system, l)]
            messages = {l.message for l, _ in involved if isinstance(l, Sync)}
            if len(messages) < 2:
                continue
            decision = cursor.peek(messages)
            if decision is None:
                continue
            if decision not in messages:
                raise ScriptError(
                    f"[SCRIPT ERROR] {name}: decision {decision!r} is not enabled at step "
                    f"{len(events)} (enabled: {', '.join(sorted(messages))})"
                )
            candidates = [
                (l, d) for l, d in candidates
                if name not in _participants(system, l) or l.message == decision
            ]
            pending.append((cursor, decision))

        label, state = rng.choice(candidates)
        parties = _participants(system, label)
        for cursor, decision in pending:
            if cursor.script.component in parties:
                cursor.consume(decision)
        events.append(TraceEvent(step=len(events), label=label, components=parties))
        states.append(state)
        logger.debug(f"[Sim] step {len(events) - 1}: {label} [{','.join(parties)}]")

    for cursor in cursors:
        if cursor.used == 0 and cursor.script.decisions:
            logger.warning(f"[Sim] script for {cursor.script.component} was never consulted")
    logger.info(f"[Sim] {system.name}: {len(events)} step(s), terminated {terminated.value}")
    return Trace(events=tuple(events), final_state=state, terminated=terminated,
                 states=tuple(states))


def project_trace(trace: Trace, component: str, system: CBASystem) -> Tuple[TraceEvent, ...]:
    """The events on channels bound to `component`'s ports, in trace order."""
    channels = system.component(component).channels
    return tuple(ev for ev in trace.events if label_channel(ev.label) in channels)


def trace_path(trace: Trace):
    """The closed-system transitions a run took, for DOT highlighting."""
    return tuple(zip(trace.states, trace.labels, trace.states[1:]))


def format_trace(trace: Trace, system: CBASystem) -> List[str]:
    lines = [
        f"TRACE: {ev.step} {ev.label} {','.join(ev.components)}"
        for ev in trace.events
    ]
    lines.append(f"TRACE: end {trace.terminated.value} after {len(trace.events)} step(s)")
    for name in system.component_names:
        shown = " ".join(str(ev.label) for ev in project_trace(trace, name, system))
        lines.append(f"TRACE: {name}: {shown}".rstrip())
    return lines

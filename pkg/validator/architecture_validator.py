"""
validator/architecture_validator.py

Structural well-formedness of a CBASystem. Violations are returned as issue
dicts, never raised.
"""
from __future__ import annotations

import logging
from collections import Counter
from typing import Dict, List

from schemas.lts_spec import Action, Kind, format_label, label_key
from schemas.system_spec import Binding, CBASystem, Side
from validator.diagnostics import Element, make_issue

logger = logging.getLogger(__name__)


def _check_names(system: CBASystem) -> List[Dict]:
    issues = []
    counts = Counter(system.component_names)
    for name in sorted(n for n, k in counts.items() if k > 1):
        issues.append(make_issue("ARCH-001", f"component {name} declared {counts[name]} times",
                                 Element.COMPONENT))
    if not system.coordinators:
        issues.append(make_issue("ARCH-008", f"system {system.name} has no coordinator",
                                 Element.SYSTEM))
    return issues


def _check_bindings(system: CBASystem) -> List[Dict]:
    issues = []
    port_uses = Counter(b.port for c in system.components for b in c.bindings)
    for port in sorted((p for p, k in port_uses.items() if k > 1), key=str):
        issues.append(make_issue("ARCH-002", f"port {port} is bound to {port_uses[port]} connectors",
                                 Element.PORT))

    for c in system.components:
        for b in c.bindings:
            if b.connector < 1:
                issues.append(make_issue("ARCH-011", f"{b.port} names invalid connector {b.connector}",
                                         Element.CONNECTOR))
            if b.role is not b.port.side.opposite:
                issues.append(make_issue(
                    "ARCH-003",
                    f"{b.port} attaches to the {b.role.value} role of connector {b.connector}; "
                    f"a {b.port.side.value} port must attach to the {b.port.side.opposite.value} role",
                    Element.PORT,
                ))
    return issues


def _check_connectors(system: CBASystem) -> List[Dict]:
    issues = []
    for channel, bindings in system.bindings_by_channel().items():
        if len(bindings) < 2:
            issues.append(make_issue(
                "ARCH-004",
                f"connector {channel} is dangling: only {bindings[0].port} is bound",
                Element.CONNECTOR,
            ))
        oriented = [b for b in bindings if b.role is b.port.side.opposite]
        roles = Counter(b.role for b in oriented)
        for role in (Side.TOP, Side.BOTTOM):
            if roles[role] > 1:
                ports = ", ".join(str(b.port) for b in oriented if b.role is role)
                issues.append(make_issue(
                    "ARCH-005", f"{role.value} role of connector {channel} bound {roles[role]} times ({ports})",
                    Element.CONNECTOR,
                ))
        issues.extend(_check_shape(system, channel, bindings))
    return issues


def _check_shape(system: CBASystem, channel: int, bindings: List[Binding]) -> List[Dict]:
    lower = [b.port.owner for b in bindings if b.port.side is Side.TOP]
    upper = [b.port.owner for b in bindings if b.port.side is Side.BOTTOM]
    if len(lower) != 1 or len(upper) != 1:
        return []
    lower_name, upper_name = lower[0], upper[0]
    glue_lower = system.outermost_glue(lower_name)
    glue_upper = system.outermost_glue(upper_name)
    # a glue block is one logical coordinator; its inner wiring is free
    if glue_lower is not None and glue_lower == glue_upper:
        return []
    if not (system.has_component(lower_name) and system.has_component(upper_name)):
        return []
    lower_coord = system.component(lower_name).is_coordinator
    upper_coord = system.component(upper_name).is_coordinator
    if lower_coord != upper_coord:
        return []
    what = "coordinators" if lower_coord else "non-coordinators"
    return [make_issue(
        "ARCH-009",
        f"connector {channel} joins two {what} ({lower_name} below {upper_name})",
        Element.CONNECTOR,
    )]


def _check_behaviors(system: CBASystem) -> List[Dict]:
    issues = []
    for c in system.components:
        sides = {b.connector: b.port.side for b in c.bindings}
        for channel in sorted(c.behavior.action_channels - sides.keys()):
            issues.append(make_issue(
                "ARCH-006", f"behavior of {c.name} uses channel {channel}, bound to none of its ports",
                Element.BEHAVIOR,
            ))
        labels = sorted((l for l in c.behavior.alphabet if isinstance(l, Action)), key=label_key)
        for label in labels:
            side = sides.get(label.channel)
            if side is None:
                continue
            # requests travel upward, notifications downward
            upward = (side is Side.TOP) == label.is_output
            expected = Kind.REQUEST if upward else Kind.NOTIFICATION
            if label.kind is not expected:
                issues.append(make_issue(
                    "ARCH-007",
                    f"{c.name}: {format_label(label)} on a {side.value} port must be a "
                    f"{'request' if expected is Kind.REQUEST else 'notification'}",
                    Element.BEHAVIOR,
                ))
    return issues


def _check_glue(system: CBASystem) -> List[Dict]:
    issues = []
    known = set(system.component_names) | {g.name for g in system.glue}
    for block in system.glue:
        for member in block.members:
            if member not in known or member == block.name:
                issues.append(make_issue(
                    "ARCH-010", f"glue {block.name} names unknown member {member}", Element.GLUE,
                ))
    return issues


def _check_fresh_counter(system: CBASystem) -> List[Dict]:
    used = system.channels
    if used and system.fresh_from <= max(used):
        return [make_issue(
            "ARCH-012",
            f"freshfrom {system.fresh_from} does not exceed the largest channel {max(used)}",
            Element.SYSTEM,
        )]
    return []


def validate_architecture(system: CBASystem) -> List[Dict]:
    issues: List[Dict] = []
    issues += _check_names(system)
    issues += _check_bindings(system)
    issues += _check_connectors(system)
    issues += _check_behaviors(system)
    issues += _check_glue(system)
    issues += _check_fresh_counter(system)
    if issues:
        logger.warning(f"[ArchValidator] {system.name}: {len(issues)} issue(s)")
    else:
        logger.info(f"[ArchValidator] {system.name}: well-formed")
    return issues

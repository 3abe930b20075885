"""
tools/lts_writer.py

Text writers for the `.lts` and `.cba` formats. Both outputs are canonical:
the same behavior or system always serializes to the same bytes.
"""
from __future__ import annotations

from typing import List

from schemas.lts_spec import LTS, format_label, label_key, state_key
from schemas.system_spec import Binding, CBASystem, Component


def behavior_file(component: Component) -> str:
    return f"{component.name.lower()}.lts"


def format_lts(lts: LTS) -> str:
    canon = lts.canonical()
    lines = [f"lts {lts.name}", f"init {canon.initial}"]
    if canon.final:
        lines.append("final " + " ".join(str(s) for s in sorted(canon.final, key=state_key)))
    ordered = sorted(
        canon.transitions,
        key=lambda t: (state_key(t[0]), label_key(t[1]), state_key(t[2])),
    )
    for src, label, dst in ordered:
        lines.append(f"{src} {format_label(label)} {dst}")
    return "\n".join(lines) + "\n"


def _binding_line(binding: Binding) -> str:
    line = f"  {binding.port.side.value} {binding.port.index} -> connector {binding.connector}"
    if binding.role is not binding.port.side.opposite:
        line += f" role {binding.role.value}"
    return line


def format_system(system: CBASystem) -> str:
    """Bindings keep their declared order; behaviors point at `<name>.lts` next to the file."""
    lines: List[str] = [f"system {system.name}", f"freshfrom {system.fresh_from}"]
    for component in system.components:
        header = f"component {component.name}"
        if component.is_coordinator:
            header += " coordinator"
        lines.append(header)
        lines.extend(_binding_line(b) for b in component.bindings)
        lines.append(f"  behavior {behavior_file(component)}")
    for block in system.glue:
        lines.append(f"glue {block.name} = {' '.join(block.members)}")
    return "\n".join(lines) + "\n"

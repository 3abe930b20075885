"""
schemas/cba_loader.py

Reader for the `.cba` architecture format:

    system client_server
    freshfrom 4
    component Client1
      top 1 -> connector 2
      behavior client1.lts
    component K1 coordinator
      bottom 1 -> connector 2
      top 1 -> connector 3
      behavior k1.lts
    glue G1 = K1 K2 K3 W

Binding and behavior lines belong to the closest preceding component. A
binding without `role` attaches to the role opposite to its port side.
Behavior paths are resolved relative to the `.cba` file.
"""
from __future__ import annotations

import logging
from pathlib import Path
from typing import List, Mapping, Optional, Union

from lark import Transformer

from schemas.errors import SemanticError
from schemas.grammars import parse_tree, read_source, transform_tree
from schemas.lts_loader import load_lts
from schemas.lts_spec import LTS
from schemas.system_spec import Binding, CBASystem, Component, GlueBlock, Port, Side

logger = logging.getLogger(__name__)


class _CbaItems(Transformer):
    def start(self, items):
        return items

    def system(self, c):
        return ("system", c[0], str(c[0]))

    def freshfrom(self, c):
        return ("freshfrom", c[0], int(c[0]))

    def component(self, c):
        return ("component", c[0], (str(c[0]), len(c) > 1))

    def role(self, c):
        return Side(str(c[0]))

    def binding(self, c):
        side, index, connector = Side(str(c[0])), int(c[1]), int(c[2])
        role = c[3] if len(c) > 3 else None
        return ("binding", c[0], (side, index, connector, role))

    def behavior(self, c):
        return ("behavior", c[0], str(c[0]))

    def glue(self, c):
        return ("glue", c[0], (str(c[0]), tuple(str(t) for t in c[1:])))


class _Draft:
    def __init__(self, name: str, coordinator: bool, line: int):
        self.name = name
        self.coordinator = coordinator
        self.line = line
        self.bindings: List[Binding] = []
        self.behavior: Optional[str] = None


def parse_system(
    text: str,
    base_dir: Union[str, Path] = ".",
    source: str = "<cba>",
    behaviors: Optional[Mapping[str, LTS]] = None,
) -> CBASystem:
    """
    Parse a `.cba` document. `behaviors` maps a behavior reference to an
    already loaded LTS and takes precedence over the file system.
    """
    items = transform_tree(_CbaItems(), parse_tree("cba", text, source), source)
    base_dir = Path(base_dir)
    behaviors = dict(behaviors or {})

    name = Path(source).stem
    fresh_from: Optional[int] = None
    drafts: List[_Draft] = []
    glue: List[GlueBlock] = []

    for kind, token, value in items:
        if kind == "system":
            name = value
        elif kind == "freshfrom":
            fresh_from = value
        elif kind == "component":
            drafts.append(_Draft(value[0], value[1], token.line))
        elif kind == "glue":
            glue.append(GlueBlock(name=value[0], members=value[1]))
        else:
            if not drafts:
                raise SemanticError(f"'{kind}' line before any component", token.line, token.column,
                                    source=source)
            current = drafts[-1]
            if kind == "binding":
                side, index, connector, role = value
                port = Port(owner=current.name, side=side, index=index)
                current.bindings.append(
                    Binding(port=port, connector=connector, role=role or side.opposite)
                )
            else:
                if current.behavior is not None:
                    raise SemanticError(f"component {current.name} has two behavior lines",
                                        token.line, token.column, source=source)
                current.behavior = value

    components: List[Component] = []
    for draft in drafts:
        if draft.behavior is None:
            raise SemanticError(f"component {draft.name} has no behavior line", draft.line,
                                source=source)
        if draft.behavior in behaviors:
            lts = behaviors[draft.behavior].renamed(draft.name)
        else:
            lts = load_lts(base_dir / draft.behavior, name=draft.name)
        components.append(Component(
            name=draft.name,
            behavior=lts,
            bindings=tuple(draft.bindings),
            is_coordinator=draft.coordinator,
        ))

    if fresh_from is None:
        used = [b.connector for c in components for b in c.bindings]
        used += [ch for c in components for ch in c.behavior.channels]
        fresh_from = max(used, default=0) + 1

    system = CBASystem(name=name, components=tuple(components), fresh_from=fresh_from,
                       glue=tuple(glue))
    logger.info(f"[CBALoader] {source}: {len(components)} component(s), "
                f"{len(system.channels)} connector(s), freshfrom {fresh_from}")
    return system


def load_system(path: Union[str, Path]) -> CBASystem:
    path = Path(path)
    text = read_source(path, "system file")
    return parse_system(text, base_dir=path.parent, source=str(path))


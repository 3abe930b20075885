"""
schemas/lts_loader.py

Reader for the `.lts` text format:

    lts Client1
    init s0
    final s2
    s0 2!req s1
    s1 2?ok:ntf s2

States are declared by use. Purely numeric state names become integers so a
written-then-read behavior equals the in-memory one.
"""
from __future__ import annotations

import logging
from pathlib import Path
from typing import List, Optional, Union

from lark import Transformer

from schemas.errors import ParseError
from schemas.grammars import parse_tree, read_source, transform_tree
from schemas.lts_spec import LTS, State, Transition, parse_label

logger = logging.getLogger(__name__)


def _state(token) -> State:
    text = str(token)
    return int(text) if text.isdigit() else text


class _LtsItems(Transformer):
    def start(self, items):
        return items

    def header(self, children):
        return ("lts", children[0], str(children[0]))

    def init(self, children):
        return ("init", children[0], _state(children[0]))

    def final(self, children):
        return ("final", children[0], [_state(t) for t in children])

    def transition(self, children):
        src, label, dst = children
        return ("transition", src, (_state(src), parse_label(str(label)), _state(dst)))


def parse_lts(text: str, source: str = "<lts>", name: Optional[str] = None) -> LTS:
    items = transform_tree(_LtsItems(), parse_tree("lts", text, source), source)

    lts_name: Optional[str] = None
    initial: Optional[State] = None
    final: List[State] = []
    transitions: List[Transition] = []
    for kind, token, value in items:
        if kind == "lts":
            if lts_name is not None:
                raise ParseError("duplicate 'lts' header", token.line, token.column, source=source)
            lts_name = value
        elif kind == "init":
            if initial is not None:
                raise ParseError("duplicate 'init' line", token.line, token.column, source=source)
            initial = value
        elif kind == "final":
            final.extend(value)
        else:
            transitions.append(value)

    if initial is None:
        raise ParseError("missing 'init' line", expected=["init"], source=source)
    lts = LTS.build(
        name=name or lts_name or Path(source).stem,
        initial=initial,
        transitions=transitions,
        final=final,
    )
    logger.debug(f"[LTSLoader] {source}: {len(lts.states)} states, {len(lts.transitions)} transitions")
    return lts


def load_lts(path: Union[str, Path], name: Optional[str] = None) -> LTS:
    path = Path(path)
    text = read_source(path, "behavior file")
    return parse_lts(text, source=str(path), name=name)

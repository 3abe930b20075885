"""
schemas/fault_loader.py

Reader for `.fault` scripts:

    component Server
    decide err, err, ok
    exhausted repeat-last
"""
from __future__ import annotations

from pathlib import Path
from typing import Dict, List, Tuple, Union

from lark import Transformer

from schemas.errors import SemanticError
from schemas.fault_spec import ExhaustedPolicy, FaultScript
from schemas.grammars import parse_tree, read_source, transform_tree


class _FaultItems(Transformer):
    def start(self, items):
        return items

    def component(self, c):
        return ("component", c[0], str(c[0]))

    def decide(self, c):
        return ("decide", c[0], tuple(str(t) for t in c))

    def exhausted(self, c):
        return ("exhausted", c[0], ExhaustedPolicy(str(c[0])))


def parse_fault(text: str, source: str = "<fault>") -> Tuple[FaultScript, ...]:
    items = transform_tree(_FaultItems(), parse_tree("fault", text, source), source)
    order: List[str] = []
    decisions: Dict[str, List[str]] = {}
    policy: Dict[str, ExhaustedPolicy] = {}

    for kind, token, value in items:
        if kind == "component":
            if value in decisions:
                raise SemanticError(f"component {value!r} scripted twice", token.line, token.column,
                                    source=source)
            order.append(value)
            decisions[value] = []
            continue
        if not order:
            raise SemanticError(f"'{kind}' line before any component", token.line, token.column,
                                source=source)
        if kind == "decide":
            decisions[order[-1]].extend(value)
        else:
            policy[order[-1]] = value

    return tuple(
        FaultScript(
            component=name,
            decisions=tuple(decisions[name]),
            exhausted=policy.get(name, ExhaustedPolicy.REPEAT_LAST),
        )
        for name in order
    )


def load_fault(path: Union[str, Path]) -> Tuple[FaultScript, ...]:
    path = Path(path)
    text = read_source(path, "fault script")
    return parse_fault(text, source=str(path))

"""
tools/dot_export.py

Graphviz DOT rendering of an LTS, produced as an iterable of text chunks:

    with open("glue.dot", "w") as f:
        f.writelines(to_dot(glue))

Node and edge order are canonical so two renderings of equal behaviors are
byte-identical. `highlight` marks transitions (src, label, dst) in red, e.g.
the path of a simulation run.
"""
from __future__ import annotations

from typing import Iterable, Iterator

from schemas.lts_spec import LTS, Transition, format_label, label_key, state_key


def _quote(s) -> str:
    return '"{}"'.format(str(s).replace('"', r'\"'))


def to_dot(lts: LTS, highlight: Iterable[Transition] = ()) -> Iterator[str]:
    highlight = frozenset(highlight)
    yield f"digraph {_quote(lts.name)} {{\n"
    yield "  rankdir=LR;\n"
    yield '  __start [shape=point label=""];\n'
    for state in sorted(lts.states, key=state_key):
        shape = "doublecircle" if state in lts.final else "circle"
        yield f"  {_quote(state)} [shape={shape}];\n"
    yield f"  __start -> {_quote(lts.initial)};\n"
    ordered = sorted(
        lts.transitions,
        key=lambda t: (state_key(t[0]), label_key(t[1]), state_key(t[2])),
    )
    for src, label, dst in ordered:
        attrs = f"label={_quote(format_label(label))}"
        if (src, label, dst) in highlight:
            attrs += " color=red penwidth=2"
        yield f"  {_quote(src)} -> {_quote(dst)} [{attrs}];\n"
    yield "}\n"


def dot_text(lts: LTS, highlight: Iterable[Transition] = ()) -> str:
    return "".join(to_dot(lts, highlight))

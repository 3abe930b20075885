"""
schemas/msc_loader.py

Reader for the `.msc` enhancement format:

    enhancement retry
    wrapper W
    coordinator K1
    targets Client1
    note the wrapper re-sends at most two times

    bmsc request
      instance Client1, W, K1
      Client1 -> W : req @ 2
      W -> K1 : req @ 2
    end

    hmsc
      init start
      final start
      node request = request
      edge start -> request
      edge retry -> retry repeat 2
      edge retry -> fail exhausted
    end

`repeat <n>` is only allowed on a self-loop: the node is unrolled into copies
X~1..X~n chained in order, ordinary outgoing edges leave every copy and
`exhausted` edges leave the last copy only.
"""
from __future__ import annotations

import logging
from collections import OrderedDict
from pathlib import Path
from typing import Dict, List, Optional, Set, Tuple, Union

import networkx as nx
from lark import Token, Transformer

from schemas.errors import MscSyntaxError, SemanticError
from schemas.grammars import parse_tree, read_source, transform_tree
from schemas.lts_spec import Kind
from schemas.msc_spec import BMSC, HMSC, EnhancementSpec, MscEvent

logger = logging.getLogger(__name__)

COPY_SEP = "~"


class _MscItems(Transformer):
    def start(self, items):
        return items

    def enhancement(self, c):
        return ("enhancement", c[0], str(c[0]))

    def note(self, c):
        return ("note", c[0], str(c[0]).strip())

    def wrapper(self, c):
        return ("wrapper", c[0], str(c[0]))

    def coordinator(self, c):
        return ("coordinator", c[0], str(c[0]))

    def targets(self, c):
        return ("targets", c[0], tuple(str(t) for t in c))

    def instance(self, c):
        return ("instance", c[0], tuple(str(t) for t in c))

    def event(self, c):
        sender, receiver, message = c[0], c[1], c[2]
        kind = Kind(str(c[3])) if len(c) == 5 else None
        channel = int(c[-1])
        return ("event", sender, MscEvent(str(sender), str(receiver), str(message), channel, kind))

    def bmsc(self, c):
        return ("bmsc", c[0], (str(c[0]), c[1:]))

    def hinit(self, c):
        return ("init", c[0], str(c[0]))

    def hfinal(self, c):
        return ("final", c[0], tuple(str(t) for t in c))

    def node(self, c):
        return ("node", c[0], (str(c[0]), str(c[1])))

    def repeat(self, c):
        return ("repeat", int(c[0]))

    def exhausted(self, c):
        return ("exhausted", None)

    def edge(self, c):
        mods = dict(c[2:])
        return ("edge", c[0], (str(c[0]), str(c[1]), mods.get("repeat"), "exhausted" in mods))

    def hmsc(self, c):
        return ("hmsc", None, list(c))


class _Builder:
    def __init__(self, source: str):
        self.source = source

    def fail(self, message: str, token: Optional[Token] = None) -> SemanticError:
        line = getattr(token, "line", None)
        column = getattr(token, "column", None)
        return SemanticError(message, line, column, source=self.source)

    # ----------------------------
    # bMSC
    # ----------------------------
    def bmsc(self, name: str, lines) -> BMSC:
        instances: List[str] = []
        events: List[MscEvent] = []
        pair_channel: Dict[Tuple[str, str], int] = {}
        for kind, token, value in lines:
            if kind == "instance":
                for inst in value:
                    if inst not in instances:
                        instances.append(inst)
                continue
            for who in (value.sender, value.receiver):
                if who not in instances:
                    raise self.fail(f"bmsc {name}: undeclared instance {who!r}", token)
            if value.sender == value.receiver:
                raise self.fail(f"bmsc {name}: {value.sender} sends to itself", token)
            known = pair_channel.setdefault((value.sender, value.receiver), value.channel)
            if known != value.channel:
                raise self.fail(
                    f"bmsc {name}: {value.sender} -> {value.receiver} already uses channel {known}", token
                )
            events.append(value)
        return BMSC(name=name, instances=tuple(instances), events=tuple(events))

    # ----------------------------
    # HMSC
    # ----------------------------
    def hmsc(self, lines, charts: Dict[str, BMSC]) -> HMSC:
        nodes: "OrderedDict[str, Optional[str]]" = OrderedDict()
        initial: Optional[Tuple[str, Token]] = None
        final: List[Tuple[str, Token]] = []
        edges: List[Tuple[str, str, Optional[int], bool, Token]] = []

        for kind, token, value in lines:
            if kind == "node":
                node_id, chart = value
                if node_id in nodes:
                    raise self.fail(f"hmsc node {node_id!r} declared twice", token)
                if chart not in charts:
                    raise self.fail(f"hmsc node {node_id!r} plays undeclared bmsc {chart!r}", token)
                if COPY_SEP in node_id:
                    raise self.fail(f"hmsc node id {node_id!r} may not contain {COPY_SEP!r}", token)
                nodes[node_id] = chart
            elif kind == "init":
                if initial is not None:
                    raise self.fail("hmsc has two init lines", token)
                initial = (value, token)
            elif kind == "final":
                final.extend((v, token) for v in value)
            else:
                edges.append((*value, token))

        if initial is None:
            raise self.fail("hmsc has no init line")
        # init/final may introduce pseudo nodes with an empty projection
        for node_id, _ in [initial, *final]:
            nodes.setdefault(node_id, None)

        repeats: Dict[str, int] = {}
        for src, dst, repeat, exhausted, token in edges:
            for end in (src, dst):
                if end not in nodes:
                    raise self.fail(f"hmsc edge {src} -> {dst} names undeclared node {end!r}", token)
            if repeat is not None:
                if src != dst:
                    raise self.fail(f"'repeat' is only allowed on a self-loop, not {src} -> {dst}", token)
                if repeat < 1:
                    raise self.fail(f"'repeat {repeat}' must be at least 1", token)
                if src in repeats:
                    raise self.fail(f"node {src!r} has two repeat edges", token)
                if exhausted:
                    raise self.fail("an edge cannot be both 'repeat' and 'exhausted'", token)
                repeats[src] = repeat
        for src, dst, _, exhausted, token in edges:
            if exhausted and src not in repeats:
                raise self.fail(f"'exhausted' edge leaves {src!r}, which has no repeat edge", token)

        return self._unroll(nodes, initial[0], [f for f, _ in final], edges, repeats)

    def _unroll(self, nodes, initial, final, edges, repeats) -> HMSC:
        def copies(node: str) -> List[str]:
            if node not in repeats:
                return [node]
            return [f"{node}{COPY_SEP}{i}" for i in range(1, repeats[node] + 1)]

        def entry(node: str) -> str:
            return copies(node)[0]

        unrolled_nodes: Dict[str, Optional[str]] = {}
        for node_id, chart in nodes.items():
            for copy in copies(node_id):
                unrolled_nodes[copy] = chart

        unrolled_edges: List[Tuple[str, str]] = []

        def add(src: str, dst: str) -> None:
            if (src, dst) not in unrolled_edges:
                unrolled_edges.append((src, dst))

        for src, dst, repeat, exhausted, _ in edges:
            if repeat is not None:
                chain = copies(src)
                for a, b in zip(chain, chain[1:]):
                    add(a, b)
            elif exhausted:
                add(copies(src)[-1], entry(dst))
            else:
                for copy in copies(src):
                    add(copy, entry(dst))

        final_nodes = frozenset(c for f in final for c in copies(f))
        hmsc = HMSC(
            nodes=unrolled_nodes,
            edges=tuple(unrolled_edges),
            initial=entry(initial),
            final=final_nodes,
        )

        graph = nx.DiGraph()
        graph.add_nodes_from(unrolled_nodes)
        graph.add_edges_from(unrolled_edges)
        reachable: Set[str] = {hmsc.initial} | nx.descendants(graph, hmsc.initial)
        unreachable = sorted(set(unrolled_nodes) - reachable)
        if unreachable:
            raise self.fail(f"hmsc node(s) unreachable from {initial!r}: {', '.join(unreachable)}")
        return hmsc


def parse_msc(text: str, source: str = "<msc>") -> EnhancementSpec:
    items = transform_tree(_MscItems(), parse_tree("msc", text, source, error=MscSyntaxError), source,
                           error=MscSyntaxError)
    builder = _Builder(source)

    header: Dict[str, object] = {}
    charts: "OrderedDict[str, BMSC]" = OrderedDict()
    hmsc_lines = None
    for kind, token, value in items:
        if kind == "bmsc":
            name, lines = value
            if name in charts:
                raise builder.fail(f"bmsc {name!r} declared twice", token)
            charts[name] = builder.bmsc(name, lines)
        elif kind == "hmsc":
            if hmsc_lines is not None:
                raise builder.fail("more than one hmsc block")
            hmsc_lines = value
        else:
            if kind in header:
                raise builder.fail(f"duplicate '{kind}' header", token)
            header[kind] = value

    for required in ("wrapper", "coordinator", "targets"):
        if required not in header:
            raise builder.fail(f"missing '{required}' header")
    if hmsc_lines is None:
        raise builder.fail("missing hmsc block")

    wrapper, coordinator = header["wrapper"], header["coordinator"]
    for chart in charts.values():
        for inst in (wrapper, coordinator):
            if inst not in chart.instances:
                raise builder.fail(f"bmsc {chart.name} does not declare instance {inst!r}")

    spec = EnhancementSpec(
        name=str(header.get("enhancement", Path(source).stem)),
        bmscs=tuple(charts.values()),
        hmsc=builder.hmsc(hmsc_lines, charts),
        wrapper=str(wrapper),
        coordinator=str(coordinator),
        targets=tuple(header["targets"]),
        note=str(header.get("note", "")),
    )
    logger.info(f"[MSCLoader] {source}: enhancement {spec.name}, {len(spec.bmscs)} bmsc(s), "
                f"{len(spec.hmsc.nodes)} hmsc node(s) after unrolling")
    return spec


def load_msc(path: Union[str, Path]) -> EnhancementSpec:
    path = Path(path)
    text = read_source(path, "enhancement file")
    return parse_msc(text, source=str(path))

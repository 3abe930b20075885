"""
dataset/corpus.py

Generated single-coordinator systems used by the corpus-wide checks.

Every system has one coordinator K1 between clients (below) and servers
(above). A client's request goes to one server; the server answers with one
of its response messages, which K1 hands back to the asking client. No
component has more than eight states.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

from schemas.lts_spec import LTS, Action, Kind, Polarity
from schemas.system_spec import Binding, CBASystem, Component, Port, Side

NTF = Kind.NOTIFICATION


def _out(channel: int, message: str, kind: Kind = Kind.REQUEST) -> Action:
    return Action(channel, message, Polarity.OUTPUT, kind)


def _in(channel: int, message: str, kind: Kind = Kind.REQUEST) -> Action:
    return Action(channel, message, Polarity.INPUT, kind)


@dataclass(frozen=True)
class Flow:
    client: int                 # client index, 1-based
    request: str
    server: int                 # server index, 1-based
    responses: Tuple[str, ...]


def _client(index: int, channel: int, flows: Sequence[Flow], looping: bool) -> Component:
    transitions = []
    done = "s0" if looping else "done"
    for flow in flows:
        waiting = f"wait_{flow.request}"
        transitions.append(("s0", _out(channel, flow.request), waiting))
        for response in flow.responses:
            transitions.append((waiting, _in(channel, response, NTF), done))
    behavior = LTS.build(f"Client{index}", "s0", transitions, final=[done])
    port = Port(f"Client{index}", Side.TOP, 1)
    return Component(f"Client{index}", behavior, (Binding.oriented(port, channel),))


def _server(index: int, channel: int, flows: Sequence[Flow]) -> Component:
    transitions = []
    for request in sorted({r.request for r in flows}):
        responses = next(r.responses for r in flows if r.request == request)
        transitions.append(("idle", _in(channel, request), f"busy_{request}"))
        for response in responses:
            transitions.append((f"busy_{request}", _out(channel, response, NTF), "idle"))
    behavior = LTS.build(f"Server{index}", "idle", transitions, final=["idle"])
    port = Port(f"Server{index}", Side.BOTTOM, 1)
    return Component(f"Server{index}", behavior, (Binding.oriented(port, channel),))


def _coordinator(flows: Sequence[Flow], client_ch: Dict[int, int], server_ch: Dict[int, int]) -> Component:
    transitions = []
    for flow in flows:
        c, s = client_ch[flow.client], server_ch[flow.server]
        tag = f"{flow.client}_{flow.request}"
        transitions.append(("idle", _in(c, flow.request), f"fwd_{tag}"))
        transitions.append((f"fwd_{tag}", _out(s, flow.request), f"wait_{tag}"))
        for response in flow.responses:
            transitions.append((f"wait_{tag}", _in(s, response, NTF), f"back_{tag}_{response}"))
            transitions.append((f"back_{tag}_{response}", _out(c, response, NTF), "idle"))
    behavior = LTS.build("K1", "idle", transitions, final=["idle"])
    bindings = [
        Binding.oriented(Port("K1", Side.BOTTOM, i), ch) for i, ch in sorted(client_ch.items())
    ] + [
        Binding.oriented(Port("K1", Side.TOP, i), ch) for i, ch in sorted(server_ch.items())
    ]
    return Component("K1", behavior, tuple(bindings), is_coordinator=True)


def build_system(name: str, flows: Sequence[Flow], looping: bool = False) -> CBASystem:
    """Clients sit on channels 1..n, servers on n+1..n+m."""
    clients = sorted({r.client for r in flows})
    servers = sorted({r.server for r in flows})
    client_ch = {c: i + 1 for i, c in enumerate(clients)}
    server_ch = {s: len(clients) + i + 1 for i, s in enumerate(servers)}

    components: List[Component] = [
        _client(c, client_ch[c], [r for r in flows if r.client == c], looping) for c in clients
    ]
    components.append(_coordinator(flows, client_ch, server_ch))
    components += [
        _server(s, server_ch[s], [r for r in flows if r.server == s]) for s in servers
    ]
    return CBASystem(
        name=name,
        components=tuple(components),
        fresh_from=len(clients) + len(servers) + 1,
    )


def corpus_systems() -> List[CBASystem]:
    systems: List[CBASystem] = []
    for looping in (False, True):
        mode = "loop" if looping else "once"
        for responses in (("ok",), ("ok", "err"), ("ok", "err", "busy")):
            systems.append(build_system(
                f"single_{len(responses)}_{mode}",
                [Flow(1, "req", 1, responses)],
                looping,
            ))
        systems.append(build_system(
            f"two_clients_shared_{mode}",
            [Flow(1, "req", 1, ("ok",)), Flow(2, "req", 1, ("ok",))],
            looping,
        ))
        systems.append(build_system(
            f"two_clients_split_{mode}",
            [Flow(1, "req", 1, ("ok",)), Flow(2, "req", 2, ("ok",))],
            looping,
        ))
        systems.append(build_system(
            f"read_write_{mode}",
            [Flow(1, "read", 1, ("ok",)), Flow(1, "write", 2, ("ok",))],
            looping,
        ))
    return systems

"""
schemas/lts_spec.py

Actions, labels and the immutable LTS value every other module works on.
"""
from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field, replace
from enum import Enum
from functools import cached_property
from typing import Dict, FrozenSet, Hashable, Iterable, Optional, Tuple, Union

import networkx as nx

from schemas.errors import LTSError

MESSAGE_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")
LABEL_RE = re.compile(r"^(?:(tau)|(\d+)([?!.])([A-Za-z_][A-Za-z0-9_]*)(?::(req|ntf))?)$")


class Polarity(Enum):
    INPUT = "?"
    OUTPUT = "!"

    @property
    def opposite(self) -> "Polarity":
        return Polarity.OUTPUT if self is Polarity.INPUT else Polarity.INPUT


class Kind(Enum):
    REQUEST = "req"
    NOTIFICATION = "ntf"


def _check_event(channel: int, message: str) -> None:
    if isinstance(channel, bool) or not isinstance(channel, int) or channel < 1:
        raise LTSError(f"[LTS ERROR] channel must be a positive integer, got {channel!r}")
    if not isinstance(message, str) or not MESSAGE_RE.match(message):
        raise LTSError(f"[LTS ERROR] invalid message name {message!r}")


@dataclass(frozen=True)
class Action:
    channel: int
    message: str
    polarity: Polarity
    # metadata only: synchronization never looks at it
    kind: Kind = field(default=Kind.REQUEST, compare=False)

    def __post_init__(self) -> None:
        _check_event(self.channel, self.message)

    def matches(self, other: "Label") -> bool:
        return (
            isinstance(other, Action)
            and other.channel == self.channel
            and other.message == self.message
            and other.polarity is self.polarity.opposite
        )

    @property
    def is_input(self) -> bool:
        return self.polarity is Polarity.INPUT

    @property
    def is_output(self) -> bool:
        return self.polarity is Polarity.OUTPUT

    def flipped(self) -> "Action":
        return replace(self, polarity=self.polarity.opposite)

    def __str__(self) -> str:
        return f"{self.channel}{self.polarity.value}{self.message}"


@dataclass(frozen=True)
class Sync:
    channel: int
    message: str
    kind: Kind = field(default=Kind.REQUEST, compare=False)

    def __post_init__(self) -> None:
        _check_event(self.channel, self.message)

    def __str__(self) -> str:
        return f"{self.channel}.{self.message}"


@dataclass(frozen=True)
class Tau:
    def __str__(self) -> str:
        return "tau"


TAU = Tau()

Label = Union[Action, Sync, Tau]
State = Hashable
Transition = Tuple[State, Label, State]


def label_channel(label: Label) -> Optional[int]:
    if isinstance(label, (Action, Sync)):
        return label.channel
    return None


def label_key(label: Label) -> tuple:
    if isinstance(label, Tau):
        return (0,)
    if isinstance(label, Action):
        return (1, label.channel, label.message, label.polarity.value)
    return (2, label.channel, label.message)


def state_key(state: State) -> tuple:
    """Ordering key that does not depend on hash randomization."""
    if isinstance(state, bool):
        return (0, int(state))
    if isinstance(state, int):
        return (0, state)
    if isinstance(state, str):
        return (1, state)
    if isinstance(state, tuple):
        return (2, tuple(state_key(s) for s in state))
    if isinstance(state, frozenset):
        return (3, tuple(sorted(state_key(s) for s in state)))
    return (4, repr(state))


def format_label(label: Label, with_kind: bool = True) -> str:
    text = str(label)
    if with_kind and isinstance(label, (Action, Sync)) and label.kind is Kind.NOTIFICATION:
        text += ":ntf"
    return text


def parse_label(text: str) -> Label:
    m = LABEL_RE.match(text.strip())
    if not m:
        raise LTSError(f"[LTS ERROR] invalid label {text!r}")
    if m.group(1):
        return TAU
    channel, sign, message = int(m.group(2)), m.group(3), m.group(4)
    kind = Kind(m.group(5) or Kind.REQUEST.value)
    if sign == ".":
        return Sync(channel, message, kind)
    return Action(channel, message, Polarity(sign), kind)


@dataclass(frozen=True)
class LTS:
    name: str = field(compare=False)
    states: FrozenSet[State]
    initial: State
    transitions: FrozenSet[Transition]
    final: FrozenSet[State] = frozenset()

    def __post_init__(self) -> None:
        object.__setattr__(self, "states", frozenset(self.states))
        object.__setattr__(self, "transitions", frozenset(self.transitions))
        object.__setattr__(self, "final", frozenset(self.final))
        if not self.states:
            raise LTSError(f"[LTS ERROR] {self.name}: empty state set")
        if self.initial not in self.states:
            raise LTSError(f"[LTS ERROR] {self.name}: initial state {self.initial!r} not declared")
        if not self.final <= self.states:
            raise LTSError(f"[LTS ERROR] {self.name}: final states outside the state set")
        for src, label, dst in self.transitions:
            if src not in self.states or dst not in self.states:
                raise LTSError(f"[LTS ERROR] {self.name}: transition endpoint outside the state set")
            if not isinstance(label, (Action, Sync, Tau)):
                raise LTSError(f"[LTS ERROR] {self.name}: unsupported label {label!r}")

    @classmethod
    def build(
        cls,
        name: str,
        initial: State,
        transitions: Iterable[Transition],
        final: Iterable[State] = (),
        states: Iterable[State] = (),
    ) -> "LTS":
        transitions = frozenset(transitions)
        final = frozenset(final)
        all_states = {initial, *states, *final}
        for src, _, dst in transitions:
            all_states.add(src)
            all_states.add(dst)
        return cls(name=name, states=frozenset(all_states), initial=initial,
                   transitions=transitions, final=final)

    # ----------------------------
    # Derived views
    # ----------------------------
    @cached_property
    def alphabet(self) -> FrozenSet[Label]:
        return frozenset(label for _, label, _ in self.transitions if not isinstance(label, Tau))

    @cached_property
    def channels(self) -> FrozenSet[int]:
        return frozenset(label.channel for label in self.alphabet)

    @cached_property
    def action_channels(self) -> FrozenSet[int]:
        return frozenset(label.channel for label in self.alphabet if isinstance(label, Action))

    @cached_property
    def _out(self) -> Dict[State, Tuple[Tuple[Label, State], ...]]:
        out: Dict[State, list] = {s: [] for s in self.states}
        for src, label, dst in self.transitions:
            out[src].append((label, dst))
        return {
            s: tuple(sorted(edges, key=lambda e: (label_key(e[0]), state_key(e[1]))))
            for s, edges in out.items()
        }

    def out(self, state: State) -> Tuple[Tuple[Label, State], ...]:
        return self._out.get(state, ())

    @property
    def has_tau(self) -> bool:
        return any(isinstance(label, Tau) for _, label, _ in self.transitions)

    @property
    def is_deterministic(self) -> bool:
        if self.has_tau:
            return False
        seen = set()
        for src, label, _ in self.transitions:
            if (src, label) in seen:
                return False
            seen.add((src, label))
        return True

    def to_graph(self) -> nx.MultiDiGraph:
        # sorted insertion keeps networkx traversals reproducible
        graph = nx.MultiDiGraph(name=self.name)
        graph.add_nodes_from(sorted(self.states, key=state_key))
        ordered = sorted(
            self.transitions,
            key=lambda t: (state_key(t[0]), label_key(t[1]), state_key(t[2])),
        )
        for src, label, dst in ordered:
            graph.add_edge(src, dst, label=label)
        return graph

    @cached_property
    def reachable(self) -> FrozenSet[State]:
        return frozenset({self.initial} | nx.descendants(self.to_graph(), self.initial))

    def canonical(self) -> "LTS":
        """Breadth-first renumbering from the initial state; unreachable states are dropped."""
        numbering = {self.initial: 0}
        queue = deque([self.initial])
        while queue:
            state = queue.popleft()
            for _, dst in self.out(state):
                if dst not in numbering:
                    numbering[dst] = len(numbering)
                    queue.append(dst)
        return LTS(
            name=self.name,
            states=frozenset(numbering.values()),
            initial=0,
            transitions=frozenset(
                (numbering[s], label, numbering[d])
                for s, label, d in self.transitions
                if s in numbering
            ),
            final=frozenset(numbering[s] for s in self.final if s in numbering),
        )

    def renamed(self, name: str) -> "LTS":
        return replace(self, name=name)

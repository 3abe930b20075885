import random
from collections import deque
from pathlib import Path
from typing import FrozenSet, Iterable, Optional, Set, Tuple

import pytest

from schemas.cba_loader import load_system
from schemas.lts_spec import LTS, TAU, Action, Label, Polarity, Sync, Tau
from schemas.msc_loader import load_msc

ROOT = Path(__file__).resolve().parent.parent
CLIENT_SERVER = ROOT / "dataset" / "client_server"


# ============================================================
# Fixture files
# ============================================================
@pytest.fixture
def fixture_dir() -> Path:
    return CLIENT_SERVER


@pytest.fixture
def client_server():
    return load_system(CLIENT_SERVER / "client_server.cba")


@pytest.fixture
def client_server_loop():
    return load_system(CLIENT_SERVER / "client_server_loop.cba")


@pytest.fixture
def retry_spec():
    return load_msc(CLIENT_SERVER / "retry.msc")


@pytest.fixture
def enhanced_retry(client_server, retry_spec):
    from pipeline import apply_enhancement
    return apply_enhancement(client_server, retry_spec)


# ============================================================
# Seeded random LTS generator
# ============================================================
LABEL_POOL = (
    TAU,
    Action(1, "a", Polarity.OUTPUT),
    Action(1, "b", Polarity.INPUT),
    Action(2, "m", Polarity.OUTPUT),
    Action(2, "m", Polarity.INPUT),
)


def random_lts(rng: random.Random, name: str, max_states: int = 5,
               labels: Tuple[Label, ...] = LABEL_POOL, max_out: int = 2) -> LTS:
    n = rng.randint(1, max_states)
    transitions = set()
    for src in range(n):
        for _ in range(rng.randint(0, max_out)):
            transitions.add((src, rng.choice(labels), rng.randrange(n)))
    final = [s for s in range(n) if rng.random() < 0.3]
    return LTS.build(name, 0, transitions, final=final, states=range(n))


@pytest.fixture
def rng():
    return random.Random(20240521)


# ============================================================
# Brute-force oracles
# ============================================================
def observable_traces(lts: LTS, depth: int) -> Set[Tuple[Label, ...]]:
    """Every observable trace of length <= depth, by exhaustive path walking."""
    seen = {(lts.initial, ())}
    queue = deque(seen)
    while queue:
        state, trace = queue.popleft()
        for src, label, dst in lts.transitions:
            if src != state:
                continue
            nxt = trace if isinstance(label, Tau) else trace + (label,)
            if len(nxt) > depth or (dst, nxt) in seen:
                continue
            seen.add((dst, nxt))
            queue.append((dst, nxt))
    return {trace for _, trace in seen}


def accepts(lts: LTS, trace: Iterable[Label]) -> bool:
    """Membership of one observable trace, by tracking the set of reachable states."""
    def closure(states: Set) -> FrozenSet:
        out = set(states)
        changed = True
        while changed:
            changed = False
            for src, label, dst in lts.transitions:
                if src in out and isinstance(label, Tau) and dst not in out:
                    out.add(dst)
                    changed = True
        return frozenset(out)

    current = closure({lts.initial})
    for label in trace:
        current = closure({d for s, l, d in lts.transitions if s in current and l == label})
        if not current:
            return False
    return True


def naive_product(left: LTS, right: LTS, sync: FrozenSet[int]) -> LTS:
    """The synchronous product over every state pair, straight from the handshake rule."""
    def on_sync(label: Label) -> bool:
        return isinstance(label, Action) and label.channel in sync

    transitions = set()
    for ls in left.states:
        for rs in right.states:
            for src, label, dst in left.transitions:
                if src == ls and not on_sync(label):
                    transitions.add(((ls, rs), label, (dst, rs)))
            for src, label, dst in right.transitions:
                if src == rs and not on_sync(label):
                    transitions.add(((ls, rs), label, (ls, dst)))
            for s1, l1, d1 in left.transitions:
                if s1 != ls or not on_sync(l1):
                    continue
                for s2, l2, d2 in right.transitions:
                    if (s2 == rs and isinstance(l2, Action) and l2.channel == l1.channel
                            and l2.message == l1.message and l2.polarity is not l1.polarity):
                        transitions.add(((ls, rs), Sync(l1.channel, l1.message), (d1, d2)))
    states = [(ls, rs) for ls in left.states for rs in right.states]
    final = [(ls, rs) for ls in left.final for rs in right.final]
    return LTS.build("AxB", (left.initial, right.initial), transitions, final=final, states=states)


def first_trace_difference(a: LTS, b: LTS, depth: int) -> Optional[Tuple[Label, ...]]:
    """
    Shortest observable trace of length <= depth that exactly one of `a`, `b`
    accepts, or None. Walks pairs of reachable state sets breadth-first, so
    the cost is bounded by the subset pairs rather than the number of paths.
    """
    def closure(lts: LTS, states) -> FrozenSet:
        out = set(states)
        stack = list(states)
        while stack:
            state = stack.pop()
            for src, label, dst in lts.transitions:
                if src == state and isinstance(label, Tau) and dst not in out:
                    out.add(dst)
                    stack.append(dst)
        return frozenset(out)

    def after(lts: LTS, states: FrozenSet, label: Label) -> FrozenSet:
        return closure(lts, {d for s, l, d in lts.transitions if s in states and l == label})

    def enabled(lts: LTS, states: FrozenSet) -> Set[Label]:
        return {l for s, l, _ in lts.transitions if s in states and not isinstance(l, Tau)}

    start = (closure(a, {a.initial}), closure(b, {b.initial}))
    seen = {start}
    queue = deque([(start, ())])
    while queue:
        (sa, sb), trace = queue.popleft()
        if len(trace) >= depth:
            continue
        for label in sorted(enabled(a, sa) | enabled(b, sb), key=str):
            na, nb = after(a, sa, label), after(b, sb, label)
            if bool(na) != bool(nb):
                return trace + (label,)
            if (na, nb) not in seen:
                seen.add((na, nb))
                queue.append(((na, nb), trace + (label,)))
    return None

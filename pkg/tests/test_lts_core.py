import random

import pytest

from algebra import (
    compose_all,
    deadlock_states,
    determinize,
    hide,
    minimize,
    parallel_compose,
    relabel_channels,
    trace_equivalent,
    trace_to,
)
from conftest import observable_traces, random_lts
from schemas.errors import CollisionError, LTSError
from schemas.lts_spec import (
    LTS,
    TAU,
    Action,
    Kind,
    Polarity,
    Sync,
    format_label,
    parse_label,
)


def act(text):
    return parse_label(text)


# ============================================================
# Types
# ============================================================
def test_kind_is_metadata_only():
    a = Action(2, "ok", Polarity.OUTPUT, Kind.NOTIFICATION)
    b = Action(2, "ok", Polarity.OUTPUT, Kind.REQUEST)
    assert a == b
    assert a.matches(b.flipped())


@pytest.mark.parametrize("channel, message", [(0, "req"), (-1, "req"), (2, "9lives"), (2, "")])
def test_action_rejects_bad_fields(channel, message):
    with pytest.raises(LTSError):
        Action(channel, message, Polarity.INPUT)


def test_label_text_format():
    assert format_label(act("2?ok:ntf")) == "2?ok:ntf"
    assert format_label(act("2!req")) == "2!req"
    assert str(act("3.err")) == "3.err"
    assert act("tau") is TAU
    with pytest.raises(LTSError):
        parse_label("2#req")


def test_lts_rejects_undeclared_endpoints():
    with pytest.raises(LTSError):
        LTS(name="bad", states=frozenset({0}), initial=0,
            transitions=frozenset({(0, act("1!a"), 1)}))
    with pytest.raises(LTSError):
        LTS(name="bad", states=frozenset({0}), initial=1, transitions=frozenset())


def test_alphabet_is_derived():
    lts = LTS.build("L", 0, [(0, act("1!a"), 1), (1, TAU, 0)])
    assert lts.alphabet == {act("1!a")}
    assert lts.channels == {1}


def test_canonical_numbers_breadth_first():
    lts = LTS.build("L", "x", [("x", act("1!a"), "z"), ("x", act("1!b"), "y"), ("y", act("1!a"), "z")],
                    final=["z"], states=["orphan"])
    canon = lts.canonical()
    assert canon.states == {0, 1, 2}
    assert (0, act("1!a"), 1) in canon.transitions
    assert (0, act("1!b"), 2) in canon.transitions
    assert canon.final == {1}


# ============================================================
# parallel_compose / compose_all
# ============================================================
def test_compose_with_idle_unit_is_identity():
    unit = LTS.build("U", 0, [])
    other = LTS.build("L", 0, [(0, act("1!a"), 1), (1, act("2?b"), 0)], final=[0])
    composed = parallel_compose(unit, other, set())
    assert trace_equivalent(composed, other)
    assert len(composed.states) == len(other.states)


def test_forced_handshake():
    left = LTS.build("L", "s0", [("s0", act("2!req"), "s1")])
    right = LTS.build("R", "t0", [("t0", act("2?req"), "t1")])
    composed = parallel_compose(left, right, {2})
    assert composed.transitions == {(("s0", "t0"), Sync(2, "req"), ("s1", "t1"))}


def test_sync_takes_the_sender_kind():
    left = LTS.build("L", 0, [(0, act("2!ok:ntf"), 1)])
    right = LTS.build("R", 0, [(0, act("2?ok"), 1)])
    (_, label, _), = parallel_compose(left, right, {2}).transitions
    assert label.kind is Kind.NOTIFICATION


def test_handshake_exclusivity():
    rng = random.Random(3)
    for _ in range(50):
        composed = parallel_compose(random_lts(rng, "A"), random_lts(rng, "B"), {2})
        assert not any(isinstance(l, Action) and l.channel == 2 for l in composed.alphabet)


def test_cycle_against_coordinator_loop():
    client = LTS.build("C", 0, [(0, act("2!req"), 1), (1, act("2?ok"), 2), (2, TAU, 0)])
    coord = LTS.build("K", 0, [(0, act("2?req"), 1), (1, act("2!ok"), 0)])
    composed = parallel_compose(client, coord, {2})
    assert observable_traces(composed, 4) == {
        (), (Sync(2, "req"),), (Sync(2, "req"), Sync(2, "ok")),
        (Sync(2, "req"), Sync(2, "ok"), Sync(2, "req")),
        (Sync(2, "req"), Sync(2, "ok"), Sync(2, "req"), Sync(2, "ok")),
    }


def test_disjoint_interleaving():
    left = LTS.build("L", 0, [(0, act("1!a"), 1)])
    right = LTS.build("R", 0, [(0, act("3!b"), 1)])
    composed = parallel_compose(left, right, set())
    assert observable_traces(composed, 2) == {
        (), (act("1!a"),), (act("3!b"),), (act("1!a"), act("3!b")), (act("3!b"), act("1!a")),
    }


def test_compose_all_marks_final_pairs(client_server):
    behaviors = [c.behavior for c in client_server.components]
    closed = compose_all(behaviors, client_server.channels)
    assert closed.final
    assert deadlock_states(closed) == frozenset()
    assert all(isinstance(l, Sync) for l in closed.alphabet)


def test_compose_all_needs_a_behavior():
    with pytest.raises(LTSError):
        compose_all([], {1})


def test_compose_all_syncs_on_declared_channels():
    client = LTS.build("C", 0, [(0, act("2!req"), 1)])
    coord = LTS.build("K", 0, [(0, act("2?ping"), 1), (1, act("3!ping"), 0)], final=[0])
    server = LTS.build("S", 0, [(0, act("3?req"), 1)], final=[0])
    # C and K never meet, so K never reaches its 3-actions
    closed = compose_all([client, coord, server], {2, 3}, declared=[{2}, {2, 3}, {3}])
    assert closed.transitions == frozenset()
    assert deadlock_states(closed) == {closed.initial}


def test_compose_all_declarations_match_behaviors():
    lts = LTS.build("L", 0, [])
    with pytest.raises(LTSError):
        compose_all([lts, lts], {1}, declared=[{1}])


# ============================================================
# hide / determinize / minimize
# ============================================================
def test_hide_keep_all_and_nothing(client_server):
    k1 = client_server.component("K1").behavior
    assert hide(k1, k1.channels) == k1
    hidden = hide(k1, set())
    assert hidden.alphabet == frozenset()
    assert len(hidden.transitions) == len(k1.transitions)


def test_hide_keeps_channel_two_of_k1(client_server):
    k1 = client_server.component("K1").behavior
    kept = [l for _, l, _ in hide(k1, {2}).transitions if l is not TAU]
    direct = [l for _, l, _ in k1.transitions if l.channel == 2]
    assert sorted(map(str, kept)) == sorted(map(str, direct))


def test_determinize_tau_closure():
    lts = LTS.build("L", "s0", [("s0", TAU, "s1"), ("s1", act("2?req"), "s2")], final=["s2"])
    d = determinize(lts)
    assert d.transitions == {(0, act("2?req"), 1)}
    assert d.final == {1}


def test_determinize_fixpoint_on_deterministic_input():
    lts = LTS.build("L", 0, [(0, act("1!a"), 1), (1, act("1?b"), 0)], final=[0])
    assert determinize(lts) == lts.canonical()


def test_determinize_six_state_random_with_taus():
    rng = random.Random(11)
    for _ in range(30):
        transitions = {(rng.randrange(6), rng.choice([act("1!a"), act("1?b")]), rng.randrange(6))
                       for _ in range(8)}
        transitions |= {(rng.randrange(6), TAU, rng.randrange(6)) for _ in range(2)}
        lts = LTS.build("L", 0, transitions, states=range(6))
        assert observable_traces(determinize(lts), 6) == observable_traces(lts, 6)


def test_minimize_merges_redundant_states():
    lts = LTS.build("L", 0, [(0, act("1!a"), 1), (0, act("1!b"), 2),
                             (1, act("1?c"), 3), (2, act("1?c"), 3)], final=[3])
    m = minimize(lts)
    assert len(m.states) == 3
    assert minimize(m) == m


def test_minimize_is_minimal_up_to_finality():
    transitions = [(0, act("1!a"), 1), (0, act("1!b"), 2)]
    split = minimize(LTS.build("L", 0, transitions, final=[1]))
    merged = minimize(LTS.build("L", 0, transitions, final=[1, 2]))
    # 1 and 2 have the same (empty) future and differ only in finality
    assert len(split.states) == 3
    assert len(merged.states) == 2
    assert trace_equivalent(split, merged)


def test_sub_coordinator_is_no_larger_than_k1(client_server):
    k1 = client_server.component("K1").behavior
    assert len(minimize(determinize(hide(k1, {2}))).states) <= len(k1.states)


# ============================================================
# trace_equivalent
# ============================================================
def test_equivalence_reflexive(client_server):
    k1 = client_server.component("K1").behavior
    assert trace_equivalent(k1, k1)


def test_extra_transition_is_found():
    base = LTS.build("L", 0, [(0, act("1!a"), 1), (1, act("1?b"), 2)])
    extra = LTS.build("M", 0, [(0, act("1!a"), 1), (1, act("1?b"), 2), (2, act("1!c"), 0)])
    verdict = trace_equivalent(base, extra)
    assert not verdict
    assert verdict.side == "right"
    assert verdict.witness == (act("1!a"), act("1?b"), act("1!c"))
    assert len(verdict.witness) <= len(base.states) + 1


def test_equivalence_is_symmetric_and_transitive():
    rng = random.Random(5)
    machines = [random_lts(rng, f"L{i}", max_states=3) for i in range(25)]
    for a in machines[:10]:
        for b in machines[:10]:
            assert bool(trace_equivalent(a, b)) == bool(trace_equivalent(b, a))
            if trace_equivalent(a, b):
                for c in machines[:10]:
                    if trace_equivalent(b, c):
                        assert trace_equivalent(a, c)


# ============================================================
# deadlock_states / trace_to
# ============================================================
def test_self_loop_has_no_deadlock():
    assert deadlock_states(LTS.build("L", 0, [(0, act("1!a"), 0)])) == frozenset()


def test_sink_is_a_deadlock_unless_final():
    lts = LTS.build("L", 0, [(0, act("1!a"), 1)])
    assert deadlock_states(lts) == {1}
    assert trace_to(lts, 1) == (act("1!a"),)
    assert deadlock_states(LTS.build("L", 0, [(0, act("1!a"), 1)], final=[1])) == frozenset()


# ============================================================
# relabel_channels
# ============================================================
def test_relabel_forced_rewrite():
    lts = LTS.build("L", "s0", [("s0", act("2?req"), "s1")])
    assert relabel_channels(lts, {}) == lts
    assert relabel_channels(lts, {2: 4}).transitions == {("s0", act("4?req"), "s1")}


def test_relabel_round_trip():
    rng = random.Random(9)
    for _ in range(50):
        lts = random_lts(rng, "L")
        there = relabel_channels(lts, {1: 7, 2: 8})
        assert len(there.states) == len(lts.states)
        assert len(there.transitions) == len(lts.transitions)
        assert relabel_channels(there, {7: 1, 8: 2}) == lts


def test_relabel_rejects_collisions():
    lts = LTS.build("L", 0, [(0, act("1!a"), 1), (1, act("2!b"), 0)])
    with pytest.raises(CollisionError):
        relabel_channels(lts, {1: 2})
    with pytest.raises(CollisionError):
        relabel_channels(lts, {1: 5, 2: 5})

import random
from dataclasses import replace
from itertools import permutations

import pytest

from algebra import deadlock_states, hide, trace_equivalent
from architecture.closure import close_system, collapse_glue, resolve_coordinator
from conftest import observable_traces
from schemas.cba_loader import load_system
from schemas.errors import ArchitectureError, GlueError, OpenSystemError
from schemas.fault_spec import Termination
from schemas.lts_spec import LTS, Sync, parse_label
from schemas.system_spec import Binding, CBASystem, Component, GlueBlock, Port, Side
from sim.simulator import simulate
from validator import check_strict_alternation, ensure_valid, validate_all, validate_architecture
from validator.diagnostics import emit_json_report, has_errors


def codes(issues):
    return sorted(i["code"] for i in issues)


def coordinator(name, transitions, initial=0, bindings=()):
    lts = LTS.build(name, initial, [(s, parse_label(l), d) for s, l, d in transitions], final=[initial])
    return Component(name, lts, tuple(bindings), is_coordinator=True)


# ============================================================
# validate_architecture
# ============================================================
def test_client_server_is_clean(client_server):
    assert validate_architecture(client_server) == []
    assert validate_all(client_server) == []


def test_orientation_violation_reported_once(fixture_dir):
    issues = validate_architecture(load_system(fixture_dir / "orientation.cba"))
    assert codes(issues) == ["ARCH-003"]
    assert "top(Client1,1)" in issues[0]["message"]


def test_unbound_behavior_channel(fixture_dir):
    issues = validate_architecture(load_system(fixture_dir / "unbound.cba"))
    assert codes(issues) == ["ARCH-006"]
    assert "channel 9" in issues[0]["message"]


def test_no_coordinator(client_server):
    plain = client_server.replace_component(replace(client_server.component("K1"), is_coordinator=False))
    assert "ARCH-008" in codes(validate_architecture(plain))
    assert "ARCH-009" in codes(validate_architecture(plain))


def test_duplicate_component_and_port(client_server):
    k1 = client_server.component("K1")
    twice = client_server.with_components([*client_server.components, k1])
    found = codes(validate_architecture(twice))
    assert "ARCH-001" in found
    assert "ARCH-002" in found


def test_dangling_connector_and_fresh_counter(client_server):
    server = client_server.component("Server")
    extra = Binding.oriented(Port("Server", Side.TOP, 1), 7)
    system = client_server.replace_component(replace(server, bindings=(*server.bindings, extra)))
    found = codes(validate_architecture(system))
    assert "ARCH-004" in found
    assert "ARCH-012" in found


def test_role_bound_twice(client_server):
    intruder = Component(
        "Client2",
        client_server.component("Client1").behavior,
        (Binding.oriented(Port("Client2", Side.TOP, 1), 2),),
    )
    found = codes(validate_architecture(client_server.with_components([*client_server.components, intruder])))
    assert "ARCH-005" in found


def test_invalid_channel_id(client_server):
    client = client_server.component("Client1")
    bad = Binding(Port("Client1", Side.TOP, 2), 0, Side.BOTTOM)
    found = codes(validate_architecture(client_server.replace_component(
        replace(client, bindings=(*client.bindings, bad)))))
    assert "ARCH-011" in found


def test_request_notification_orientation(client_server):
    server = client_server.component("Server")
    flipped = LTS.build("Server", "idle", [
        ("idle", parse_label("3?req"), "busy"),
        ("busy", parse_label("3!ok"), "idle"),          # a request travelling down
    ], final=["idle"])
    issues = validate_architecture(client_server.replace_component(replace(server, behavior=flipped)))
    assert codes(issues) == ["ARCH-007"]


def test_unknown_glue_member(client_server):
    system = replace(client_server, glue=(GlueBlock("G1", ("K1", "Ghost")),))
    assert codes(validate_architecture(system)) == ["ARCH-010"]


def test_ensure_valid_raises_with_issue_list(fixture_dir):
    with pytest.raises(ArchitectureError) as err:
        ensure_valid(load_system(fixture_dir / "orientation.cba"))
    assert err.value.issues[0]["code"] == "ARCH-003"
    assert str(err.value).startswith("[ARCH ERROR]")


def test_json_report(tmp_path, fixture_dir):
    issues = validate_all(load_system(fixture_dir / "orientation.cba"))
    assert has_errors(issues)
    path = tmp_path / "report.json"
    emit_json_report(issues, path)
    assert '"status": "FAIL"' in path.read_text()


# ============================================================
# check_strict_alternation
# ============================================================
def test_k1_alternates(client_server):
    assert check_strict_alternation(client_server.component("K1"))


def test_alternation_requires_a_coordinator(client_server):
    with pytest.raises(GlueError):
        check_strict_alternation(client_server.component("Server"))


@pytest.mark.parametrize("transitions", [
    [(0, "2!req", 1)],                                   # output first
    [(0, "2?req", 1), (1, "3?req", 2)],                  # input after input
    [(0, "2?req", 1), (1, "3!other", 0)],                # forwards a different message
])
def test_alternation_violations(transitions):
    verdict = check_strict_alternation(coordinator("K", transitions))
    assert not verdict
    assert verdict.state is not None
    assert verdict.witness


def test_alternation_violation_is_an_issue(client_server):
    bad = coordinator("K1", [(0, "2?req", 1), (1, "3?req", 0)],
                      bindings=client_server.component("K1").bindings)
    issues = validate_all(client_server.replace_component(bad))
    assert "ALT-001" in codes(issues)


# ============================================================
# close_system / collapse_glue
# ============================================================
def test_closed_client_server_traces(client_server):
    closed = close_system(client_server)
    assert closed.alphabet == {Sync(2, "req"), Sync(3, "req"), Sync(3, "ok"), Sync(3, "err"),
                               Sync(2, "ok"), Sync(2, "err")}
    assert len(closed.states) == 6


def test_open_system_is_refused(client_server):
    with pytest.raises(OpenSystemError) as err:
        close_system(client_server.without("Server"))
    assert err.value.labels


def forward_only(message):
    """A K1 that forwards `message` only."""
    return LTS.build("K1", "idle", [
        ("idle", parse_label(f"2?{message}"), "fwd"),
        ("fwd", parse_label(f"3!{message}"), "wait"),
        ("wait", parse_label("3?ok:ntf"), "ok"),
        ("ok", parse_label("2!ok:ntf"), "idle"),
    ], final=["idle"])


def orders(system, samples=12):
    """Every component order for small systems, a seeded sample otherwise."""
    components = list(system.components)
    if len(components) <= 4:
        return list(permutations(components))
    rng = random.Random(len(components))
    picked = []
    for _ in range(samples):
        rng.shuffle(components)
        picked.append(tuple(components))
    return picked


@pytest.mark.parametrize("fixture", ["client_server", "client_server_loop", "enhanced_retry"])
def test_close_system_ignores_declaration_order(request, fixture):
    system = request.getfixturevalue(fixture)
    if isinstance(system, tuple):
        system = system[0]
    reference = close_system(system)
    for order in orders(system):
        closed = close_system(system.with_components(list(order)))
        assert len(closed.states) == len(reference.states)
        assert trace_equivalent(closed, reference)
        assert len(deadlock_states(closed)) == len(deadlock_states(reference))


def test_cut_off_partner_still_blocks(client_server):
    k1 = client_server.component("K1")
    system = client_server.replace_component(replace(k1, behavior=forward_only("ping")))
    assert validate_all(system) == []
    for order in permutations(system.components):
        closed = close_system(system.with_components(list(order)))
        assert len(closed.states) == 1
        assert deadlock_states(closed) == {closed.initial}
    assert simulate(system).terminated is Termination.DEADLOCK


@pytest.mark.parametrize("fixture", ["client_server_loop", "enhanced_retry"])
def test_coordinators_alternate_in_the_closed_system(request, fixture):
    system = request.getfixturevalue(fixture)
    if isinstance(system, tuple):
        system = system[0]
    closed = close_system(system)
    for coord in system.coordinators:
        for trace in observable_traces(hide(closed, coord.channels), 8):
            for received, sent in zip(trace[::2], trace[1::2]):
                assert received.message == sent.message, f"{coord.name}: {trace}"
                assert received.channel != sent.channel, f"{coord.name}: {trace}"


def test_collapse_glue_of_enhanced_system(enhanced_retry):
    enhanced, glue = enhanced_retry
    view = collapse_glue(enhanced, "G1")
    assert view.is_coordinator
    assert sorted(b.connector for b in view.bindings) == [3, 5]
    assert view.behavior == glue.composite
    assert resolve_coordinator(enhanced, "K2").behavior == glue.composite
    assert resolve_coordinator(enhanced, "G1").name == "G1"


def test_resolve_plain_coordinator(client_server):
    assert resolve_coordinator(client_server, "K1") is client_server.component("K1")
    with pytest.raises(GlueError):
        resolve_coordinator(client_server, "Nobody")


def test_system_lookups(client_server):
    assert isinstance(client_server, CBASystem)
    assert client_server.channels_of(["Client1"]) == {2}
    assert client_server.without("Server").component_names == ("Client1", "K1")
    assert [c.id for c in client_server.connectors] == [2, 3]
